#include "aperiodica/exact/golden.hpp"
#include "aperiodica/exact/icosian.hpp"
#include "aperiodica/exact/matrix.hpp"
#include "aperiodica/exact/padic.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>
#include <set>

using namespace aperiodica;

namespace {

GoldenInt random_golden(std::mt19937_64& rng, int span = 50) {
  std::uniform_int_distribution<int> d(-span, span);
  return GoldenInt(d(rng), d(rng));
}

// independent oracle: quaternion product with plain rationals in Q(sqrt5) coordinates
std::array<GoldenRational, 4> hamilton(const std::array<GoldenRational, 4>& p, const std::array<GoldenRational, 4>& q) {
  std::array<GoldenRational, 4> out;
  // basis products e_a e_b = sign * e_c
  const int table[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  const int sign[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, -1, -1}};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) out[table[a][b]] += GoldenRational(sign[a][b]) * p[a] * q[b];
  return out;
}

Icosian random_icosian(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> d(-3, 3);
  Icosian out(0, 0, 0, 0);
  for (const auto& b : icosian_z_basis()) out = out + GoldenInt(d(rng)) * b;
  return out;
}

}  // namespace

TEST(Golden, ConjugationExamples) {
  EXPECT_EQ(golden_conjugate(GoldenInt::tau()), GoldenInt(1, -1));
  EXPECT_EQ(golden_conjugate(GoldenInt(1)), GoldenInt(1));
  EXPECT_EQ(golden_conjugate(GoldenInt(2, 3)), GoldenInt(5, -3));
}

TEST(Golden, ConjugationIsInvolutiveRingHomomorphism) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    const GoldenInt x = random_golden(rng), y = random_golden(rng);
    EXPECT_EQ(x.conjugate().conjugate(), x);
    EXPECT_EQ((x * y).conjugate(), x.conjugate() * y.conjugate());
    EXPECT_EQ((x + y).conjugate(), x.conjugate() + y.conjugate());
  }
}

TEST(Golden, RealEmbeddingMatchesArithmetic) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 200; ++i) {
    const GoldenInt x = random_golden(rng), y = random_golden(rng);
    const long double vx = x.to_long_double(), vy = y.to_long_double();
    EXPECT_NEAR(static_cast<double>((x * y).to_long_double()), static_cast<double>(vx * vy), 1e-9 * (1 + std::fabs(static_cast<double>(vx * vy))));
    EXPECT_NEAR(static_cast<double>(x.conj_long_double()), static_cast<double>(x.conjugate().to_long_double()), 1e-9);
  }
}

TEST(Golden, ExactSignNearZero) {
  // Fibonacci convergents: F_{n+1} - F_n tau tends to zero but never vanishes
  BigInt f0 = 0, f1 = 1;
  for (int n = 0; n < 120; ++n) {
    const GoldenInt x(BigInt(f1), BigInt(-f0));
    EXPECT_EQ(x.sign(), x.exact_sign());
    EXPECT_NE(x.sign(), 0);
    BigInt t = f0 + f1;
    f0 = f1;
    f1 = t;
  }
  EXPECT_EQ(GoldenInt(0).sign(), 0);
  EXPECT_TRUE(GoldenRational(Rational(1), Rational(0)) > GoldenRational(Rational(0), Rational(0)));
  EXPECT_TRUE(GoldenRational::tau() - GoldenRational(1) < GoldenRational(Rational(5, 8)));
}

TEST(Golden, DivisionAndInverse) {
  const GoldenRational t = GoldenRational::tau();
  EXPECT_EQ(GoldenRational(1) / t, t - GoldenRational(1));
  EXPECT_EQ(GoldenInt(1) / GoldenInt::tau(), GoldenInt(-1, 1));
  EXPECT_THROW(GoldenInt(1) / GoldenInt(2), std::domain_error);
}

TEST(Golden, ParseAndPrint) {
  EXPECT_EQ(parse_golden("2+3*tau"), GoldenRational(Rational(2), Rational(3)));
  EXPECT_EQ(parse_golden("-1/2*tau"), GoldenRational(Rational(0), Rational(-1, 2)));
  EXPECT_EQ(parse_golden("tau-1"), GoldenRational(Rational(-1), Rational(1)));
  EXPECT_EQ(parse_golden("0.25"), GoldenRational(Rational(1, 4)));
  EXPECT_EQ(to_string(GoldenRational(Rational(-1), Rational(1))), "-1+1*tau");
  EXPECT_EQ(parse_golden(to_string(GoldenRational(Rational(3, 7), Rational(-2, 5)))), GoldenRational(Rational(3, 7), Rational(-2, 5)));
  EXPECT_THROW(parse_golden("2+*"), std::invalid_argument);
}

TEST(Rationals, ExactDoubleConversion) {
  EXPECT_EQ(rational_from_double(0.125), Rational(1, 8));
  EXPECT_EQ(rational_from_double(-3.0), Rational(-3));
  const double x = 0.1;
  EXPECT_EQ(to_double(rational_from_double(x)), x);
  EXPECT_EQ(parse_rational("-2.5e-3"), Rational(-1, 400));
}

TEST(Icosian, QuaternionTable) {
  EXPECT_EQ(Icosian::unit_i() * Icosian::unit_j(), Icosian::unit_k());
  EXPECT_EQ(Icosian::unit_j() * Icosian::unit_i(), -Icosian::unit_k());
  const Icosian q(1, 1, 1, 1);
  EXPECT_EQ(Icosian::one() * q, q);
}

TEST(Icosian, SquareOfHurwitzUnitMatchesExpansion) {
  const Icosian q(1, 1, 1, 1);
  std::array<GoldenRational, 4> c;
  for (int i = 0; i < 4; ++i) c[static_cast<std::size_t>(i)] = q.component(i);
  const auto expected = hamilton(c, c);
  const Icosian sq = q * q;
  for (int i = 0; i < 4; ++i) EXPECT_EQ(sq.component(i), expected[static_cast<std::size_t>(i)]);
  EXPECT_EQ(sq, Icosian(-1, 1, 1, 1));
}

TEST(Icosian, GeneratorsAreUnitsAndClosed) {
  const auto gens = icosian_generators();
  ASSERT_EQ(gens.size(), 120u);
  const std::set<Icosian> lookup(gens.begin(), gens.end());
  for (const auto& g : gens) EXPECT_EQ(g.norm(), GoldenRational(1));
  std::size_t closed = 0;
  for (const auto& a : gens)
    for (const auto& b : gens) closed += lookup.count(a * b);
  EXPECT_EQ(closed, 14400u);
}

TEST(Icosian, ProductMatchesIndependentExpansion) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 50; ++t) {
    const Icosian a = random_icosian(rng), b = random_icosian(rng);
    std::array<GoldenRational, 4> ca, cb;
    for (int i = 0; i < 4; ++i) {
      ca[static_cast<std::size_t>(i)] = a.component(i);
      cb[static_cast<std::size_t>(i)] = b.component(i);
    }
    const auto expected = hamilton(ca, cb);
    const Icosian ab = a * b;
    for (int i = 0; i < 4; ++i) EXPECT_EQ(ab.component(i), expected[static_cast<std::size_t>(i)]);
  }
}

TEST(Icosian, NormIsMultiplicative) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 200; ++t) {
    const Icosian a = random_icosian(rng), b = random_icosian(rng);
    EXPECT_EQ((a * b).norm(), a.norm() * b.norm());
  }
}

TEST(Icosian, BasisGeneratesAllUnits) {
  // Every unit must be an integer combination of the basis; solve exactly over Q.
  const auto basis = icosian_z_basis();
  Matrix<Rational> m(8, 8);
  for (std::size_t j = 0; j < 8; ++j) {
    const auto c = basis[j].integer_coordinates();
    for (std::size_t i = 0; i < 8; ++i) m(i, j) = Rational(c[i]);
  }
  const Matrix<Rational> inv = inverse(m);
  for (const auto& u : icosian_generators()) {
    const auto c = u.integer_coordinates();
    std::vector<Rational> v(c.begin(), c.end());
    for (const auto& z : inv * v) EXPECT_TRUE(is_integer(z));
  }
}

TEST(PAdic, ValuationExamples) {
  EXPECT_EQ(padic_valuation(Rational(12), 2), (Valuation{false, 2}));
  EXPECT_TRUE(padic_valuation(Rational(0), 5).infinite);
  EXPECT_EQ(padic_valuation(Rational(5, 9), 3), (Valuation{false, -2}));
  EXPECT_THROW(padic_valuation(Rational(4), 6), std::invalid_argument);
}

TEST(PAdic, DistanceExamples) {
  EXPECT_EQ(padic_distance_exact(0, 8, 2), Rational(1, 8));
  EXPECT_EQ(padic_distance(Rational(7, 3), Rational(7, 3), 5), 0.0);
  // 4/3 - 1/3 = 1 is a 3-adic unit
  EXPECT_EQ(padic_distance_exact(Rational(1, 3), Rational(4, 3), 3), Rational(1));
  EXPECT_EQ(padic_distance_exact(Rational(1, 3), Rational(0), 3), Rational(3));
  EXPECT_THROW(padic_distance(1, 2, 9), std::invalid_argument);
}

TEST(PAdic, UltrametricOnRandomTriples) {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> num(-500, 500), den(1, 60);
  for (std::uint64_t p : {2u, 3u, 5u, 7u}) {
    for (int t = 0; t < 300; ++t) {
      const Rational x(num(rng), den(rng)), y(num(rng), den(rng)), z(num(rng), den(rng));
      const Rational dxz = padic_distance_exact(x, z, p);
      EXPECT_LE(dxz, std::max(padic_distance_exact(x, y, p), padic_distance_exact(y, z, p)));
    }
  }
}

TEST(PAdic, ArithmeticAgreesWithIntegersModPk) {
  std::mt19937_64 rng(14);
  std::uniform_int_distribution<long long> d(-1000000000LL, 1000000000LL);
  for (std::uint64_t p : {2u, 3u, 7u}) {
    const int k = 20;
    const BigInt mod = pow_big(BigInt(p), k);
    for (int t = 0; t < 200; ++t) {
      const BigInt a = d(rng), b = d(rng);
      const auto pa = PAdicApprox::from_integer(a, p, k), pb = PAdicApprox::from_integer(b, p, k);
      EXPECT_EQ((pa + pb).residue(), mod_floor(a + b, mod));
      EXPECT_EQ((pa - pb).residue(), mod_floor(a - b, mod));
      EXPECT_EQ((pa * pb).residue(), mod_floor(a * b, mod));
    }
  }
}

TEST(PAdic, DigitsAndValuation) {
  const auto x = PAdicApprox::from_integer(12, 2, 8);
  const std::vector<int> expected{0, 0, 1, 1, 0, 0, 0, 0};
  EXPECT_EQ(x.digits(), expected);
  EXPECT_EQ(x.valuation(), (Valuation{false, 2}));
  const auto minus_one = PAdicApprox::from_integer(-1, 3, 4);
  EXPECT_EQ(minus_one.digits(), (std::vector<int>{2, 2, 2, 2}));
  const auto third = PAdicApprox::from_rational(Rational(1, 3), 2, 10);
  EXPECT_EQ((third * PAdicApprox::from_integer(3, 2, 10)).residue(), BigInt(1));
  EXPECT_EQ(PAdicApprox::from_digits({1, 0, 1}, 2, 6).residue(), BigInt(5));
}

TEST(Matrix, ExactInverseAndDeterminant) {
  const auto m = Matrix<GoldenRational>::from_rows({{1, 1}, {GoldenRational::tau(), GoldenRational::tau_conj()}});
  const GoldenRational det = determinant(m);
  EXPECT_EQ(det * det, GoldenRational(5));
  const auto inv = inverse(m);
  EXPECT_EQ(m * inv, Matrix<GoldenRational>::identity(2));
}

TEST(Matrix, IntegerKernel) {
  const auto a = Matrix<BigInt>::from_rows({{2, 4, 6}, {1, 1, 1}});
  const auto k = integer_kernel(a);
  ASSERT_EQ(k.cols(), 1u);
  const auto prod = a * k;
  for (std::size_t i = 0; i < prod.rows(); ++i) EXPECT_EQ(prod(i, 0), 0);
  // primitive generator of the kernel line (1,-2,1)
  EXPECT_EQ(abs_big(k(0, 0)), 1);
  EXPECT_EQ(abs_big(k(1, 0)), 2);
  EXPECT_EQ(determinant_bareiss(Matrix<BigInt>::from_rows({{2, 1}, {1, 3}})), 5);
}
