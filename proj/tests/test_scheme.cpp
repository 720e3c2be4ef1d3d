#include "aperiodica/scheme.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace aperiodica;

namespace {

const GoldenRational kSqrt5Golden(Rational(-1), Rational(2));  // 2 tau - 1

IntVec random_coords(std::mt19937_64& rng, int rank, int span = 30) {
  std::uniform_int_distribution<long long> d(-span, span);
  IntVec z(static_cast<std::size_t>(rank));
  for (auto& v : z) v = d(rng);
  return z;
}

InternalPoint add(const InternalPoint& a, const InternalPoint& b) {
  if (const auto* e = std::get_if<ExactVector>(&a)) {
    const auto& f = std::get<ExactVector>(b);
    ExactVector out(e->size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = (*e)[i] + f[i];
    return out;
  }
  if (const auto* p = std::get_if<PAdicVector>(&a)) {
    const auto& q = std::get<PAdicVector>(b);
    PAdicVector out;
    for (std::size_t i = 0; i < p->coords.size(); ++i) out.coords.push_back(p->coords[i] + q.coords[i]);
    return out;
  }
  const auto& r = std::get<RealVector>(a);
  const auto& s = std::get<RealVector>(b);
  RealVector out(r.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = r[i] + s[i];
  return out;
}

bool same(const InternalPoint& a, const InternalPoint& b) {
  if (std::holds_alternative<RealVector>(a)) {
    const auto& r = std::get<RealVector>(a);
    const auto& s = std::get<RealVector>(b);
    for (std::size_t i = 0; i < r.size(); ++i)
      if (std::fabs(r[i] - s[i]) > 1e-9 * (1 + std::fabs(r[i]))) return false;
    return true;
  }
  return a == b;
}

}  // namespace

TEST(Fibonacci, StarIsGoldenConjugation) {
  const auto s = make_fibonacci_scheme();
  EXPECT_EQ(s.d, 1);
  EXPECT_EQ(s.rank, 2);
  for (long long a = -20; a <= 20; ++a)
    for (long long b = -20; b <= 20; ++b) {
      const auto star = std::get<ExactVector>(s.star({a, b}));
      EXPECT_EQ(star[0], GoldenRational(golden_conjugate(GoldenInt(BigInt(a), BigInt(b)))));
      EXPECT_EQ(s.physical_exact({a, b})[0], GoldenRational(Rational(a), Rational(b)));
    }
  EXPECT_NEAR(std::get<ExactVector>(s.star({0, 1}))[0].to_double(), -0.618034, 1e-6);
  EXPECT_EQ(std::get<ExactVector>(star_map(s, {{0, 0}}))[0], GoldenRational(0));
}

TEST(Fibonacci, CovolumeIsSqrt5) {
  EXPECT_NEAR(make_fibonacci_scheme().covolume, std::sqrt(5.0), 1e-12);
}

TEST(Schemes, StarIsAdditive) {
  std::mt19937_64 rng(21);
  const auto ico = make_icosian_scheme();
  const std::vector<CutProjectScheme> schemes{make_fibonacci_scheme(), ico, restrict_to_pure_quaternions(ico),
                                              restrict_to_pure_quaternions(ico, default_fivefold_axis()), make_robinson_scheme(16)};
  for (const auto& s : schemes) {
    for (int t = 0; t < 40; ++t) {
      const IntVec x = random_coords(rng, s.rank), y = random_coords(rng, s.rank);
      EXPECT_TRUE(same(s.star(x + y), add(s.star(x), s.star(y)))) << s.name;
    }
    const auto zero = s.star(IntVec(static_cast<std::size_t>(s.rank), 0));
    for (double v : s.internal.is_padic() ? RealVector{} : to_real(zero)) EXPECT_EQ(v, 0.0) << s.name;
  }
}

TEST(Icosian, RanksOverZAndZtau) {
  const auto s = make_icosian_scheme();
  EXPECT_EQ(s.rank, 8);
  EXPECT_EQ(s.d, 4);
  EXPECT_EQ(matrix_rank(s.phys), 4u);
}

TEST(Icosian, ScaledGramIsE8) {
  const auto s = make_icosian_scheme();
  const Matrix<Rational> g = icosian_scaled_gram(s);
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j) {
      ASSERT_TRUE(is_integer(g(i, j)));
      EXPECT_EQ(g(i, j), g(j, i));
    }
  for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(numerator(g(i, i)) % 2, 0);
  EXPECT_EQ(determinant(g), Rational(1));
  // roots: vectors of norm 2; E8 has exactly 240 and nothing shorter
  const Matrix<double> gd = to_double_matrix(g);
  std::size_t roots = 0, shorter = 0;
  enumerate_ellipsoid(gd, RealVector(8, 0.0), 2.0, [&](const IntVec& z) {
    double q = 0;
    for (std::size_t i = 0; i < 8; ++i)
      for (std::size_t j = 0; j < 8; ++j) q += gd(i, j) * static_cast<double>(z[i] * z[j]);
    const long long qi = std::llround(q);
    if (qi == 2) ++roots;
    else if (qi != 0) ++shorter;
  });
  EXPECT_EQ(roots, 240u);
  EXPECT_EQ(shorter, 0u);
}

TEST(Icosian, PureQuaternionRestriction) {
  const auto ico = make_icosian_scheme();
  const auto h3 = restrict_to_pure_quaternions(ico);
  EXPECT_EQ(h3.rank, 6);
  EXPECT_EQ(h3.d, 3);
  const auto h2 = restrict_to_pure_quaternions(ico, default_fivefold_axis());
  EXPECT_EQ(h2.rank, 4);
  EXPECT_EQ(h2.d, 2);
  EXPECT_EQ(h2.internal.dim, 2);
  EXPECT_GT(h2.covolume, 0.0);
  EXPECT_THROW(restrict_to_pure_quaternions(ico, ExactVector{1, 1}), std::invalid_argument);
  EXPECT_THROW(restrict_to_pure_quaternions(make_fibonacci_scheme()), std::invalid_argument);
  for (double v : h2.physical({0, 0, 0, 0})) EXPECT_EQ(v, 0.0);
  for (double v : to_real(h2.star({0, 0, 0, 0}))) EXPECT_EQ(v, 0.0);
}

TEST(Robinson, DiagonalEmbedding) {
  const auto s = make_robinson_scheme();
  EXPECT_TRUE(s.internal.is_padic());
  EXPECT_EQ(s.internal.p, 2u);
  EXPECT_EQ(s.internal.dim, 2);
  EXPECT_DOUBLE_EQ(s.covolume, 1.0);
  const auto star = std::get<PAdicVector>(s.star({3, 5}));
  EXPECT_EQ(star.coords[0].residue(), 3);
  EXPECT_EQ(star.coords[1].residue(), 5);
  EXPECT_THROW(dual_lattice(s), unsupported_error);
}

TEST(Dual, IntegerLatticeIsSelfDual) {
  const auto s = make_custom_scheme(2, InternalSpace::euclidean(0), Matrix<GoldenRational>::identity(2), Matrix<GoldenRational>(0, 2));
  const auto dual = dual_lattice(s);
  EXPECT_EQ(*dual.exact, Matrix<GoldenRational>::identity(2));
}

TEST(Dual, FibonacciInverseTranspose) {
  const auto s = make_fibonacci_scheme();
  const auto dual = dual_lattice(s);
  ASSERT_TRUE(dual.exact);
  // oracle: explicit 2x2 inverse of [[1, tau], [1, tau']] (columns are basis vectors)
  const GoldenRational t = GoldenRational::tau(), tc = t.conjugate();
  const GoldenRational det = tc - t;  // = -sqrt5
  const Matrix<GoldenRational> expected = Matrix<GoldenRational>::from_rows({{tc / det, -t / det}, {-GoldenRational(1) / det, GoldenRational(1) / det}});
  EXPECT_EQ(*dual.exact, expected);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      const GoldenRational scaled = (*dual.exact)(i, j) * kSqrt5Golden;
      EXPECT_TRUE(is_integer(scaled.a()) && is_integer(scaled.b()));
      // pairing with basis column j
      GoldenRational pair = (*dual.exact)(i, 0) * s.phys(0, j) + (*dual.exact)(i, 1) * s.inner(0, j);
      EXPECT_EQ(pair, GoldenRational(i == j ? 1 : 0));
    }
  EXPECT_LT(dual_pairing_defect(s, dual), 1e-9);
}

TEST(Dual, PairingIntegralForAllEuclideanSchemes) {
  const auto ico = make_icosian_scheme();
  for (const auto& s : {ico, restrict_to_pure_quaternions(ico), restrict_to_pure_quaternions(ico, default_fivefold_axis())}) {
    const auto dual = dual_lattice(s);
    EXPECT_LT(dual_pairing_defect(s, dual), 1e-6) << s.name;
  }
}

TEST(Schemes, PhysicalProjectionInjective) {
  const auto fib = injectivity_check(make_fibonacci_scheme());
  EXPECT_TRUE(fib.exact_injective);
  EXPECT_TRUE(fib.sample_distinct);
  EXPECT_EQ(fib.sampled, 41u * 41u);
  const auto ico = injectivity_check(make_icosian_scheme());
  EXPECT_TRUE(ico.exact_injective);
  EXPECT_TRUE(ico.sample_distinct);
  // a degenerate scheme: both basis vectors project to 1
  const auto bad = make_custom_scheme(1, InternalSpace::euclidean(1), Matrix<GoldenRational>::from_rows({{1, 1}}),
                                      Matrix<GoldenRational>::from_rows({{1, 2}}));
  const auto rep = injectivity_check(bad, 3);
  EXPECT_FALSE(rep.exact_injective);
  EXPECT_FALSE(rep.sample_distinct);
}
