#include "aperiodica/robinson.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>

using namespace aperiodica;

namespace {

const GoldenRational kTauG = GoldenRational::tau();

Window fib_window() { return Window::interval(GoldenRational(-1), kTauG - GoldenRational(1)); }

std::set<IntVec> coords_of(const PointSet& ps) {
  std::set<IntVec> out;
  for (const auto& p : ps.points) out.insert(p.coords);
  return out;
}

// every coordinate vector in [-b, b]^rank passing the definition, tested directly
std::set<IntVec> brute_force(const CutProjectScheme& s, const Window& w, double R, long long b) {
  std::set<IntVec> out;
  IntVec z(static_cast<std::size_t>(s.rank), -b);
  while (true) {
    if (norm2(s.physical(z)) <= R * R && contains(w, s.star(z)) != Membership::outside) out.insert(z);
    std::size_t i = 0;
    while (i < z.size() && ++z[i] > b) z[i++] = -b;
    if (i == z.size()) break;
  }
  return out;
}

// bound on |z|_inf from |phys| <= R, |internal| <= r via the embedding matrix
long long coordinate_bound(const CutProjectScheme& s, double R, double r) {
  const Matrix<double> inv = inverse(s.embedding_matrix());
  double row = 0;
  for (std::size_t i = 0; i < inv.rows(); ++i) {
    double acc = 0;
    for (std::size_t j = 0; j < inv.cols(); ++j) acc += inv(i, j) * inv(i, j);
    row = std::max(row, std::sqrt(acc));
  }
  return static_cast<long long>(std::ceil(row * std::hypot(R, r))) + 1;
}

}  // namespace

TEST(ModelSet, EmptyWindowGivesEmptySet) {
  EXPECT_TRUE(enumerate_model_set(make_fibonacci_scheme(), Window::empty(), 50).empty());
}

TEST(ModelSet, FibonacciMatchesBruteForce) {
  const auto s = make_fibonacci_scheme();
  const auto ps = enumerate_model_set(s, fib_window(), 10);
  EXPECT_EQ(coords_of(ps), brute_force(s, fib_window(), 10, 20));
  const double density = std::numbers::phi / std::sqrt(5.0);
  // the closed window picks up two extra boundary points; the interior count follows the density
  EXPECT_LE(std::fabs(static_cast<double>(ps.size() - ps.boundary_count()) - std::round(density * 20)), 1.0);
  // boundary hits are kept and flagged: stars -1 at x = -1 and tau - 1 at x = -tau
  std::set<IntVec> flagged;
  for (const auto& p : ps.points)
    if (p.boundary) flagged.insert(p.coords);
  EXPECT_EQ(flagged, (std::set<IntVec>{{-1, 0}, {0, -1}}));
}

TEST(ModelSet, BruteForceEqualityAcrossSchemes) {
  const auto fib = make_fibonacci_scheme();
  for (double R : {3.0, 12.5, 20.0}) EXPECT_EQ(coords_of(enumerate_model_set(fib, fib_window(), R)), brute_force(fib, fib_window(), R, 40));
  const auto h2 = restrict_to_pure_quaternions(make_icosian_scheme(), default_fivefold_axis());
  const Window disc = Window::ball({0.1, -0.05}, 0.9);
  for (double R : {2.0, 4.0}) {
    const long long b = coordinate_bound(h2, R, 1.0);
    EXPECT_EQ(coords_of(enumerate_model_set(h2, disc, R)), brute_force(h2, disc, R, b)) << R;
  }
  const auto rob = make_robinson_scheme();
  const Window ladder = Window::coset_union(2, 2, {{{1, 0}, 1}, {{2, 0}, 2}, {{4, 0}, 3}});
  EXPECT_EQ(coords_of(enumerate_model_set(rob, ladder, 20)), brute_force(rob, ladder, 20, 20));
}

TEST(ModelSet, FullPAdicWindowIsZ2) {
  const auto ps = enumerate_model_set(make_robinson_scheme(), Window::coset_union(2, 2, {{{0, 0}, 0}}), 15);
  std::size_t expected = 0;
  for (long long x = -15; x <= 15; ++x)
    for (long long y = -15; y <= 15; ++y)
      if (x * x + y * y <= 225) ++expected;
  EXPECT_EQ(ps.size(), expected);
}

TEST(ModelSet, DimensionMismatchRejected) {
  EXPECT_THROW(enumerate_model_set(make_fibonacci_scheme(), Window::ball({0.0, 0.0}, 1.0), 5), std::invalid_argument);
  EXPECT_THROW(enumerate_model_set(make_robinson_scheme(), fib_window(), 5), std::invalid_argument);
}

TEST(ModelSet, SortedWithoutDuplicates) {
  const auto ps = enumerate_model_set(make_fibonacci_scheme(), fib_window(), 300);
  for (std::size_t i = 1; i < ps.size(); ++i) EXPECT_LT(ps.points[i - 1].coords, ps.points[i].coords);
}

TEST(Translated, ZeroShiftIsTheModelSet) {
  const auto s = make_fibonacci_scheme();
  EXPECT_EQ(coords_of(translated_model_set(s, fib_window(), {0.0}, ExactVector{GoldenRational(0)}, 40)),
            coords_of(enumerate_model_set(s, fib_window(), 40)));
}

TEST(Translated, LatticeShiftGivesLambdaAgain) {
  const auto s = make_fibonacci_scheme();
  const double R = 60;
  const auto base = enumerate_model_set(s, fib_window(), R);
  std::set<std::pair<long long, long long>> expect;
  for (const auto& p : base.points) expect.insert({p.coords[0], p.coords[1]});
  for (const IntVec& x : {IntVec{3, -2}, IntVec{-5, 4}, IntVec{1, 1}}) {
    const auto t = translated_model_set(s, fib_window(), s.physical(x), s.star(x), R);
    std::set<std::pair<long long, long long>> got;
    for (const auto& p : t.points) got.insert({p.coords[0] + x[0], p.coords[1] + x[1]});
    EXPECT_EQ(got, expect);
  }
}

TEST(Translated, InternalShiftSymmetricDifference) {
  const auto s = make_fibonacci_scheme();
  const double R = 5000;
  const auto a = coords_of(enumerate_model_set(s, fib_window(), R));
  const auto b = coords_of(translated_model_set(s, fib_window(), {0.0}, RealVector{0.1}, R));
  std::size_t diff = 0;
  for (const auto& z : a) diff += b.count(z) == 0;
  for (const auto& z : b) diff += a.count(z) == 0;
  const double expected = 2 * R * 0.2 / std::sqrt(5.0);
  EXPECT_NEAR(static_cast<double>(diff) / expected, 1.0, 0.02);
}

TEST(DensityCheck, FibonacciImagesFillWindow) {
  const auto rep = density_check(make_fibonacci_scheme(), fib_window(), 20);
  EXPECT_TRUE(rep.covered);
  EXPECT_EQ(rep.cells, 20u);
  EXPECT_LE(rep.radius, 256.0);
}

TEST(Robinson, ConfigSequence) {
  RobinsonConfig cfg;
  cfg.depth = 4;
  cfg.alpha = {1, 1, 1, 1};
  cfg.beta = {1, 1, 1, 1};
  EXPECT_EQ(cfg.c(1), (std::pair<long long, long long>{0, 0}));
  EXPECT_EQ(cfg.c(2), (std::pair<long long, long long>{1, 1}));
  EXPECT_EQ(cfg.c(4), (std::pair<long long, long long>{7, 7}));
  cfg.alpha[2] = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  const auto d = RobinsonConfig::defaults(8);
  EXPECT_EQ(d.alpha[0], 1);
  EXPECT_EQ(d.alpha[3], 1);
  EXPECT_EQ(d.alpha[1], -1);
  EXPECT_EQ(d.beta[0], 1);
}

TEST(Robinson, WindowVolumeAndDisjointness) {
  const auto rw = robinson_window(RobinsonConfig::defaults(16));
  const auto& cu = std::get<CosetUnionWindow>(rw.window.variant());
  ASSERT_EQ(cu.cosets.size(), 16u);
  Rational expected = 0;
  for (int k = 1; k <= 16; ++k) expected += Rational(BigInt(1), pow_big(BigInt(4), static_cast<unsigned>(k)));
  EXPECT_EQ(haar_volume_exact(cu), expected);
  EXPECT_LE(std::fabs(haar_volume(rw.window) - 1.0 / 3), std::pow(4.0, -16));
  // congruence oracle: the cosets are pairwise disjoint
  for (std::size_t i = 0; i < cu.cosets.size(); ++i)
    for (std::size_t j = i + 1; j < cu.cosets.size(); ++j) {
      const auto& a = cu.cosets[i];
      const auto& b = cu.cosets[j];
      const BigInt m = pow_big(BigInt(2), static_cast<unsigned>(std::min(a.k, b.k)));
      EXPECT_FALSE(mod_floor(a.rep[0] - b.rep[0], m) == 0 && mod_floor(a.rep[1] - b.rep[1], m) == 0) << i << " " << j;
    }
}

TEST(Robinson, BoundaryCandidatesConvergeToLimit) {
  for (int K : {4, 10, 16}) {
    const auto rw = robinson_window(RobinsonConfig::defaults(K));
    const auto cands = boundary_candidates(rw.window);
    ASSERT_FALSE(cands.empty());
    for (const auto& c : cands) {
      std::vector<PAdicApprox> lim, pt;
      for (int i = 0; i < 2; ++i) {
        lim.push_back(PAdicApprox::from_integer(rw.limit.coords[i].residue(), 2, K));
        pt.push_back(PAdicApprox::from_integer(c.point.coords[i].residue(), 2, K));
      }
      EXPECT_LE(padic_vector_distance(pt, lim), Rational(BigInt(1), pow_big(BigInt(2), static_cast<unsigned>(K - 1))));
    }
  }
}

TEST(Robinson, LimitIsGenericOffTheLattice) {
  const auto rw = robinson_window(RobinsonConfig::defaults(16));
  EXPECT_TRUE(genericity_report(rw.window, make_robinson_scheme(), 40).is_generic_up_to);
  // all alpha = beta = -1 gives c = sum -2^k = (1, 1) in Z^2: the boundary is hit
  RobinsonConfig neg;
  neg.depth = 16;
  neg.alpha.assign(16, -1);
  neg.beta.assign(16, -1);
  const auto rep = genericity_report(robinson_window(neg).window, make_robinson_scheme(), 40);
  EXPECT_FALSE(rep.is_generic_up_to);
  ASSERT_EQ(rep.witnesses.size(), 1u);
  EXPECT_EQ(rep.witnesses[0].coords, (IntVec{1, 1}));
}

TEST(Robinson, WindowPointsAreTypesOneAndTwo) {
  const auto cfg = RobinsonConfig::defaults(12);
  const auto rw = robinson_window(cfg);
  const RobinsonClassifier cl(cfg);
  for (long long x = -40; x < 40; ++x)
    for (long long y = -40; y < 40; ++y) {
      const auto t = cl.classify(x, y);
      if (t == RobinsonType::undecided) continue;
      const bool in = contains(rw.window, PAdicVector{{PAdicApprox::from_integer(x, 2), PAdicApprox::from_integer(y, 2)}}) == Membership::inside;
      EXPECT_EQ(in, t == RobinsonType::vertex || t == RobinsonType::cross) << x << "," << y;
    }
}

TEST(Robinson, ClassesPartitionThePatch) {
  std::mt19937_64 rng(8);
  for (int K : {3, 6, 16}) {
    RobinsonConfig cfg;
    cfg.depth = K;
    for (int i = 0; i < K; ++i) {
      cfg.alpha.push_back(rng() % 2 ? 1 : -1);
      cfg.beta.push_back(rng() % 2 ? 1 : -1);
    }
    const auto cls = robinson_tile_classes_patch(cfg, -37, 11, 96);
    std::set<IntVec> seen;
    std::size_t total = cls.undecided.size();
    for (const auto& p : cls.undecided.points) seen.insert(p.coords);
    for (const auto& t : cls.types) {
      total += t.size();
      for (const auto& p : t.points) seen.insert(p.coords);
    }
    EXPECT_EQ(total, 96u * 96u);
    EXPECT_EQ(seen.size(), 96u * 96u);
  }
}

TEST(Robinson, DensitiesOnPatch) {
  const auto cls = robinson_tile_classes_patch(RobinsonConfig::defaults(16), 0, 0, 512);
  const auto d = cls.densities();
  const auto e = robinson_expected_densities();
  double sum = 0;
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_NEAR(d[i] / e[i], 1.0, 0.01) << "type " << i + 1;
    sum += d[i];
  }
  EXPECT_NEAR(sum, 1.0, 1e-12);
  // types 1 and 2 are exact coset counts
  EXPECT_EQ(cls.types[0].size(), 256u * 256u);
}

TEST(Robinson, BallClassification) {
  const auto cls = robinson_tile_classes(RobinsonConfig::defaults(12), 30);
  std::size_t n = cls.undecided.size();
  for (const auto& t : cls.types) n += t.size();
  std::size_t expected = 0;
  for (long long x = -30; x <= 30; ++x)
    for (long long y = -30; y <= 30; ++y) expected += x * x + y * y <= 900;
  EXPECT_EQ(n, expected);
}

TEST(Visible, SmallCases) {
  const auto ps = visible_points(2, 3);
  const auto c = coords_of(ps);
  EXPECT_TRUE(c.count({1, 1}));
  EXPECT_FALSE(c.count({2, 2}));
  EXPECT_FALSE(c.count({0, 0}));
  EXPECT_TRUE(c.count({0, 1}));
  EXPECT_FALSE(c.count({0, 2}));
  EXPECT_THROW(visible_points(1, 10), std::invalid_argument);
  const auto three = coords_of(visible_points(3, 2));
  EXPECT_TRUE(three.count({1, 1, 1}));
  EXPECT_FALSE(three.count({2, 0, 0}));
}

TEST(Visible, CountMatchesGcdOracle) {
  const long long R = 500;
  std::size_t oracle = 0;
  for (long long x = -R; x <= R; ++x)
    for (long long y = -R; y <= R; ++y) {
      if (x * x + y * y > R * R) continue;
      long long a = std::llabs(x), b = std::llabs(y);
      while (b) {
        const long long t = a % b;
        a = b;
        b = t;
      }
      oracle += a == 1;
    }
  const auto ps = visible_points(2, static_cast<double>(R));
  EXPECT_EQ(ps.size(), oracle);
  EXPECT_NEAR(ps.density() / (6 / (std::numbers::pi * std::numbers::pi)), 1.0, 0.005);
}

TEST(Deform, ZeroAndConstant) {
  const auto ps = enumerate_model_set(make_fibonacci_scheme(), fib_window(), 50);
  const auto same = deform_set(ps, [](const InternalPoint&) { return RealVector{0.0}; });
  for (std::size_t i = 0; i < ps.size(); ++i) EXPECT_EQ(same.points[i].phys, ps.points[i].phys);
  const auto moved = deform_set(ps, [](const InternalPoint&) { return RealVector{0.25}; });
  for (std::size_t i = 0; i < ps.size(); ++i) EXPECT_DOUBLE_EQ(moved.points[i].phys[0], ps.points[i].phys[0] + 0.25);
  EXPECT_FALSE(moved.physical_is_lattice);
  EXPECT_THROW(deform_set(ps, [](const InternalPoint&) { return RealVector{0.6}; }), std::invalid_argument);
}

TEST(Deform, SineStaysUniformlyDiscrete) {
  const GoldenRational shift(rational_from_double(1 / std::numbers::pi));
  const Window generic = Window::interval(GoldenRational(-1) + shift, kTauG - GoldenRational(1) + shift);
  const auto ps = enumerate_model_set(make_fibonacci_scheme(), generic, 500);
  const double gap = min_physical_gap(ps.physical());
  EXPECT_NEAR(gap, 1.0, 1e-12);
  const auto d = deform_set(ps, [](const InternalPoint& u) {
    return RealVector{0.1 * std::sin(2 * std::numbers::pi * to_real(u)[0] / std::numbers::phi)};
  });
  EXPECT_GE(min_physical_gap(d.physical()), gap - 0.2);
}

TEST(Stochastic, ExtremesAndFraction) {
  const auto ps = visible_points(2, 70);
  ASSERT_GT(ps.size(), 9000u);
  EXPECT_EQ(occupy_stochastic(ps, 1.0, 4).size(), ps.size());
  EXPECT_EQ(occupy_stochastic(ps, 0.0, 4).size(), 0u);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto half = occupy_stochastic(ps, 0.5, seed);
    const double f = static_cast<double>(half.size()) / static_cast<double>(ps.size());
    EXPECT_GE(f, 0.48);
    EXPECT_LE(f, 0.52);
  }
  EXPECT_THROW(occupy_stochastic(ps, 1.5, 0), std::invalid_argument);
}

TEST(Stochastic, DeterministicAndOrderFree) {
  const auto ps = enumerate_model_set(make_fibonacci_scheme(), fib_window(), 400);
  const auto a = coords_of(occupy_stochastic(ps, 0.3, 99));
  EXPECT_EQ(a, coords_of(occupy_stochastic(ps, 0.3, 99)));
  PointSet reversed = ps;
  std::reverse(reversed.points.begin(), reversed.points.end());
  EXPECT_EQ(a, coords_of(occupy_stochastic(reversed, 0.3, 99)));
  EXPECT_NE(a, coords_of(occupy_stochastic(ps, 0.3, 100)));
}

TEST(Weights, UnitAndWeylMean) {
  const auto ps = enumerate_model_set(make_fibonacci_scheme(), fib_window(), 2000);
  const auto ones = weight_comb(ps, [](const InternalPoint&) { return Complex(1.0); });
  for (std::size_t i = 0; i < ps.size(); ++i) EXPECT_EQ(ones.weight(i), Complex(1.0));
  const auto lin = weight_comb(ps, [](const InternalPoint& u) { return Complex(to_real(u)[0]); });
  Complex mean = 0;
  for (std::size_t i = 0; i < ps.size(); ++i) mean += lin.weight(i);
  mean /= static_cast<double>(ps.size());
  // (1/vol W) * integral of u over [-1, tau - 1]
  const double lo = -1, hi = std::numbers::phi - 1;
  EXPECT_NEAR(mean.real(), (hi * hi - lo * lo) / 2 / (hi - lo), 2e-3);
}

TEST(Weights, EquivariantUnderLatticeTranslation) {
  const auto s = make_fibonacci_scheme();
  auto g = [](const InternalPoint& u) { return Complex(std::cos(3 * to_real(u)[0]), 0.0); };
  const auto base = weight_comb(enumerate_model_set(s, fib_window(), 100), g);
  std::map<IntVec, Complex> by_coord;
  for (std::size_t i = 0; i < base.size(); ++i) by_coord[base.points[i].coords] = base.weight(i);
  const IntVec x{2, -1};
  const double xs = to_real(s.star(x))[0];
  const auto t = weight_comb(translated_model_set(s, fib_window(), s.physical(x), s.star(x), 100),
                             [&](const InternalPoint& u) { return g(RealVector{to_real(u)[0] + xs}); });
  std::size_t matched = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const IntVec y = t.points[i].coords + x;
    if (auto it = by_coord.find(y); it != by_coord.end()) {
      EXPECT_NEAR(std::abs(it->second - t.weight(i)), 0.0, 1e-12);
      ++matched;
    }
  }
  EXPECT_EQ(matched, t.size());
}
