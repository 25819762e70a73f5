#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "mns/localize.hpp"
#include "mns/lp.hpp"
#include "support.hpp"

using namespace mns;
using namespace mns::loc;
using mns::test::random_band_limited;
using mns::test::random_physical;
using mns::test::bisect_j0_zero;
using mns::test::j0_series;

namespace {

constexpr double kPi = std::numbers::pi;

double periodic_distance(std::uint32_t a, std::uint32_t b, long m) {
  auto d = [m](long x, long y) {
    long v = std::abs(x - y) % m;
    return static_cast<double>(std::min(v, m - v));
  };
  const long a1 = a / m, a2 = a % m, b1 = b / m, b2 = b % m;
  return std::hypot(d(a1, b1), d(a2, b2));
}

}  // namespace

TEST(Zeta, ProfileValues) {
  EXPECT_EQ(zeta(0.0), 1.0);
  EXPECT_EQ(zeta(std::sqrt(0.5)), 1.0);
  EXPECT_EQ(zeta(1.0), 0.0);
  EXPECT_GT(zeta(0.85), 0.0);
  EXPECT_LT(zeta(0.85), 1.0);
  for (double r = 0.0; r < 1.2; r += 0.01) EXPECT_LE(zeta(r + 0.01), zeta(r));
}

TEST(Partition, SumsToOneAtArbitraryPoints) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int t = 0; t < 500; ++t) {
    const double y1 = u(rng), y2 = u(rng);
    double s = 0.0;
    for (int a = -7; a <= 7; ++a)
      for (int b = -7; b <= 7; ++b) s += phi_profile(y1 - a, y2 - b);
    EXPECT_NEAR(s, 1.0, 1e-12);
  }
}

TEST(Partition, InvariantsOnTheGrid) {
  const Grid g(128, 32 * kPi);
  for (std::size_t m : {8u, 16u, 32u}) {
    PartitionOfUnity pou(g, m);
    double worst = 0.0, sq_min = 1.0, sq_max = 0.0, spread = 0.0;
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
      double s = 0.0, s2 = 0.0;
      auto e = pou.at(idx);
      for (const auto& x : e) {
        s += x.phi;
        s2 += x.phi * x.phi;
        EXPECT_GE(x.phi, 0.0);
        EXPECT_LE(x.phi, 1.0);
      }
      for (const auto& a : e)
        for (const auto& b : e) spread = std::max(spread, periodic_distance(a.k, b.k, static_cast<long>(m)));
      worst = std::max(worst, std::abs(s - 1.0));
      sq_min = std::min(sq_min, s2);
      sq_max = std::max(sq_max, s2);
    }
    EXPECT_LE(worst, 1e-10) << m;
    EXPECT_GE(sq_min, 1.0 / 16.0) << m;
    EXPECT_LE(sq_max, 1.0 + 1e-12) << m;
    // Bumps sharing a point are closer than 2 lattice units, so any pair at
    // distance >= 5 has disjoint support.
    EXPECT_LT(spread, 2.0) << m;
  }
}

TEST(Partition, CommensurateScalesOnly) {
  EXPECT_EQ(build_partition(Grid(64, 32.0), 0).cells(), 32u);
  EXPECT_EQ(build_partition(Grid(64, 32.0), -2).cells(), 8u);
  EXPECT_NEAR(build_partition(Grid(64, 32.0), -2).j(), -2.0, 1e-15);
  EXPECT_THROW(build_partition(Grid(64, 32 * kPi), 0), OutOfRange);
  EXPECT_THROW(build_partition(Grid(64, 32.0), -6), OutOfRange);
}

TEST(LocSum, EqualsSquaredL2Norm) {
  const Grid g(64, 32 * kPi);
  for (std::size_t m : {1u, 2u, 4u, 8u}) {
    PartitionOfUnity pou(g, m);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      auto f = random_physical(g, seed);
      EXPECT_NEAR(loc_sum(f, pou) / l2_norm_sq(f), 1.0, 1e-12);
      auto v = test::random_vector(g, seed, 20);
      EXPECT_NEAR(loc_sum(v, pou) / l2_norm_sq(v), 1.0, 1e-12);
    }
  }
  EXPECT_EQ(loc_sum(ScalarField::zeros(g, Repr::Physical), PartitionOfUnity(g, 4)), 0.0);
}

TEST(LocSum, SingleCellSupportTouchesFewBumps) {
  const Grid g(64, 16.0);
  PartitionOfUnity pou(g, 16);  // 4 grid points per cell
  std::vector<double> v(g.size(), 0.0);
  for (std::size_t i = 20; i < 24; ++i)
    for (std::size_t j = 36; j < 40; ++j) v[i * 64 + j] = 1.0 + 0.1 * i;
  auto terms = loc_terms(ScalarField::physical(g, v), pou, Weight::SqrtBump);
  const auto nonzero = std::count_if(terms.begin(), terms.end(), [](double t) { return t > 0.0; });
  EXPECT_GT(nonzero, 0);
  EXPECT_LE(nonzero, 25);
}

TEST(LocSup, ConstantFieldIsTranslationSymmetric) {
  const Grid g(64, 10.0);
  PartitionOfUnity pou(g, 8);
  const double c = -1.5;
  auto f = ScalarField::sample(g, [c](double, double) { return c; });
  for (Weight w : {Weight::Bump, Weight::SqrtBump}) {
    auto t = loc_terms(f, pou, w);
    const auto [lo, hi] = std::minmax_element(t.begin(), t.end());
    EXPECT_NEAR(*lo / *hi, 1.0, 1e-12);
    auto b = pou.bump(5);
    double bw = 0.0;
    for (double x : b) bw += (w == Weight::Bump ? x * x : x) * g.cell_area();
    EXPECT_NEAR(loc_sup(f, pou, w), std::abs(c) * std::sqrt(bw), 1e-12);
  }
}

TEST(LocSup, LatticeShiftPermutesTerms) {
  const Grid g(64, 12.0);
  PartitionOfUnity pou(g, 8);
  auto f = random_physical(g, 8);
  const std::size_t shift = 64 / 8;
  std::vector<double> s(g.size());
  auto v = f.values();
  for (std::size_t i = 0; i < 64; ++i)
    for (std::size_t j = 0; j < 64; ++j) s[((i + shift) % 64) * 64 + (j + 2 * shift) % 64] = v[i * 64 + j];
  auto shifted = ScalarField::physical(g, s);
  for (Weight w : {Weight::Bump, Weight::SqrtBump}) {
    auto a = loc_terms(f, pou, w), b = loc_terms(shifted, pou, w);
    for (std::size_t k1 = 0; k1 < 8; ++k1)
      for (std::size_t k2 = 0; k2 < 8; ++k2)
        EXPECT_NEAR(b[((k1 + 1) % 8) * 8 + (k2 + 2) % 8], a[k1 * 8 + k2], 1e-10 * a[k1 * 8 + k2]);
    EXPECT_NEAR(loc_sup(f, pou, w), loc_sup(shifted, pou, w), 1e-10);
  }
}

TEST(LocSup, CoarseScaleControlledByFineScale) {
  const Grid g(128, 32.0);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto f = random_band_limited(g, seed, 40);
    for (std::size_t mi : {2u, 4u, 8u})
      for (std::size_t mj = mi; mj <= 16; mj *= 2) {
        const double dj = std::log2(static_cast<double>(mj) / mi);
        const double coarse = loc_sup(f, PartitionOfUnity(g, mi), Weight::SqrtBump);
        const double fine = loc_sup(f, PartitionOfUnity(g, mj), Weight::SqrtBump);
        EXPECT_LE(coarse, std::pow(2.0, (1.0 + 2.0 * dj) / 2.0) * fine);
      }
  }
}

TEST(LocalBernstein, RatioBoundedAcrossScales) {
  const Grid g(128, 32 * kPi);
  double lo = 1e300, hi = 0.0;
  for (std::size_t m = 1; m <= 16; m *= 2) {
    PartitionOfUnity pou(g, m);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const double r = local_bernstein_ratio(random_band_limited(g, seed, 42), pou);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
  }
  EXPECT_GT(lo, 0.0);
  EXPECT_LT(hi, 2.0);
}

TEST(KernelL1, RatioFinite) {
  const Grid g(128, 32.0);
  PartitionOfUnity pou(g, 32);
  double hi = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) hi = std::max(hi, kernel_l1_ratio(random_physical(g, seed), pou));
  EXPECT_GT(hi, 0.0);
  EXPECT_LT(hi, 1.0);
  EXPECT_THROW(kernel_l1_ratio(random_physical(g, 1), PartitionOfUnity(g, 16)), OutOfRange);
}

TEST(Eigenpair, ZeroAndEigenvalueMatchBisection) {
  const auto ep = eigen_disk();
  const double z = bisect_j0_zero();
  EXPECT_NEAR(ep.z, z, 1e-12);
  EXPECT_NEAR(ep.z, 2.404825557695773, 1e-13);
  EXPECT_NEAR(ep.lambda1, 0.25 * z * z, 1e-10);
  EXPECT_NEAR(ep.lambda1, 1.445796490, 1e-9);
}

TEST(Eigenpair, RadialResidual) {
  const auto ep = eigen_disk();
  const double h = 1e-4;
  double worst = 0.0;
  for (int i = 1; i <= 10000; ++i) {
    const double r = 2.0 * i / 10001.0;
    if (r - h <= 0.0 || r + h >= 2.0) continue;
    const double d2 = (ep.profile(r + h) - 2 * ep.profile(r) + ep.profile(r - h)) / (h * h);
    const double d1 = (ep.profile(r + h) - ep.profile(r - h)) / (2 * h);
    worst = std::max(worst, std::abs(-d2 - d1 / r - ep.lambda1 * ep.profile(r)));
  }
  EXPECT_LE(worst, 1e-6);
  EXPECT_EQ(ep.profile(2.0), 0.0);
  EXPECT_NEAR(j0_series(ep.z), 0.0, 1e-12);
  for (double r = 0.0; r < 2.0; r += 0.01) EXPECT_GT(ep.profile(r), 0.0);
}

TEST(Eigenpair, ComparabilityConstants) {
  const auto ep = eigen_disk();
  EXPECT_NEAR(ep.m_upper, 1.0, 1e-15);
  // The numerical support of phi ends where exp(-1/t) underflows, just inside |y| = 1.
  EXPECT_GE(ep.m_lower, j0_series(0.5 * ep.z));
  EXPECT_NEAR(ep.m_lower, j0_series(0.5 * ep.z), 1e-3);
  const Grid g(128, 32 * kPi);
  for (std::size_t m : {8u, 16u}) {
    PartitionOfUnity pou(g, m);
    const long ml = static_cast<long>(m);
    for (std::size_t i1 = 0; i1 < g.n(); ++i1)
      for (std::size_t i2 = 0; i2 < g.n(); ++i2) {
        const double y1 = g.x(i1) * pou.scale(), y2 = g.x(i2) * pou.scale();
        for (const auto& e : pou.at(i1 * g.n() + i2)) {
          // Nearest periodic image of lattice point k.
          double d1 = y1 - static_cast<double>(e.k / ml), d2 = y2 - static_cast<double>(e.k % ml);
          d1 -= m * std::round(d1 / m);
          d2 -= m * std::round(d2 / m);
          const double v = ep.profile(std::hypot(d1, d2)) * e.phi;
          EXPECT_LE(ep.m_lower * e.phi, v + 1e-15);
          EXPECT_LE(v, ep.m_upper * e.phi + 1e-15);
        }
      }
  }
}

TEST(Eigenpair, BumpSeparation) {
  const auto ep = eigen_disk();
  const int d = eigen_bump_separation(ep);
  EXPECT_EQ(d, 3);
  EXPECT_LE(d, 5);
}

TEST(EigenIdentity, GaussianDefect) {
  const auto ep = eigen_disk();
  const std::array<double, 2> c{0.3, -0.2};
  const double w = 0.7;
  SmoothFunction f;
  f.value = [&](double x, double y) {
    const double r2 = (x - c[0]) * (x - c[0]) + (y - c[1]) * (y - c[1]);
    return std::exp(-r2 / (2 * w * w));
  };
  f.grad = [&](double x, double y) {
    const double v = f.value(x, y);
    return std::array<double, 2>{-(x - c[0]) / (w * w) * v, -(y - c[1]) / (w * w) * v};
  };
  f.laplacian = [&](double x, double y) {
    const double r2 = (x - c[0]) * (x - c[0]) + (y - c[1]) * (y - c[1]);
    return f.value(x, y) * (r2 / (w * w * w * w) - 2 / (w * w));
  };
  const auto a = verify_eigen_identity(f, 1.0, c, ep, 256);
  EXPECT_LE(a.defect, 1e-6);
  const auto b = verify_eigen_identity(f, 1.0, c, ep, 512);
  EXPECT_NEAR(a.lhs, b.lhs, 1e-10 * std::abs(b.lhs));
  EXPECT_NEAR(a.rhs, b.rhs, 1e-10 * std::abs(b.rhs));

  SmoothFunction f2 = f;
  f2.value = [&](double x, double y) { return 2 * f.value(x, y); };
  f2.grad = [&](double x, double y) {
    auto g = f.grad(x, y);
    return std::array<double, 2>{2 * g[0], 2 * g[1]};
  };
  f2.laplacian = [&](double x, double y) { return 2 * f.laplacian(x, y); };
  const auto s = verify_eigen_identity(f2, 1.0, c, ep, 256);
  EXPECT_NEAR(s.lhs, 4 * a.lhs, 1e-12 * std::abs(s.lhs));
  EXPECT_NEAR(s.rhs, 4 * a.rhs, 1e-12 * std::abs(s.rhs));
  EXPECT_NEAR(s.defect, a.defect, 1e-12);
}

TEST(EigenIdentity, ConstantFunctionBoundaryBalance) {
  const auto ep = eigen_disk();
  SmoothFunction f{[](double, double) { return 1.3; }, [](double, double) { return std::array<double, 2>{0, 0}; },
                   [](double, double) { return 0.0; }};
  for (double r : {0.5, 1.0, 2.5}) {
    const auto c = verify_eigen_identity(f, r, {0.0, 0.0}, ep, 128);
    EXPECT_EQ(c.lhs, 0.0);
    // oint grad phi_r . n = -(lambda1 / r^2) int phi_r.
    EXPECT_NEAR(c.boundary, -c.bulk_phi, 1e-12 * c.bulk_phi);
  }
  EXPECT_THROW(verify_eigen_identity(f, 0.0, {0, 0}, ep), OutOfRange);
  EXPECT_THROW(verify_eigen_identity(f, 1.0, {0, 0}, ep, 4), OutOfRange);
}

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
  std::vector<double> x, w;
  gauss_legendre(10, x, w);
  for (int p = 0; p < 20; ++p) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(x[i], p);
    EXPECT_NEAR(s, p % 2 ? 0.0 : 2.0 / (p + 1), 1e-14);
  }
}

TEST(Morrey, SumAggregationGrowsAsFourToTheJ) {
  const Grid g(64, 32 * kPi);
  auto scales = dyadic_partitions(g, 8);
  std::vector<VectorField> traj;
  std::vector<double> e;
  for (int i = 0; i < 5; ++i) {
    auto v = test::random_vector(g, 10 + i, 15);
    e.push_back(l2_norm_sq(v));
    traj.push_back(to_physical(v));
  }
  const double dt = 0.1;
  double integral = 0.0;
  for (std::size_t i = 1; i < e.size(); ++i) integral += 0.5 * dt * (e[i - 1] + e[i]);
  auto rep = morrey_quantity(traj, scales, Aggregation::Sum, dt);
  for (std::size_t i = 0; i < scales.size(); ++i) {
    const double expect = std::exp2(2 * rep.j[i]) * integral;
    EXPECT_NEAR(rep.per_scale[i], expect, 1e-12 * expect);
  }
  EXPECT_EQ(rep.overall, rep.per_scale.back());
  auto sup = morrey_quantity(traj, scales, Aggregation::Sup, dt);
  for (std::size_t i = 0; i < scales.size(); ++i) EXPECT_LE(sup.per_scale[i], rep.per_scale[i]);
}

TEST(Morrey, ZeroTrajectoryAndErrors) {
  const Grid g(32, 10.0);
  auto scales = dyadic_partitions(g, 4);
  std::vector<VectorField> traj(3, VectorField::zeros(g, Repr::Physical));
  EXPECT_EQ(morrey_quantity(traj, scales, Aggregation::Sup, 0.1).overall, 0.0);
  EXPECT_THROW(morrey_quantity(std::vector<VectorField>{}, scales, Aggregation::Sup, 0.1), Error);
}

TEST(ScaleCsv, Header) {
  std::vector<ScaleRow> rows = {{-1.5, "sup", "integrated", 0.25}};
  std::ostringstream os;
  write_scale_csv(os, rows);
  EXPECT_EQ(os.str(), "j,aggregation,kind,value\n-1.5,sup,integrated,0.25\n");
}
