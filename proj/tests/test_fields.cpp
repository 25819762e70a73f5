#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <numbers>

#include "mns/field.hpp"
#include "mns/ops.hpp"
#include "mns/snapshot.hpp"
#include "support.hpp"

using namespace mns;
using mns::test::random_band_limited;
using mns::test::random_physical;
using mns::test::random_vector;
using mns::test::rel_diff;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(Grid, RejectsBadSizes) {
  EXPECT_THROW(Grid(4, 1.0), Error);
  EXPECT_THROW(Grid(24, 1.0), Error);
  EXPECT_THROW(Grid(16, -1.0), Error);
  EXPECT_NO_THROW(Grid(8, 1.0));
}

TEST(Grid, WavenumberLayout) {
  Grid g(16, 2 * kPi);
  EXPECT_EQ(g.mode(0), 0);
  EXPECT_EQ(g.mode(7), 7);
  EXPECT_EQ(g.mode(8), -8);
  EXPECT_EQ(g.mode(15), -1);
  EXPECT_DOUBLE_EQ(g.kd(8), 0.0);
  EXPECT_DOUBLE_EQ(g.k(8), -8.0);
  EXPECT_NEAR(g.dealias_cutoff(), 16.0 / 3.0, 1e-15);
}

TEST(Transform, ConstantConcentratesAtZeroMode) {
  Grid g(16, 3.0);
  auto f = to_spectral(ScalarField::sample(g, [](double, double) { return 1.0; }));
  auto c = f.coeffs();
  EXPECT_NEAR(c[0].real(), 256.0, 1e-12);
  for (std::size_t i = 1; i < c.size(); ++i) EXPECT_LT(std::abs(c[i]), 1e-12);
}

TEST(Transform, SingleCosineHasTwoCoefficients) {
  const double L = 5.0;
  Grid g(16, L);
  auto f = to_spectral(ScalarField::sample(g, [&](double x, double) { return std::cos(2 * kPi * x / L); }));
  auto c = f.coeffs();
  const std::size_t plus = 1 * 16, minus = 15 * 16;
  EXPECT_NEAR(std::abs(c[plus]), 128.0, 1e-10);
  EXPECT_NEAR(std::abs(c[minus]), 128.0, 1e-10);
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i != plus && i != minus) {
      EXPECT_LT(std::abs(c[i]), 1e-10);
    }
  }
}

TEST(Transform, MatchesDirectSummationAtN16) {
  Grid g(16, 1.7);
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    auto f = random_physical(g, seed);
    auto fast = to_spectral(f).coeffs();
    auto slow = mns::test::direct_dft(g, f.values());
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < slow.size(); ++i) {
      num = std::max(num, std::abs(fast[i] - slow[i]));
      den = std::max(den, std::abs(slow[i]));
    }
    EXPECT_LT(num / den, 1e-12);
  }
}

TEST(Transform, RoundTripAndParseval) {
  Grid g(32, 10.0);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto f = random_physical(g, 100 + seed);
    auto s = to_spectral(f);
    EXPECT_LT(rel_diff(to_physical(s), f), 1e-12);
    EXPECT_NEAR(l2_norm_sq(s) / l2_norm_sq(f), 1.0, 1e-12);
    EXPECT_LT(hermitian_defect(s), 1e-14);
  }
}

TEST(Transform, RejectsWrongRepresentationAndNonFinite) {
  Grid g(8, 1.0);
  auto p = ScalarField::zeros(g, Repr::Physical);
  auto s = ScalarField::zeros(g, Repr::Spectral);
  EXPECT_THROW(to_physical(p), RepresentationError);
  EXPECT_THROW(to_spectral(s), RepresentationError);
  std::vector<double> bad(g.size(), 0.0);
  bad[5] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(to_spectral(ScalarField::physical(g, bad)), NonFiniteError);
}

TEST(Transform, GridMismatchRejected) {
  auto a = ScalarField::zeros(Grid(8, 1.0), Repr::Physical);
  auto b = ScalarField::zeros(Grid(8, 2.0), Repr::Physical);
  EXPECT_THROW(a + b, GridMismatch);
  EXPECT_THROW(multiply(a, b), GridMismatch);
  EXPECT_THROW(VectorField(a, a, b), GridMismatch);
}

TEST(Differentiation, CosineDerivative) {
  const double L = 7.0;
  Grid g(32, L);
  auto f = ScalarField::sample(g, [&](double x, double) { return std::cos(2 * kPi * x / L); });
  auto expected = ScalarField::sample(g, [&](double x, double) { return -(2 * kPi / L) * std::sin(2 * kPi * x / L); });
  EXPECT_LT(rel_diff(to_physical(d1(f)), expected), 1e-13);
  EXPECT_LT(l2_norm(d2(f)), 1e-12);
  auto c = ScalarField::sample(g, [](double, double) { return 3.5; });
  EXPECT_LT(l2_norm(laplacian(c)), 1e-12);
}

// Second-order five-point stencil as an independent oracle: the gap to the
// spectral Laplacian must shrink ~4x per halving of dx.
TEST(Differentiation, LaplacianFiniteDifferenceTrend) {
  const double L = 2 * kPi;
  auto fn = [](double x, double y) {
    return std::sin(x + 0.3) * std::cos(2 * y) + 0.5 * std::cos(3 * x - y + 1.1) + 0.2 * std::sin(2 * x + 3 * y);
  };
  std::vector<double> errs;
  for (std::size_t n : {32u, 64u, 128u}) {
    Grid g(n, L);
    auto f = ScalarField::sample(g, fn);
    auto spec = to_physical(laplacian(f));
    auto v = f.values();
    const double h = g.dx();
    std::vector<double> fd(g.size());
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        auto at = [&](std::size_t a, std::size_t b) { return v[(a % n) * n + (b % n)]; };
        fd[i * n + j] = (at(i + 1, j) + at(i + n - 1, j) + at(i, j + 1) + at(i, j + n - 1) - 4 * at(i, j)) / (h * h);
      }
    errs.push_back(l2_norm(ScalarField::physical(g, fd) - spec));
  }
  EXPECT_NEAR(errs[0] / errs[1], 4.0, 0.2);
  EXPECT_NEAR(errs[1] / errs[2], 4.0, 0.1);
}

TEST(Curl, ConstantAndSingleMode) {
  const double L = 4.0;
  Grid g(32, L);
  auto c = [&](double v) { return ScalarField::sample(g, [v](double, double) { return v; }); };
  EXPECT_LT(l2_norm(curl25(VectorField(c(1.0), c(-2.0), c(0.5)))), 1e-12);

  auto zero = c(0.0);
  auto s = ScalarField::sample(g, [&](double x, double) { return std::sin(2 * kPi * x / L); });
  auto cu = to_physical(curl25(VectorField(zero, zero, s)));
  auto expected = ScalarField::sample(g, [&](double x, double) { return -(2 * kPi / L) * std::cos(2 * kPi * x / L); });
  EXPECT_LT(l2_norm(cu[0]), 1e-12);
  EXPECT_LT(rel_diff(cu[1], expected), 1e-13);
  EXPECT_LT(l2_norm(cu[2]), 1e-12);
}

TEST(Curl, CurlCurlIdentityAndDivergenceFree) {
  Grid g(32, 9.0);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto v = to_spectral(VectorField(random_physical(g, 3 * seed), random_physical(g, 3 * seed + 1),
                                     random_physical(g, 3 * seed + 2)));
    auto cc = curl25(curl25(v));
    auto rhs = grad3(div2(v)) - laplacian(v);
    EXPECT_LT(rel_diff(cc, rhs), 1e-12);
    EXPECT_LT(l2_norm(div2(curl25(v))) / l2_norm(curl25(v)), 1e-13);
  }
}

TEST(Cross, AlgebraicIdentities) {
  Grid g(16, 1.0);
  auto a = to_physical(random_vector(g, 11, 5));
  auto b = to_physical(random_vector(g, 21, 5));
  auto c = to_physical(random_vector(g, 31, 5));
  EXPECT_EQ(max_abs(cross(a, a)), 0.0);

  auto one = ScalarField::sample(g, [](double, double) { return 1.0; });
  auto zero = ScalarField::zeros(g, Repr::Physical);
  auto e3 = cross(VectorField(one, zero, zero), VectorField(zero, one, zero));
  EXPECT_EQ(max_abs(e3[0]), 0.0);
  EXPECT_EQ(max_abs(e3[1]), 0.0);
  EXPECT_EQ(max_abs(e3[2] - one), 0.0);

  // u.(j x B) + j.(u x B) vanishes pointwise.
  auto s = dot(a, cross(b, c)) + dot(b, cross(a, c));
  const double scale = max_abs(dot(a, cross(b, c)));
  EXPECT_LT(max_abs(s) / scale, 1e-14);
}

TEST(Cross, NeedsPhysicalInputs) {
  Grid g(8, 1.0);
  auto v = VectorField::zeros(g, Repr::Spectral);
  EXPECT_THROW(cross(v, v), RepresentationError);
}

TEST(Leray, AnnihilatesGradientsAndKeepsSolenoidal) {
  Grid g(32, 6.0);
  auto phi = random_band_limited(g, 5, 10);
  auto gv = grad3(phi);
  EXPECT_LT(l2_norm(leray_project(gv)) / l2_norm(gv), 1e-13);

  auto psi = random_band_limited(g, 6, 10);
  auto [p1, p2] = grad(psi);
  VectorField sol(p2, -1.0 * p1, random_band_limited(g, 7, 10));
  EXPECT_LT(rel_diff(leray_project(sol), sol), 1e-13);

  auto v = to_spectral(VectorField(random_physical(g, 1), random_physical(g, 2), random_physical(g, 3)));
  auto pv = leray_project(v);
  EXPECT_LT(rel_diff(leray_project(pv), pv), 1e-13);
  EXPECT_LT(l2_norm(div2(pv)) / l2_norm(pv), 1e-13);
  // Mean (k = 0) and the third component pass through.
  EXPECT_EQ(pv[0].coeffs()[0], v[0].coeffs()[0]);
  EXPECT_LT(rel_diff(pv[2], v[2]), 1e-15);
}

TEST(Dealias, CutoffBehaviour) {
  const double L = 2 * kPi;
  Grid g(32, L);  // cutoff |m| <= 10
  auto low = random_band_limited(g, 9, 10);
  EXPECT_LT(rel_diff(dealias(low), low), 1e-15);
  auto high = ScalarField::sample(g, [](double x, double y) { return std::cos(11 * x + 2 * y); });
  EXPECT_LT(l2_norm(dealias(high)), 1e-12);
}

// cos(a.x) cos(b.x) = (cos((a+b).x) + cos((a-b).x)) / 2 evaluated symbolically.
TEST(Dealias, ProductOfBandLimitedModesIsExact) {
  Grid g(32, 2 * kPi);
  auto f = ScalarField::sample(g, [](double x, double y) { return std::cos(4 * x + 3 * y); });
  auto h = ScalarField::sample(g, [](double x, double y) { return std::cos(5 * x - 2 * y + 0.4); });
  auto prod = to_physical(dealias(multiply(f, h)));
  auto exact = ScalarField::sample(g, [](double x, double y) {
    return 0.5 * (std::cos(9 * x + y + 0.4) + std::cos(-x + 5 * y - 0.4));
  });
  EXPECT_LT(rel_diff(prod, exact), 1e-12);
}

TEST(Operators, Linearity) {
  Grid g(16, 3.0);
  auto f = random_band_limited(g, 1, 7);
  auto h = random_band_limited(g, 2, 7);
  const double a = 1.7, b = -0.4;
  auto combo = a * f + b * h;
  EXPECT_LT(rel_diff(laplacian(combo), a * laplacian(f) + b * laplacian(h)), 1e-12);
  EXPECT_LT(rel_diff(d1(combo), a * d1(f) + b * d1(h)), 1e-12);
  EXPECT_LT(rel_diff(dealias(combo), a * dealias(f) + b * dealias(h)), 1e-12);
  auto V = random_vector(g, 10, 7);
  auto W = random_vector(g, 20, 7);
  auto vc = a * V + b * W;
  EXPECT_LT(rel_diff(curl25(vc), a * curl25(V) + b * curl25(W)), 1e-12);
  EXPECT_LT(rel_diff(leray_project(vc), a * leray_project(V) + b * leray_project(W)), 1e-12);
  EXPECT_LT(rel_diff(to_spectral(to_physical(vc)), vc), 1e-12);
}

TEST(Snapshot, RoundTripAndHeader) {
  Grid g(8, 2.5);
  auto u = to_physical(random_vector(g, 1, 3));
  auto E = to_physical(random_vector(g, 4, 3));
  auto B = to_physical(random_vector(g, 7, 3));
  auto bytes = encode_snapshot(0.75, u, E, B);
  ASSERT_EQ(bytes.size(), kSnapshotHeaderBytes + 9 * 8 * 64);
  EXPECT_EQ(bytes[0], 'M');
  EXPECT_EQ(bytes[3], '2');
  EXPECT_EQ(bytes[4], 1);  // version, little-endian
  EXPECT_EQ(bytes[8], 8);  // n
  EXPECT_EQ(bytes[28], 9);
  auto path = std::filesystem::temp_directory_path() / "mns_snapshot_test.bin";
  write_snapshot(path, 0.75, u, E, B);
  auto snap = read_snapshot(path);
  std::filesystem::remove(path);
  EXPECT_EQ(snap.t, 0.75);
  EXPECT_EQ(snap.u.grid(), g);
  for (std::size_t c = 0; c < 3; ++c) {
    EXPECT_EQ(max_abs(snap.u[c] - u[c]), 0.0);
    EXPECT_EQ(max_abs(snap.B[c] - B[c]), 0.0);
  }
  bytes[0] = 'X';
  EXPECT_THROW(decode_snapshot(bytes), IoError);
}
