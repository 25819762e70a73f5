#pragma once

// Test-only helpers: random field generators and independent oracles.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "mns/field.hpp"
#include "mns/ops.hpp"

namespace mns::test {

inline ScalarField random_physical(const Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<double> v(g.size());
  for (auto& x : v) x = nd(rng);
  return ScalarField::physical(g, std::move(v));
}

/// Real field with random coefficients on modes |m_i| <= mmax (no Nyquist content).
inline ScalarField random_band_limited(const Grid& g, std::uint64_t seed, int mmax) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  const std::size_t n = g.n();
  std::vector<cplx> c(g.size());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (std::abs(g.mode(i)) <= mmax && std::abs(g.mode(j)) <= mmax)
        c[i * n + j] = {nd(rng), nd(rng)};
  // Symmetrize to a real field.
  std::vector<cplx> h(c.size());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t mi = (n - i) % n, mj = (n - j) % n;
      h[i * n + j] = 0.5 * (c[i * n + j] + std::conj(c[mi * n + mj]));
    }
  return ScalarField::spectral(g, std::move(h));
}

inline VectorField random_vector(const Grid& g, std::uint64_t seed, int mmax) {
  return {random_band_limited(g, seed, mmax), random_band_limited(g, seed + 1, mmax),
          random_band_limited(g, seed + 2, mmax)};
}

/// Direct O(n^4) summation with the exp(-i k.x) kernel.
inline std::vector<cplx> direct_dft(const Grid& g, std::span<const double> v) {
  const std::size_t n = g.n();
  std::vector<cplx> out(g.size());
  const double w = 2.0 * std::numbers::pi / static_cast<double>(n);
  for (std::size_t k1 = 0; k1 < n; ++k1)
    for (std::size_t k2 = 0; k2 < n; ++k2) {
      cplx s{};
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
          const double ang = -w * static_cast<double>((k1 * a + k2 * b) % n);
          s += v[a * n + b] * cplx(std::cos(ang), std::sin(ang));
        }
      out[k1 * n + k2] = s;
    }
  return out;
}

// J0 by its power series, accurate on [0, 3].
inline double j0_series(double x) {
  double term = 1.0, sum = 1.0;
  const double q = -0.25 * x * x;
  for (int k = 1; k < 60; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
  }
  return sum;
}

inline double bisect_j0_zero() {
  double lo = 2.0, hi = 3.0;
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    (j0_series(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

using C6 = std::array<cplx, 6>;

// Linear per-mode system for (E, B): E' = i k x B - E, B' = -i k x E.
inline C6 em_rhs(double k1, double k2, const C6& y) {
  const cplx I(0, 1);
  auto cr = [&](const cplx* v, cplx* out) {
    out[0] = k2 * v[2];
    out[1] = -k1 * v[2];
    out[2] = k1 * v[1] - k2 * v[0];
  };
  cplx kb[3], ke[3];
  cr(&y[3], kb);
  cr(&y[0], ke);
  C6 d;
  for (int c = 0; c < 3; ++c) {
    d[c] = I * kb[c] - y[c];
    d[3 + c] = -I * ke[c];
  }
  return d;
}

// Classical RK4 with many substeps on (E, B, q) where q' = |E|^2.
inline C6 em_oracle(double k1, double k2, C6 y, double T, int substeps, double* e_int = nullptr) {
  const double h = T / substeps;
  double q = 0.0;
  auto e2 = [](const C6& v) { return std::norm(v[0]) + std::norm(v[1]) + std::norm(v[2]); };
  auto add = [](const C6& a, const C6& b, double c) {
    C6 r;
    for (int i = 0; i < 6; ++i) r[i] = a[i] + c * b[i];
    return r;
  };
  for (int s = 0; s < substeps; ++s) {
    const C6 ya = y, yb = add(y, em_rhs(k1, k2, ya), h / 2);
    const C6 a = em_rhs(k1, k2, ya), b = em_rhs(k1, k2, yb);
    const C6 yc = add(y, b, h / 2);
    const C6 c = em_rhs(k1, k2, yc);
    const C6 yd = add(y, c, h);
    const C6 d = em_rhs(k1, k2, yd);
    q += h / 6 * (e2(ya) + 2 * e2(yb) + 2 * e2(yc) + e2(yd));
    for (int i = 0; i < 6; ++i) y[i] += h / 6 * (a[i] + 2.0 * b[i] + 2.0 * c[i] + d[i]);
  }
  if (e_int) *e_int = q;
  return y;
}

inline double rel_diff(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s > 0.0 ? std::abs(a - b) / s : 0.0;
}

inline double rel_diff(const ScalarField& a, const ScalarField& b) {
  const double d = l2_norm(ensure_physical(a) - ensure_physical(b));
  const double s = std::max(l2_norm(a), l2_norm(b));
  return s > 0.0 ? d / s : d;
}

inline double rel_diff(const VectorField& a, const VectorField& b) {
  const double d = l2_norm(ensure_physical(a) - ensure_physical(b));
  const double s = std::max(l2_norm(a), l2_norm(b));
  return s > 0.0 ? d / s : d;
}

}  // namespace mns::test
