#include "mns/initial.hpp"

#include <cmath>
#include <numbers>

#include "mns/random.hpp"

namespace mns::cli {

namespace {

constexpr std::uint64_t kSaltU = 1, kSaltE = 2, kSaltB = 3;

struct Coeffs {
  std::vector<cplx> c[3];
  explicit Coeffs(std::size_t size) {
    for (auto& v : c) v.assign(size, cplx{});
  }
};

cplx unit_phase(SplitMix64& rng) {
  const double th = 2.0 * std::numbers::pi * rng.uniform();
  return {std::cos(th), std::sin(th)};
}

VectorField to_field(const Grid& g, Coeffs& c, double scale) {
  for (auto& v : c.c)
    for (auto& z : v) z *= scale;
  return {ScalarField::spectral(g, std::move(c.c[0])), ScalarField::spectral(g, std::move(c.c[1])),
          ScalarField::spectral(g, std::move(c.c[2]))};
}

}  // namespace

solver::State generate_initial(const Grid& grid, const InitParams& p) {
  const std::size_t n = grid.n();
  const long ln = static_cast<long>(n);
  const double k0 = p.k0 > 0.0 ? p.k0 : static_cast<double>(n) / 8.0 * grid.dk();
  const double series = static_cast<double>(n * n);  // FFT coefficient of a unit Fourier series term
  Coeffs u(grid.size()), e(grid.size()), b(grid.size());
  // Row-major traversal; each canonical mode also fills its conjugate partner.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const long m1 = grid.mode(i), m2 = grid.mode(j);
      if (3 * std::labs(m1) > ln || 3 * std::labs(m2) > ln) continue;
      if (!(m1 > 0 || (m1 == 0 && m2 > 0))) continue;
      const double k1 = grid.k(i), k2 = grid.k(j);
      const double km = std::hypot(k1, k2);
      const double amp = series * std::pow(km, p.a) * std::exp(-(km * km) / (k0 * k0));
      const std::size_t idx = i * n + j;
      const std::size_t cidx = ((n - i) % n) * n + (n - j) % n;
      auto put = [&](Coeffs& c, std::size_t comp, cplx v) {
        c.c[comp][idx] = v;
        c.c[comp][cidx] = std::conj(v);
      };
      SplitMix64 ru(mix_key(p.seed, m1, m2, kSaltU));
      SplitMix64 re(mix_key(p.seed, m1, m2, kSaltE));
      SplitMix64 rb(mix_key(p.seed, m1, m2, kSaltB));
      const cplx hu = amp * unit_phase(ru), vu = amp * unit_phase(ru);
      put(u, 0, -k2 / km * hu);
      put(u, 1, k1 / km * hu);
      put(u, 2, vu);
      for (std::size_t c = 0; c < 3; ++c) put(e, c, amp * unit_phase(re));
      const cplx hb = amp * unit_phase(rb), vb = amp * unit_phase(rb);
      put(b, 0, -k2 / km * hb);
      put(b, 1, k1 / km * hb);
      put(b, 2, vb);
    }
  VectorField uf = to_field(grid, u, 1.0), ef = to_field(grid, e, 1.0), bf = to_field(grid, b, 1.0);
  if (p.normalize) {
    const double target = p.energy / 3.0;
    auto norm = [&](VectorField& v) {
      const double s = l2_norm_sq(v);
      if (s > 0.0) v *= std::sqrt(target / s);
    };
    norm(uf);
    norm(ef);
    norm(bf);
  }
  return {0.0, std::move(uf), std::move(ef), std::move(bf)};
}

}  // namespace mns::cli
