#include "mns/ops.hpp"

#include <cmath>
#include <cstdlib>

namespace mns {

namespace {

const cplx I{0.0, 1.0};

template <class Fn>
ScalarField map_spectral(const ScalarField& f, Fn&& fn) {
  const ScalarField s = ensure_spectral(f);
  const Grid& g = s.grid();
  const std::size_t n = g.n();
  auto c = s.coeffs();
  std::vector<cplx> out(g.size());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out[i * n + j] = fn(i, j, c[i * n + j]);
  return ScalarField::spectral(g, std::move(out));
}

void require_physical(const VectorField& v) {
  if (v.repr() != Repr::Physical) throw RepresentationError("pointwise operation needs physical fields");
}

void require_physical(const ScalarField& f) {
  if (!f.is_physical()) throw RepresentationError("pointwise operation needs physical fields");
}

}  // namespace

ScalarField d1(const ScalarField& f) {
  const Grid& g = f.grid();
  return map_spectral(f, [&](std::size_t i, std::size_t, cplx c) { return I * g.kd(i) * c; });
}

ScalarField d2(const ScalarField& f) {
  const Grid& g = f.grid();
  return map_spectral(f, [&](std::size_t, std::size_t j, cplx c) { return I * g.kd(j) * c; });
}

std::pair<ScalarField, ScalarField> grad(const ScalarField& f) {
  const ScalarField s = ensure_spectral(f);
  return {d1(s), d2(s)};
}

// Built from the same derivative wavenumbers as grad, so that the Nyquist line
// is annihilated consistently by every differential operator.
ScalarField laplacian(const ScalarField& f) {
  const Grid& g = f.grid();
  return map_spectral(f, [&](std::size_t i, std::size_t j, cplx c) {
    return -(g.kd(i) * g.kd(i) + g.kd(j) * g.kd(j)) * c;
  });
}

ScalarField div2(const VectorField& v) {
  require_same_grid(v[0], v[1]);
  return d1(v[0]) + d2(v[1]);
}

VectorField curl25(const VectorField& v) {
  const VectorField s = ensure_spectral(v);
  return {d2(s[2]), -1.0 * d1(s[2]), d1(s[1]) - d2(s[0])};
}

VectorField grad3(const ScalarField& g) {
  const ScalarField s = ensure_spectral(g);
  return {d1(s), d2(s), ScalarField::zeros(s.grid(), Repr::Spectral)};
}

VectorField laplacian(const VectorField& v) {
  return {laplacian(v[0]), laplacian(v[1]), laplacian(v[2])};
}

VectorField leray_project(const VectorField& v) {
  const VectorField s = ensure_spectral(v);
  const Grid& g = s.grid();
  const std::size_t n = g.n();
  auto a = s[0].coeffs();
  auto b = s[1].coeffs();
  std::vector<cplx> pa(a.begin(), a.end()), pb(b.begin(), b.end());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double k1 = g.kd(i), k2 = g.kd(j);
      const double k2sum = k1 * k1 + k2 * k2;
      if (k2sum == 0.0) continue;
      const std::size_t idx = i * n + j;
      const cplx proj = (k1 * a[idx] + k2 * b[idx]) / k2sum;
      pa[idx] = a[idx] - k1 * proj;
      pb[idx] = b[idx] - k2 * proj;
    }
  }
  return {ScalarField::spectral(g, std::move(pa)), ScalarField::spectral(g, std::move(pb)), s[2]};
}

ScalarField dealias(const ScalarField& f) {
  const Grid& g = f.grid();
  // |mode| > n/3 in integer arithmetic, i.e. 3|m| > n.
  const long n = static_cast<long>(g.n());
  return map_spectral(f, [&](std::size_t i, std::size_t j, cplx c) {
    const long mi = std::labs(g.mode(i)), mj = std::labs(g.mode(j));
    return (3 * mi > n || 3 * mj > n) ? cplx{} : c;
  });
}

VectorField dealias(const VectorField& v) { return {dealias(v[0]), dealias(v[1]), dealias(v[2])}; }

ScalarField apply_multiplier(const ScalarField& f, const std::function<double(std::size_t)>& mask) {
  const std::size_t n = f.grid().n();
  return map_spectral(f, [&](std::size_t i, std::size_t j, cplx c) { return mask(i * n + j) * c; });
}

ScalarField multiply(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a, b);
  require_physical(a);
  require_physical(b);
  auto x = a.values();
  auto y = b.values();
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] * y[i];
  return ScalarField::physical(a.grid(), std::move(out));
}

ScalarField dot(const VectorField& a, const VectorField& b) {
  require_physical(a);
  require_physical(b);
  require_same_grid(a[0], b[0]);
  std::vector<double> out(a.grid().size(), 0.0);
  for (std::size_t c = 0; c < 3; ++c) {
    auto x = a[c].values();
    auto y = b[c].values();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += x[i] * y[i];
  }
  return ScalarField::physical(a.grid(), std::move(out));
}

VectorField cross(const VectorField& a, const VectorField& b) {
  require_physical(a);
  require_physical(b);
  require_same_grid(a[0], b[0]);
  const std::size_t sz = a.grid().size();
  auto a1 = a[0].values(), a2 = a[1].values(), a3 = a[2].values();
  auto b1 = b[0].values(), b2 = b[1].values(), b3 = b[2].values();
  std::vector<double> c1(sz), c2(sz), c3(sz);
  for (std::size_t i = 0; i < sz; ++i) {
    c1[i] = a2[i] * b3[i] - a3[i] * b2[i];
    c2[i] = a3[i] * b1[i] - a1[i] * b3[i];
    c3[i] = a1[i] * b2[i] - a2[i] * b1[i];
  }
  const Grid& g = a.grid();
  return {ScalarField::physical(g, std::move(c1)), ScalarField::physical(g, std::move(c2)),
          ScalarField::physical(g, std::move(c3))};
}

VectorField advect(const VectorField& a, const VectorField& b) {
  require_physical(a);
  const Grid& g = a.grid();
  std::vector<ScalarField> out;
  out.reserve(3);
  for (std::size_t c = 0; c < 3; ++c) {
    const ScalarField bs = ensure_spectral(b[c]);
    const ScalarField g1 = to_physical(d1(bs));
    const ScalarField g2 = to_physical(d2(bs));
    auto x = g1.values(), y = g2.values();
    auto ua = a[0].values(), ub = a[1].values();
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = ua[i] * x[i] + ub[i] * y[i];
    out.push_back(ScalarField::physical(g, std::move(v)));
  }
  return {std::move(out[0]), std::move(out[1]), std::move(out[2])};
}

}  // namespace mns
