#include "mns/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mns {

ScalarField ScalarField::zeros(const Grid& grid, Repr repr) {
  ScalarField f(grid, repr);
  if (repr == Repr::Physical)
    f.phys_.assign(grid.size(), 0.0);
  else
    f.spec_.assign(grid.size(), cplx{});
  return f;
}

ScalarField ScalarField::physical(const Grid& grid, std::vector<double> values) {
  if (values.size() != grid.size()) throw Error("physical field: sample count does not match grid");
  ScalarField f(grid, Repr::Physical);
  f.phys_ = std::move(values);
  return f;
}

ScalarField ScalarField::spectral(const Grid& grid, std::vector<cplx> coeffs) {
  if (coeffs.size() != grid.size()) throw Error("spectral field: coefficient count does not match grid");
  ScalarField f(grid, Repr::Spectral);
  f.spec_ = std::move(coeffs);
  return f;
}

std::span<const double> ScalarField::values() const {
  if (repr_ != Repr::Physical) throw RepresentationError("physical samples requested from a spectral field");
  return phys_;
}

std::span<const cplx> ScalarField::coeffs() const {
  if (repr_ != Repr::Spectral) throw RepresentationError("spectral coefficients requested from a physical field");
  return spec_;
}

void require_same_grid(const ScalarField& a, const ScalarField& b) {
  if (a.grid() != b.grid()) throw GridMismatch();
}

namespace {
void require_same_layout(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a, b);
  if (a.repr() != b.repr()) throw RepresentationError("operands are in different representations");
}
}  // namespace

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  require_same_layout(*this, o);
  if (is_physical())
    for (std::size_t i = 0; i < phys_.size(); ++i) phys_[i] += o.phys_[i];
  else
    for (std::size_t i = 0; i < spec_.size(); ++i) spec_[i] += o.spec_[i];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  require_same_layout(*this, o);
  if (is_physical())
    for (std::size_t i = 0; i < phys_.size(); ++i) phys_[i] -= o.phys_[i];
  else
    for (std::size_t i = 0; i < spec_.size(); ++i) spec_[i] -= o.spec_[i];
  return *this;
}

ScalarField& ScalarField::operator*=(double c) {
  for (auto& v : phys_) v *= c;
  for (auto& v : spec_) v *= c;
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double c, ScalarField a) { return a *= c; }

ScalarField to_spectral(const ScalarField& f) {
  auto v = f.values();
  const Grid& g = f.grid();
  std::vector<cplx> in(g.size()), out(g.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (!std::isfinite(v[i])) throw NonFiniteError("non-finite sample in to_spectral");
    in[i] = v[i];
  }
  g.forward(in.data(), out.data());
  return ScalarField::spectral(g, std::move(out));
}

ScalarField to_physical(const ScalarField& f) {
  auto c = f.coeffs();
  const Grid& g = f.grid();
  std::vector<cplx> out(g.size());
  g.backward(c.data(), out.data());
  const double scale = 1.0 / static_cast<double>(g.size());
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = out[i].real() * scale;
  return ScalarField::physical(g, std::move(v));
}

ScalarField ensure_spectral(const ScalarField& f) { return f.is_spectral() ? f : to_spectral(f); }
ScalarField ensure_physical(const ScalarField& f) { return f.is_physical() ? f : to_physical(f); }

double l2_norm_sq(const ScalarField& f) {
  const Grid& g = f.grid();
  double s = 0.0;
  if (f.is_physical()) {
    for (double v : f.values()) s += v * v;
    return s * g.cell_area();
  }
  for (const cplx& c : f.coeffs()) s += std::norm(c);
  // Parseval: sum |f|^2 = (1/n^2) sum |F|^2.
  return s * g.cell_area() / static_cast<double>(g.size());
}

double l2_norm(const ScalarField& f) { return std::sqrt(l2_norm_sq(f)); }

double lp_norm(const ScalarField& f, double p) {
  if (!(p >= 1.0)) throw Error("lp_norm: p must be >= 1");
  const ScalarField ph = ensure_physical(f);
  if (std::isinf(p)) return max_abs(ph);
  if (p == 2.0) return l2_norm(ph);
  double s = 0.0;
  for (double v : ph.values()) s += std::pow(std::abs(v), p);
  return std::pow(s * f.grid().cell_area(), 1.0 / p);
}

double max_abs(const ScalarField& f) {
  const ScalarField ph = ensure_physical(f);
  double m = 0.0;
  for (double v : ph.values()) m = std::max(m, std::abs(v));
  return m;
}

double inner(const ScalarField& f, const ScalarField& g) {
  require_same_grid(f, g);
  const Grid& gr = f.grid();
  if (f.is_spectral() && g.is_spectral()) {
    auto a = f.coeffs();
    auto b = g.coeffs();
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] * std::conj(b[i])).real();
    return s * gr.cell_area() / static_cast<double>(gr.size());
  }
  const ScalarField pf = ensure_physical(f);
  const ScalarField pg = ensure_physical(g);
  auto a = pf.values();
  auto b = pg.values();
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s * gr.cell_area();
}

double mean(const ScalarField& f) {
  if (f.is_spectral()) return f.coeffs()[0].real() / static_cast<double>(f.grid().size());
  double s = 0.0;
  for (double v : f.values()) s += v;
  return s / static_cast<double>(f.grid().size());
}

double hermitian_defect(const ScalarField& f) {
  auto c = f.coeffs();
  const std::size_t n = f.grid().n();
  double worst = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t mi = (n - i) % n, mj = (n - j) % n;
      worst = std::max(worst, std::abs(c[i * n + j] - std::conj(c[mi * n + mj])));
      scale = std::max(scale, std::abs(c[i * n + j]));
    }
  }
  return scale > 0.0 ? worst / scale : 0.0;
}

VectorField::VectorField(ScalarField c1, ScalarField c2, ScalarField c3)
    : comps_{std::move(c1), std::move(c2), std::move(c3)} {
  require_same_grid(comps_[0], comps_[1]);
  require_same_grid(comps_[0], comps_[2]);
  if (comps_[0].repr() != comps_[1].repr() || comps_[0].repr() != comps_[2].repr())
    throw RepresentationError("vector components must share one representation");
}

VectorField VectorField::zeros(const Grid& grid, Repr repr) {
  return {ScalarField::zeros(grid, repr), ScalarField::zeros(grid, repr), ScalarField::zeros(grid, repr)};
}

VectorField& VectorField::operator+=(const VectorField& o) {
  for (std::size_t i = 0; i < 3; ++i) comps_[i] += o.comps_[i];
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& o) {
  for (std::size_t i = 0; i < 3; ++i) comps_[i] -= o.comps_[i];
  return *this;
}

VectorField& VectorField::operator*=(double c) {
  for (auto& comp : comps_) comp *= c;
  return *this;
}

VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator*(double c, VectorField a) { return a *= c; }

VectorField to_spectral(const VectorField& v) {
  return {to_spectral(v[0]), to_spectral(v[1]), to_spectral(v[2])};
}
VectorField to_physical(const VectorField& v) {
  return {to_physical(v[0]), to_physical(v[1]), to_physical(v[2])};
}
VectorField ensure_spectral(const VectorField& v) { return v.repr() == Repr::Spectral ? v : to_spectral(v); }
VectorField ensure_physical(const VectorField& v) { return v.repr() == Repr::Physical ? v : to_physical(v); }

double l2_norm_sq(const VectorField& v) { return l2_norm_sq(v[0]) + l2_norm_sq(v[1]) + l2_norm_sq(v[2]); }
double l2_norm(const VectorField& v) { return std::sqrt(l2_norm_sq(v)); }

double max_abs(const VectorField& v) {
  const VectorField p = ensure_physical(v);
  auto a = p[0].values();
  auto b = p[1].values();
  auto c = p[2].values();
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, a[i] * a[i] + b[i] * b[i] + c[i] * c[i]);
  return std::sqrt(m);
}

double inner(const VectorField& a, const VectorField& b) {
  return inner(a[0], b[0]) + inner(a[1], b[1]) + inner(a[2], b[2]);
}

}  // namespace mns
