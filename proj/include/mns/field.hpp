#pragma once

#include <array>
#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "mns/error.hpp"
#include "mns/grid.hpp"

namespace mns {

using cplx = std::complex<double>;

enum class Repr { Physical, Spectral };

/// A real scalar field on a Grid, held either as physical samples or as its
/// discrete Fourier coefficients. Values are immutable once built; every
/// operation returns a new field.
class ScalarField {
 public:
  static ScalarField zeros(const Grid& grid, Repr repr);
  static ScalarField physical(const Grid& grid, std::vector<double> values);
  static ScalarField spectral(const Grid& grid, std::vector<cplx> coeffs);

  /// Samples fn(x1, x2) at the grid points.
  template <class Fn>
  static ScalarField sample(const Grid& grid, Fn&& fn) {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.n(); ++i)
      for (std::size_t j = 0; j < grid.n(); ++j) v[i * grid.n() + j] = fn(grid.x(i), grid.x(j));
    return physical(grid, std::move(v));
  }

  const Grid& grid() const noexcept { return grid_; }
  Repr repr() const noexcept { return repr_; }
  bool is_physical() const noexcept { return repr_ == Repr::Physical; }
  bool is_spectral() const noexcept { return repr_ == Repr::Spectral; }

  /// Physical samples; throws RepresentationError on a spectral field.
  std::span<const double> values() const;
  /// Spectral coefficients; throws RepresentationError on a physical field.
  std::span<const cplx> coeffs() const;

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double c);

 private:
  ScalarField(Grid grid, Repr repr) : grid_(std::move(grid)), repr_(repr) {}

  Grid grid_;
  Repr repr_;
  std::vector<double> phys_;
  std::vector<cplx> spec_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double c, ScalarField a);

/// Physical -> spectral. Throws on a spectral input or non-finite samples.
ScalarField to_spectral(const ScalarField& f);
/// Spectral -> physical (real part of the inverse transform).
ScalarField to_physical(const ScalarField& f);
/// Returns f itself when already in the requested representation.
ScalarField ensure_spectral(const ScalarField& f);
ScalarField ensure_physical(const ScalarField& f);

/// ||f||^2 on the torus, computed in whichever representation f is held.
double l2_norm_sq(const ScalarField& f);
double l2_norm(const ScalarField& f);
/// Grid-quadrature L^p norm (uniform weights); p = infinity gives the max.
double lp_norm(const ScalarField& f, double p);
double max_abs(const ScalarField& f);
double inner(const ScalarField& f, const ScalarField& g);
double mean(const ScalarField& f);
/// Largest |F(k) - conj(F(-k))| relative to max |F|.
double hermitian_defect(const ScalarField& f);

void require_same_grid(const ScalarField& a, const ScalarField& b);

/// Three components (V1, V2, V3) of a field of two variables.
class VectorField {
 public:
  VectorField(ScalarField c1, ScalarField c2, ScalarField c3);
  static VectorField zeros(const Grid& grid, Repr repr);

  const ScalarField& operator[](std::size_t i) const { return comps_[i]; }
  const Grid& grid() const noexcept { return comps_[0].grid(); }
  Repr repr() const noexcept { return comps_[0].repr(); }
  const std::array<ScalarField, 3>& components() const noexcept { return comps_; }

  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  VectorField& operator*=(double c);

 private:
  std::array<ScalarField, 3> comps_;
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(double c, VectorField a);

VectorField to_spectral(const VectorField& v);
VectorField to_physical(const VectorField& v);
VectorField ensure_spectral(const VectorField& v);
VectorField ensure_physical(const VectorField& v);

double l2_norm_sq(const VectorField& v);
double l2_norm(const VectorField& v);
/// Max over grid points of the Euclidean length |V(x)|.
double max_abs(const VectorField& v);
double inner(const VectorField& a, const VectorField& b);

}  // namespace mns
