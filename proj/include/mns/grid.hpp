#pragma once

#include <complex>
#include <cstddef>
#include <memory>

namespace mns {

namespace detail {
struct GridImpl;
}

/// Uniform periodic sampling of the square torus [0, L)^2 with n points per axis.
///
/// Flat index layout is row-major: idx = i1 * n + i2, where i1 runs along x1.
/// Wavenumbers follow the usual FFT ordering: position i holds the signed index
/// i for i < n/2 and i - n otherwise, scaled by 2*pi/L.
///
/// Fourier convention: the forward transform uses the kernel exp(-i k.x) with no
/// normalization; the inverse carries the 1/n^2 factor. Grids compare equal when
/// n and L agree; copies share the FFT plans.
class Grid {
 public:
  Grid(std::size_t n, double length);

  std::size_t n() const noexcept;
  double length() const noexcept;
  std::size_t size() const noexcept { return n() * n(); }
  double dx() const noexcept { return length() / static_cast<double>(n()); }
  double cell_area() const noexcept { return dx() * dx(); }
  /// Spacing of the wavenumber lattice, 2*pi/L.
  double dk() const noexcept;

  /// Signed integer mode index at array position i.
  int mode(std::size_t i) const noexcept;
  /// Wavenumber at array position i.
  double k(std::size_t i) const noexcept;
  /// Wavenumber used by differential operators; zero on the Nyquist line so
  /// that odd derivatives of real fields stay real.
  double kd(std::size_t i) const noexcept;
  /// |k| of the flat spectral index.
  double kmag(std::size_t idx) const noexcept;
  /// Largest retained |k_i| under the 2/3 rule, (2*pi/L) * n/3.
  double dealias_cutoff() const noexcept;
  /// Physical coordinate of position i along either axis.
  double x(std::size_t i) const noexcept { return static_cast<double>(i) * dx(); }

  void forward(const std::complex<double>* in, std::complex<double>* out) const;
  /// Unnormalized backward transform; callers divide by n^2.
  void backward(const std::complex<double>* in, std::complex<double>* out) const;

  friend bool operator==(const Grid& a, const Grid& b) noexcept;

 private:
  std::shared_ptr<const detail::GridImpl> impl_;
};

inline bool operator!=(const Grid& a, const Grid& b) noexcept { return !(a == b); }

}  // namespace mns
