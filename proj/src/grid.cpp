#include "mns/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <vector>

#include "mns/error.hpp"

namespace mns {

namespace {
// FFTW planning is not thread-safe; execution is.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

namespace detail {

struct GridImpl {
  std::size_t n;
  double length;
  std::vector<int> modes;
  std::vector<double> k;
  std::vector<double> kd;
  std::vector<double> kmag;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;

  GridImpl(std::size_t n_, double length_) : n(n_), length(length_) {
    const double dk = 2.0 * std::numbers::pi / length;
    modes.resize(n);
    k.resize(n);
    kd.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const int m = i < n / 2 ? static_cast<int>(i) : static_cast<int>(i) - static_cast<int>(n);
      modes[i] = m;
      k[i] = dk * m;
      kd[i] = (i == n / 2) ? 0.0 : k[i];
    }
    kmag.resize(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) kmag[i * n + j] = std::hypot(k[i], k[j]);

    std::vector<std::complex<double>> a(n * n), b(n * n);
    auto* pa = reinterpret_cast<fftw_complex*>(a.data());
    auto* pb = reinterpret_cast<fftw_complex*>(b.data());
    const int ni = static_cast<int>(n);
    std::lock_guard lock(plan_mutex());
    fwd = fftw_plan_dft_2d(ni, ni, pa, pb, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    bwd = fftw_plan_dft_2d(ni, ni, pa, pb, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  }

  ~GridImpl() {
    std::lock_guard lock(plan_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
  }

  GridImpl(const GridImpl&) = delete;
  GridImpl& operator=(const GridImpl&) = delete;
};

}  // namespace detail

Grid::Grid(std::size_t n, double length) {
  if (n < 8 || (n & (n - 1)) != 0) throw Error("grid size must be a power of two >= 8");
  if (!(length > 0.0) || !std::isfinite(length)) throw Error("grid period must be positive and finite");
  impl_ = std::make_shared<const detail::GridImpl>(n, length);
}

std::size_t Grid::n() const noexcept { return impl_->n; }
double Grid::length() const noexcept { return impl_->length; }
double Grid::dk() const noexcept { return 2.0 * std::numbers::pi / impl_->length; }
int Grid::mode(std::size_t i) const noexcept { return impl_->modes[i]; }
double Grid::k(std::size_t i) const noexcept { return impl_->k[i]; }
double Grid::kd(std::size_t i) const noexcept { return impl_->kd[i]; }
double Grid::kmag(std::size_t idx) const noexcept { return impl_->kmag[idx]; }
double Grid::dealias_cutoff() const noexcept { return dk() * static_cast<double>(n()) / 3.0; }

void Grid::forward(const std::complex<double>* in, std::complex<double>* out) const {
  fftw_execute_dft(impl_->fwd, reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

void Grid::backward(const std::complex<double>* in, std::complex<double>* out) const {
  fftw_execute_dft(impl_->bwd, reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

bool operator==(const Grid& a, const Grid& b) noexcept {
  return a.impl_ == b.impl_ || (a.n() == b.n() && a.length() == b.length());
}

}  // namespace mns
