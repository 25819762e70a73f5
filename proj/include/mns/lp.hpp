#pragma once

// Littlewood–Paley calculus realized exactly on the grid wavenumbers.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mns/field.hpp"

namespace mns::lp {

/// C-infinity step built from exp(-1/t): 0 for t <= 0, 1 for t >= 1.
double smooth_step(double t);
/// Radial low-pass profile: 1 on r <= 1, 0 on r >= 4/3.
double chi(double r);
/// Ring profile chi(r/2) - chi(r), supported in [1, 8/3].
double psi(double r);

/// Dyadic frequency masks on a grid.
///
/// Rings are indexed by j with mask psi(2^-j |k|) for j in [first_ring, j_max].
/// Everything below the first ring, including k = 0, is lumped into one lowest
/// block with index j_low = first_ring - 1 and mask chi(2^-first_ring |k|).
/// For a homogeneous bank the first ring is placed so that the lowest block
/// holds the mean mode only; an inhomogeneous bank uses first_ring = 0, so the
/// lowest block is chi(D). j_max is the smallest index whose ring reaches every
/// grid wavenumber. Masks are renormalized so that they sum to exactly one.
class FilterBank {
 public:
  FilterBank(const Grid& grid, bool homogeneous);

  const Grid& grid() const noexcept { return grid_; }
  bool homogeneous() const noexcept { return homogeneous_; }
  int j_low() const noexcept { return j_low_; }
  int first_ring() const noexcept { return j_low_ + 1; }
  int j_max() const noexcept { return j_max_; }
  std::size_t block_count() const noexcept { return masks_.size(); }
  /// All realized block indices in increasing order, starting at j_low.
  std::vector<int> indices() const;
  bool contains(int j) const noexcept { return j >= j_low_ && j <= j_max_; }

  std::span<const double> mask(int j) const;

 private:
  Grid grid_;
  bool homogeneous_;
  int j_low_ = 0;
  int j_max_ = 0;
  std::vector<std::vector<double>> masks_;
};

FilterBank build_filter_bank(const Grid& grid, bool homogeneous);

/// Delta_j f (spectral). Throws OutOfRange for j outside the realized range.
ScalarField block(const FilterBank& bank, const ScalarField& f, int j);
/// S_j f = sum of the blocks with index < j (spectral). Indices past the top
/// return f itself; indices at or below j_low throw OutOfRange.
ScalarField low_pass(const FilterBank& bank, const ScalarField& f, int j);
/// Every block of f, ordered as bank.indices().
std::vector<ScalarField> blocks(const FilterBank& bank, const ScalarField& f);
/// chi(|xi| / scale) applied to f, for a real (not necessarily dyadic) scale.
ScalarField low_pass_at_scale(const ScalarField& f, double scale);

/// ||Delta_j f||^2_{L^2} for every block, computed spectrally.
std::vector<double> block_l2_sq(const FilterBank& bank, const ScalarField& f);
/// Component sums of block_l2_sq.
std::vector<double> block_l2_sq(const FilterBank& bank, const VectorField& v);

enum class Family { Besov, FourierHerz, HlogSobolev };

/// Indices of a norm. p and q may be infinity; alpha is used by HlogSobolev.
struct NormSpec {
  Family family = Family::Besov;
  double s = 0.0;
  double sigma = 0.0;
  double alpha = 1.0;
  double p = 2.0;
  double q = 2.0;
  bool homogeneous = true;

  static NormSpec besov(double s, double p, double q, bool homogeneous = true);
  static NormSpec fourier_herz(double s, double p, double q, bool homogeneous = true);
  static NormSpec hlog(double s, double sigma, double alpha);
  static NormSpec l2log() { return hlog(0.0, 0.0, 1.0); }
  void validate() const;
};

/// l^q over j of 2^{js} ||Delta_j f||_{L^p}.
double besov_norm(const FilterBank& bank, const ScalarField& f, const NormSpec& spec);
/// l^q over j of 2^{js} ||(Delta_j f)^||_{L^p}, with the unitary Fourier
/// transform sampled on the wavenumber lattice (measure (2 pi / L)^2 per mode).
double fourier_herz_norm(const FilterBank& bank, const ScalarField& f, const NormSpec& spec);
/// (sum_{q<=0} 2^{2qs} ||Delta_q f||^2 + sum_{q>0} q^alpha 2^{2q sigma} ||Delta_q f||^2)^{1/2}
double hlog_norm(const FilterBank& bank, const ScalarField& f, double s, double sigma, double alpha);
double hlog_norm(const FilterBank& bank, const VectorField& v, double s, double sigma, double alpha);
double l2log_norm(const FilterBank& bank, const ScalarField& f);
double l2log_norm(const FilterBank& bank, const VectorField& v);
/// Weight applied to ||Delta_q f||^2 inside hlog_norm.
double hlog_weight(int q, double s, double sigma, double alpha);
/// Dispatches on spec.family.
double norm(const FilterBank& bank, const ScalarField& f, const NormSpec& spec);

/// Streaming Chemin–Lerner norm: the time norm (r = 2 by trapezoid, r = inf by
/// running max) is taken per block before the block sum. Supports the Besov
/// and HlogSobolev families; samples must be uniformly spaced by dt.
class CheminLerner {
 public:
  CheminLerner(const FilterBank& bank, NormSpec spec, double r, double dt);
  void add(const ScalarField& f);
  void add(const VectorField& v);
  /// Adds precomputed per-block squared norms (Besov p = 2 or HlogSobolev).
  void add_block_sq(std::span<const double> block_sq);
  std::size_t samples() const noexcept { return count_; }
  double value() const;

 private:
  const FilterBank* bank_;
  NormSpec spec_;
  double r_;
  double dt_;
  std::size_t count_ = 0;
  std::vector<double> acc_;   // per-block trapezoid sum of ||.||^2 or running max of ||.||
  std::vector<double> last_;  // previous sample, for the trapezoid rule
};

double chemin_lerner(const FilterBank& bank, std::span<const ScalarField> samples, const NormSpec& spec, double r,
                     double dt);

struct BonyPieces {
  ScalarField paraproduct_uv;  // T_u v = sum_j S_{j-1}u Delta_j v
  ScalarField paraproduct_vu;  // T_v u
  ScalarField remainder;       // R(u, v) = sum_j Delta_j u (Delta_{j-1} + Delta_j + Delta_{j+1}) v
};

/// Bony decomposition of u v; each piece is dealiased and spectral.
BonyPieces bony(const FilterBank& bank, const ScalarField& u, const ScalarField& v);

/// Empirical band of ||d^alpha Delta_q f||_{L^b} / (2^{q(k + 2(1/a - 1/b))} ||Delta_q f||_{L^a}).
struct BernsteinBand {
  double a = 2, b = 2;
  int order = 0;
  double min = 0, max = 0;
  std::vector<int> rings;
  std::vector<double> ring_min, ring_max;
};

struct BernsteinReport {
  std::vector<BernsteinBand> bands;  // (a,b) in {(2,2),(2,inf),(1,2)} x order {0,1}
  std::vector<int> rings;
  std::vector<double> grad_ratio_mean;  // mean ||grad Delta_q f|| / ||Delta_q f|| per ring
  const BernsteinBand& band(double a, double b, int order) const;
};

/// Random single-ring trials over every ring of the bank (trials >= 30).
BernsteinReport bernstein_ratios(const FilterBank& bank, int trials, std::uint64_t seed);

struct NormRow {
  std::string quantity;
  int index;
  double value;
};

/// CSV with header "quantity,index,value".
void write_norm_csv(std::ostream& os, std::span<const NormRow> rows);
/// Per-block rows of ||Delta_j f||_{L^2}.
std::vector<NormRow> block_norm_rows(const FilterBank& bank, const ScalarField& f, const std::string& quantity);

}  // namespace mns::lp
