#pragma once

// Monitors and experiment drivers built on top of the solver, the
// Littlewood–Paley kit and the lattice localization.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mns/localize.hpp"
#include "mns/lp.hpp"
#include "mns/solver.hpp"

namespace mns::diag {

/// ||grad u||^2, with the same differentiation wavenumbers as the solver.
double grad_l2_sq(const VectorField& v);

/// ||v^||_{L^1} = (2 pi / n^2) sum_k |V(k)|, |.| the Euclidean length over components.
double fourier_l1(const VectorField& v);
double fourier_l1(const ScalarField& f);

/// Real zero-mean field with complex normal coefficients under the envelope
/// |k|^a exp(-|k|^2 / k0^2) on modes kept by the 2/3 rule, normalized to unit
/// L^2 norm. Each wavevector has its own stream, so the field does not depend
/// on the grid size beyond truncation.
ScalarField random_scalar(const Grid& grid, std::uint64_t seed, double a, double k0);

// ---------------------------------------------------------------------------
// Energy ledger

struct EnergyRow {
  double t;
  double u2, E2, B2;  // squared L^2 norms
  double gradu2, j2;
  double cum_diss;       // 2 int (||grad u||^2 + ||j||^2), trapezoid
  double defect;         // (total(t) + cum_diss - total(0)) / total(0); absolute when total(0) = 0
  double orthogonality;  // relative residual of j.(u x B) + (j x B).u
  double div_u, div_B;   // relative ||div2||
};

/// Streams states sampled every dt and tabulates the energy equality.
class EnergyMonitor {
 public:
  explicit EnergyMonitor(double dt, bool dealias = true);
  void observe(const solver::State& s);
  const std::vector<EnergyRow>& rows() const noexcept { return rows_; }
  double max_abs_defect() const;
  double max_orthogonality() const;
  double max_divergence() const;

 private:
  double dt_;
  bool dealias_;
  double last_rate_ = 0.0;
  std::vector<EnergyRow> rows_;
};

void write_energy_csv(std::ostream& os, std::span<const EnergyRow> rows);

// ---------------------------------------------------------------------------
// Borderline quantities

struct BorderlineRow {
  double t;
  double eb_cl_l2log;    // ||(E, B)|| in L~^inf_t L^2_log
  double int_j2_l2log;   // int ||j||^2_{L^2_log}
  double int_u2_linf;    // int ||u||^2_{L^inf}, grid max
  double int_uhat2_l1;   // int ||u^||^2_{L^1}
  double morrey_sup;     // sup_j 2^{2j} int sup_k ||sqrt(phi_{j,k}) u||^2
  double u_cl_b022;      // ||u|| in L~^inf_t B^0_{2,2}
};

/// Needs a homogeneous bank on the state's grid.
class BorderlineMonitor {
 public:
  BorderlineMonitor(const lp::FilterBank& bank, std::span<const loc::PartitionOfUnity> scales, double dt,
                    bool dealias = true);
  void observe(const solver::State& s);
  const std::vector<BorderlineRow>& rows() const noexcept { return rows_; }

 private:
  const lp::FilterBank* bank_;
  double dt_;
  bool dealias_;
  lp::CheminLerner eb_, u_;
  loc::MorreyAccumulator morrey_;
  double last_j_ = 0, last_u_ = 0, last_uhat_ = 0;
  double int_j_ = 0, int_u_ = 0, int_uhat_ = 0;
  std::vector<BorderlineRow> rows_;
};

void write_borderline_csv(std::ostream& os, std::span<const BorderlineRow> rows);

// ---------------------------------------------------------------------------
// Heat equation

struct HeatReport {
  std::vector<double> t;
  std::vector<double> defect;  // ||f(t)||^2 + 2 int ||grad f||^2 - ||f0||^2, relative
  double max_defect = 0.0;
  loc::MorreyReport sum, sup;
  std::vector<double> sum_expected;  // 2^{2j} times the trapezoid of ||f||^2 on the same samples
  double sum_identity_defect = 0.0;  // max relative gap between sum.per_scale and sum_expected
};

/// Evolves f_t = Delta f exactly per mode on samples t_i = i T / (samples - 1).
/// The dissipation integral is taken in closed form per mode.
HeatReport heat_experiment(const VectorField& f0, double T, std::size_t samples,
                           std::span<const loc::PartitionOfUnity> scales);

/// e^{t Delta} f, exact per mode.
VectorField heat_evolve(const VectorField& f, double t);
ScalarField heat_evolve(const ScalarField& f, double t);

// ---------------------------------------------------------------------------
// Trilinear estimate

/// int_0^t int f g h against the three-term bound
///   ||f||_{L2L2} ||grad g||_{L2L2} ||h||_{LinfL2}
/// + 2N sup_k ||S_k g||_{L2Linf} ||f||_{L2L2} ||h||_{LinfL2}
/// + sup_k ||S_k g||_{L2Linf} ||h||_{L~inf B^0_{2,2}} (sum_{|k|>=N} ||Delta_k f||^2_{L2L2})^{1/2}.
struct TrilinearTerms {
  double lhs = 0, t1 = 0, t2 = 0, t3 = 0;
  double rhs() const { return t1 + t2 + t3; }
  /// |lhs| / rhs, or 0 when both vanish.
  double ratio() const;
  bool vacuous() const { return rhs() == 0.0; }
};

/// Samples are uniformly spaced by dt; the bank must be homogeneous.
TrilinearTerms trilinear_terms(const lp::FilterBank& bank, std::span<const ScalarField> f,
                               std::span<const ScalarField> g, std::span<const ScalarField> h, double dt, int N);

struct TrilinearParams {
  std::size_t trials = 100;
  int N = 2;
  double T = 1.0;
  std::size_t samples = 11;
  std::uint64_t seed = 1;
};

struct TrilinearReport {
  std::vector<TrilinearTerms> trials;
  double max_ratio = 0.0;
  std::size_t vacuous = 0;
  /// Terms two and three share the factor sup_k ||S_k g||_{L2Linf} and differ
  /// only by 2N against the high-frequency tail of f.
  std::string note;
};

/// Random heat-evolved triples with a resolution-independent spectrum.
TrilinearReport trilinear_check(const lp::FilterBank& bank, const TrilinearParams& p);

void write_trilinear_csv(std::ostream& os, const TrilinearReport& r);

// ---------------------------------------------------------------------------
// Twin runs and perturbations

/// Runs cfg twice from init and compares every sampled state bit for bit.
bool twin_runs_identical(const solver::State& init, const solver::SolverConfig& cfg);

struct UniquenessReport {
  double delta = 0.0;
  std::vector<double> t;
  std::vector<double> D;       // perturbation size delta
  std::vector<double> D_half;  // perturbation size delta / 2
  std::vector<double> R;       // int (||(B, j)||^2_{L2log} + ||u||^2_inf + ||grad u~||^2)
  double c_fit = 0.0;          // least squares of log(D / D0) = c R through the origin
  double max_envelope_ratio = 0.0;  // max D / (D0 exp(c_fit R))
  double max_halving_defect = 0.0;  // max | sqrt(D / D_half) / 2 - 1 |
};

/// D(t) = ||du||^2 + ||dE||^2_{L2log} + ||dB||^2_{L2log} between the run from
/// init and the runs from init + delta * direction and init + delta/2 * direction.
/// The bank must be homogeneous.
UniquenessReport uniqueness_experiment(const solver::State& init, const solver::State& direction, double delta,
                                       const solver::SolverConfig& cfg, const lp::FilterBank& bank);

void write_uniqueness_csv(std::ostream& os, const UniquenessReport& r);

// ---------------------------------------------------------------------------
// Mollified approximations

struct GalerkinPair {
  int level_a, level_b;
  double du_sup;  // sup_t ||u^a - u^b||
  double deb_cl;  // ||(E^a - E^b, B^a - B^b)|| in L~^inf_t B^0_{2,2}
  double combined() const { return du_sup + deb_cl; }
};

struct GalerkinReport {
  std::vector<GalerkinPair> consecutive;  // (N_i, N_{i+1})
  std::vector<GalerkinPair> skip;         // (N_i, N_{i+2})
  bool strictly_decreasing = false;
  bool triangle_ok = false;
};

/// Runs the system from S_{N+1} applied to init for every level (inhomogeneous
/// bank) in lockstep. Throws ConfigError for fewer than 3 levels or levels not
/// strictly increasing.
GalerkinReport galerkin_experiment(const solver::State& init, const solver::SolverConfig& cfg,
                                   std::span<const int> levels);

void write_galerkin_csv(std::ostream& os, const GalerkinReport& r);

// ---------------------------------------------------------------------------
// Heat semigroup characterization of negative Fourier–Herz norms

/// ||e^{-t|xi|^2} f^||_{L^p} on the wavenumber lattice.
double heat_fourier_lp(const ScalarField& f, double t, double p);

struct HerzHeatReport {
  double s, p, r;
  double lhs, rhs, ratio;
  double t_min, t_max;
  std::size_t nodes;
};

/// lhs = || t^s ||e^{-t|xi|^2} f^||_{L^p} ||_{L^r(dt/t)} by the trapezoid rule in
/// log t, nodes_per_decade nodes per decade over [1e-4 / kmax^2, 40 / kmin^2];
/// rhs = ||f|| in homogeneous FB^{-2s}_{p,r}. Throws OutOfRange when f has a
/// mean, s <= 0, or f reaches outside the quadrature range.
HerzHeatReport fourier_herz_heat_check(const lp::FilterBank& bank, const ScalarField& f, double s, double p,
                                       double r, int nodes_per_decade = 64);

/// sup over sampled t in one period [1, 4) of sum_{|j| <= J} t^s 2^{2js} e^{-c t 2^{2j}}.
double dyadic_heat_sum(double s, double c, int J, std::size_t samples = 512);

struct HerzBand {
  std::vector<HerzHeatReport> rows;  // fields x {(1/2,1,2), (1,2,2), (1/2,2,inf)}
  double lo = 0.0, hi = 0.0;         // extreme ratios
  /// Smallest C with every ratio in [1/C, C].
  double constant() const;
};

/// Ratios for random_scalar fields with per-field random a in [0, 2] and
/// k0 in [2, 2 + n/8] lattice units.
HerzBand herz_band(const lp::FilterBank& bank, std::size_t fields, std::uint64_t seed);

void write_herz_csv(std::ostream& os, std::span<const HerzHeatReport> rows);

}  // namespace mns::diag
