#pragma once

// Time integration of the Maxwell-Navier-Stokes system with nu = sigma = 1:
//
//   u_t + (u.grad)u - Delta u + grad pi = j x B
//   E_t - curl B = -j
//   B_t + curl E = 0
//   j = E + u x B,  div u = div B = 0
//
// The linear part (viscosity, curl coupling and the -E damping inside j) is
// propagated exactly per Fourier mode; the remaining products are explicit.

#include <array>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <vector>

#include "mns/field.hpp"
#include "mns/lp.hpp"

namespace mns::solver {

/// (u, E, B) at time t; the solver keeps all three spectral.
struct State {
  double t = 0.0;
  VectorField u, E, B;
};

State zero_state(const Grid& grid);
State to_spectral(const State& s);

/// The step produced non-finite values or exceeded the growth threshold.
class BlowUpError : public Error {
 public:
  BlowUpError(const std::string& what, double t, std::filesystem::path snapshot)
      : Error(what), t_(t), snapshot_(std::move(snapshot)) {}
  double time() const noexcept { return t_; }
  /// Snapshot of the last finite state (empty if it could not be written).
  const std::filesystem::path& snapshot() const noexcept { return snapshot_; }

 private:
  double t_;
  std::filesystem::path snapshot_;
};

struct SolverConfig {
  double dt = 1e-3;
  double T = 1.0;
  bool dealias = true;
  std::optional<int> mollify;
  std::size_t output_every = 1;
  /// Hold u fixed and integrate only the (E, B) equations.
  bool freeze_velocity = false;
  /// Abort once max |field| exceeds this multiple of its initial value.
  double blowup_factor = 1e6;
  std::filesystem::path blowup_dir = ".";

  void validate() const;
  std::size_t steps() const;
};

/// Exact solution operator of the linear part over one step dt.
///
/// u: factor exp(-|k|^2 dt). (E, B): exp(dt A_k) with
/// A_k(E, B) = (i k x B - E, -i k x E). In the variables (E, i B) the matrix is
/// real, so one real 6x6 exponential per mode is stored.
class LinearPropagator {
 public:
  LinearPropagator(const Grid& grid, double dt);

  const Grid& grid() const noexcept { return grid_; }
  double dt() const noexcept { return dt_; }

  VectorField apply_u(const VectorField& u) const;
  std::pair<VectorField, VectorField> apply_em(const VectorField& E, const VectorField& B) const;
  /// Propagates all three fields and advances t by dt.
  State apply(const State& s) const;

  double u_factor(std::size_t idx) const { return ufac_[idx]; }
  /// Row-major real 6x6 exponential acting on (E, i B) at flat index idx.
  std::array<double, 36> em_matrix(std::size_t idx) const;

 private:
  Grid grid_;
  double dt_;
  std::vector<double> ufac_;
  std::vector<double> em_;  // 36 doubles per mode
};

LinearPropagator build_propagator(const Grid& grid, double dt);

/// Real 6x6 matrix exponential by scaling and squaring with a Taylor kernel.
std::array<double, 36> expm6(const std::array<double, 36>& a);

/// j = E + u x B, dealiased when requested (spectral result).
VectorField ohm_current(const VectorField& u, const VectorField& E, const VectorField& B, bool dealias = true);
VectorField ohm_current(const State& s, bool dealias = true);

/// Explicit part of the right-hand side, spectral:
/// du = P[-(u.grad)u + j x B], dE = -(u x B), dB = 0.
struct Tendencies {
  VectorField du, dE, dB;
};

Tendencies tendencies(const State& s, bool dealias = true, bool freeze_velocity = false);

/// One integrating-factor Heun step:
///   y* = L(y + dt N(y)),  y' = L(y + dt/2 N(y)) + dt/2 N(y*).
State step(const State& s, const LinearPropagator& prop, const SolverConfig& cfg);

/// S_{N+1} applied to every field (inhomogeneous bank), then u and B
/// re-projected onto divergence-free fields.
State mollify_initial(const State& s, const lp::FilterBank& bank, int N);

/// int j.(u x B) and int (j x B).u; relative = |sum| / int |j.(u x B)|.
struct Orthogonality {
  double current_work, lorentz_work, relative;
};

Orthogonality orthogonality(const VectorField& u, const VectorField& E, const VectorField& B, bool dealias = true);

/// ||div u|| / ||u|| (zero for u = 0).
double relative_divergence(const VectorField& v);

/// Called with the state at step 0, every output_every steps, and at the end.
using Observer = std::function<void(const State&, std::size_t step)>;

/// Integrates from init to T. Throws BlowUpError on a numeric failure; the
/// last finite state is written to blowup_dir when possible.
State run(const State& init, const SolverConfig& cfg, const Observer& observe = {});

}  // namespace mns::solver
