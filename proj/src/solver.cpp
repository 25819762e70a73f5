#include "mns/solver.hpp"

#include <algorithm>
#include <cmath>

#include "mns/ops.hpp"
#include "mns/snapshot.hpp"

namespace mns::solver {

State zero_state(const Grid& grid) {
  return {0.0, VectorField::zeros(grid, Repr::Spectral), VectorField::zeros(grid, Repr::Spectral),
          VectorField::zeros(grid, Repr::Spectral)};
}

State to_spectral(const State& s) {
  return {s.t, ensure_spectral(s.u), ensure_spectral(s.E), ensure_spectral(s.B)};
}

void SolverConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be positive");
  if (!(T >= dt)) throw ConfigError("T must be at least dt");
  if (output_every == 0) throw ConfigError("output cadence must be positive");
  if (steps() % output_every != 0) throw ConfigError("T / dt must be a multiple of the output cadence");
  if (!(blowup_factor > 1.0)) throw ConfigError("blow-up factor must exceed 1");
}

std::size_t SolverConfig::steps() const { return static_cast<std::size_t>(std::llround(T / dt)); }

std::array<double, 36> expm6(const std::array<double, 36>& a) {
  using M = std::array<double, 36>;
  auto mul = [](const M& x, const M& y) {
    M z{};
    for (int i = 0; i < 6; ++i)
      for (int k = 0; k < 6; ++k) {
        const double v = x[i * 6 + k];
        if (v == 0.0) continue;
        for (int j = 0; j < 6; ++j) z[i * 6 + j] += v * y[k * 6 + j];
      }
    return z;
  };
  double norm = 0.0;
  for (int i = 0; i < 6; ++i) {
    double r = 0.0;
    for (int j = 0; j < 6; ++j) r += std::abs(a[i * 6 + j]);
    norm = std::max(norm, r);
  }
  int s = 0;
  if (norm > 0.25) s = static_cast<int>(std::ceil(std::log2(norm / 0.25)));
  M x = a;
  const double scale = std::ldexp(1.0, -s);
  for (double& v : x) v *= scale;
  M result{}, term{};
  for (int i = 0; i < 6; ++i) result[i * 6 + i] = term[i * 6 + i] = 1.0;
  for (int k = 1; k <= 20; ++k) {
    term = mul(term, x);
    for (double& v : term) v /= k;
    double tmax = 0.0;
    for (int i = 0; i < 36; ++i) {
      result[i] += term[i];
      tmax = std::max(tmax, std::abs(term[i]));
    }
    if (tmax < 1e-18) break;
  }
  for (int i = 0; i < s; ++i) result = mul(result, result);
  return result;
}

LinearPropagator::LinearPropagator(const Grid& grid, double dt) : grid_(grid), dt_(dt) {
  if (!(dt >= 0.0)) throw Error("propagator step must be non-negative");
  const std::size_t n = grid.n();
  ufac_.resize(grid.size());
  em_.resize(36 * grid.size());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t idx = i * n + j;
      const double k1 = grid.kd(i), k2 = grid.kd(j);
      ufac_[idx] = std::exp(-(k1 * k1 + k2 * k2) * dt);
      // Generator on (E, iB): d/dt E = -E + K (iB), d/dt (iB) = K E, with K v = k x v.
      std::array<double, 36> a{};
      const double K[3][3] = {{0, 0, k2}, {0, 0, -k1}, {-k2, k1, 0}};
      for (int r = 0; r < 3; ++r) {
        a[r * 6 + r] = -dt;
        for (int c = 0; c < 3; ++c) {
          a[r * 6 + 3 + c] = dt * K[r][c];
          a[(3 + r) * 6 + c] = dt * K[r][c];
        }
      }
      const auto m = expm6(a);
      std::copy(m.begin(), m.end(), em_.begin() + static_cast<std::ptrdiff_t>(36 * idx));
    }
}

std::array<double, 36> LinearPropagator::em_matrix(std::size_t idx) const {
  std::array<double, 36> m;
  std::copy_n(em_.begin() + static_cast<std::ptrdiff_t>(36 * idx), 36, m.begin());
  return m;
}

VectorField LinearPropagator::apply_u(const VectorField& u) const {
  const VectorField s = ensure_spectral(u);
  if (s.grid() != grid_) throw GridMismatch();
  std::array<std::vector<cplx>, 3> out;
  for (std::size_t c = 0; c < 3; ++c) {
    auto in = s[c].coeffs();
    out[c].resize(in.size());
    for (std::size_t i = 0; i < in.size(); ++i) out[c][i] = ufac_[i] * in[i];
  }
  return {ScalarField::spectral(grid_, std::move(out[0])), ScalarField::spectral(grid_, std::move(out[1])),
          ScalarField::spectral(grid_, std::move(out[2]))};
}

std::pair<VectorField, VectorField> LinearPropagator::apply_em(const VectorField& E, const VectorField& B) const {
  const VectorField es = ensure_spectral(E), bs = ensure_spectral(B);
  if (es.grid() != grid_ || bs.grid() != grid_) throw GridMismatch();
  const cplx I(0.0, 1.0);
  std::array<std::vector<cplx>, 6> out;
  for (auto& o : out) o.resize(grid_.size());
  std::array<std::span<const cplx>, 6> in = {es[0].coeffs(), es[1].coeffs(), es[2].coeffs(),
                                             bs[0].coeffs(), bs[1].coeffs(), bs[2].coeffs()};
  for (std::size_t idx = 0; idx < grid_.size(); ++idx) {
    const double* m = em_.data() + 36 * idx;
    cplx y[6] = {in[0][idx], in[1][idx], in[2][idx], I * in[3][idx], I * in[4][idx], I * in[5][idx]};
    for (int r = 0; r < 6; ++r) {
      cplx acc{};
      for (int c = 0; c < 6; ++c) acc += m[r * 6 + c] * y[c];
      out[static_cast<std::size_t>(r)][idx] = r < 3 ? acc : -I * acc;
    }
  }
  auto mk = [&](int c) { return ScalarField::spectral(grid_, std::move(out[static_cast<std::size_t>(c)])); };
  VectorField e{mk(0), mk(1), mk(2)};
  VectorField b{mk(3), mk(4), mk(5)};
  return {std::move(e), std::move(b)};
}

State LinearPropagator::apply(const State& s) const {
  auto [e, b] = apply_em(s.E, s.B);
  return {s.t + dt_, apply_u(s.u), std::move(e), std::move(b)};
}

LinearPropagator build_propagator(const Grid& grid, double dt) {
  if (!(dt > 0.0)) throw Error("propagator step must be positive");
  return LinearPropagator(grid, dt);
}

namespace {
VectorField maybe_dealias(const VectorField& v, bool on) { return on ? dealias(v) : v; }
}  // namespace

VectorField ohm_current(const VectorField& u, const VectorField& E, const VectorField& B, bool dealias_on) {
  const VectorField uxb = maybe_dealias(to_spectral(cross(ensure_physical(u), ensure_physical(B))), dealias_on);
  return ensure_spectral(E) + uxb;
}

VectorField ohm_current(const State& s, bool dealias_on) { return ohm_current(s.u, s.E, s.B, dealias_on); }

Tendencies tendencies(const State& s, bool dealias_on, bool freeze_velocity) {
  const Grid& g = s.u.grid();
  const VectorField up = ensure_physical(s.u);
  const VectorField bp = ensure_physical(s.B);
  const VectorField uxb = maybe_dealias(to_spectral(cross(up, bp)), dealias_on);
  Tendencies out{VectorField::zeros(g, Repr::Spectral), -1.0 * uxb, VectorField::zeros(g, Repr::Spectral)};
  if (freeze_velocity) return out;
  const VectorField jp = to_physical(ensure_spectral(s.E) + uxb);
  const VectorField lorentz = maybe_dealias(to_spectral(cross(jp, bp)), dealias_on);
  const VectorField adv = maybe_dealias(to_spectral(advect(up, s.u)), dealias_on);
  out.du = leray_project(lorentz - adv);
  return out;
}

namespace {
State axpy(const State& y, double h, const Tendencies& n) {
  return {y.t, y.u + h * n.du, y.E + h * n.dE, y.B + h * n.dB};
}

// Cheap upper bound for max |f|: sum of |coefficients| / n^2.
double spectral_sup_bound(const VectorField& v) {
  double s = 0.0;
  for (const auto& c : v.components())
    for (auto z : c.coeffs()) s += std::abs(z);
  return s / static_cast<double>(v.grid().size());
}

double field_max(const State& s) {
  return std::max({max_abs(ensure_physical(s.u)), max_abs(ensure_physical(s.E)), max_abs(ensure_physical(s.B))});
}
}  // namespace

State step(const State& s, const LinearPropagator& prop, const SolverConfig& cfg) {
  const Tendencies n0 = tendencies(s, cfg.dealias, cfg.freeze_velocity);
  const State pred = prop.apply(axpy(s, cfg.dt, n0));
  const Tendencies n1 = tendencies(pred, cfg.dealias, cfg.freeze_velocity);
  State next = prop.apply(axpy(s, 0.5 * cfg.dt, n0));
  next = axpy(next, 0.5 * cfg.dt, n1);
  if (cfg.freeze_velocity) next.u = s.u;
  next.t = s.t + cfg.dt;
  return next;
}

State mollify_initial(const State& s, const lp::FilterBank& bank, int N) {
  if (N + 1 <= bank.j_low()) throw OutOfRange("mollification level below the realized block range");
  auto cut = [&](const VectorField& v) {
    const VectorField sp = ensure_spectral(v);
    return VectorField{lp::low_pass(bank, sp[0], N + 1), lp::low_pass(bank, sp[1], N + 1),
                       lp::low_pass(bank, sp[2], N + 1)};
  };
  return {s.t, leray_project(cut(s.u)), cut(s.E), leray_project(cut(s.B))};
}

Orthogonality orthogonality(const VectorField& u, const VectorField& E, const VectorField& B, bool dealias_on) {
  const VectorField up = ensure_physical(u), bp = ensure_physical(B);
  const VectorField jp = to_physical(ohm_current(u, E, B, dealias_on));
  const VectorField uxb = cross(up, bp);
  const VectorField jxb = cross(jp, bp);
  const Grid& g = u.grid();
  double w1 = 0.0, w2 = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    double a = 0.0, b = 0.0;
    for (std::size_t c = 0; c < 3; ++c) {
      a += jp[c].values()[i] * uxb[c].values()[i];
      b += jxb[c].values()[i] * up[c].values()[i];
    }
    w1 += a;
    w2 += b;
    scale += std::abs(a);
  }
  const double da = g.cell_area();
  Orthogonality o{w1 * da, w2 * da, 0.0};
  o.relative = scale > 0.0 ? std::abs(w1 + w2) / scale : 0.0;
  return o;
}

double relative_divergence(const VectorField& v) {
  const double nv = l2_norm(v);
  return nv > 0.0 ? l2_norm(div2(v)) / nv : 0.0;
}

State run(const State& init, const SolverConfig& cfg, const Observer& observe) {
  cfg.validate();
  State s = to_spectral(init);
  const LinearPropagator prop(s.u.grid(), cfg.dt);
  const double m0 = field_max(s);
  const double limit = cfg.blowup_factor * (m0 > 0.0 ? m0 : 1.0);
  const std::size_t nsteps = cfg.steps();
  if (observe) observe(s, 0);
  for (std::size_t k = 1; k <= nsteps; ++k) {
    State next = s;
    std::string reason;
    try {
      next = step(s, prop, cfg);
      const double bound =
          std::max({spectral_sup_bound(next.u), spectral_sup_bound(next.E), spectral_sup_bound(next.B)});
      if (!std::isfinite(bound))
        reason = "non-finite values";
      else if (bound > limit && field_max(next) > limit)
        reason = "field maximum exceeded the blow-up threshold";
    } catch (const NonFiniteError&) {
      reason = "non-finite values";
    }
    if (!reason.empty()) {
      std::filesystem::path snap;
      try {
        std::filesystem::create_directories(cfg.blowup_dir);
        snap = cfg.blowup_dir / "blowup.mns2";
        write_snapshot(snap, s.t, to_physical(s.u), to_physical(s.E), to_physical(s.B));
      } catch (const std::exception&) {
        snap.clear();
      }
      throw BlowUpError(reason + " at step " + std::to_string(k), s.t + cfg.dt, snap);
    }
    s = std::move(next);
    if (observe && (k % cfg.output_every == 0 || k == nsteps)) observe(s, k);
  }
  return s;
}

}  // namespace mns::solver
