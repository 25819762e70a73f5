#include "mns/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numbers>
#include <ostream>

#include "mns/io.hpp"
#include "mns/ops.hpp"
#include "mns/random.hpp"

namespace mns::diag {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double spectral_weight(const Grid& g) { return g.cell_area() / static_cast<double>(g.size()); }

double kd_sq(const Grid& g, std::size_t idx) {
  const double a = g.kd(idx / g.n()), b = g.kd(idx % g.n());
  return a * a + b * b;
}

std::vector<double> add_blocks(std::vector<double> a, const std::vector<double>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

std::vector<double> pair_blocks(const lp::FilterBank& bank, const VectorField& E, const VectorField& B) {
  return add_blocks(lp::block_l2_sq(bank, E), lp::block_l2_sq(bank, B));
}

double pair_l2log_sq(const lp::FilterBank& bank, const VectorField& E, const VectorField& B) {
  const double a = lp::l2log_norm(bank, E), b = lp::l2log_norm(bank, B);
  return a * a + b * b;
}

solver::State difference(const solver::State& a, const solver::State& b) {
  return {a.t, a.u - b.u, a.E - b.E, a.B - b.B};
}

void require_homogeneous(const lp::FilterBank& bank) {
  if (!bank.homogeneous()) throw Error("this diagnostic needs a homogeneous filter bank");
}

}  // namespace

double grad_l2_sq(const VectorField& v) {
  const Grid& g = v.grid();
  double s = 0.0;
  for (const auto& comp : v.components()) {
    const ScalarField c = ensure_spectral(comp);
    const auto co = c.coeffs();
    for (std::size_t i = 0; i < co.size(); ++i) s += kd_sq(g, i) * std::norm(co[i]);
  }
  return s * spectral_weight(g);
}

double fourier_l1(const VectorField& v) {
  const VectorField sp = ensure_spectral(v);
  const Grid& g = v.grid();
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    s += std::sqrt(std::norm(sp[0].coeffs()[i]) + std::norm(sp[1].coeffs()[i]) + std::norm(sp[2].coeffs()[i]));
  return 2.0 * std::numbers::pi * s / static_cast<double>(g.size());
}

double fourier_l1(const ScalarField& f) {
  const ScalarField sp = ensure_spectral(f);
  double s = 0.0;
  for (auto z : sp.coeffs()) s += std::abs(z);
  return 2.0 * std::numbers::pi * s / static_cast<double>(f.grid().size());
}

ScalarField random_scalar(const Grid& grid, std::uint64_t seed, double a, double k0) {
  const std::size_t n = grid.n();
  const long ln = static_cast<long>(n);
  std::vector<cplx> c(grid.size());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const long m1 = grid.mode(i), m2 = grid.mode(j);
      if (3 * std::labs(m1) > ln || 3 * std::labs(m2) > ln) continue;
      if (!(m1 > 0 || (m1 == 0 && m2 > 0))) continue;
      const double km = std::hypot(grid.k(i), grid.k(j));
      const double env = std::pow(km, a) * std::exp(-(km * km) / (k0 * k0));
      SplitMix64 rng(mix_key(seed, m1, m2, 17));
      const double re = rng.normal(), im = rng.normal();
      const cplx v = env * cplx(re, im);
      c[i * n + j] = v;
      c[((n - i) % n) * n + (n - j) % n] = std::conj(v);
    }
  ScalarField f = ScalarField::spectral(grid, std::move(c));
  const double nf = l2_norm(f);
  if (nf > 0.0) f *= 1.0 / nf;
  return f;
}

// ---------------------------------------------------------------------------

EnergyMonitor::EnergyMonitor(double dt, bool dealias) : dt_(dt), dealias_(dealias) {
  if (!(dt > 0.0)) throw Error("energy monitor needs a positive sample spacing");
}

void EnergyMonitor::observe(const solver::State& s) {
  EnergyRow r{};
  r.t = s.t;
  r.u2 = l2_norm_sq(s.u);
  r.E2 = l2_norm_sq(s.E);
  r.B2 = l2_norm_sq(s.B);
  r.gradu2 = grad_l2_sq(s.u);
  r.j2 = l2_norm_sq(solver::ohm_current(s, dealias_));
  const double rate = r.gradu2 + r.j2;
  r.cum_diss = rows_.empty() ? 0.0 : rows_.back().cum_diss + dt_ * (last_rate_ + rate);
  last_rate_ = rate;
  const double total = r.u2 + r.E2 + r.B2;
  const double total0 = rows_.empty() ? total : rows_.front().u2 + rows_.front().E2 + rows_.front().B2;
  const double gap = total + r.cum_diss - total0;
  r.defect = total0 > 0.0 ? gap / total0 : gap;
  r.orthogonality = solver::orthogonality(s.u, s.E, s.B, dealias_).relative;
  r.div_u = solver::relative_divergence(s.u);
  r.div_B = solver::relative_divergence(s.B);
  rows_.push_back(r);
}

double EnergyMonitor::max_abs_defect() const {
  double m = 0.0;
  for (const auto& r : rows_) m = std::max(m, std::abs(r.defect));
  return m;
}

double EnergyMonitor::max_orthogonality() const {
  double m = 0.0;
  for (const auto& r : rows_) m = std::max(m, r.orthogonality);
  return m;
}

double EnergyMonitor::max_divergence() const {
  double m = 0.0;
  for (const auto& r : rows_) m = std::max({m, r.div_u, r.div_B});
  return m;
}

void write_energy_csv(std::ostream& os, std::span<const EnergyRow> rows) {
  os << "t,u2,E2,B2,gradu2,j2,cum_diss,defect,orthogonality,div_u,div_B\n";
  for (const auto& r : rows) {
    os << format_double(r.t);
    for (double v : {r.u2, r.E2, r.B2, r.gradu2, r.j2, r.cum_diss, r.defect, r.orthogonality, r.div_u, r.div_B})
      os << ',' << format_double(v);
    os << '\n';
  }
}

// ---------------------------------------------------------------------------

BorderlineMonitor::BorderlineMonitor(const lp::FilterBank& bank, std::span<const loc::PartitionOfUnity> scales,
                                     double dt, bool dealias)
    : bank_(&bank),
      dt_(dt),
      dealias_(dealias),
      eb_(bank, lp::NormSpec::l2log(), kInf, dt),
      u_(bank, lp::NormSpec::besov(0.0, 2.0, 2.0), kInf, dt),
      morrey_(scales, loc::Aggregation::Sup, dt) {
  require_homogeneous(bank);
}

void BorderlineMonitor::observe(const solver::State& s) {
  const VectorField up = ensure_physical(s.u);
  eb_.add_block_sq(pair_blocks(*bank_, s.E, s.B));
  u_.add(s.u);
  morrey_.add(up);
  const double jl = lp::l2log_norm(*bank_, solver::ohm_current(s, dealias_));
  const double um = max_abs(up);
  const double uh = fourier_l1(s.u);
  const double j2 = jl * jl, u2 = um * um, h2 = uh * uh;
  if (!rows_.empty()) {
    int_j_ += 0.5 * dt_ * (last_j_ + j2);
    int_u_ += 0.5 * dt_ * (last_u_ + u2);
    int_uhat_ += 0.5 * dt_ * (last_uhat_ + h2);
  }
  last_j_ = j2;
  last_u_ = u2;
  last_uhat_ = h2;
  rows_.push_back({s.t, eb_.value(), int_j_, int_u_, int_uhat_, morrey_.overall(), u_.value()});
}

void write_borderline_csv(std::ostream& os, std::span<const BorderlineRow> rows) {
  os << "t,EB_cl_linf_l2log,int_j2_l2log,int_u2_linf,int_uhat2_l1,morrey_sup,u_cl_linf_b022\n";
  for (const auto& r : rows) {
    os << format_double(r.t);
    for (double v : {r.eb_cl_l2log, r.int_j2_l2log, r.int_u2_linf, r.int_uhat2_l1, r.morrey_sup, r.u_cl_b022})
      os << ',' << format_double(v);
    os << '\n';
  }
}

// ---------------------------------------------------------------------------

ScalarField heat_evolve(const ScalarField& f, double t) {
  const Grid& g = f.grid();
  return apply_multiplier(f, [&](std::size_t i) { return std::exp(-kd_sq(g, i) * t); });
}

VectorField heat_evolve(const VectorField& f, double t) {
  return {heat_evolve(f[0], t), heat_evolve(f[1], t), heat_evolve(f[2], t)};
}

HeatReport heat_experiment(const VectorField& f0, double T, std::size_t samples,
                           std::span<const loc::PartitionOfUnity> scales) {
  if (samples < 2) throw Error("heat experiment needs at least two samples");
  if (!(T > 0.0)) throw Error("heat experiment needs T > 0");
  const Grid& g = f0.grid();
  const VectorField f0s = ensure_spectral(f0);
  const double w = spectral_weight(g);
  const double e0 = l2_norm_sq(f0s);
  const double dt = T / static_cast<double>(samples - 1);
  loc::MorreyAccumulator sum(scales, loc::Aggregation::Sum, dt), sup(scales, loc::Aggregation::Sup, dt);
  HeatReport rep;
  double trap = 0.0, last = 0.0;
  for (std::size_t m = 0; m < samples; ++m) {
    const double t = static_cast<double>(m) * dt;
    const VectorField f = heat_evolve(f0s, t);
    double diss = 0.0;
    for (const auto& c : f0s.components()) {
      const auto co = c.coeffs();
      for (std::size_t i = 0; i < co.size(); ++i) diss -= std::norm(co[i]) * std::expm1(-2.0 * kd_sq(g, i) * t);
    }
    diss *= w;
    const double e = l2_norm_sq(f);
    const double gap = e + diss - e0;
    rep.t.push_back(t);
    rep.defect.push_back(e0 > 0.0 ? gap / e0 : gap);
    rep.max_defect = std::max(rep.max_defect, std::abs(rep.defect.back()));
    const VectorField fp = to_physical(f);
    sum.add(fp);
    sup.add(fp);
    if (m > 0) trap += 0.5 * dt * (last + e);
    last = e;
  }
  auto fill = [&](const loc::MorreyAccumulator& acc, loc::MorreyReport& out) {
    out.per_scale = acc.per_scale();
    out.overall = acc.overall();
    out.j.clear();
    for (const auto& p : scales) out.j.push_back(p.j());
  };
  fill(sum, rep.sum);
  fill(sup, rep.sup);
  for (std::size_t i = 0; i < scales.size(); ++i) {
    const double sc = scales[i].scale();
    rep.sum_expected.push_back(sc * sc * trap);
    const double ref = rep.sum_expected.back();
    const double gap = std::abs(rep.sum.per_scale[i] - ref);
    rep.sum_identity_defect = std::max(rep.sum_identity_defect, ref > 0.0 ? gap / ref : gap);
  }
  return rep;
}

// ---------------------------------------------------------------------------

double TrilinearTerms::ratio() const {
  const double r = rhs();
  return r > 0.0 ? std::abs(lhs) / r : 0.0;
}

TrilinearTerms trilinear_terms(const lp::FilterBank& bank, std::span<const ScalarField> f,
                               std::span<const ScalarField> g, std::span<const ScalarField> h, double dt, int N) {
  require_homogeneous(bank);
  if (N < 0) throw Error("trilinear cutoff N must be non-negative");
  if (f.size() != g.size() || f.size() != h.size() || f.empty()) throw Error("trilinear time series must match");
  if (!(dt > 0.0)) throw Error("trilinear time step must be positive");
  const std::size_t M = f.size();
  const Grid& grid = bank.grid();
  auto trap = [&](const std::vector<double>& v) {
    double s = 0.0;
    for (std::size_t i = 1; i < v.size(); ++i) s += 0.5 * dt * (v[i - 1] + v[i]);
    return s;
  };
  const auto idx = bank.indices();
  std::vector<double> lhs(M), f2(M), gg2(M), h2(M);
  std::vector<std::vector<double>> sg(idx.size(), std::vector<double>(M));
  std::vector<std::vector<double>> fb;
  lp::CheminLerner hcl(bank, lp::NormSpec::besov(0.0, 2.0, 2.0), kInf, dt);
  for (std::size_t m = 0; m < M; ++m) {
    const ScalarField fp = ensure_physical(f[m]), gp = ensure_physical(g[m]), hp = ensure_physical(h[m]);
    double s = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) s += fp.values()[i] * gp.values()[i] * hp.values()[i];
    lhs[m] = s * grid.cell_area();
    f2[m] = l2_norm_sq(fp);
    const ScalarField gs = ensure_spectral(g[m]);
    gg2[m] = grad_l2_sq(VectorField{gs, ScalarField::zeros(grid, Repr::Spectral), ScalarField::zeros(grid, Repr::Spectral)});
    h2[m] = l2_norm_sq(hp);
    hcl.add(h[m]);
    // S_k g for k = j_low + 1 .. j_max + 1; the last one is g itself.
    for (std::size_t q = 0; q < idx.size(); ++q) {
      const double v = max_abs(to_physical(lp::low_pass(bank, gs, idx[q] + 1)));
      sg[q][m] = v * v;
    }
    fb.push_back(lp::block_l2_sq(bank, ensure_spectral(f[m])));
  }
  TrilinearTerms out;
  out.lhs = trap(lhs);
  const double fn = std::sqrt(trap(f2));
  const double gn = std::sqrt(trap(gg2));
  const double hn = std::sqrt(*std::max_element(h2.begin(), h2.end()));
  double sgn = 0.0;
  for (const auto& v : sg) sgn = std::max(sgn, std::sqrt(trap(v)));
  double tail = 0.0;
  for (std::size_t q = 0; q < idx.size(); ++q) {
    if (std::abs(idx[q]) < N) continue;
    std::vector<double> v(M);
    for (std::size_t m = 0; m < M; ++m) v[m] = fb[m][q];
    tail += trap(v);
  }
  out.t1 = fn * gn * hn;
  out.t2 = 2.0 * N * sgn * fn * hn;
  out.t3 = sgn * hcl.value() * std::sqrt(tail);
  return out;
}

TrilinearReport trilinear_check(const lp::FilterBank& bank, const TrilinearParams& p) {
  if (p.samples < 2) throw Error("trilinear check needs at least two time samples");
  const Grid& grid = bank.grid();
  const double dt = p.T / static_cast<double>(p.samples - 1);
  TrilinearReport rep;
  rep.note =
      "terms 2 and 3 share sup_k ||S_k g||_{L2Linf}; they differ only by the factor 2N against the "
      "high-frequency tail of f";
  for (std::size_t trial = 0; trial < p.trials; ++trial) {
    SplitMix64 rng(mix_key(p.seed, static_cast<std::int64_t>(trial), 0, 7));
    const double a = 1.0 + rng.uniform();
    const double k0 = grid.dk() * (2.0 + 1.5 * rng.uniform());
    const ScalarField f0 = random_scalar(grid, rng.next(), a, k0);
    const ScalarField g0 = random_scalar(grid, rng.next(), a, k0);
    const ScalarField h0 = random_scalar(grid, rng.next(), a, k0);
    std::vector<ScalarField> f, g, h;
    for (std::size_t m = 0; m < p.samples; ++m) {
      const double t = static_cast<double>(m) * dt;
      f.push_back(heat_evolve(f0, t));
      g.push_back(heat_evolve(g0, t));
      h.push_back(heat_evolve(h0, t));
    }
    rep.trials.push_back(trilinear_terms(bank, f, g, h, dt, p.N));
    const auto& tt = rep.trials.back();
    if (tt.vacuous()) ++rep.vacuous;
    rep.max_ratio = std::max(rep.max_ratio, tt.ratio());
  }
  return rep;
}

void write_trilinear_csv(std::ostream& os, const TrilinearReport& r) {
  os << "trial,lhs,term1,term2,term3,rhs,ratio\n";
  for (std::size_t i = 0; i < r.trials.size(); ++i) {
    const auto& t = r.trials[i];
    os << i;
    for (double v : {t.lhs, t.t1, t.t2, t.t3, t.rhs(), t.ratio()}) os << ',' << format_double(v);
    os << '\n';
  }
}

// ---------------------------------------------------------------------------

namespace {

void hash_field(std::uint64_t& h, const VectorField& v) {
  for (const auto& c : v.components()) {
    const ScalarField s = ensure_spectral(c);
    const auto co = s.coeffs();
    h = fnv1a64(std::span(reinterpret_cast<const unsigned char*>(co.data()), co.size_bytes()), h);
  }
}

std::uint64_t state_hash(const solver::State& s) {
  std::uint64_t h = kFnvOffset;
  unsigned char tb[sizeof(double)];
  std::memcpy(tb, &s.t, sizeof tb);
  h = fnv1a64(tb, h);
  hash_field(h, s.u);
  hash_field(h, s.E);
  hash_field(h, s.B);
  return h;
}

}  // namespace

bool twin_runs_identical(const solver::State& init, const solver::SolverConfig& cfg) {
  std::vector<std::uint64_t> a, b;
  const auto fa = solver::run(init, cfg, [&](const solver::State& s, std::size_t) { a.push_back(state_hash(s)); });
  const auto fb = solver::run(init, cfg, [&](const solver::State& s, std::size_t) { b.push_back(state_hash(s)); });
  return a == b && state_hash(fa) == state_hash(fb);
}

UniquenessReport uniqueness_experiment(const solver::State& init, const solver::State& direction, double delta,
                                       const solver::SolverConfig& cfg, const lp::FilterBank& bank) {
  require_homogeneous(bank);
  cfg.validate();
  if (!(delta >= 0.0)) throw Error("perturbation size must be non-negative");
  const solver::State base = solver::to_spectral(init);
  const solver::State dir = solver::to_spectral(direction);
  auto perturbed = [&](double d) {
    return solver::State{base.t, base.u + d * dir.u, base.E + d * dir.E, base.B + d * dir.B};
  };
  solver::State a = base, b = perturbed(delta), c = perturbed(0.5 * delta);
  const solver::LinearPropagator prop(base.u.grid(), cfg.dt);
  const double h = cfg.dt * static_cast<double>(cfg.output_every);
  UniquenessReport rep;
  rep.delta = delta;
  auto dist = [&](const solver::State& x, const solver::State& y) {
    const solver::State d = difference(x, y);
    return l2_norm_sq(d.u) + pair_l2log_sq(bank, d.E, d.B);
  };
  double last_rate = 0.0, R = 0.0;
  auto sample = [&]() {
    const double bl = lp::l2log_norm(bank, a.B), jl = lp::l2log_norm(bank, solver::ohm_current(a, cfg.dealias));
    const double um = max_abs(to_physical(a.u));
    const double rate = bl * bl + jl * jl + um * um + grad_l2_sq(b.u);
    if (!rep.t.empty()) R += 0.5 * h * (last_rate + rate);
    last_rate = rate;
    rep.t.push_back(a.t);
    rep.D.push_back(dist(b, a));
    rep.D_half.push_back(dist(c, a));
    rep.R.push_back(R);
  };
  sample();
  const std::size_t nsteps = cfg.steps();
  for (std::size_t k = 1; k <= nsteps; ++k) {
    a = solver::step(a, prop, cfg);
    b = solver::step(b, prop, cfg);
    c = solver::step(c, prop, cfg);
    if (k % cfg.output_every == 0) sample();
  }
  const double D0 = rep.D.front();
  if (D0 > 0.0) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 1; i < rep.t.size(); ++i) {
      num += rep.R[i] * std::log(rep.D[i] / D0);
      den += rep.R[i] * rep.R[i];
    }
    rep.c_fit = den > 0.0 ? num / den : 0.0;
    for (std::size_t i = 0; i < rep.t.size(); ++i) {
      rep.max_envelope_ratio = std::max(rep.max_envelope_ratio, rep.D[i] / (D0 * std::exp(rep.c_fit * rep.R[i])));
      if (rep.D_half[i] > 0.0)
        rep.max_halving_defect =
            std::max(rep.max_halving_defect, std::abs(0.5 * std::sqrt(rep.D[i] / rep.D_half[i]) - 1.0));
    }
  }
  return rep;
}

void write_uniqueness_csv(std::ostream& os, const UniquenessReport& r) {
  os << "t,D,D_half,R,envelope\n";
  const double D0 = r.D.empty() ? 0.0 : r.D.front();
  for (std::size_t i = 0; i < r.t.size(); ++i) {
    os << format_double(r.t[i]) << ',' << format_double(r.D[i]) << ',' << format_double(r.D_half[i]) << ','
       << format_double(r.R[i]) << ',' << format_double(D0 * std::exp(r.c_fit * r.R[i])) << '\n';
  }
}

// ---------------------------------------------------------------------------

GalerkinReport galerkin_experiment(const solver::State& init, const solver::SolverConfig& cfg,
                                   std::span<const int> levels) {
  if (levels.size() < 3) throw ConfigError("Galerkin experiment needs at least 3 levels");
  for (std::size_t i = 1; i < levels.size(); ++i)
    if (levels[i] <= levels[i - 1]) throw ConfigError("Galerkin levels must be strictly increasing");
  cfg.validate();
  const Grid& grid = init.u.grid();
  const lp::FilterBank inh(grid, false), hom(grid, true);
  const solver::State base = solver::to_spectral(init);
  std::vector<solver::State> st;
  for (int N : levels) st.push_back(solver::mollify_initial(base, inh, N));
  const solver::LinearPropagator prop(grid, cfg.dt);
  const double h = cfg.dt * static_cast<double>(cfg.output_every);
  const std::size_t L = levels.size();
  struct Acc {
    std::size_t a, b;
    double du = 0.0;
    lp::CheminLerner cl;
  };
  std::vector<Acc> cons, skip;
  const auto spec = lp::NormSpec::besov(0.0, 2.0, 2.0);
  for (std::size_t i = 0; i + 1 < L; ++i) cons.push_back({i, i + 1, 0.0, lp::CheminLerner(hom, spec, kInf, h)});
  for (std::size_t i = 0; i + 2 < L; ++i) skip.push_back({i, i + 2, 0.0, lp::CheminLerner(hom, spec, kInf, h)});
  auto sample = [&]() {
    for (auto* group : {&cons, &skip})
      for (auto& acc : *group) {
        const solver::State d = difference(st[acc.b], st[acc.a]);
        acc.du = std::max(acc.du, l2_norm(d.u));
        acc.cl.add_block_sq(pair_blocks(hom, d.E, d.B));
      }
  };
  sample();
  const std::size_t nsteps = cfg.steps();
  for (std::size_t k = 1; k <= nsteps; ++k) {
    for (auto& s : st) s = solver::step(s, prop, cfg);
    if (k % cfg.output_every == 0) sample();
  }
  GalerkinReport rep;
  for (const auto& acc : cons) rep.consecutive.push_back({levels[acc.a], levels[acc.b], acc.du, acc.cl.value()});
  for (const auto& acc : skip) rep.skip.push_back({levels[acc.a], levels[acc.b], acc.du, acc.cl.value()});
  rep.strictly_decreasing = true;
  for (std::size_t i = 1; i < rep.consecutive.size(); ++i)
    if (!(rep.consecutive[i].combined() < rep.consecutive[i - 1].combined())) rep.strictly_decreasing = false;
  rep.triangle_ok = true;
  for (std::size_t i = 0; i < rep.skip.size(); ++i) {
    const double bound = rep.consecutive[i].combined() + rep.consecutive[i + 1].combined();
    if (rep.skip[i].combined() > bound * (1.0 + 1e-12)) rep.triangle_ok = false;
  }
  return rep;
}

void write_galerkin_csv(std::ostream& os, const GalerkinReport& r) {
  os << "level_a,level_b,du_sup,deb_cl,combined\n";
  for (const auto* group : {&r.consecutive, &r.skip})
    for (const auto& p : *group)
      os << p.level_a << ',' << p.level_b << ',' << format_double(p.du_sup) << ',' << format_double(p.deb_cl) << ','
         << format_double(p.combined()) << '\n';
}

// ---------------------------------------------------------------------------

double heat_fourier_lp(const ScalarField& f, double t, double p) {
  const Grid& g = f.grid();
  const ScalarField sp = ensure_spectral(f);
  const double L = g.length(), n = static_cast<double>(g.n());
  const double conv = (L / n) * (L / n) / (2.0 * std::numbers::pi);
  const double measure = std::pow(2.0 * std::numbers::pi / L, 2);
  const auto co = sp.coeffs();
  double acc = 0.0;
  for (std::size_t i = 0; i < co.size(); ++i) {
    const double k = g.kmag(i);
    const double v = conv * std::abs(co[i]) * std::exp(-t * k * k);
    if (std::isinf(p))
      acc = std::max(acc, v);
    else
      acc += std::pow(v, p);
  }
  return std::isinf(p) ? acc : std::pow(acc * measure, 1.0 / p);
}

HerzHeatReport fourier_herz_heat_check(const lp::FilterBank& bank, const ScalarField& f, double s, double p,
                                       double r, int nodes_per_decade) {
  require_homogeneous(bank);
  if (!(s > 0.0)) throw OutOfRange("heat characterization needs s > 0");
  if (!(p >= 1.0) || !(r >= 1.0)) throw OutOfRange("Lebesgue exponents must lie in [1, inf]");
  if (nodes_per_decade < 4) throw OutOfRange("too few quadrature nodes per decade");
  const Grid& g = f.grid();
  const ScalarField sp = ensure_spectral(f);
  const auto co = sp.coeffs();
  double cmax = 0.0;
  for (auto z : co) cmax = std::max(cmax, std::abs(z));
  if (cmax == 0.0) throw OutOfRange("heat characterization of the zero field");
  if (std::abs(co[0]) > 1e-12 * cmax) throw OutOfRange("field has a mean; homogeneous norms are undefined");
  double kf_min = kInf, kf_max = 0.0;
  for (std::size_t i = 1; i < co.size(); ++i)
    if (std::abs(co[i]) > 0.0) {
      kf_min = std::min(kf_min, g.kmag(i));
      kf_max = std::max(kf_max, g.kmag(i));
    }
  const double kmin = g.dk();
  const double kmax = g.dk() * static_cast<double>(g.n() / 2) * std::numbers::sqrt2;
  HerzHeatReport rep{};
  rep.s = s;
  rep.p = p;
  rep.r = r;
  rep.t_min = 1e-4 / (kmax * kmax);
  rep.t_max = 40.0 / (kmin * kmin);
  if (rep.t_min * kf_max * kf_max > 1e-2 || rep.t_max * kf_min * kf_min < 10.0)
    throw OutOfRange("quadrature range too narrow for the field's spectral support");
  const double decades = std::log10(rep.t_max / rep.t_min);
  const std::size_t intervals = static_cast<std::size_t>(std::ceil(decades * nodes_per_decade));
  rep.nodes = intervals + 1;
  const double du = std::log(rep.t_max / rep.t_min) / static_cast<double>(intervals);
  double acc = 0.0, prev = 0.0;
  for (std::size_t i = 0; i < rep.nodes; ++i) {
    const double t = rep.t_min * std::exp(du * static_cast<double>(i));
    const double v = std::pow(t, s) * heat_fourier_lp(sp, t, p);
    if (std::isinf(r)) {
      acc = std::max(acc, v);
    } else {
      const double w = std::pow(v, r);
      if (i > 0) acc += 0.5 * du * (prev + w);
      prev = w;
    }
  }
  if (std::isinf(r)) {
    rep.lhs = acc;
  } else {
    // Below t_min the heat factor is 1 to within 1e-4: int_0^tmin t^{rs} dt/t.
    acc += std::pow(rep.t_min, r * s) / (r * s) * std::pow(heat_fourier_lp(sp, 0.0, p), r);
    rep.lhs = std::pow(acc, 1.0 / r);
  }
  rep.rhs = lp::fourier_herz_norm(bank, sp, lp::NormSpec::fourier_herz(-2.0 * s, p, r, true));
  rep.ratio = rep.lhs / rep.rhs;
  return rep;
}

double dyadic_heat_sum(double s, double c, int J, std::size_t samples) {
  if (!(s > 0.0) || !(c > 0.0) || J < 0 || samples == 0) throw OutOfRange("dyadic heat sum needs s, c > 0");
  double best = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = std::exp2(2.0 * static_cast<double>(i) / static_cast<double>(samples));
    double sum = 0.0;
    for (int j = -J; j <= J; ++j) {
      const double x = t * std::exp2(2.0 * j);
      sum += std::pow(x, s) * std::exp(-c * x);
    }
    best = std::max(best, sum);
  }
  return best;
}

double HerzBand::constant() const { return std::max(hi, lo > 0.0 ? 1.0 / lo : kInf); }

HerzBand herz_band(const lp::FilterBank& bank, std::size_t fields, std::uint64_t seed) {
  const Grid& g = bank.grid();
  HerzBand out;
  out.lo = kInf;
  struct Triple {
    double s, p, r;
  };
  for (std::size_t i = 0; i < fields; ++i) {
    SplitMix64 rng(mix_key(seed, static_cast<std::int64_t>(i), 0, 23));
    const std::uint64_t fs = rng.next();
    const double a = 2.0 * rng.uniform();
    const double k0 = g.dk() * (2.0 + static_cast<double>(g.n()) / 8.0 * rng.uniform());
    const ScalarField f = random_scalar(g, fs, a, k0);
    for (Triple t : {Triple{0.5, 1.0, 2.0}, Triple{1.0, 2.0, 2.0}, Triple{0.5, 2.0, kInf}}) {
      out.rows.push_back(fourier_herz_heat_check(bank, f, t.s, t.p, t.r));
      out.lo = std::min(out.lo, out.rows.back().ratio);
      out.hi = std::max(out.hi, out.rows.back().ratio);
    }
  }
  return out;
}

void write_herz_csv(std::ostream& os, std::span<const HerzHeatReport> rows) {
  os << "s,p,r,lhs,rhs,ratio\n";
  for (const auto& r : rows) {
    bool first = true;
    for (double v : {r.s, r.p, r.r, r.lhs, r.rhs, r.ratio}) {
      if (!first) os << ',';
      os << format_double(v);
      first = false;
    }
    os << '\n';
  }
}

}  // namespace mns::diag
