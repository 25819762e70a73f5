#include "mns/orchestrate.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mns/diagnostics.hpp"
#include "mns/io.hpp"
#include "mns/localize.hpp"
#include "mns/lp.hpp"
#include "mns/random.hpp"
#include "mns/snapshot.hpp"

namespace mns::cli {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& p) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw IoError("cannot write " + p.string());
  return os;
}

struct Context {
  const RunConfig& c;
  fs::path out;
  ExperimentResult& r;

  std::ofstream file(const std::string& name) {
    r.artifacts.emplace_back(name);
    return open_out(out / name);
  }
  void value(const std::string& k, double v) { r.values.emplace_back(k, v); }
  void check(const std::string& k, bool ok) { r.checks.emplace_back(k, ok); }
};

solver::SolverConfig solver_for(const Context& x) {
  auto s = solver_config(x.c);
  s.blowup_dir = x.out;
  return s;
}

double sample_spacing(const RunConfig& c) { return c.dt * static_cast<double>(c.output_every); }

void run_energy(Context& x, bool snapshots) {
  const auto init = initial_state(x.c);
  diag::EnergyMonitor mon(sample_spacing(x.c), x.c.dealias);
  if (snapshots) fs::create_directories(x.out / "snapshots");
  solver::run(init, solver_for(x), [&](const solver::State& s, std::size_t step) {
    mon.observe(s);
    if (!snapshots) return;
    char name[48];
    std::snprintf(name, sizeof name, "snapshots/step_%06zu.mns2", step);
    write_snapshot(x.out / name, s.t, to_physical(s.u), to_physical(s.E), to_physical(s.B));
    x.r.artifacts.emplace_back(name);
  });
  auto os = x.file("energy.csv");
  diag::write_energy_csv(os, mon.rows());
  x.value("rows", static_cast<double>(mon.rows().size()));
  x.value("final_defect", mon.rows().back().defect);
  x.value("max_abs_defect", mon.max_abs_defect());
  x.value("max_orthogonality", mon.max_orthogonality());
  x.value("max_divergence", mon.max_divergence());
  x.check("orthogonality", mon.max_orthogonality() <= 1e-12);
  x.check("divergence", mon.max_divergence() <= 1e-10);
}

void run_borderline(Context& x) {
  const auto init = initial_state(x.c);
  const Grid g = make_grid(x.c);
  const lp::FilterBank bank(g, true);
  const auto scales = loc::dyadic_partitions(g, x.c.morrey_max_cells);
  diag::BorderlineMonitor mon(bank, scales, sample_spacing(x.c), x.c.dealias);
  solver::run(init, solver_for(x), [&](const solver::State& s, std::size_t) { mon.observe(s); });
  auto os = x.file("borderline.csv");
  diag::write_borderline_csv(os, mon.rows());
  const auto& last = mon.rows().back();
  x.value("EB_cl_linf_l2log", last.eb_cl_l2log);
  x.value("int_j2_l2log", last.int_j2_l2log);
  x.value("int_u2_linf", last.int_u2_linf);
  x.value("int_uhat2_l1", last.int_uhat2_l1);
  x.value("morrey_sup", last.morrey_sup);
  x.value("u_cl_linf_b022", last.u_cl_b022);
  bool finite = true;
  for (const auto& r : mon.rows())
    for (double v : {r.eb_cl_l2log, r.int_j2_l2log, r.int_u2_linf, r.int_uhat2_l1, r.morrey_sup, r.u_cl_b022})
      finite = finite && std::isfinite(v);
  x.check("finite", finite);
}

void run_heat(Context& x) {
  const Grid g = make_grid(x.c);
  const double c0 = g.length() / 2, w = x.c.heat_width;
  const ScalarField f = ScalarField::sample(g, [&](double a, double b) {
    return std::exp(-((a - c0) * (a - c0) + (b - c0) * (b - c0)) / (w * w));
  });
  const ScalarField z = ScalarField::zeros(g, Repr::Physical);
  const auto scales = loc::dyadic_partitions(g, x.c.morrey_max_cells);
  const auto rep = diag::heat_experiment(VectorField{f, z, z}, x.c.T, x.c.heat_samples, scales);
  {
    auto os = x.file("heat.csv");
    os << "t,defect\n";
    for (std::size_t i = 0; i < rep.t.size(); ++i) os << format_double(rep.t[i]) << ',' << format_double(rep.defect[i]) << '\n';
  }
  std::vector<loc::ScaleRow> rows;
  for (std::size_t i = 0; i < scales.size(); ++i) {
    rows.push_back({rep.sum.j[i], "sum", "integrated", rep.sum.per_scale[i]});
    rows.push_back({rep.sup.j[i], "sup", "integrated", rep.sup.per_scale[i]});
  }
  auto os = x.file("heat_scales.csv");
  loc::write_scale_csv(os, rows);
  x.value("max_defect", rep.max_defect);
  x.value("sum_identity_defect", rep.sum_identity_defect);
  x.value("sum_overall", rep.sum.overall);
  x.value("sup_overall", rep.sup.overall);
  x.check("energy_equality", rep.max_defect <= 1e-10);
  x.check("sum_identity", rep.sum_identity_defect <= 1e-10);
}

void run_trilinear(Context& x) {
  const Grid g = make_grid(x.c);
  const lp::FilterBank bank(g, true);
  diag::TrilinearParams p;
  p.trials = x.c.trilinear_trials;
  p.N = x.c.trilinear_N;
  p.T = x.c.T;
  p.samples = x.c.trilinear_samples;
  p.seed = x.c.seed;
  const auto rep = diag::trilinear_check(bank, p);
  auto os = x.file("trilinear.csv");
  diag::write_trilinear_csv(os, rep);
  x.value("max_ratio", rep.max_ratio);
  x.value("vacuous", static_cast<double>(rep.vacuous));
  x.check("bounded", std::isfinite(rep.max_ratio) && rep.max_ratio <= 1.0);
  x.r.notes.push_back(rep.note);
}

void run_perturb(Context& x) {
  const auto init = initial_state(x.c);
  const Grid g = make_grid(x.c);
  const lp::FilterBank bank(g, true);
  InitParams dp = init_params(x.c);
  dp.seed = mix_key(x.c.seed, 0, 0, 99);
  dp.energy = 1.0;
  const auto direction = generate_initial(g, dp);
  const auto cfg = solver_for(x);
  const auto rep = diag::uniqueness_experiment(init, direction, x.c.perturb_delta, cfg, bank);
  const bool twin = diag::twin_runs_identical(init, cfg);
  auto os = x.file("uniqueness.csv");
  diag::write_uniqueness_csv(os, rep);
  x.value("c_fit", rep.c_fit);
  x.value("max_envelope_ratio", rep.max_envelope_ratio);
  x.value("max_halving_defect", rep.max_halving_defect);
  x.value("R_final", rep.R.back());
  x.check("twin_identical", twin);
  x.check("envelope", rep.max_envelope_ratio <= 1.5);
  x.check("halving", rep.max_halving_defect <= 0.1);
}

void run_galerkin(Context& x) {
  const Grid g = make_grid(x.c);
  const auto init = generate_initial(g, init_params(x.c));
  const auto rep = diag::galerkin_experiment(init, solver_for(x), x.c.galerkin_levels);
  auto os = x.file("galerkin.csv");
  diag::write_galerkin_csv(os, rep);
  for (const auto& p : rep.consecutive)
    x.value("combined_" + std::to_string(p.level_a) + "_" + std::to_string(p.level_b), p.combined());
  x.check("strictly_decreasing", rep.strictly_decreasing);
  x.check("triangle", rep.triangle_ok);
}

void run_a2(Context& x) {
  const Grid g = make_grid(x.c);
  const lp::FilterBank bank(g, true);
  const auto band = diag::herz_band(bank, x.c.a2_fields, x.c.seed);
  auto os = x.file("a2.csv");
  diag::write_herz_csv(os, band.rows);
  const double s10 = diag::dyadic_heat_sum(1.0, 1.0, 10), s20 = diag::dyadic_heat_sum(1.0, 1.0, 20),
               s40 = diag::dyadic_heat_sum(1.0, 1.0, 40);
  x.value("ratio_min", band.lo);
  x.value("ratio_max", band.hi);
  x.value("band_constant", band.constant());
  x.value("dyadic_sum_J10", s10);
  x.value("dyadic_sum_J20", s20);
  x.value("dyadic_sum_J40", s40);
  x.check("dyadic_sum_converged", std::abs(s40 / s20 - 1) < 5e-4 && std::abs(s20 / s10 - 1) < 5e-4);
}

void write_summary(Context& x) {
  auto os = x.file("summary.txt");
  os << "experiment = " << x.r.tag << '\n';
  for (const auto& [k, v] : x.r.values) os << "value." << k << " = " << format_double(v) << '\n';
  for (const auto& [k, ok] : x.r.checks) os << "check." << k << " = " << (ok ? "pass" : "fail") << '\n';
  for (const auto& n : x.r.notes) os << "note = " << n << '\n';
}

}  // namespace

bool ExperimentResult::passed() const {
  for (const auto& [k, ok] : checks)
    if (!ok) return false;
  return true;
}

solver::State initial_state(const RunConfig& c) {
  const Grid g = make_grid(c);
  auto s = generate_initial(g, init_params(c));
  if (c.mollify_N) s = solver::mollify_initial(s, lp::FilterBank(g, false), *c.mollify_N);
  return s;
}

ExperimentResult orchestrate(const RunConfig& c, const fs::path& out) {
  c.validate();
  fs::create_directories(out);
  ExperimentResult r;
  r.tag = c.experiment;
  r.config = c;
  Context x{c, out, r};
  {
    auto os = x.file("config.txt");
    os << to_text(c);
  }
  if (c.experiment == "run")
    run_energy(x, true);
  else if (c.experiment == "energy")
    run_energy(x, false);
  else if (c.experiment == "borderline")
    run_borderline(x);
  else if (c.experiment == "heat-check")
    run_heat(x);
  else if (c.experiment == "trilinear")
    run_trilinear(x);
  else if (c.experiment == "perturb")
    run_perturb(x);
  else if (c.experiment == "galerkin")
    run_galerkin(x);
  else if (c.experiment == "a2-check")
    run_a2(x);
  write_summary(x);
  write_manifest(out, r);
  return r;
}

void write_manifest(const fs::path& out, const ExperimentResult& r) {
  std::ostringstream ss;
  ss << "version = " << MNS_VERSION << '\n';
  std::istringstream cfg(to_text(r.config));
  for (std::string line; std::getline(cfg, line);) ss << "config." << line << '\n';
  for (const auto& a : r.artifacts) ss << "hash." << a.generic_string() << " = " << hex64(fnv1a64_file(out / a)) << '\n';
  auto os = open_out(out / "manifest.txt");
  os << ss.str();
}

Manifest read_manifest(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open manifest " + path.string());
  Manifest m;
  std::string cfg;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) throw ConfigError("manifest line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = line.substr(0, eq), value = line.substr(eq + 3);
    if (key == "version")
      m.version = value;
    else if (key.rfind("config.", 0) == 0)
      cfg += key.substr(7) + " = " + value + '\n';
    else if (key.rfind("hash.", 0) == 0)
      m.hashes.emplace_back(key.substr(5), value);
    else
      throw ConfigError("manifest line " + std::to_string(line_no) + ": unknown key '" + key + "'");
  }
  m.config = parse_config(cfg);
  return m;
}

bool reproduce(const fs::path& manifest, const fs::path& out) {
  const Manifest m = read_manifest(manifest);
  orchestrate(m.config, out);
  const Manifest again = read_manifest(out / "manifest.txt");
  return again.hashes == m.hashes;
}

}  // namespace mns::cli
