#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "mns/orchestrate.hpp"

namespace {

int finish(const mns::cli::ExperimentResult& r, const std::string& out) {
  for (const auto& [k, v] : r.values) std::cout << k << " = " << v << '\n';
  for (const auto& [k, ok] : r.checks) std::cout << "check " << k << ": " << (ok ? "pass" : "fail") << '\n';
  std::cout << "artifacts in " << out << '\n';
  return r.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maxwell-Navier-Stokes spectral solver and diagnostics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", MNS_VERSION);

  struct Sub {
    CLI::App* cmd;
    std::string tag, config, out;
  };
  const char* help[] = {
      "integrate and write snapshots plus the energy ledger",
      "energy ledger CSV",
      "borderline norm monitor CSV",
      "exact heat evolution: energy equality and localized quantities",
      "trilinear estimate over random trials",
      "twin runs and perturbation growth against the fitted envelope",
      "differences between mollified approximations",
      "heat-semigroup characterization of Fourier-Herz norms",
  };
  std::vector<Sub> subs;
  subs.reserve(mns::cli::experiment_tags().size());
  std::size_t i = 0;
  for (auto tag : mns::cli::experiment_tags()) {
    subs.push_back({app.add_subcommand(std::string(tag), help[i++]), std::string(tag), "", ""});
    auto& s = subs.back();
    s.cmd->add_option("--config", s.config, "key = value config file")->required()->check(CLI::ExistingFile);
    s.cmd->add_option("--out", s.out, "output directory (default: output.dir)");
  }
  std::string manifest, rep_out;
  auto* rep = app.add_subcommand("reproduce", "re-run a manifest and compare artifact hashes");
  rep->add_option("--manifest", manifest, "manifest.txt of an earlier run")->required()->check(CLI::ExistingFile);
  rep->add_option("--out", rep_out, "output directory for the re-run")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (rep->parsed()) {
      const bool same = mns::cli::reproduce(manifest, rep_out);
      std::cout << (same ? "hashes match" : "hashes differ") << '\n';
      return same ? 0 : 1;
    }
    for (auto& s : subs) {
      if (!s.cmd->parsed()) continue;
      auto cfg = mns::cli::read_config(s.config);
      cfg.experiment = s.tag;
      const std::string out = s.out.empty() ? cfg.output_dir : s.out;
      return finish(mns::cli::orchestrate(cfg, out), out);
    }
  } catch (const mns::solver::BlowUpError& e) {
    std::cerr << "error: " << e.what() << " (t = " << e.time() << ")\n";
    if (!e.snapshot().empty()) std::cerr << "last finite state: " << e.snapshot().string() << '\n';
    return 3;
  } catch (const mns::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
