#pragma once

// Flat key = value run configuration.
//
// One assignment per line; '#' starts a comment; blank lines are ignored.
// Every key has a default, unknown or repeated keys are errors, and to_text
// writes every key in sorted order with shortest round-trip numbers, so
// parse_config(to_text(c)) reproduces c exactly. grid.L also accepts a
// multiple of pi written as "32pi".

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mns/grid.hpp"
#include "mns/initial.hpp"
#include "mns/solver.hpp"

namespace mns::cli {

struct RunConfig {
  std::string experiment = "energy";
  std::size_t n = 128;
  double L = 32.0 * 3.141592653589793;
  double dt = 1e-3;
  double T = 1.0;
  std::uint64_t seed = 1;
  std::optional<int> mollify_N;
  std::string output_dir = "out";
  std::size_t output_every = 1;
  double init_a = 1.0;
  double init_k0 = 0.0;  // 0 selects n/8 * 2 pi / L
  double init_energy = 1.0;
  bool freeze_velocity = false;
  bool dealias = true;
  double perturb_delta = 1e-8;
  std::vector<int> galerkin_levels{-1, 0, 1, 2};
  std::size_t trilinear_trials = 100;
  int trilinear_N = 2;
  std::size_t trilinear_samples = 11;
  double heat_width = 8.0;
  std::size_t heat_samples = 101;
  std::size_t a2_fields = 30;
  std::size_t morrey_max_cells = 16;

  /// Throws ConfigError on values no experiment can run with.
  void validate() const;
  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Experiment tags accepted by the experiment key.
std::span<const std::string_view> experiment_tags();

/// Errors name the offending key and the 1-based line.
RunConfig parse_config(std::string_view text);
RunConfig read_config(const std::filesystem::path& path);
std::string to_text(const RunConfig& c);

Grid make_grid(const RunConfig& c);
solver::SolverConfig solver_config(const RunConfig& c);
InitParams init_params(const RunConfig& c);

}  // namespace mns::cli
