#pragma once

#include <cstdint>

#include "mns/solver.hpp"

namespace mns::cli {

/// Seeded random initial data with spectral envelope |k|^a exp(-|k|^2 / k0^2).
///
/// Each retained wavevector draws its phases from its own SplitMix64 stream
/// keyed by (seed, m1, m2, field), so the same box and seed give the same
/// modes at every resolution. u and B have divergence-free horizontal parts
/// along k-perp; all third components and E get independent phases. Only
/// modes kept by the 2/3 rule are populated.
struct InitParams {
  std::uint64_t seed = 1;
  double a = 1.0;
  double k0 = 0.0;  // 0 selects n/8 * 2 pi / L
  /// Total ||u||^2 + ||E||^2 + ||B||^2, split equally; ignored when !normalize.
  double energy = 1.0;
  /// Without normalization the Fourier series coefficient of each component
  /// is exactly the envelope value times a unit phase.
  bool normalize = true;
};

solver::State generate_initial(const Grid& grid, const InitParams& p);

}  // namespace mns::cli
