#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "mns/field.hpp"

namespace mns {

/// Binary snapshot layout (all little-endian, no padding):
///
///   char[4]  magic "MNS2"
///   u32      version (1)
///   u32      n
///   f64      L
///   f64      t
///   u8       field count (9)
///   f64[n*n] x 9 planes, row-major physical samples, in the order
///            u1 u2 u3 E1 E2 E3 B1 B2 B3
inline constexpr std::uint32_t kSnapshotVersion = 1;
inline constexpr std::size_t kSnapshotHeaderBytes = 29;

struct Snapshot {
  double t = 0.0;
  VectorField u, E, B;
};

void write_snapshot(const std::filesystem::path& path, double t, const VectorField& u,
                    const VectorField& E, const VectorField& B);
std::vector<unsigned char> encode_snapshot(double t, const VectorField& u, const VectorField& E,
                                           const VectorField& B);
Snapshot read_snapshot(const std::filesystem::path& path);
Snapshot decode_snapshot(const std::vector<unsigned char>& bytes);

}  // namespace mns
