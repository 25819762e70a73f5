#pragma once

// Physical-space localization on the torus: lattice partitions of unity,
// the disk Dirichlet eigenpair and localized L^2 quantities.

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mns/field.hpp"

namespace mns::loc {

/// Radial cutoff: 1 on |x| <= sqrt(2)/2, 0 on |x| >= 1, smooth in between.
double zeta(double r);

/// phi_{j,k}(x) = phi(2^j x - k) for k in {0..m-1}^2, periodized on [0, L)^2.
///
/// The scale is given by the number m of lattice cells per axis, so 2^j = m / L
/// and j need not be an integer. phi = zeta / S with S(x) = sum_k zeta(x + k).
class PartitionOfUnity {
 public:
  PartitionOfUnity(const Grid& grid, std::size_t cells);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t cells() const noexcept { return cells_; }
  /// 2^j = cells / L.
  double scale() const noexcept;
  /// log2(scale()).
  double j() const noexcept;
  std::size_t lattice_size() const noexcept { return cells_ * cells_; }

  struct Entry {
    std::uint32_t k;  // flat lattice index k1 * cells + k2
    double phi;
  };
  /// Bumps that are nonzero at grid point idx.
  std::span<const Entry> at(std::size_t idx) const;

  /// phi_{j,k} sampled on the grid.
  std::vector<double> bump(std::size_t k) const;

 private:
  Grid grid_;
  std::size_t cells_;
  std::vector<std::size_t> offset_;
  std::vector<Entry> entries_;
};

/// Builds the partition with 2^j L cells per axis; throws OutOfRange unless
/// 2^j L is a positive integer.
PartitionOfUnity build_partition(const Grid& grid, int j);

/// Generator profile phi(y) on the plane (scale 1, centered at the origin).
double phi_profile(double y1, double y2);

enum class Weight { Bump, SqrtBump };

/// ||w_{j,k} f||^2_{L^2} for every lattice index k.
std::vector<double> loc_terms(const ScalarField& f, const PartitionOfUnity& pou, Weight w);
std::vector<double> loc_terms(const VectorField& v, const PartitionOfUnity& pou, Weight w);

/// sum_k ||sqrt(phi_{j,k}) f||^2, which equals ||f||^2.
double loc_sum(const ScalarField& f, const PartitionOfUnity& pou);
double loc_sum(const VectorField& v, const PartitionOfUnity& pou);
/// sup_k ||w_{j,k} f||_{L^2}.
double loc_sup(const ScalarField& f, const PartitionOfUnity& pou, Weight w);
double loc_sup(const VectorField& v, const PartitionOfUnity& pou, Weight w);

/// ||chi(2^-j D) f||_inf / (2^j sup_k ||phi_{j,k} f||_{L^2}).
double local_bernstein_ratio(const ScalarField& f, const PartitionOfUnity& pou);
/// ||chi(D) f||_inf / sup_k ||phi_{0,k} f||_{L^1}; needs a partition with L cells.
double kernel_l1_ratio(const ScalarField& f, const PartitionOfUnity& pou);

enum class Aggregation { Sum, Sup };

/// Per-scale 2^{2j} times the time integral (trapezoid) of
/// sum_k ||sqrt(phi_{j,k}) u||^2 or sup_k ||sqrt(phi_{j,k}) u||^2.
class MorreyAccumulator {
 public:
  MorreyAccumulator(std::span<const PartitionOfUnity> scales, Aggregation agg, double dt);
  void add(const VectorField& u);
  void add(const ScalarField& f);
  std::size_t samples() const noexcept { return count_; }
  std::vector<double> per_scale() const;
  double overall() const;

 private:
  void push(const std::vector<double>& inst);
  std::vector<PartitionOfUnity> scales_;
  Aggregation agg_;
  double dt_;
  std::size_t count_ = 0;
  std::vector<double> acc_, last_;
};

struct MorreyReport {
  std::vector<double> j;
  std::vector<double> per_scale;
  double overall = 0.0;
};

MorreyReport morrey_quantity(std::span<const VectorField> trajectory, std::span<const PartitionOfUnity> scales,
                             Aggregation agg, double dt);

/// Partitions with m = 1, 2, 4, ... cells per axis, up to max_cells.
std::vector<PartitionOfUnity> dyadic_partitions(const Grid& grid, std::size_t max_cells);

/// First Dirichlet eigenpair of -Delta on the disk of radius 2.
struct Eigenpair {
  double z;        // first positive zero of J0
  double lambda1;  // (z / 2)^2
  double m_lower;  // min of profile over the support of phi
  double m_upper;  // max of profile over the support of phi
  /// J0(z r / 2) for r <= 2, zero beyond.
  double profile(double r) const;
  double profile_derivative(double r) const;
};

Eigenpair eigen_disk();

/// Smallest lattice separation d (sup norm) such that the eigen-bump at i and
/// phi at k never overlap once |i - k|_inf >= d, found by sampling.
int eigen_bump_separation(const Eigenpair& ep, int samples_per_unit = 64);

struct SmoothFunction {
  std::function<double(double, double)> value;
  std::function<std::array<double, 2>(double, double)> grad;
  std::function<double(double, double)> laplacian;
};

struct IdentityCheck {
  double lhs, rhs, defect;
  double bulk_phi, bulk_grad, boundary;  // the three right-hand terms
};

/// -int Delta f f phi_r = (lambda1 / 2 r^2) int f^2 phi_r + int phi_r |grad f|^2
///                        + 1/2 oint f^2 grad phi_r . n
/// over the disk of radius 2r around center, phi_r(x) = profile(|x - c| / r).
/// order is the Gauss-Legendre node count per direction (radial and, per panel,
/// angular); throws OutOfRange for r <= 0 or order < 8.
IdentityCheck verify_eigen_identity(const SmoothFunction& f, double r, std::array<double, 2> center,
                                    const Eigenpair& ep, int order = 256);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights);

struct ScaleRow {
  double j;
  std::string aggregation;
  std::string kind;  // "instantaneous" or "integrated"
  double value;
};

/// CSV with header "j,aggregation,kind,value".
void write_scale_csv(std::ostream& os, std::span<const ScaleRow> rows);

}  // namespace mns::loc
