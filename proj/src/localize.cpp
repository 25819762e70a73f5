#include "mns/localize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "mns/io.hpp"
#include "mns/lp.hpp"

namespace mns::loc {

namespace {
constexpr double kPi = std::numbers::pi;
const double kInner = std::sqrt(0.5);

// sum over the integer lattice of zeta(|y - l|); periodic in y.
double lattice_sum(double y1, double y2) {
  const double f1 = std::floor(y1), f2 = std::floor(y2);
  double s = 0.0;
  for (int a = -1; a <= 2; ++a)
    for (int b = -1; b <= 2; ++b) s += zeta(std::hypot(y1 - (f1 + a), y2 - (f2 + b)));
  return s;
}

long wrap(long v, long m) {
  const long r = v % m;
  return r < 0 ? r + m : r;
}
}  // namespace

double zeta(double r) {
  if (r <= kInner) return 1.0;
  if (r >= 1.0) return 0.0;
  return lp::smooth_step((1.0 - r) / (1.0 - kInner));
}

double phi_profile(double y1, double y2) { return zeta(std::hypot(y1, y2)) / lattice_sum(y1, y2); }

PartitionOfUnity::PartitionOfUnity(const Grid& grid, std::size_t cells) : grid_(grid), cells_(cells) {
  if (cells == 0) throw OutOfRange("partition needs at least one cell per axis");
  const std::size_t n = grid.n();
  const double sc = scale();
  const long m = static_cast<long>(cells);
  offset_.reserve(grid.size() + 1);
  offset_.push_back(0);
  std::vector<Entry> local;
  for (std::size_t i1 = 0; i1 < n; ++i1)
    for (std::size_t i2 = 0; i2 < n; ++i2) {
      const double y1 = grid.x(i1) * sc, y2 = grid.x(i2) * sc;
      const double s = lattice_sum(y1, y2);
      const long f1 = static_cast<long>(std::floor(y1)), f2 = static_cast<long>(std::floor(y2));
      local.clear();
      for (long a = f1 - 1; a <= f1 + 2; ++a)
        for (long b = f2 - 1; b <= f2 + 2; ++b) {
          const double z = zeta(std::hypot(y1 - static_cast<double>(a), y2 - static_cast<double>(b)));
          if (z == 0.0) continue;
          const auto k = static_cast<std::uint32_t>(wrap(a, m) * m + wrap(b, m));
          auto it = std::find_if(local.begin(), local.end(), [k](const Entry& e) { return e.k == k; });
          if (it == local.end())
            local.push_back({k, z / s});
          else
            it->phi += z / s;
        }
      entries_.insert(entries_.end(), local.begin(), local.end());
      offset_.push_back(entries_.size());
    }
}

double PartitionOfUnity::scale() const noexcept { return static_cast<double>(cells_) / grid_.length(); }
double PartitionOfUnity::j() const noexcept { return std::log2(scale()); }

std::span<const PartitionOfUnity::Entry> PartitionOfUnity::at(std::size_t idx) const {
  return std::span(entries_).subspan(offset_[idx], offset_[idx + 1] - offset_[idx]);
}

std::vector<double> PartitionOfUnity::bump(std::size_t k) const {
  std::vector<double> out(grid_.size(), 0.0);
  for (std::size_t idx = 0; idx < out.size(); ++idx)
    for (const auto& e : at(idx))
      if (e.k == k) out[idx] = e.phi;
  return out;
}

PartitionOfUnity build_partition(const Grid& grid, int j) {
  const double m = std::ldexp(grid.length(), j);
  const double r = std::round(m);
  if (r < 1.0 || std::abs(m - r) > 1e-9 * std::max(1.0, m))
    throw OutOfRange("scale 2^" + std::to_string(j) + " is not commensurate with the box");
  return PartitionOfUnity(grid, static_cast<std::size_t>(r));
}

namespace {
void accumulate_terms(const ScalarField& f, const PartitionOfUnity& pou, Weight w, std::vector<double>& terms) {
  if (f.grid() != pou.grid()) throw GridMismatch();
  const ScalarField p = ensure_physical(f);
  auto v = p.values();
  const double da = pou.grid().cell_area();
  for (std::size_t idx = 0; idx < v.size(); ++idx) {
    const double f2 = v[idx] * v[idx] * da;
    if (f2 == 0.0) continue;
    for (const auto& e : pou.at(idx)) terms[e.k] += (w == Weight::Bump ? e.phi * e.phi : e.phi) * f2;
  }
}
}  // namespace

std::vector<double> loc_terms(const ScalarField& f, const PartitionOfUnity& pou, Weight w) {
  std::vector<double> terms(pou.lattice_size(), 0.0);
  accumulate_terms(f, pou, w, terms);
  return terms;
}

std::vector<double> loc_terms(const VectorField& v, const PartitionOfUnity& pou, Weight w) {
  std::vector<double> terms(pou.lattice_size(), 0.0);
  for (const auto& c : v.components()) accumulate_terms(c, pou, w, terms);
  return terms;
}

namespace {
double sum_of(const std::vector<double>& t) {
  double s = 0.0;
  for (double x : t) s += x;
  return s;
}
double max_of(const std::vector<double>& t) { return *std::max_element(t.begin(), t.end()); }
}  // namespace

double loc_sum(const ScalarField& f, const PartitionOfUnity& pou) { return sum_of(loc_terms(f, pou, Weight::SqrtBump)); }
double loc_sum(const VectorField& v, const PartitionOfUnity& pou) { return sum_of(loc_terms(v, pou, Weight::SqrtBump)); }
double loc_sup(const ScalarField& f, const PartitionOfUnity& pou, Weight w) {
  return std::sqrt(max_of(loc_terms(f, pou, w)));
}
double loc_sup(const VectorField& v, const PartitionOfUnity& pou, Weight w) {
  return std::sqrt(max_of(loc_terms(v, pou, w)));
}

double local_bernstein_ratio(const ScalarField& f, const PartitionOfUnity& pou) {
  const double num = max_abs(to_physical(lp::low_pass_at_scale(ensure_spectral(f), pou.scale())));
  return num / (pou.scale() * loc_sup(f, pou, Weight::Bump));
}

double kernel_l1_ratio(const ScalarField& f, const PartitionOfUnity& pou) {
  if (std::abs(pou.scale() - 1.0) > 1e-12) throw OutOfRange("kernel ratio needs unit lattice spacing");
  const double num = max_abs(to_physical(lp::low_pass_at_scale(ensure_spectral(f), 1.0)));
  const ScalarField p = ensure_physical(f);
  auto v = p.values();
  std::vector<double> l1(pou.lattice_size(), 0.0);
  const double da = pou.grid().cell_area();
  for (std::size_t idx = 0; idx < v.size(); ++idx)
    for (const auto& e : pou.at(idx)) l1[e.k] += e.phi * std::abs(v[idx]) * da;
  return num / max_of(l1);
}

MorreyAccumulator::MorreyAccumulator(std::span<const PartitionOfUnity> scales, Aggregation agg, double dt)
    : scales_(scales.begin(), scales.end()), agg_(agg), dt_(dt) {
  if (scales_.empty()) throw Error("Morrey quantity needs at least one scale");
  if (!(dt > 0.0)) throw Error("Morrey quantity needs a positive time step");
  acc_.assign(scales_.size(), 0.0);
}

void MorreyAccumulator::push(const std::vector<double>& inst) {
  if (count_ > 0)
    for (std::size_t i = 0; i < inst.size(); ++i) acc_[i] += 0.5 * dt_ * (last_[i] + inst[i]);
  last_ = inst;
  ++count_;
}

void MorreyAccumulator::add(const VectorField& u) {
  const VectorField p = ensure_physical(u);
  std::vector<double> inst;
  for (const auto& pou : scales_) {
    auto t = loc_terms(p, pou, Weight::SqrtBump);
    inst.push_back(agg_ == Aggregation::Sum ? sum_of(t) : max_of(t));
  }
  push(inst);
}

void MorreyAccumulator::add(const ScalarField& f) {
  const ScalarField p = ensure_physical(f);
  std::vector<double> inst;
  for (const auto& pou : scales_) {
    auto t = loc_terms(p, pou, Weight::SqrtBump);
    inst.push_back(agg_ == Aggregation::Sum ? sum_of(t) : max_of(t));
  }
  push(inst);
}

std::vector<double> MorreyAccumulator::per_scale() const {
  if (count_ == 0) throw Error("Morrey quantity of an empty trajectory");
  std::vector<double> out(acc_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = scales_[i].scale() * scales_[i].scale() * acc_[i];
  return out;
}

double MorreyAccumulator::overall() const {
  auto v = per_scale();
  return *std::max_element(v.begin(), v.end());
}

MorreyReport morrey_quantity(std::span<const VectorField> trajectory, std::span<const PartitionOfUnity> scales,
                             Aggregation agg, double dt) {
  if (trajectory.empty()) throw Error("Morrey quantity of an empty trajectory");
  MorreyAccumulator acc(scales, agg, dt);
  for (const auto& u : trajectory) acc.add(u);
  MorreyReport rep;
  for (const auto& s : scales) rep.j.push_back(s.j());
  rep.per_scale = acc.per_scale();
  rep.overall = acc.overall();
  return rep;
}

std::vector<PartitionOfUnity> dyadic_partitions(const Grid& grid, std::size_t max_cells) {
  std::vector<PartitionOfUnity> out;
  for (std::size_t m = 1; m <= max_cells; m *= 2) out.emplace_back(grid, m);
  return out;
}

double Eigenpair::profile(double r) const {
  if (r >= 2.0) return 0.0;
  return std::cyl_bessel_j(0.0, 0.5 * z * r);
}

double Eigenpair::profile_derivative(double r) const {
  if (r > 2.0) return 0.0;
  return -0.5 * z * std::cyl_bessel_j(1.0, 0.5 * z * r);
}

Eigenpair eigen_disk() {
  Eigenpair ep{};
  double x = 2.4;
  for (int it = 0; it < 50; ++it) {
    const double step = std::cyl_bessel_j(0.0, x) / -std::cyl_bessel_j(1.0, x);
    x -= step;
    if (std::abs(step) < 1e-16 * x) break;
  }
  ep.z = x;
  ep.lambda1 = 0.25 * x * x;
  // Support radius of phi along a fan of rays, by bisection on phi > 0.
  double rmax = 0.0;
  for (int a = 0; a < 64; ++a) {
    const double th = 2.0 * kPi * a / 64.0;
    double lo = 0.0, hi = 2.0;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      (phi_profile(mid * std::cos(th), mid * std::sin(th)) > 0.0 ? lo : hi) = mid;
    }
    rmax = std::max(rmax, hi);
  }
  // The profile decreases on [0, 2], so its extremes over the support sit at
  // the center and at the support radius.
  ep.m_upper = ep.profile(0.0);
  ep.m_lower = ep.profile(rmax);
  return ep;
}

int eigen_bump_separation(const Eigenpair& ep, int samples_per_unit) {
  const int reach = 6;
  const double h = 1.0 / samples_per_unit;
  auto overlaps = [&](int d1, int d2) {
    for (int a = -samples_per_unit; a <= samples_per_unit; ++a)
      for (int b = -samples_per_unit; b <= samples_per_unit; ++b) {
        const double y1 = a * h, y2 = b * h;
        if (phi_profile(y1, y2) > 0.0 && ep.profile(std::hypot(y1 - d1, y2 - d2)) > 0.0) return true;
      }
    return false;
  };
  int first = reach + 1;
  for (int d = reach; d >= 1; --d) {
    bool any = false;
    for (int d1 = -reach; d1 <= reach && !any; ++d1)
      for (int d2 = -reach; d2 <= reach && !any; ++d2)
        if (std::max(std::abs(d1), std::abs(d2)) == d) any = overlaps(d1, d2);
    if (any) break;
    first = d;
  }
  return first;
}

void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(order, 0.0);
  weights.assign(order, 0.0);
  for (int i = 0; i < (order + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    nodes[i] = -x;
    nodes[order - 1 - i] = x;
    weights[i] = weights[order - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

IdentityCheck verify_eigen_identity(const SmoothFunction& f, double r, std::array<double, 2> center,
                                    const Eigenpair& ep, int order) {
  if (!(r > 0.0) || order < 8) throw OutOfRange("disk radius or quadrature order too small");
  std::vector<double> xr, wr;
  gauss_legendre(order, xr, wr);
  const int panels = std::max(1, order / 32);
  const int per_panel = std::max(8, order / panels);
  std::vector<double> xa, wa;
  gauss_legendre(per_panel, xa, wa);
  std::vector<double> th, wth;
  const double pw = 2.0 * kPi / panels;
  for (int p = 0; p < panels; ++p)
    for (std::size_t i = 0; i < xa.size(); ++i) {
      th.push_back(pw * (p + 0.5 * (xa[i] + 1.0)));
      wth.push_back(0.5 * pw * wa[i]);
    }
  const double R = 2.0 * r;
  double lhs = 0.0, bphi = 0.0, bgrad = 0.0;
  for (std::size_t i = 0; i < xr.size(); ++i) {
    const double rho = 0.5 * R * (xr[i] + 1.0);
    const double wrho = 0.5 * R * wr[i] * rho;
    const double phir = ep.profile(rho / r);
    for (std::size_t a = 0; a < th.size(); ++a) {
      const double x1 = center[0] + rho * std::cos(th[a]), x2 = center[1] + rho * std::sin(th[a]);
      const double w = wrho * wth[a] * phir;
      const double v = f.value(x1, x2);
      const auto g = f.grad(x1, x2);
      lhs -= w * f.laplacian(x1, x2) * v;
      bphi += w * v * v;
      bgrad += w * (g[0] * g[0] + g[1] * g[1]);
    }
  }
  bphi *= ep.lambda1 / (2.0 * r * r);
  double bnd = 0.0;
  const double dn = ep.profile_derivative(2.0) / r;
  for (std::size_t a = 0; a < th.size(); ++a) {
    const double v = f.value(center[0] + R * std::cos(th[a]), center[1] + R * std::sin(th[a]));
    bnd += wth[a] * R * v * v * dn;
  }
  bnd *= 0.5;
  IdentityCheck out{};
  out.lhs = lhs;
  out.bulk_phi = bphi;
  out.bulk_grad = bgrad;
  out.boundary = bnd;
  out.rhs = bphi + bgrad + bnd;
  const double denom = std::abs(out.lhs) + std::abs(out.rhs);
  out.defect = denom > 0.0 ? std::abs(out.lhs - out.rhs) / denom : 0.0;
  return out;
}

void write_scale_csv(std::ostream& os, std::span<const ScaleRow> rows) {
  os << "j,aggregation,kind,value\n";
  for (const auto& r : rows)
    os << format_double(r.j) << ',' << r.aggregation << ',' << r.kind << ',' << format_double(r.value) << '\n';
}

}  // namespace mns::loc
