#include "mns/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "mns/io.hpp"
#include "mns/ops.hpp"
#include "mns/random.hpp"

namespace mns::lp {

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

double chi(double r) {
  if (r <= 1.0) return 1.0;
  if (r >= 4.0 / 3.0) return 0.0;
  return smooth_step(3.0 * (4.0 / 3.0 - r));
}

double psi(double r) { return chi(0.5 * r) - chi(r); }

FilterBank::FilterBank(const Grid& grid, bool homogeneous) : grid_(grid), homogeneous_(homogeneous) {
  const double dk = grid.dk();
  const double kmax = dk * std::sqrt(2.0) * static_cast<double>(grid.n() / 2);
  // Homogeneous: 4/3 * 2^b < dk, so the lowest block keeps only k = 0.
  const int first = homogeneous ? static_cast<int>(std::floor(std::log2(0.75 * dk))) : 0;
  int top = static_cast<int>(std::ceil(std::log2(kmax))) - 1;
  while (std::ldexp(1.0, top + 1) < kmax) ++top;
  while (std::ldexp(1.0, top) >= kmax) --top;
  if (top - first + 1 < 3) throw Error("grid too small to host three dyadic rings");
  j_low_ = first - 1;
  j_max_ = top;

  const std::size_t sz = grid.size();
  masks_.assign(static_cast<std::size_t>(j_max_ - j_low_ + 1), std::vector<double>(sz, 0.0));
  std::vector<double> total(sz, 0.0);
  for (std::size_t idx = 0; idx < sz; ++idx) {
    const double k = grid.kmag(idx);
    masks_[0][idx] = chi(std::ldexp(k, -first));
    for (int j = first; j <= j_max_; ++j) masks_[static_cast<std::size_t>(j - j_low_)][idx] = psi(std::ldexp(k, -j));
    for (const auto& m : masks_) total[idx] += m[idx];
  }
  for (auto& m : masks_)
    for (std::size_t idx = 0; idx < sz; ++idx) m[idx] /= total[idx];
}

std::vector<int> FilterBank::indices() const {
  std::vector<int> out;
  for (int j = j_low_; j <= j_max_; ++j) out.push_back(j);
  return out;
}

std::span<const double> FilterBank::mask(int j) const {
  if (!contains(j)) throw OutOfRange("dyadic index " + std::to_string(j) + " outside realized range");
  return masks_[static_cast<std::size_t>(j - j_low_)];
}

FilterBank build_filter_bank(const Grid& grid, bool homogeneous) { return FilterBank(grid, homogeneous); }

namespace {

void require_bank_grid(const FilterBank& bank, const ScalarField& f) {
  if (bank.grid() != f.grid()) throw GridMismatch();
}

ScalarField masked(const ScalarField& f, std::span<const double> m) {
  const ScalarField s = ensure_spectral(f);
  auto c = s.coeffs();
  std::vector<cplx> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out[i] = m[i] * c[i];
  return ScalarField::spectral(s.grid(), std::move(out));
}

double lq_sum(const std::vector<double>& terms, double q) {
  if (std::isinf(q)) {
    double m = 0.0;
    for (double t : terms) m = std::max(m, t);
    return m;
  }
  double s = 0.0;
  for (double t : terms) s += std::pow(t, q);
  return std::pow(s, 1.0 / q);
}

double inv(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

}  // namespace

ScalarField block(const FilterBank& bank, const ScalarField& f, int j) {
  require_bank_grid(bank, f);
  return masked(f, bank.mask(j));
}

ScalarField low_pass(const FilterBank& bank, const ScalarField& f, int j) {
  require_bank_grid(bank, f);
  if (j <= bank.j_low()) throw OutOfRange("low_pass index at or below the lowest block");
  if (j > bank.j_max()) return ensure_spectral(f);
  std::vector<double> m(bank.grid().size(), 0.0);
  for (int i = bank.j_low(); i < j; ++i) {
    auto mi = bank.mask(i);
    for (std::size_t k = 0; k < m.size(); ++k) m[k] += mi[k];
  }
  return masked(f, m);
}

std::vector<ScalarField> blocks(const FilterBank& bank, const ScalarField& f) {
  require_bank_grid(bank, f);
  const ScalarField s = ensure_spectral(f);
  std::vector<ScalarField> out;
  out.reserve(bank.block_count());
  for (int j : bank.indices()) out.push_back(masked(s, bank.mask(j)));
  return out;
}

ScalarField low_pass_at_scale(const ScalarField& f, double scale) {
  const Grid& g = f.grid();
  return apply_multiplier(f, [&](std::size_t idx) { return chi(g.kmag(idx) / scale); });
}

std::vector<double> block_l2_sq(const FilterBank& bank, const ScalarField& f) {
  require_bank_grid(bank, f);
  const ScalarField s = ensure_spectral(f);
  auto c = s.coeffs();
  const Grid& g = bank.grid();
  const double w = g.cell_area() / static_cast<double>(g.size());
  std::vector<double> out;
  out.reserve(bank.block_count());
  for (int j : bank.indices()) {
    auto m = bank.mask(j);
    double acc = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i)
      if (m[i] != 0.0) acc += m[i] * m[i] * std::norm(c[i]);
    out.push_back(acc * w);
  }
  return out;
}

std::vector<double> block_l2_sq(const FilterBank& bank, const VectorField& v) {
  auto out = block_l2_sq(bank, v[0]);
  for (std::size_t c = 1; c < 3; ++c) {
    auto b = block_l2_sq(bank, v[c]);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
  }
  return out;
}

NormSpec NormSpec::besov(double s, double p, double q, bool homogeneous) {
  NormSpec n;
  n.family = Family::Besov;
  n.s = s;
  n.p = p;
  n.q = q;
  n.homogeneous = homogeneous;
  return n;
}

NormSpec NormSpec::fourier_herz(double s, double p, double q, bool homogeneous) {
  NormSpec n = besov(s, p, q, homogeneous);
  n.family = Family::FourierHerz;
  return n;
}

NormSpec NormSpec::hlog(double s, double sigma, double alpha) {
  NormSpec n;
  n.family = Family::HlogSobolev;
  n.s = s;
  n.sigma = sigma;
  n.alpha = alpha;
  return n;
}

void NormSpec::validate() const {
  if (!(p >= 1.0) || !(q >= 1.0)) throw Error("norm indices p, q must lie in [1, inf]");
  if (family == Family::HlogSobolev && !(alpha > 0.0)) throw Error("log-weighted norm needs alpha > 0");
}

namespace {
void check_spec(const FilterBank& bank, const NormSpec& spec, Family family) {
  spec.validate();
  if (spec.family != family) throw Error("norm spec family does not match the requested norm");
  if (family != Family::HlogSobolev && spec.homogeneous != bank.homogeneous())
    throw Error("norm spec homogeneity does not match the filter bank");
}
}  // namespace

double besov_norm(const FilterBank& bank, const ScalarField& f, const NormSpec& spec) {
  check_spec(bank, spec, Family::Besov);
  std::vector<double> terms;
  if (spec.p == 2.0) {
    auto sq = block_l2_sq(bank, f);
    int idx = 0;
    for (int j : bank.indices()) terms.push_back(std::exp2(j * spec.s) * std::sqrt(sq[idx++]));
  } else {
    auto bl = blocks(bank, f);
    int idx = 0;
    for (int j : bank.indices()) terms.push_back(std::exp2(j * spec.s) * lp_norm(to_physical(bl[idx++]), spec.p));
  }
  return lq_sum(terms, spec.q);
}

double fourier_herz_norm(const FilterBank& bank, const ScalarField& f, const NormSpec& spec) {
  check_spec(bank, spec, Family::FourierHerz);
  require_bank_grid(bank, f);
  const ScalarField s = ensure_spectral(f);
  auto c = s.coeffs();
  const Grid& g = bank.grid();
  const double scale = g.cell_area() / (2.0 * std::numbers::pi);
  const double measure = g.dk() * g.dk();
  std::vector<double> terms;
  for (int j : bank.indices()) {
    auto m = bank.mask(j);
    double acc = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (m[i] == 0.0) continue;
      const double a = m[i] * std::abs(c[i]) * scale;
      if (std::isinf(spec.p))
        acc = std::max(acc, a);
      else
        acc += std::pow(a, spec.p);
    }
    const double lp = std::isinf(spec.p) ? acc : std::pow(acc * measure, 1.0 / spec.p);
    terms.push_back(std::exp2(j * spec.s) * lp);
  }
  return lq_sum(terms, spec.q);
}

double hlog_weight(int q, double s, double sigma, double alpha) {
  if (q <= 0) return std::exp2(2.0 * q * s);
  return std::pow(static_cast<double>(q), alpha) * std::exp2(2.0 * q * sigma);
}

namespace {
double hlog_from_blocks(const FilterBank& bank, const std::vector<double>& sq, double s, double sigma, double alpha) {
  if (!(alpha > 0.0)) throw Error("log-weighted norm needs alpha > 0");
  double acc = 0.0;
  int idx = 0;
  for (int q : bank.indices()) acc += hlog_weight(q, s, sigma, alpha) * sq[static_cast<std::size_t>(idx++)];
  return std::sqrt(acc);
}
}  // namespace

double hlog_norm(const FilterBank& bank, const ScalarField& f, double s, double sigma, double alpha) {
  return hlog_from_blocks(bank, block_l2_sq(bank, f), s, sigma, alpha);
}

double hlog_norm(const FilterBank& bank, const VectorField& v, double s, double sigma, double alpha) {
  return hlog_from_blocks(bank, block_l2_sq(bank, v), s, sigma, alpha);
}

double l2log_norm(const FilterBank& bank, const ScalarField& f) { return hlog_norm(bank, f, 0.0, 0.0, 1.0); }
double l2log_norm(const FilterBank& bank, const VectorField& v) { return hlog_norm(bank, v, 0.0, 0.0, 1.0); }

double norm(const FilterBank& bank, const ScalarField& f, const NormSpec& spec) {
  switch (spec.family) {
    case Family::Besov:
      return besov_norm(bank, f, spec);
    case Family::FourierHerz:
      return fourier_herz_norm(bank, f, spec);
    case Family::HlogSobolev:
      return hlog_norm(bank, f, spec.s, spec.sigma, spec.alpha);
  }
  return 0.0;
}

CheminLerner::CheminLerner(const FilterBank& bank, NormSpec spec, double r, double dt)
    : bank_(&bank), spec_(spec), r_(r), dt_(dt) {
  spec_.validate();
  if (spec_.family == Family::FourierHerz) throw Error("Chemin-Lerner norm supports Besov and log-weighted families");
  if (!(r == 2.0 || std::isinf(r))) throw Error("Chemin-Lerner time exponent must be 2 or infinity");
  if (!(dt > 0.0)) throw Error("Chemin-Lerner time step must be positive");
  acc_.assign(bank.block_count(), 0.0);
  last_.assign(bank.block_count(), 0.0);
}

void CheminLerner::add_block_sq(std::span<const double> block_sq) {
  std::vector<double> b(block_sq.size());
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = std::sqrt(block_sq[i]);
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (std::isinf(r_)) {
      acc_[i] = std::max(acc_[i], b[i]);
    } else if (count_ > 0) {
      acc_[i] += 0.5 * dt_ * (last_[i] * last_[i] + b[i] * b[i]);
    }
  }
  last_ = std::move(b);
  ++count_;
}

void CheminLerner::add(const ScalarField& f) {
  if (spec_.family == Family::Besov && spec_.p != 2.0) {
    auto bl = blocks(*bank_, f);
    std::vector<double> sq(bl.size());
    for (std::size_t i = 0; i < bl.size(); ++i) {
      const double v = lp_norm(to_physical(bl[i]), spec_.p);
      sq[i] = v * v;
    }
    add_block_sq(sq);
    return;
  }
  add_block_sq(block_l2_sq(*bank_, f));
}

void CheminLerner::add(const VectorField& v) {
  if (spec_.family == Family::Besov && spec_.p != 2.0)
    throw Error("vector Chemin-Lerner norm is defined for p = 2 only");
  add_block_sq(block_l2_sq(*bank_, v));
}

double CheminLerner::value() const {
  if (count_ == 0) throw Error("Chemin-Lerner norm of an empty time series");
  std::vector<double> tn(acc_.size());
  for (std::size_t i = 0; i < tn.size(); ++i) tn[i] = std::isinf(r_) ? acc_[i] : std::sqrt(acc_[i]);
  const auto idx = bank_->indices();
  if (spec_.family == Family::HlogSobolev) {
    double s = 0.0;
    for (std::size_t i = 0; i < tn.size(); ++i) s += hlog_weight(idx[i], spec_.s, spec_.sigma, spec_.alpha) * tn[i] * tn[i];
    return std::sqrt(s);
  }
  std::vector<double> terms(tn.size());
  for (std::size_t i = 0; i < tn.size(); ++i) terms[i] = std::exp2(idx[i] * spec_.s) * tn[i];
  return lq_sum(terms, spec_.q);
}

double chemin_lerner(const FilterBank& bank, std::span<const ScalarField> samples, const NormSpec& spec, double r,
                     double dt) {
  if (samples.empty()) throw Error("Chemin-Lerner norm of an empty time series");
  CheminLerner cl(bank, spec, r, dt);
  for (const auto& f : samples) cl.add(f);
  return cl.value();
}

BonyPieces bony(const FilterBank& bank, const ScalarField& u, const ScalarField& v) {
  require_same_grid(u, v);
  require_bank_grid(bank, u);
  const Grid& g = bank.grid();
  const std::size_t sz = g.size();
  std::vector<std::vector<double>> bu, bv;
  for (const auto& b : blocks(bank, u)) {
    const ScalarField p = to_physical(b);
    bu.emplace_back(p.values().begin(), p.values().end());
  }
  for (const auto& b : blocks(bank, v)) {
    const ScalarField p = to_physical(b);
    bv.emplace_back(p.values().begin(), p.values().end());
  }
  const std::size_t nb = bu.size();
  std::vector<double> tuv(sz, 0.0), tvu(sz, 0.0), rem(sz, 0.0);
  // Running sums S_{j-1} = blocks with position <= j-2.
  std::vector<double> su(sz, 0.0), sv(sz, 0.0);
  for (std::size_t j = 0; j < nb; ++j) {
    if (j >= 2)
      for (std::size_t i = 0; i < sz; ++i) {
        su[i] += bu[j - 2][i];
        sv[i] += bv[j - 2][i];
      }
    for (std::size_t i = 0; i < sz; ++i) {
      tuv[i] += su[i] * bv[j][i];
      tvu[i] += sv[i] * bu[j][i];
      double wide = bv[j][i];
      if (j > 0) wide += bv[j - 1][i];
      if (j + 1 < nb) wide += bv[j + 1][i];
      rem[i] += bu[j][i] * wide;
    }
  }
  auto finish = [&](std::vector<double>& x) { return dealias(to_spectral(ScalarField::physical(g, std::move(x)))); };
  return {finish(tuv), finish(tvu), finish(rem)};
}

const BernsteinBand& BernsteinReport::band(double a, double b, int order) const {
  for (const auto& bd : bands)
    if (bd.a == a && bd.b == b && bd.order == order) return bd;
  throw OutOfRange("no Bernstein band for the requested exponents");
}

BernsteinReport bernstein_ratios(const FilterBank& bank, int trials, std::uint64_t seed) {
  if (trials < 30) throw Error("Bernstein ratios need at least 30 trials");
  const Grid& g = bank.grid();
  const double inf = std::numeric_limits<double>::infinity();
  const std::vector<std::pair<double, double>> pairs = {{2.0, 2.0}, {2.0, inf}, {1.0, 2.0}};
  BernsteinReport rep;
  for (auto [a, b] : pairs)
    for (int k = 0; k <= 1; ++k) {
      BernsteinBand bd;
      bd.a = a;
      bd.b = b;
      bd.order = k;
      bd.min = inf;
      bd.max = 0.0;
      rep.bands.push_back(bd);
    }
  SplitMix64 rng(seed);
  for (int q = bank.first_ring(); q <= bank.j_max(); ++q) {
    std::vector<double> rmin(rep.bands.size(), inf), rmax(rep.bands.size(), 0.0);
    double grad_sum = 0.0;
    int used = 0;
    for (int t = 0; t < trials; ++t) {
      std::vector<double> noise(g.size());
      for (auto& x : noise) x = rng.normal();
      const ScalarField fq = block(bank, to_spectral(ScalarField::physical(g, std::move(noise))), q);
      const ScalarField f = to_physical(fq);
      const ScalarField f1 = to_physical(d1(fq));
      const ScalarField f2 = to_physical(d2(fq));
      const double base2 = lp_norm(f, 2.0);
      if (base2 == 0.0) continue;
      ++used;
      grad_sum += std::sqrt(l2_norm_sq(f1) + l2_norm_sq(f2)) / base2;
      for (std::size_t bi = 0; bi < rep.bands.size(); ++bi) {
        const auto& bd = rep.bands[bi];
        const double num = bd.order == 0 ? lp_norm(f, bd.b) : std::max(lp_norm(f1, bd.b), lp_norm(f2, bd.b));
        const double den = std::exp2(q * (bd.order + 2.0 * (inv(bd.a) - inv(bd.b)))) * lp_norm(f, bd.a);
        const double ratio = num / den;
        rmin[bi] = std::min(rmin[bi], ratio);
        rmax[bi] = std::max(rmax[bi], ratio);
      }
    }
    if (used == 0) continue;
    rep.rings.push_back(q);
    rep.grad_ratio_mean.push_back(grad_sum / used);
    for (std::size_t bi = 0; bi < rep.bands.size(); ++bi) {
      auto& bd = rep.bands[bi];
      bd.rings.push_back(q);
      bd.ring_min.push_back(rmin[bi]);
      bd.ring_max.push_back(rmax[bi]);
      bd.min = std::min(bd.min, rmin[bi]);
      bd.max = std::max(bd.max, rmax[bi]);
    }
  }
  return rep;
}

void write_norm_csv(std::ostream& os, std::span<const NormRow> rows) {
  os << "quantity,index,value\n";
  for (const auto& r : rows) os << r.quantity << ',' << r.index << ',' << format_double(r.value) << '\n';
}

std::vector<NormRow> block_norm_rows(const FilterBank& bank, const ScalarField& f, const std::string& quantity) {
  auto sq = block_l2_sq(bank, f);
  std::vector<NormRow> rows;
  int idx = 0;
  for (int j : bank.indices()) rows.push_back({quantity, j, std::sqrt(sq[static_cast<std::size_t>(idx++)])});
  return rows;
}

}  // namespace mns::lp
