#include "radgrowth/cantor.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <unordered_map>

#include "radgrowth/errors.hpp"

namespace radgrowth::cantor {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

}  // namespace

double IntervalSet::total_length() const {
  double s = 0.0;
  for (const auto& iv : intervals) s += iv.length();
  return s;
}

bool IntervalSet::contains(double x) const {
  auto it = std::lower_bound(intervals.begin(), intervals.end(), x,
                             [](const Interval& iv, double v) { return iv.hi < v; });
  return it != intervals.end() && it->lo <= x;
}

IntervalSet IntervalSet::merged() const {
  IntervalSet out;
  out.generation = generation;
  for (const auto& iv : intervals) {
    if (!out.intervals.empty() && iv.lo <= out.intervals.back().hi)
      out.intervals.back().hi = std::max(out.intervals.back().hi, iv.hi);
    else
      out.intervals.push_back(iv);
  }
  return out;
}

CantorScheme::CantorScheme(double origin, std::vector<double> lengths, std::vector<long> branches,
                           Placement placement)
    : origin_(origin), lengths_(std::move(lengths)), branches_(std::move(branches)), placement_(placement) {
  if (lengths_.empty()) throw ValidationError("a Cantor scheme needs l_0");
  if (branches_.size() + 1 != lengths_.size())
    throw ValidationError("a Cantor scheme needs one branch count per generation step");
  for (std::size_t s = 0; s < lengths_.size(); ++s) {
    if (!(lengths_[s] > 0.0)) throw ValidationError("scheme lengths must be positive");
    if (s + 1 < lengths_.size()) {
      if (branches_[s] < 1) throw ValidationError("branch counts must be positive");
      if (!(static_cast<double>(branches_[s]) * lengths_[s + 1] < lengths_[s]))
        throw ValidationError("children do not fit: k_s l_{s+1} >= l_s at s = " + std::to_string(s));
    }
  }
}

CantorScheme CantorScheme::middle_thirds(int depth) { return symmetric_uniform(1.0 / 3.0, 2, depth); }

CantorScheme CantorScheme::symmetric_uniform(double ratio, long k, int depth) {
  if (depth < 0) throw DomainError("negative depth");
  std::vector<double> l{1.0};
  for (int s = 1; s <= depth; ++s) l.push_back(std::pow(ratio, s));
  return CantorScheme(0.0, std::move(l), std::vector<long>(static_cast<std::size_t>(depth), k), Placement::symmetric);
}

double CantorScheme::length(int s) const {
  if (s < 0 || s > depth()) throw DomainError("generation out of range");
  return lengths_[static_cast<std::size_t>(s)];
}

long CantorScheme::branches(int s) const {
  if (s < 0 || s >= depth()) throw DomainError("generation out of range");
  return branches_[static_cast<std::size_t>(s)];
}

double CantorScheme::count(int s) const {
  if (s < 0 || s > depth()) throw DomainError("generation out of range");
  double n = 1.0;
  for (int t = 0; t < s; ++t) n *= static_cast<double>(branches_[static_cast<std::size_t>(t)]);
  return n;
}

IntervalSet build_generation(const CantorScheme& scheme, int s) {
  if (s < 0 || s > scheme.depth()) throw DomainError("generation beyond the scheme depth");
  if (scheme.count(s) > kMaxIntervals) throw ResourceError("generation " + std::to_string(s) + " exceeds 1e6 intervals");
  std::vector<double> lefts{scheme.origin()};
  for (int t = 0; t < s; ++t) {
    const double L = scheme.length(t), l = scheme.length(t + 1);
    const long k = scheme.branches(t);
    double step;
    double offset = 0.0;
    if (scheme.placement() == Placement::left_equispaced) {
      step = L / static_cast<double>(k);
    } else if (k == 1) {
      step = 0.0;
      offset = 0.5 * (L - l);
    } else {
      step = l + (L - static_cast<double>(k) * l) / static_cast<double>(k - 1);
    }
    std::vector<double> next;
    next.reserve(lefts.size() * static_cast<std::size_t>(k));
    for (double a : lefts)
      for (long i = 0; i < k; ++i) next.push_back(a + offset + static_cast<double>(i) * step);
    lefts.swap(next);
  }
  IntervalSet out;
  out.generation = s;
  const double l = scheme.length(s);
  out.intervals.reserve(lefts.size());
  for (double a : lefts) out.intervals.push_back({a, a + l});
  return out;
}

double DyadicCube::side() const { return std::ldexp(1.0, -level); }

namespace {

enum class Status { empty, partial, full };

struct AxisData {
  std::vector<Interval> iv;
  bool right_open;
};

struct Key {
  std::array<std::int64_t, 4> v;
  bool operator==(const Key& o) const { return v == o.v; }
};

struct KeyHash {
  std::size_t operator()(const Key& k) const noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (auto x : k.v) {
      h ^= static_cast<std::uint64_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

class NetDp {
 public:
  NetDp(std::span<const Axis> axes, const GaugeFunction& h, double delta, int max_depth)
      : k_(static_cast<int>(axes.size())), n_(max_depth) {
    for (const auto& a : axes) axes_.push_back({a.set.merged().intervals, a.right_open});
    hl_.resize(static_cast<std::size_t>(n_ + 2), inf);
    full_.resize(static_cast<std::size_t>(n_ + 2), inf);
    for (int n = 0; n <= n_; ++n) {
      const double side = std::ldexp(1.0, -n);
      if (side < delta) hl_[static_cast<std::size_t>(n)] = h(side);
    }
    full_[static_cast<std::size_t>(n_)] = hl_[static_cast<std::size_t>(n_)];
    for (int n = n_ - 1; n >= 0; --n)
      full_[static_cast<std::size_t>(n)] =
          std::min(hl_[static_cast<std::size_t>(n)], std::ldexp(full_[static_cast<std::size_t>(n + 1)], k_));
  }

  Status classify(int axis, int level, std::int64_t idx) const {
    const auto& ax = axes_[static_cast<std::size_t>(axis)];
    const double a = std::ldexp(static_cast<double>(idx), -level);
    const double b = std::ldexp(static_cast<double>(idx + 1), -level);
    auto it = std::lower_bound(ax.iv.begin(), ax.iv.end(), a, [&](const Interval& iv, double v) {
      return ax.right_open ? iv.hi <= v : iv.hi < v;
    });
    if (it == ax.iv.end() || !(it->lo < b)) return Status::empty;
    if (it->lo <= a && it->hi >= b) return Status::full;
    return Status::partial;
  }

  double cost(int level, const std::array<std::int64_t, 3>& idx, const std::array<Status, 3>& st) {
    bool all_full = true, any_full = false;
    for (int i = 0; i < k_; ++i) {
      all_full = all_full && st[i] == Status::full;
      any_full = any_full || st[i] == Status::full;
    }
    if (all_full) return full_[static_cast<std::size_t>(level)];
    const double whole = hl_[static_cast<std::size_t>(level)];
    if (level == n_) return whole;
    Key key{};
    if (any_full) {
      key.v[0] = level;
      for (int i = 0; i < k_; ++i) key.v[static_cast<std::size_t>(i + 1)] = st[i] == Status::full ? -1 : idx[i];
      if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    }
    if (++visited_ > kMaxNodes) throw ResourceError("dyadic tree exceeds the node budget");
    std::array<std::array<Status, 2>, 3> cs{};
    for (int i = 0; i < k_; ++i) {
      for (int c = 0; c < 2; ++c)
        cs[i][c] = st[i] == Status::full ? Status::full : classify(i, level + 1, 2 * idx[i] + c);
    }
    double sum = 0.0;
    for (int mask = 0; mask < (1 << k_) && sum < whole; ++mask) {
      std::array<std::int64_t, 3> ci{};
      std::array<Status, 3> cst{};
      bool empty = false;
      for (int i = 0; i < k_; ++i) {
        const int c = (mask >> i) & 1;
        ci[i] = 2 * idx[i] + c;
        cst[i] = cs[i][c];
        empty = empty || cst[i] == Status::empty;
      }
      if (!empty) sum += cost(level + 1, ci, cst);
    }
    const double best = std::min(whole, sum);
    if (any_full) memo_.emplace(key, best);
    return best;
  }

  template <class Visit>
  void for_each_root(Visit&& visit) {
    std::array<std::int64_t, 3> lo{}, hi{};
    for (int i = 0; i < k_; ++i) {
      const auto& iv = axes_[static_cast<std::size_t>(i)].iv;
      if (iv.empty()) return;
      lo[i] = static_cast<std::int64_t>(std::floor(iv.front().lo));
      hi[i] = static_cast<std::int64_t>(std::floor(iv.back().hi));
    }
    std::array<std::int64_t, 3> idx = lo;
    while (true) {
      std::array<Status, 3> st{};
      bool empty = false;
      for (int i = 0; i < k_; ++i) {
        st[i] = classify(i, 0, idx[i]);
        empty = empty || st[i] == Status::empty;
      }
      if (!empty) visit(idx, st);
      int i = 0;
      for (; i < k_; ++i) {
        if (++idx[i] <= hi[i]) break;
        idx[i] = lo[i];
      }
      if (i == k_) break;
    }
  }

  double total() {
    double s = 0.0;
    for_each_root([&](const auto& idx, const auto& st) { s += cost(0, idx, st); });
    return s;
  }

  void emit(int level, const std::array<std::int64_t, 3>& idx, const std::array<Status, 3>& st,
            std::vector<DyadicCube>& out) {
    const double whole = hl_[static_cast<std::size_t>(level)];
    const double best = cost(level, idx, st);
    if (whole <= best) {
      if (out.size() >= static_cast<std::size_t>(kMaxIntervals)) throw ResourceError("cover exceeds 1e6 cubes");
      DyadicCube c;
      c.level = level;
      c.index.assign(idx.begin(), idx.begin() + k_);
      out.push_back(std::move(c));
      return;
    }
    for (int mask = 0; mask < (1 << k_); ++mask) {
      std::array<std::int64_t, 3> ci{};
      std::array<Status, 3> cst{};
      bool empty = false;
      for (int i = 0; i < k_; ++i) {
        const int c = (mask >> i) & 1;
        ci[i] = 2 * idx[i] + c;
        cst[i] = st[i] == Status::full ? Status::full : classify(i, level + 1, ci[i]);
        empty = empty || cst[i] == Status::empty;
      }
      if (!empty) emit(level + 1, ci, cst, out);
    }
  }

  std::vector<DyadicCube> cover() {
    std::vector<DyadicCube> out;
    for_each_root([&](const auto& idx, const auto& st) { emit(0, idx, st, out); });
    return out;
  }

 private:
  static constexpr long kMaxNodes = 50000000;
  int k_;
  int n_;
  std::vector<AxisData> axes_;
  std::vector<double> hl_;
  std::vector<double> full_;
  std::unordered_map<Key, double, KeyHash> memo_;
  long visited_ = 0;
};

void check_net_args(std::span<const Axis> axes, double delta, int max_depth, int cap) {
  if (axes.empty() || axes.size() > 3) throw DomainError("net premeasure supports 1 to 3 axes");
  if (max_depth < 0 || max_depth > cap)
    throw ResourceError("dyadic depth " + std::to_string(max_depth) + " exceeds the cap " + std::to_string(cap));
  if (!(delta > std::ldexp(1.0, -max_depth)))
    throw DomainError("delta must exceed 2^-max_depth so that some cube side is admissible");
}

}  // namespace

double net_premeasure(const IntervalSet& set, const GaugeFunction& h, double delta, int max_depth) {
  const Axis ax{set, false};
  std::span<const Axis> axes(&ax, 1);
  check_net_args(axes, delta, max_depth, kMaxDepth1D);
  NetDp dp(axes, h, delta, max_depth);
  return dp.total();
}

double net_premeasure(std::span<const Axis> axes, const GaugeFunction& h, double delta, int max_depth) {
  check_net_args(axes, delta, max_depth, axes.size() == 1 ? kMaxDepth1D : kMaxDepthPerAxis);
  NetDp dp(axes, h, delta, max_depth);
  return dp.total();
}

NetResult net_premeasure_cover(std::span<const Axis> axes, const GaugeFunction& h, double delta, int max_depth) {
  check_net_args(axes, delta, max_depth, axes.size() == 1 ? kMaxDepth1D : kMaxDepthPerAxis);
  NetDp dp(axes, h, delta, max_depth);
  NetResult res;
  res.value = dp.total();
  res.cover = dp.cover();
  return res;
}

double interval_premeasure(const IntervalSet& set, const GaugeFunction& h, double delta) {
  if (!(delta > 0.0)) throw DomainError("delta must be positive");
  const auto iv = set.merged().intervals;
  const std::size_t M = iv.size();
  std::vector<double> best(M + 1, inf);
  best[0] = 0.0;
  for (std::size_t i = 1; i <= M; ++i) {
    const auto& cur = iv[i - 1];
    const double L = cur.length();
    if (L >= delta) {
      const double n = std::floor(L / delta) + 1.0;
      best[i] = best[i - 1] + n * h(L / n);
      continue;
    }
    for (std::size_t j = i; j >= 1; --j) {
      const double span = cur.hi - iv[j - 1].lo;
      if (!(span < delta)) break;
      best[i] = std::min(best[i], best[j - 1] + h(span));
    }
  }
  return best[M];
}

LemmaABounds lemma_a_bounds(const CantorScheme& scheme, const GaugeFunction& lam) {
  const int S = scheme.depth();
  if (S < 3) throw DomainError("mass ratio bounds need depth >= 3");
  LemmaABounds out;
  double a = inf;
  for (int s = 0; s < S; ++s) {
    const double l1 = scheme.length(s + 1), l0 = scheme.length(s);
    const double ref = l1 / lam(l1);
    constexpr int grid = 256;
    for (int i = 0; i <= grid; ++i) {
      const double l = l1 * std::pow(l0 / l1, static_cast<double>(i) / grid);
      a = std::min(a, lam(l) / l * ref);
    }
  }
  if (!(a > 0.0)) throw ValidationError("mass ratio condition fails: a <= 0");
  out.a = a;
  out.s_star = S / 2;
  double lo = inf, up = inf;
  for (int s = 0; s <= S; ++s) {
    const double m = scheme.count(s) * lam(scheme.length(s));
    out.mass.push_back(m);
    lo = std::min(lo, m);
    if (s >= out.s_star) up = std::min(up, m);
  }
  out.lower = 0.5 * a * lo;
  out.upper = up;
  return out;
}

double scheme_mass(const CantorScheme& scheme, const GaugeFunction& h, int s, int dims) {
  return std::pow(scheme.count(s), dims) * h(scheme.length(s));
}

double hatano_criterion(const CantorScheme& scheme, const GaugeFunction& h, int m, int Q) {
  if (scheme.placement() != Placement::symmetric) throw ValidationError("count criterion needs a symmetric scheme");
  if (m < 1) throw DomainError("product power must be positive");
  if (Q < 1 || Q > scheme.depth()) throw DomainError("depth Q outside the scheme");
  double best = inf;
  for (int q = (Q + 1) / 2; q <= Q; ++q) best = std::min(best, scheme_mass(scheme, h, q, m));
  return best;
}

ProductCheck product_premeasure_check(const IntervalSet& F, int k, const GaugeFunction& nu, double delta) {
  if (k < 1 || k > 3) throw DomainError("product check supports k in 1..3");
  const GaugeFunction h(
      "t^" + std::to_string(k - 1) + "*" + nu.name(),
      [nu, k](double t) { return std::pow(t, k - 1) * nu(t); }, nu.T());
  std::vector<Axis> axes{{F, false}};
  IntervalSet unit;
  unit.intervals.push_back({0.0, 1.0});
  for (int i = 1; i < k; ++i) axes.push_back({unit, true});
  ProductCheck out;
  out.k = k;
  out.delta = delta;
  out.nu_premeasure_F = net_premeasure(F, nu, delta);
  out.nu_refined = net_premeasure(F, nu, delta / 2);
  out.h_premeasure_E = net_premeasure(axes, h, delta);
  out.h_refined = net_premeasure(axes, h, delta / 2);
  const double eps = std::min(out.nu_premeasure_F, out.nu_refined);
  if (eps >= 0.05) out.consistent = std::min(out.h_premeasure_E, out.h_refined) >= eps / 10.0;
  return out;
}

namespace {

using Unit = std::int64_t;
struct UnitInterval {
  Unit lo, hi;
};

// Arcs of B_k in [0, 2^{K+1}) units of pi 2^{-K}.
std::vector<UnitInterval> b_arcs(int k, int K) {
  const Unit period = Unit{1} << (K - k + 1);  // 2 alpha_k
  const Unit w = Unit{1} << (K - k - 2);       // alpha_k / 4
  const Unit top = Unit{1} << (K + 1);
  std::vector<UnitInterval> out{{0, w}};
  for (Unit c = period; c < top; c += period) out.push_back({c - w, c + w});
  out.push_back({top - w, top});
  return out;
}

std::vector<UnitInterval> intersect(const std::vector<UnitInterval>& a, const std::vector<UnitInterval>& b) {
  std::vector<UnitInterval> out;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const Unit lo = std::max(a[i].lo, b[j].lo), hi = std::min(a[i].hi, b[j].hi);
    if (lo < hi) out.push_back({lo, hi});
    (a[i].hi < b[j].hi ? i : j)++;
  }
  return out;
}

}  // namespace

GrowthCantor growth_cantor(std::span<const int> b) {
  if (b.empty() || b[0] != 1) throw ValidationError("growth Cantor sequence must start with b_1 = 1");
  for (std::size_t i = 1; i < b.size(); ++i)
    if (b[i] <= b[i - 1]) throw ValidationError("growth Cantor sequence must be strictly increasing");
  const int K = b.back() + 3;
  if (K > 60) throw ResourceError("b_J too large for exact arc arithmetic");
  const double pi = std::numbers::pi;

  std::vector<double> lengths;
  std::vector<long> branches;
  for (std::size_t j = 0; j < b.size(); ++j) {
    lengths.push_back(std::ldexp(pi / 4.0, -b[j]));
    if (j + 1 < b.size()) {
      const int gap = b[j + 1] - b[j];
      if (gap > 62) throw ResourceError("b gap too large");
      branches.push_back(gap == 1 ? 1L : (1L << gap) / 4);
    }
  }
  GrowthCantor out{std::vector<int>(b.begin(), b.end()),
                   CantorScheme(0.0, lengths, branches, Placement::left_equispaced), {}, {}};

  std::vector<UnitInterval> cur;
  for (std::size_t j = 0; j < b.size(); ++j) {
    const auto arcs = b_arcs(b[j], K);
    cur = j == 0 ? arcs : intersect(cur, arcs);
    IntervalSet set;
    set.generation = static_cast<int>(j + 1);
    const Unit half = Unit{1} << (K - b[j] - 2);
    double count = 0.0;
    std::vector<UnitInterval> merged;
    for (const auto& u : cur) {
      if (!merged.empty() && u.lo <= merged.back().hi)
        merged.back().hi = std::max(merged.back().hi, u.hi);
      else
        merged.push_back(u);
    }
    for (const auto& u : merged) {
      if ((u.hi - u.lo) % half != 0) throw ValidationError("arc length is not a multiple of the half-interval");
      count += static_cast<double>((u.hi - u.lo) / half);
      set.intervals.push_back({std::ldexp(pi * static_cast<double>(u.lo), -K), std::ldexp(pi * static_cast<double>(u.hi), -K)});
    }
    if (set.size() > kMaxIntervals) throw ResourceError("growth Cantor generation exceeds 1e6 arcs");
    out.generations.push_back(std::move(set));
    out.half_interval_counts.push_back(count);
  }
  return out;
}

CantorScheme positive_cantor(std::span<const int> d) {
  if (d.empty()) throw ValidationError("positive Cantor construction needs d_1");
  std::vector<double> lengths{1.0};
  std::vector<long> branches;
  int prev = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const int k = static_cast<int>(i + 1);
    if (d[i] <= k) throw ValidationError("d_k must exceed k; d_" + std::to_string(k) + " = " + std::to_string(d[i]));
    if (d[i] <= prev) throw ValidationError("d sequence must be strictly increasing");
    if (d[i] - prev - 1 > 62) throw ResourceError("d gap too large");
    branches.push_back(1L << (d[i] - prev - 1));
    lengths.push_back(std::ldexp(1.0, -d[i]));
    prev = d[i];
  }
  return CantorScheme(1.0, std::move(lengths), std::move(branches), Placement::left_equispaced);
}

void write_csv(std::ostream& os, std::span<const IntervalSet> sets) {
  os << "generation,left,right\n";
  const auto old = os.precision(17);
  for (const auto& s : sets)
    for (const auto& iv : s.intervals) os << s.generation << ',' << iv.lo << ',' << iv.hi << '\n';
  os.precision(old);
}

}  // namespace radgrowth::cantor
