#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "radgrowth/majorant.hpp"

namespace radgrowth::cantor {

using majorant::GaugeFunction;

enum class Placement { left_equispaced, symmetric };

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const noexcept { return hi - lo; }
};

// Generation s of a Cantor construction: closed intervals sorted by left end.
struct IntervalSet {
  int generation = 0;
  std::vector<Interval> intervals;

  std::size_t size() const noexcept { return intervals.size(); }
  bool empty() const noexcept { return intervals.empty(); }
  double total_length() const;
  bool contains(double x) const;
  // Maximal intervals after joining touching neighbours.
  IntervalSet merged() const;
};

// Nested generations C_0 = [origin, origin + l_0] ⊃ C_1 ⊃ ...; every
// generation-s interval has k_s children of length l_{s+1}.
class CantorScheme {
 public:
  CantorScheme(double origin, std::vector<double> lengths, std::vector<long> branches, Placement placement);

  static CantorScheme middle_thirds(int depth);
  // l_s = ratio^s, k_s = k, equal gaps.
  static CantorScheme symmetric_uniform(double ratio, long k, int depth);

  int depth() const noexcept { return static_cast<int>(lengths_.size()) - 1; }
  double origin() const noexcept { return origin_; }
  double length(int s) const;
  long branches(int s) const;
  // N_s = k_0 k_1 ... k_{s-1}, as a double so that huge schemes still report.
  double count(int s) const;
  Placement placement() const noexcept { return placement_; }

 private:
  double origin_;
  std::vector<double> lengths_;
  std::vector<long> branches_;
  Placement placement_;
};

inline constexpr double kMaxIntervals = 1e6;

IntervalSet build_generation(const CantorScheme& scheme, int s);

inline constexpr int kMaxDepth1D = 24;
inline constexpr int kMaxDepthPerAxis = 12;

// One axis of a product set; `right_open` turns [lo, hi] into [lo, hi).
struct Axis {
  IntervalSet set;
  bool right_open = false;
};

// Half-open dyadic cube prod_i [idx_i 2^-level, (idx_i + 1) 2^-level).
struct DyadicCube {
  int level = 0;
  std::vector<std::int64_t> index;
  double side() const;
};

struct NetResult {
  double value = 0.0;
  std::vector<DyadicCube> cover;  // filled only on request
};

// min sum h(side) over covers by half-open dyadic cubes of side < delta,
// exact over the dyadic tree down to max_depth.
double net_premeasure(const IntervalSet& set, const GaugeFunction& h, double delta, int max_depth = kMaxDepth1D);
double net_premeasure(std::span<const Axis> axes, const GaugeFunction& h, double delta,
                      int max_depth = kMaxDepthPerAxis);
NetResult net_premeasure_cover(std::span<const Axis> axes, const GaugeFunction& h, double delta, int max_depth);

// Hausdorff delta-premeasure of a finite union of intervals under arbitrary
// interval covers of diameter < delta. Exact for concave h.
double interval_premeasure(const IntervalSet& set, const GaugeFunction& h, double delta);

struct LemmaABounds {
  double a = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  int s_star = 0;
  std::vector<double> mass;  // N_s lambda(l_s), s = 0..depth
};

LemmaABounds lemma_a_bounds(const CantorScheme& scheme, const GaugeFunction& lam);

// N_s^dims * h(l_s): the mass proxy of the product of `dims` copies.
double scheme_mass(const CantorScheme& scheme, const GaugeFunction& h, int s, int dims = 1);

// min over q in [Q/2, Q] of (k_1...k_q)^m h(l_q); symmetric schemes only.
double hatano_criterion(const CantorScheme& scheme, const GaugeFunction& h, int m, int Q);

struct ProductCheck {
  int k = 0;
  double delta = 0.0;
  double nu_premeasure_F = 0.0;
  double h_premeasure_E = 0.0;
  double nu_refined = 0.0;  // at delta / 2
  double h_refined = 0.0;
  bool consistent = true;   // no collapse of E while F stays above 0.05
};

// F x [0,1)^{k-1} under h(t) = t^{k-1} nu(t) against F under nu.
ProductCheck product_premeasure_check(const IntervalSet& F, int k, const GaugeFunction& nu, double delta);

struct GrowthCantor {
  std::vector<int> b;
  CantorScheme scheme;                 // per generation-1 half-interval
  std::vector<IntervalSet> generations;  // C_1..C_J as merged arcs in [0, 2pi)
  std::vector<double> half_interval_counts;  // total over [0, 2pi)
};

GrowthCantor growth_cantor(std::span<const int> b);

// F_k on [1, 2] from d_1..d_K: every interval of F_{k-1} is cut into
// 2^{d_k - d_{k-1}} pieces and every second one is kept.
CantorScheme positive_cantor(std::span<const int> d);

void write_csv(std::ostream& os, std::span<const IntervalSet> sets);

}  // namespace radgrowth::cantor
