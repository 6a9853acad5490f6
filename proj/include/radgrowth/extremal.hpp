#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "radgrowth/geometry.hpp"
#include "radgrowth/kernel.hpp"
#include "radgrowth/majorant.hpp"

namespace radgrowth::extremal {

// alpha_k = pi 2^{-k}
double alpha(int k);

enum class SectorKind { S, T, B };

// Unions of 2^k azimuth arcs. With x = (phi / pi) 2^k mod 2:
//   S_k: x in [0, 1)          (half-open)
//   T_k: x in [1/4, 3/4]      (closed)
//   B_k: x in [0, 1/4] or [7/4, 2)  (closed arcs about multiples of 2 alpha_k)
struct SectorSet {
  SectorKind kind;
  int k;
  bool contains(double phi) const;
};

enum class SphereKind { E, F, H };

// E_k: azimuth in S_k; F_k: azimuth in T_k and t >= 3/4; H_k: azimuth in
// B_k and t >= 3/4, with t = sqrt(eta1^2 + eta2^2).
struct SphereSector {
  SphereKind kind;
  int k;
  bool contains(const SpherePoint& eta) const;
};

bool sector_membership(const SectorSet& set, double phi);
bool sector_membership(const SphereSector& set, const SpherePoint& eta);

// A_k: rotation of the (x1, x2) plane by alpha_k.
class BlockRotation {
 public:
  explicit BlockRotation(int k) : k_(k) {}
  double angle() const { return alpha(k_); }
  std::vector<double> apply(std::span<const double> x) const;
  std::vector<double> inverse(std::span<const double> x) const;
  BallPoint apply(const BallPoint& x) const;
  BallPoint inverse(const BallPoint& x) const;

 private:
  int k_;
};

// f_k as azimuth steps: +1 on S_k, -1 elsewhere.
kernel::AzimuthSteps square_wave(int k);

// Largest k accepted by u_k_eval for a given dimension and method.
int max_k(Dim m, kernel::QuadMethod method);

// Closed form of u_k in the plane: (2/pi) atan2(2 Im w, 1 - |w|^2) with
// w = (r e^{i theta})^{2^k}.
double u_k_planar(int k, double r, double theta);

kernel::Estimate u_k_eval(Dim m, int k, const BallPoint& x, const kernel::QuadratureSpec& q);
// h_k(x) = u_k(A_{k+1} x)
kernel::Estimate h_k_eval(Dim m, int k, const BallPoint& x, const kernel::QuadratureSpec& q);

struct Clause {
  std::string name;
  bool pass = false;
  double value = 0.0;      // the measured quantity
  double bound = 0.0;      // what it is compared against
  double tolerance = 0.0;
  long samples = 0;
  std::string witness;     // worst sample point
};

struct LemmaEx1Record {
  int m = 0;
  int d = 1;
  std::vector<int> ks;
  // c_hat[d-1][i]: max |u_k| 2^{kd} (1-|x|)^d over the samples of ks[i], d = 1..3
  std::array<std::vector<double>, 3> c_hat_per_k;
  std::array<double, 3> c_hat{};
  double a_hat = 0.0;
  Clause a, b, c, d_clause;
  // m = 2: max |quadrature - closed form| over every evaluated sample
  bool oracle_checked = false;
  double oracle_max_diff = 0.0;
  Clause oracle;
  kernel::QuadratureSpec quad;

  bool pass() const;
  // First failing clause, or nullptr.
  const Clause* failure() const;
};

struct LemmaEx1Options {
  int k_lo = 2, k_hi = 8;
  int d = 1;
  int sample_count = 8;  // random directions per k
  std::uint64_t seed = 1;
  kernel::QuadratureSpec quad{};
};

// Evaluates every clause without throwing on failure.
LemmaEx1Record lemma_ex1_evaluate(Dim m, const LemmaEx1Options& opt);
// As above; throws CertificationFailure naming the first failing clause.
LemmaEx1Record lemma_ex1_report(Dim m, const LemmaEx1Options& opt);

struct ExtremalSeries {
  majorant::Majorant v;
  Dim m;
  double A1 = 4.0;
  std::vector<int> b;  // b_1 < b_2 < ...
  kernel::QuadratureSpec quad;
  // Empirical c_{d,m} for d = 1..3 used by the tail bound.
  std::array<double, 3> c_hat{};
  double D_hat = 2.0;
  int d = 2;  // ceil(log2 D_hat) + 1 unless overridden
  double rel_tol = 1e-3;
};

// b_n from the majorant, truncated to the evaluable range of the quadrature method.
ExtremalSeries make_series(const majorant::Majorant& v, Dim m, double A1, std::array<double, 3> c_hat,
                           const kernel::QuadratureSpec& quad, double rel_tol = 1e-3);

struct SeriesValue {
  double value = 0.0;
  double quad_error = 0.0;
  double tail = 0.0;
  int terms = 0;
  double error() const { return quad_error + tail; }
};

// Bound on g(2^{b}) |h_b(x)| at 1 - |x| = eps from (a) and (c).
double term_bound(const ExtremalSeries& s, int b, double eps);
// Bound on the omitted terms after the first n.
double tail_bound(const ExtremalSeries& s, int n, double eps);
// Smallest number of terms whose tail is within rel_tol v(|x|);
// ResourceError if none is available.
int truncation(const ExtremalSeries& s, double r);

SeriesValue series_eval(const ExtremalSeries& s, const BallPoint& x, int extra_terms = 0);

// Azimuth arcs of C_depth = B_{b_1} ∩ ... ∩ B_{b_depth}.
std::vector<std::pair<double, double>> growth_arcs(const ExtremalSeries& s, int depth);
// Centers of the surviving arcs with the remaining coordinates zero.
std::vector<SpherePoint> sample_growth_directions(const ExtremalSeries& s, int depth, int count,
                                                  std::uint64_t seed);
// 1 - a_hat 2^{-b_n}, n = 1..depth, dropping radii closer than 1e-6 to the boundary.
std::vector<double> growth_schedule(const ExtremalSeries& s, double a_hat, int depth);

struct GrowthScan {
  std::vector<double> r, u, v, ratio, error;
  double min_ratio = 0.0;
};

// Validates eta in H_{b_n} for every scheduled n and t^2 > 1/4.
GrowthScan growth_scan(const ExtremalSeries& s, const SpherePoint& eta, std::span<const double> r_schedule);

double tau_neighborhood(double K, double D, double c, Dim m);

struct TauCheck {
  double tau = 0.0;
  long pairs = 0;       // sampled pairs whose base point satisfies u(x) > c v(|x|)
  long violations = 0;
  std::string witness;
};

TauCheck tau_propagation_check(const ExtremalSeries& s, double K_hat, double c, std::span<const BallPoint> bases,
                               int per_base, std::uint64_t seed);

}  // namespace radgrowth::extremal
