#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "radgrowth/cantor.hpp"
#include "radgrowth/geometry.hpp"
#include "radgrowth/kernel.hpp"
#include "radgrowth/majorant.hpp"

namespace radgrowth::positive {

enum class Ambient { cube, sphere };

// Finite positive measure: atom i sits at coords[i*dim .. i*dim+dim).
class DiscreteMeasure {
 public:
  DiscreteMeasure(Ambient ambient, int dim) : ambient_(ambient), dim_(dim) {}

  // Throws ValidationError for a nonpositive weight, a point off the unit
  // sphere (sphere ambient) or outside [1,2]^dim (cube ambient).
  void add(std::span<const double> location, double weight);

  Ambient ambient() const noexcept { return ambient_; }
  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return weights_.size(); }
  std::span<const double> location(std::size_t i) const {
    return {coords_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
  }
  double weight(std::size_t i) const { return weights_[i]; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  double total_mass() const;

  // Mass of atoms in the closed box [lo, hi] (cube ambient).
  double box_mass(std::span<const double> lo, std::span<const double> hi) const;
  // Mass of atoms within geodesic distance rho of x (sphere ambient).
  double cap_mass(std::span<const double> x, double rho) const;

  // "x1,...,weight" rows with a header.
  void write_csv(std::ostream& os) const;
  static DiscreteMeasure read_csv(std::istream& is, Ambient ambient);

 private:
  Ambient ambient_;
  int dim_;
  std::vector<double> coords_;
  std::vector<double> weights_;
};

// f(phi_1, ..., phi_{m-1}) = (cos phi_1, sin phi_1 cos phi_2, ..., sin phi_1 ... sin phi_{m-1}).
class HypersphericalMap {
 public:
  explicit HypersphericalMap(Dim m) : m_(m) {}
  Dim m() const noexcept { return m_; }
  std::vector<double> operator()(std::span<const double> angles) const;
  // Angles with phi_i in [0, pi] for i < m-1 and phi_{m-1} in [0, 2pi).
  std::vector<double> inverse(std::span<const double> x) const;
  // max over random pairs in [1,2]^{m-1} of the distortion
  // max(ratio, 1/ratio), ratio = geodesic distance / Euclidean cube distance.
  double bilipschitz_estimate(int pairs, std::uint64_t seed) const;

 private:
  Dim m_;
};

inline constexpr double kMaxAtoms = 1e6;
inline constexpr int kMaxStage = 6;

// nu_k on [1,2]^{m-1}: density 2^{(m-1)k} on C_k = F_k^{m-1}, sampled at the
// centers of `cells` x ... x `cells` subcells of each cube of C_k.
DiscreteMeasure nu_k_build(Dim m, std::span<const int> d_seq, int k, int cells);

DiscreteMeasure pushforward(const HypersphericalMap& f, const DiscreteMeasure& nu);

// A stage of the construction for a majorant: d_1..d_k, F_k, nu_k, mu_k.
struct Stage {
  Dim m;
  majorant::Majorant v;
  int k;
  int cells;
  std::vector<int> d;
  cantor::CantorScheme scheme;
  DiscreteMeasure nu;
  DiscreteMeasure mu;
  // two cell diagonals, mapped to the sphere (f is 1-Lipschitz on the cube)
  double rho_min;
};

Stage build_stage(const majorant::Majorant& v, Dim m, int k, int cells);

// Centers of cubes of C_k (cube coordinates), `count` of them chosen by seed.
std::vector<std::vector<double>> surviving_centers(const Stage& s, int count, std::uint64_t seed);
// Cube point in the first gap of F_1 in every coordinate.
std::vector<double> gap_point(const Stage& s);

double poisson_measure_eval(const DiscreteMeasure& mu, const BallPoint& x);

struct PartsIdentity {
  double lhs = 0.0;             // sum w_i P~(r, phi_i)
  double rhs = 0.0;             // P~(r, pi) mu(S) + Abel sum of cap masses against P~ increments
  double rhs_quadrature = 0.0;  // same, with each increment integrated from Q_m numerically
  double gap = 0.0;             // |lhs - rhs| / (1 + |lhs|)
  double gap_quadrature = 0.0;
};

PartsIdentity parts_identity_check(const DiscreteMeasure& mu, double r, const SpherePoint& x);

struct MuCondition {
  double sup_ratio = 0.0;
  std::string witness;
  int samples = 0;
};

// sup over sampled caps of mu(B(x, rho)) / (sigma(B(x, rho)) g(pi / rho)),
// rho log-uniform in [rho_min, pi]; half the centers at atoms, half uniform.
MuCondition mu_condition_check(const DiscreteMeasure& mu, const majorant::Majorant& v, int ball_samples,
                               std::uint64_t seed, double rho_min);
// Single cap query; ValidationError below rho_min.
double mu_condition_ratio(const DiscreteMeasure& mu, const majorant::Majorant& v, std::span<const double> x,
                          double rho, double rho_min);

// 1 - r = 2^{-d_j}, j = 1..k, dropping those below 1e-6.
std::vector<double> positive_schedule(const Stage& s);

struct GrowthPositive {
  std::vector<double> r, u, v, ratio;
  double min_ratio = 0.0;
  // min over the schedule and phi in [2^{-d_k}, 1-r] of
  // mu(B(x, phi)) / (2^{(m-1)k0} phi^{m-1}), k0 from g(1/(1-r))
  double cap_lower = 0.0;
};

// Validates y in C_k (cube coordinates).
GrowthPositive growth_check_positive(const Stage& s, std::span<const double> y, std::span<const double> r_schedule);
// No membership check; used for negative controls.
GrowthPositive growth_ratios_along(const Stage& s, const SpherePoint& x, std::span<const double> r_schedule);

struct DeltaSearch {
  double k_hat = 0.0;
  std::vector<double> scales;  // d_j = 2^{-j}
  std::vector<double> delta;   // found Delta_j, or 0 when none
  std::vector<int> failed;     // j with no Delta_j
};

// For each j = 1..j_max, the largest Delta on a geometric grid in
// (d_j / 2, d_j] with mu(B(x, Delta)) >= k_hat sigma(B(x, Delta)) v(1 - Delta),
// k_hat = 1 / ((C2 C4 + C9) 3 n).
DeltaSearch lemma41_delta_evaluate(const DiscreteMeasure& mu, const SpherePoint& x, int n,
                                   const majorant::Majorant& v, int j_max, const kernel::KernelConstants& c);
// As above; throws CertificationFailure at the first j without a Delta.
DeltaSearch lemma41_delta_search(const DiscreteMeasure& mu, const SpherePoint& x, int n,
                                 const majorant::Majorant& v, int j_max, const kernel::KernelConstants& c);

// Atoms approximating mass * sigma / gamma_{m-1} (m = 2: equispaced; m = 3:
// equal-area cells in (z, phi)).
DiscreteMeasure uniform_sphere_measure(Dim m, int n, double mass = 1.0);

// max over t = 2^{-j} of v(1 - t/2) / (2^{m-1} v(1 - t)); at most 1 when
// t^{m-1} v(1-t) is increasing.
double doubling_inheritance(const majorant::Majorant& v, Dim m, int j_max = 40);

}  // namespace radgrowth::positive
