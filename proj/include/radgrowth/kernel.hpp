#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "radgrowth/geometry.hpp"

namespace radgrowth::kernel {

// Area of the unit sphere S^{n-1} in R^n (n >= 1; n = 1 gives 2, the two
// points of S^0).
double sphere_area(int n);

// gamma_{m-1} = sigma(S^{m-1}).
double surface_area(Dim m);

// Poisson kernel as a function of the angle between x/|x| and zeta.
double p_tilde(Dim m, double r, double phi);

// Q_m = -d/dphi p_tilde.
double q_kernel(Dim m, double r, double phi);

// sigma(B(x, phi)) for a geodesic cap of radius phi in (0, pi].
double cap_measure(Dim m, double phi);

// P(x, zeta) for Cartesian x in the open ball and zeta on the sphere.
double poisson_kernel(std::span<const double> x, std::span<const double> zeta);

enum class QuadMethod { reduced_product, monte_carlo, fourier_oracle };

std::string to_string(QuadMethod m);
QuadMethod parse_method(const std::string& s);

struct QuadratureSpec {
  QuadMethod method = QuadMethod::reduced_product;
  int nodes = 8;          // starting Gauss-Legendre size per panel
  int max_nodes = 128;    // refinement stops here
  std::uint64_t seed = 0x5eed5eedULL;
  double tol = 1e-9;      // absolute

  // Throws DomainError for nodes < 8, tol <= 0, or fourier-oracle with m != 2.
  void validate(Dim m) const;
  QuadratureSpec doubled() const;
};

struct Estimate {
  double value = 0.0;
  double error = 0.0;  // |last - previous| of the refinement
  int nodes = 0;
};

using BoundaryFunction = std::function<double(std::span<const double>)>;

// Boundary data depending only on the azimuth of (x1, x2): piece i takes
// values[i] on [breaks[i], breaks[i+1]) with the last piece wrapping to
// breaks[0] + 2pi.
class AzimuthSteps {
 public:
  AzimuthSteps(std::vector<double> breaks, std::vector<double> values);

  double operator()(double phi) const;
  double at(std::span<const double> zeta) const;
  const std::vector<double>& breaks() const noexcept { return breaks_; }
  const std::vector<double>& values() const noexcept { return values_; }
  double sup_abs() const noexcept;

 private:
  std::vector<double> breaks_;
  std::vector<double> values_;
};

// Minimum distance from the evaluation point to the boundary that
// evaluations accept.
inline constexpr double kMinBoundaryDistance = 1e-6;

Estimate poisson_extend(Dim m, const BoundaryFunction& f, const BallPoint& x, const QuadratureSpec& q);
Estimate poisson_extend(Dim m, const AzimuthSteps& f, const BallPoint& x, const QuadratureSpec& q);

// int_a^b Q_m(r, phi) dphi by graded Gauss-Legendre.
double integrate_q(Dim m, double r, double a, double b, double tol = 1e-13);
// int_a^b sigma(B(phi)) Q_m(r, phi) dphi.
double integrate_cap_q(Dim m, double r, double a, double b, double tol = 1e-13);

struct BoundRow {
  double r = 0.0, R1 = 0.0, R2 = 0.0, R3 = 0.0;
};

struct KernelBoundReport {
  int m = 0;
  double cutoff = 0.0;
  std::vector<BoundRow> rows;
  // Running sup of each ratio over the whole grid and over the grid without
  // its last (finest) radius.
  double C4_hat = 0.0, C6_hat = 0.0, C9_hat = 0.0;
  double C4_prev = 0.0, C6_prev = 0.0, C9_prev = 0.0;
  // max relative change of the running sups between the two finest levels
  double stability() const;
};

KernelBoundReport kernel_bound_report(Dim m, std::span<const double> r_grid, double cutoff);

// Grid 1 - r = 2^{-j}, j = j_lo..j_hi (radii must exceed 1/2, so j_lo >= 2).
std::vector<double> dyadic_radii(int j_lo, int j_hi);

struct CapConstants {
  double C1_hat = 0.0, C2_hat = 0.0;
};

// min / max of cap_measure(m, phi) / phi^{m-1} over a geometric grid in
// (0, phi_max].
CapConstants cap_constants(Dim m, double phi_max, int samples = 200);

// Empirical constants used by the Delta-search of the positive module.
struct KernelConstants {
  double C2 = 0.0;  // cap upper constant on (0, pi]
  double C4 = 0.0;  // sup R1
  double C6 = 0.0;  // sup R2 (cutoff d)
  double C9 = 0.0;  // sup R3
};

KernelConstants kernel_constants(Dim m, double cutoff = 0.1);

}  // namespace radgrowth::kernel
