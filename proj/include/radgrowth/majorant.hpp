#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "radgrowth/geometry.hpp"

namespace radgrowth::majorant {

enum class Family { power, log, log_power };

// Radial weight v on [0, 1) and its dyadic form g(x) = v(1 - 1/x), x >= 1.
//   power(gamma):       g(x) = x^gamma
//   log(s):             g(x) = (1 + ln x)^s, i.e. v(r) = log(e / (1 - r))^s
//   logpower(gamma, s): g(x) = x^gamma (1 + ln x)^s
class Majorant {
 public:
  static Majorant power(double gamma);
  static Majorant log(double s);
  static Majorant log_power(double gamma, double s);
  // "power:1", "log:2", "logpower:1:0.5"
  static Majorant parse(std::string_view spec);

  double g(double x) const;
  // log2 g(2^l), usable far beyond the range where g(2^l) overflows
  double log2_g_pow2(double l) const;
  double g_pow2(double l) const;
  double v(double r) const;

  Family family() const noexcept { return family_; }
  double gamma() const noexcept { return gamma_; }
  double s() const noexcept { return s_; }
  std::string spec() const;

 private:
  Majorant(Family f, double gamma, double s);
  Family family_;
  double gamma_;
  double s_;
};

struct DoublingCertificate {
  double D_hat = 0.0;
  std::vector<double> grid;
  double argmax = 0.0;  // grid value where D_hat is attained
};

// d = 2^{-j}, j = 1..40
std::vector<double> default_d_grid();

DoublingCertificate doubling_constant(const Majorant& v, std::span<const double> d_grid);
DoublingCertificate doubling_constant(const Majorant& v);

// Increasing gauge h on [0, T] with h(0) = 0 and h(t/2) >= c h(t).
class GaugeFunction {
 public:
  // Validates monotonicity on the dyadic grid T 2^{-j}, j = 0..60, and
  // computes the halving constant there. Throws ValidationError naming the
  // first violating t.
  GaugeFunction(std::string name, std::function<double(double)> h, double T);
  // Skips the monotonicity check; the halving constant is still measured.
  static GaugeFunction unchecked(std::string name, std::function<double(double)> h, double T);

  double operator()(double t) const;
  double T() const noexcept { return T_; }
  double halving() const noexcept { return halving_; }
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
  std::function<double(double)> h_;
  double T_;
  double halving_ = 0.0;

  GaugeFunction(std::string name, std::function<double(double)> h, double T, bool check);
};

GaugeFunction power_gauge(double s, double T = 1.0);

// lambda(t) = t^{m-1} v(1 - t) on (0, 1].
GaugeFunction lambda_gauge(const Majorant& v, Dim m);

// Largest alpha with (d/2) v(1-d/2)^alpha <= (3/4) d v(1-d)^alpha on the
// grid, by bisection.
double alpha0(const Majorant& v, std::span<const double> d_grid);
double alpha0(const Majorant& v);

// Piecewise-linear gauge with knots nu(pi 2^{-n}) = pi 2^{-n} g(2^n)^alpha,
// n >= 2, on [0, pi/4]. No range check on alpha.
GaugeFunction nu_beta_knots(const Majorant& v, double alpha);
// Checked version: 0 < alpha <= beta and alpha <= alpha0.
GaugeFunction nu_beta_gauge(const Majorant& v, double beta, double alpha);
// sup of nu(t) / (t g(1/t)^beta) over a geometric grid in (0, pi/4].
double nu_beta_ratio_sup(const Majorant& v, const GaugeFunction& nu, double beta);

inline constexpr long kDefaultLMax = 1000000;

// b_1 = 1, b_{n+1} = min{l > b_n : g(2^l) > A1 g(2^{b_n})}.
std::vector<int> b_sequence(const Majorant& v, double A1, int N, long l_max = kDefaultLMax);

// d_k = min{n : g(2^n) >= 2^{(m-1)k}} for k = 1..K; strictly increasing.
std::vector<int> d_sequence(const Majorant& v, Dim m, int K, long l_max = kDefaultLMax);

}  // namespace radgrowth::majorant
