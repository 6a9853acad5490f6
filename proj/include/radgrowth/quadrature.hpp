#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "radgrowth/errors.hpp"

namespace radgrowth::quad {

// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int size() const noexcept { return static_cast<int>(nodes.size()); }
};

inline constexpr int kMaxGaussNodes = 4096;

// Rules for powers of two up to kMaxGaussNodes come from a table built once;
// other sizes are computed on the spot.
const GaussRule& gauss_legendre(int n);
GaussRule compute_gauss_legendre(int n);

// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Breakpoints on [lo, hi] refined geometrically toward `center`:
// center +- base * 2^j for j = 0, 1, ... while inside (lo, hi).
std::vector<double> graded_breaks(double lo, double hi, double center, double base);

// Sort, drop duplicates closer than `eps` relative to the span.
void normalize_breaks(std::vector<double>& b, double eps = 1e-15);

template <class F>
double integrate_panels(F&& f, std::span<const double> breaks, const GaussRule& rule) {
  CompensatedSum total;
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double a = breaks[p], b = breaks[p + 1];
    if (!(b > a)) continue;
    const double h = 0.5 * (b - a), c = 0.5 * (a + b);
    double s = 0.0;
    for (int i = 0; i < rule.size(); ++i) s += rule.weights[i] * f(c + h * rule.nodes[i]);
    total.add(h * s);
  }
  return total.value();
}

struct Refined {
  double value = 0.0;
  double previous = 0.0;
  int nodes = 0;
  double error() const noexcept { return std::abs(value - previous); }
};

// Evaluate `eval(n)` for n = n0, 2 n0, ... until two successive values agree
// within tol, or throw NumericalError once n would exceed n_max.
template <class Eval>
Refined refine(Eval&& eval, int n0, int n_max, double tol, const std::string& what) {
  double prev = eval(n0);
  for (int n = 2 * n0; n <= n_max; n *= 2) {
    const double cur = eval(n);
    if (std::abs(cur - prev) <= tol) return {cur, prev, n};
    if (2 * n > n_max) throw NumericalError(what + ": no convergence at " + std::to_string(n) + " nodes", prev, cur);
    prev = cur;
  }
  throw NumericalError(what + ": node budget below two levels", prev, prev);
}

}  // namespace radgrowth::quad
