#include "radgrowth/quadrature.hpp"

#include <algorithm>
#include <array>
#include <numbers>

namespace radgrowth::quad {

GaussRule compute_gauss_legendre(int n) {
  if (n < 1 || n > kMaxGaussNodes) throw DomainError("Gauss-Legendre size out of range");
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      // p1 = P_n(x), p0 = P_{n-1}(x)
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i)] = -x;
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  return rule;
}

namespace {

constexpr int kTableLevels = 13;  // 1, 2, 4, ..., 4096

const std::array<GaussRule, kTableLevels>& table() {
  static const std::array<GaussRule, kTableLevels> t = [] {
    std::array<GaussRule, kTableLevels> out;
    for (int l = 0; l < kTableLevels; ++l) out[static_cast<std::size_t>(l)] = compute_gauss_legendre(1 << l);
    return out;
  }();
  return t;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  if (n >= 1 && (n & (n - 1)) == 0 && n <= kMaxGaussNodes) {
    int l = 0;
    while ((1 << l) < n) ++l;
    return table()[static_cast<std::size_t>(l)];
  }
  throw DomainError("tabulated Gauss-Legendre sizes are powers of two up to 4096");
}

std::vector<double> graded_breaks(double lo, double hi, double center, double base) {
  std::vector<double> b{lo, hi};
  if (center > lo && center < hi) b.push_back(center);
  if (base > 0.0) {
    for (double s = base; s < hi - lo; s *= 2.0) {
      if (center - s > lo && center - s < hi) b.push_back(center - s);
      if (center + s > lo && center + s < hi) b.push_back(center + s);
    }
  }
  normalize_breaks(b);
  return b;
}

void normalize_breaks(std::vector<double>& b, double eps) {
  std::sort(b.begin(), b.end());
  if (b.empty()) return;
  const double span = std::max(std::abs(b.front()), std::abs(b.back()));
  const double gap = eps * std::max(span, 1e-300);
  std::vector<double> out;
  out.reserve(b.size());
  for (double x : b)
    if (out.empty() || x - out.back() > gap) out.push_back(x);
  // keep the exact right end
  if (out.back() != b.back()) out.back() = b.back();
  b.swap(out);
}

}  // namespace radgrowth::quad
