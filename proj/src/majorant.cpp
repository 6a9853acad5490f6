#include "radgrowth/majorant.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "radgrowth/errors.hpp"

namespace radgrowth::majorant {

namespace {

constexpr double ln2 = std::numbers::ln2;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

double parse_number(std::string_view s) {
  double x = 0.0;
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, x);
  if (res.ec != std::errc() || res.ptr != end || s.empty())
    throw ValidationError("bad number '" + std::string(s) + "' in majorant spec");
  return x;
}

}  // namespace

Majorant::Majorant(Family f, double gamma, double s) : family_(f), gamma_(gamma), s_(s) {
  if (f != Family::log && !(gamma > 0.0)) throw ValidationError("majorant exponent gamma must be positive");
  if (f != Family::power && !(s > 0.0)) throw ValidationError("majorant exponent s must be positive");
}

Majorant Majorant::power(double gamma) { return Majorant(Family::power, gamma, 0.0); }
Majorant Majorant::log(double s) { return Majorant(Family::log, 0.0, s); }
Majorant Majorant::log_power(double gamma, double s) { return Majorant(Family::log_power, gamma, s); }

Majorant Majorant::parse(std::string_view spec) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = spec.find(':', start);
    parts.push_back(spec.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  if (parts[0] == "power" && parts.size() == 2) return power(parse_number(parts[1]));
  if (parts[0] == "log" && parts.size() == 2) return log(parse_number(parts[1]));
  if (parts[0] == "logpower" && parts.size() == 3) return log_power(parse_number(parts[1]), parse_number(parts[2]));
  throw ValidationError("unrecognized majorant spec '" + std::string(spec) + "'");
}

double Majorant::g(double x) const {
  if (!(x >= 1.0)) throw DomainError("g is defined on [1, inf)");
  switch (family_) {
    case Family::power:
      return std::pow(x, gamma_);
    case Family::log:
      return std::pow(1.0 + std::log(x), s_);
    case Family::log_power:
      return std::pow(x, gamma_) * std::pow(1.0 + std::log(x), s_);
  }
  return 0.0;
}

double Majorant::log2_g_pow2(double l) const {
  if (!(l >= 0.0)) throw DomainError("g(2^l) needs l >= 0");
  double out = 0.0;
  if (family_ != Family::log) out += gamma_ * l;
  if (family_ != Family::power) out += s_ * std::log2(1.0 + l * ln2);
  return out;
}

double Majorant::g_pow2(double l) const { return std::exp2(log2_g_pow2(l)); }

double Majorant::v(double r) const {
  if (!(r >= 0.0) || !(r < 1.0)) throw DomainError("v is defined on [0, 1)");
  return g(1.0 / (1.0 - r));
}

std::string Majorant::spec() const {
  switch (family_) {
    case Family::power:
      return "power:" + fmt(gamma_);
    case Family::log:
      return "log:" + fmt(s_);
    case Family::log_power:
      return "logpower:" + fmt(gamma_) + ":" + fmt(s_);
  }
  return "?";
}

std::vector<double> default_d_grid() {
  std::vector<double> g;
  for (int j = 1; j <= 40; ++j) g.push_back(std::ldexp(1.0, -j));
  return g;
}

DoublingCertificate doubling_constant(const Majorant& v, std::span<const double> d_grid) {
  if (d_grid.empty()) throw DomainError("empty doubling grid");
  DoublingCertificate c;
  c.grid.assign(d_grid.begin(), d_grid.end());
  for (double d : d_grid) {
    if (!(d > 0.0) || d > 0.5) throw DomainError("doubling grid must lie in (0, 1/2]");
    const double lo = v.g(1.0 / d), hi = v.g(2.0 / d);
    if (hi < lo) throw ValidationError("majorant decreases between r = " + fmt(1 - d) + " and " + fmt(1 - d / 2));
    const double ratio = hi / lo;
    if (ratio > c.D_hat) {
      c.D_hat = ratio;
      c.argmax = d;
    }
  }
  return c;
}

DoublingCertificate doubling_constant(const Majorant& v) { return doubling_constant(v, default_d_grid()); }

GaugeFunction::GaugeFunction(std::string name, std::function<double(double)> h, double T)
    : GaugeFunction(std::move(name), std::move(h), T, true) {}

GaugeFunction GaugeFunction::unchecked(std::string name, std::function<double(double)> h, double T) {
  return GaugeFunction(std::move(name), std::move(h), T, false);
}

GaugeFunction::GaugeFunction(std::string name, std::function<double(double)> h, double T, bool check)
    : name_(std::move(name)), h_(std::move(h)), T_(T) {
  if (!(T > 0.0)) throw ValidationError("gauge domain must be nonempty");
  double c = 1.0;
  double prev = h_(T);
  for (int j = 1; j <= 60; ++j) {
    const double t = std::ldexp(T, -j);
    const double cur = h_(t);
    if (check && (!(cur < prev) || !(cur > 0.0)))
      throw ValidationError("gauge " + name_ + " is not increasing at t = " + fmt(t));
    c = std::min(c, cur / prev);
    prev = cur;
  }
  if (check && h_(0.0) != 0.0) throw ValidationError("gauge " + name_ + " does not vanish at 0");
  halving_ = c;
}

double GaugeFunction::operator()(double t) const {
  if (t < 0.0) throw DomainError("gauge argument must be nonnegative");
  return h_(t);
}

GaugeFunction power_gauge(double s, double T) {
  if (!(s > 0.0)) throw ValidationError("power gauge exponent must be positive");
  return GaugeFunction("t^" + fmt(s), [s](double t) { return t == 0.0 ? 0.0 : std::pow(t, s); }, T);
}

GaugeFunction lambda_gauge(const Majorant& v, Dim m) {
  const int p = m.value() - 1;
  return GaugeFunction("lambda[" + v.spec() + ",m=" + std::to_string(m.value()) + "]",
                       [v, p](double t) { return t == 0.0 ? 0.0 : std::pow(t, p) * v.g(1.0 / t); }, 1.0);
}

double alpha0(const Majorant& v, std::span<const double> d_grid) {
  auto ok = [&](double a) {
    for (double d : d_grid) {
      const double lhs = 0.5 * d * std::pow(v.g(2.0 / d), a);
      const double rhs = 0.75 * d * std::pow(v.g(1.0 / d), a);
      if (lhs > rhs) return false;
    }
    return true;
  };
  double lo = 0.0, hi = 1.0;
  while (ok(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1024.0) return lo;
  }
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? lo : hi) = mid;
  }
  return lo;
}

double alpha0(const Majorant& v) { return alpha0(v, default_d_grid()); }

GaugeFunction nu_beta_knots(const Majorant& v, double alpha) {
  if (!(alpha > 0.0)) throw ValidationError("alpha must be positive");
  constexpr int n_max = 60;
  std::vector<double> t(n_max + 1), val(n_max + 1);
  for (int n = 2; n <= n_max; ++n) {
    t[n] = std::ldexp(std::numbers::pi, -n);
    val[n] = t[n] * std::pow(v.g_pow2(n), alpha);
  }
  auto h = [t, val](double x) {
    if (x <= 0.0) return 0.0;
    if (x >= t[2]) return val[2];
    if (x < t[n_max]) return val[n_max] * x / t[n_max];
    // knots t[n+1] <= x < t[n]
    int n = static_cast<int>(std::floor(std::log2(std::numbers::pi / x)));
    n = std::clamp(n, 2, n_max - 1);
    while (n > 2 && x >= t[n]) --n;
    while (n < n_max - 1 && x < t[n + 1]) ++n;
    const double w = (x - t[n + 1]) / (t[n] - t[n + 1]);
    return val[n + 1] + w * (val[n] - val[n + 1]);
  };
  return GaugeFunction::unchecked("nu[" + v.spec() + ",alpha=" + fmt(alpha) + "]", h, t[2]);
}

GaugeFunction nu_beta_gauge(const Majorant& v, double beta, double alpha) {
  if (!(alpha > 0.0) || !(beta > 0.0)) throw ValidationError("alpha and beta must be positive");
  if (alpha > beta) throw ValidationError("alpha = " + fmt(alpha) + " exceeds beta = " + fmt(beta));
  const double a0 = alpha0(v);
  if (alpha > a0 * (1.0 + 1e-12))
    throw ValidationError("alpha = " + fmt(alpha) + " exceeds alpha0 = " + fmt(a0));
  const auto raw = nu_beta_knots(v, alpha);
  return GaugeFunction(raw.name(), [raw](double t) { return raw(t); }, raw.T());
}

double nu_beta_ratio_sup(const Majorant& v, const GaugeFunction& nu, double beta) {
  double sup = 0.0;
  for (int i = 0; i <= 400; ++i) {
    const double t = (std::numbers::pi / 4.0) * std::exp2(-0.1 * i);
    sup = std::max(sup, nu(t) / (t * std::pow(v.g(1.0 / t), beta)));
  }
  return sup;
}

std::vector<int> b_sequence(const Majorant& v, double A1, int N, long l_max) {
  if (!(A1 > 1.0)) throw DomainError("A1 must exceed 1");
  if (N < 1) throw DomainError("b_sequence needs N >= 1");
  const double step = std::log2(A1);
  std::vector<int> b{1};
  while (static_cast<int>(b.size()) < N) {
    const double target = step + v.log2_g_pow2(b.back());
    long l = b.back() + 1;
    while (!(v.log2_g_pow2(static_cast<double>(l)) > target)) {
      if (++l > l_max) throw ResourceError("b_sequence search passed l_max = " + std::to_string(l_max));
    }
    b.push_back(static_cast<int>(l));
  }
  return b;
}

std::vector<int> d_sequence(const Majorant& v, Dim m, int K, long l_max) {
  if (K < 1) throw DomainError("d_sequence needs K >= 1");
  std::vector<int> d;
  long n = 0;
  for (int k = 1; k <= K; ++k) {
    const double target = static_cast<double>(m.value() - 1) * k;
    while (!(v.log2_g_pow2(static_cast<double>(n)) >= target)) {
      if (++n > l_max) throw ResourceError("d_sequence search passed l_max = " + std::to_string(l_max));
    }
    if (!d.empty() && n <= d.back())
      throw ValidationError("d_sequence is not strictly increasing at k = " + std::to_string(k));
    d.push_back(static_cast<int>(n));
  }
  return d;
}

}  // namespace radgrowth::majorant
