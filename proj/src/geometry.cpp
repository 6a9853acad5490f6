#include "radgrowth/geometry.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "radgrowth/errors.hpp"

namespace radgrowth {

namespace {

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double c : v) s += c * c;
  return std::sqrt(s);
}

std::string join(std::span<const double> v) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << ')';
  return os.str();
}

}  // namespace

Dim::Dim(int m) : m_(m) {
  if (m < 2) throw DomainError("dimension must be at least 2, got " + std::to_string(m));
}

SpherePoint::SpherePoint(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.size() < 2) throw ValidationError("sphere point needs at least 2 coordinates");
  if (std::abs(norm(coords_) - 1.0) > 1e-12)
    throw ValidationError("sphere point off the unit sphere: " + join(coords_));
}

SpherePoint SpherePoint::normalized(std::vector<double> v) {
  const double n = norm(v);
  if (!(n > 0.0)) throw ValidationError("cannot normalize the zero vector");
  for (double& c : v) c /= n;
  return SpherePoint(std::move(v));
}

SpherePoint SpherePoint::from_azimuth(int m, double phi, double t) {
  Dim dm(m);
  if (t < 0.0 || t > 1.0) throw DomainError("planar radius t must lie in [0, 1]");
  std::vector<double> v(static_cast<std::size_t>(dm.value()), 0.0);
  v[0] = t * std::cos(phi);
  v[1] = t * std::sin(phi);
  if (m == 2) {
    if (t != 1.0) throw DomainError("in dimension 2 the planar radius is 1");
  } else {
    v[2] = std::sqrt(std::max(0.0, 1.0 - t * t));
  }
  return normalized(std::move(v));
}

double SpherePoint::azimuth() const noexcept {
  return wrap_angle(std::atan2(coords_[1], coords_[0]));
}

double SpherePoint::planar_radius() const noexcept { return std::hypot(coords_[0], coords_[1]); }

std::string SpherePoint::str() const { return join(coords_); }

double geodesic_distance(std::span<const double> a, std::span<const double> b) {
  double dm = 0.0, dp = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dm += (a[i] - b[i]) * (a[i] - b[i]);
    dp += (a[i] + b[i]) * (a[i] + b[i]);
  }
  dm = std::sqrt(dm);
  dp = std::sqrt(dp);
  if (dm <= dp) return 2.0 * std::asin(std::min(1.0, dm / 2.0));
  return std::numbers::pi - 2.0 * std::asin(std::min(1.0, dp / 2.0));
}

BallPoint::BallPoint(double r, SpherePoint direction) : r_(r), dir_(std::move(direction)) {
  if (!(r >= 0.0) || !(r < 1.0)) throw DomainError("ball point needs 0 <= r < 1");
}

BallPoint BallPoint::from_cartesian(std::span<const double> x) {
  const double r = norm(x);
  if (r == 0.0) {
    std::vector<double> e(x.size(), 0.0);
    e[0] = 1.0;
    return BallPoint(0.0, SpherePoint(std::move(e)));
  }
  std::vector<double> d(x.begin(), x.end());
  for (double& c : d) c /= r;
  return BallPoint(r, SpherePoint::normalized(std::move(d)));
}

std::vector<double> BallPoint::cartesian() const {
  std::vector<double> x(dir_.coords().begin(), dir_.coords().end());
  for (double& c : x) c *= r_;
  return x;
}

std::string BallPoint::str() const {
  std::ostringstream os;
  os.precision(17);
  os << "r=" << r_ << " dir=" << dir_.str();
  return os.str();
}

double wrap_angle(double phi) noexcept {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double w = std::fmod(phi, two_pi);
  if (w < 0.0) w += two_pi;
  if (w >= two_pi) w = 0.0;
  return w;
}

std::vector<double> rotate12(std::span<const double> x, double a) {
  std::vector<double> y(x.begin(), x.end());
  const double c = std::cos(a), s = std::sin(a);
  y[0] = c * x[0] - s * x[1];
  y[1] = s * x[0] + c * x[1];
  return y;
}

}  // namespace radgrowth
