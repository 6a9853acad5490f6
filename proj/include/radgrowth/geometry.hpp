#pragma once

#include <span>
#include <string>
#include <vector>

namespace radgrowth {

// Ambient dimension of the ball; always at least 2.
class Dim {
 public:
  explicit Dim(int m);
  constexpr int value() const noexcept { return m_; }
  constexpr operator int() const noexcept { return m_; }

 private:
  int m_;
};

class SpherePoint {
 public:
  // Throws ValidationError unless |coords| is within 1e-12 of 1.
  explicit SpherePoint(std::vector<double> coords);

  static SpherePoint normalized(std::vector<double> v);
  // (t cos phi, t sin phi, sqrt(1 - t^2), 0, ...) in dimension m.
  static SpherePoint from_azimuth(int m, double phi, double t = 1.0);

  int dim() const noexcept { return static_cast<int>(coords_.size()); }
  std::span<const double> coords() const noexcept { return coords_; }
  double operator[](int i) const { return coords_[static_cast<std::size_t>(i)]; }

  // Angle of (x1, x2) in [0, 2pi); 0 when x1 = x2 = 0.
  double azimuth() const noexcept;
  // t = sqrt(x1^2 + x2^2).
  double planar_radius() const noexcept;
  std::string str() const;

 private:
  std::vector<double> coords_;
};

// Geodesic distance on the sphere, accurate for nearby and nearly antipodal
// points alike.
double geodesic_distance(std::span<const double> a, std::span<const double> b);
inline double geodesic_distance(const SpherePoint& a, const SpherePoint& b) {
  return geodesic_distance(a.coords(), b.coords());
}

class BallPoint {
 public:
  BallPoint(double r, SpherePoint direction);
  // Origin maps to r = 0 with direction e1.
  static BallPoint from_cartesian(std::span<const double> x);

  double r() const noexcept { return r_; }
  const SpherePoint& direction() const noexcept { return dir_; }
  int dim() const noexcept { return dir_.dim(); }
  std::vector<double> cartesian() const;
  std::string str() const;

 private:
  double r_;
  SpherePoint dir_;
};

// Reduce an angle to [0, 2pi).
double wrap_angle(double phi) noexcept;

// Rotate the (x1, x2) plane by angle a; other coordinates unchanged.
std::vector<double> rotate12(std::span<const double> x, double a);

}  // namespace radgrowth
