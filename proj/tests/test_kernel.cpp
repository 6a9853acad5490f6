#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "radgrowth/errors.hpp"
#include "radgrowth/kernel.hpp"

using namespace radgrowth;
using namespace radgrowth::kernel;
using std::numbers::pi;

namespace {

BallPoint ball(std::vector<double> x) { return BallPoint::from_cartesian(x); }

// Harmonic measure of the arc [a, b] (b - a < pi) at z in the unit disc.
double arc_measure(double a, double b, double x, double y) {
  const double ax = std::cos(a) - x, ay = std::sin(a) - y;
  const double bx = std::cos(b) - x, by = std::sin(b) - y;
  double ang = std::atan2(ax * by - ay * bx, ax * bx + ay * by);
  if (ang < 0.0) ang += 2.0 * pi;
  return ang / pi - (b - a) / (2.0 * pi);
}

}  // namespace

TEST_CASE("surface area of unit spheres") {
  CHECK(surface_area(Dim(2)) == doctest::Approx(2.0 * pi).epsilon(1e-15));
  CHECK(surface_area(Dim(3)) == doctest::Approx(4.0 * pi).epsilon(1e-15));
  CHECK(surface_area(Dim(4)) == doctest::Approx(2.0 * pi * pi).epsilon(1e-15));
  CHECK(sphere_area(1) == doctest::Approx(2.0));
  CHECK_THROWS_AS(Dim(1), DomainError);
}

TEST_CASE("p_tilde closed-form values") {
  CHECK(p_tilde(Dim(3), 0.0, 1.234) == doctest::Approx(1.0 / (4.0 * pi)).epsilon(1e-15));
  CHECK(p_tilde(Dim(2), 0.5, 0.0) == doctest::Approx(3.0 / (2.0 * pi)).epsilon(1e-14));
  CHECK(p_tilde(Dim(3), 0.5, pi) == doctest::Approx(0.75 / (4.0 * pi * std::pow(2.25, 1.5))).epsilon(1e-14));
  CHECK(p_tilde(Dim(3), 0.5, pi) == doctest::Approx(0.0176839).epsilon(1e-5));
  CHECK_THROWS_AS(p_tilde(Dim(2), 1.0, 0.3), DomainError);
}

TEST_CASE("q_kernel vanishes at the poles and matches a central difference") {
  for (int m : {2, 3, 4, 6}) {
    for (double r : {0.1, 0.5, 0.9}) {
      CHECK(q_kernel(Dim(m), r, 0.0) == 0.0);
      CHECK(std::abs(q_kernel(Dim(m), r, pi)) < 1e-15);
      for (double phi : {0.2, 0.7, 1.5, 2.5}) {
        const double h = 1e-3;
        auto P = [&](double t) { return p_tilde(Dim(m), r, t); };
        const double fd = -(P(phi - 2 * h) - 8 * P(phi - h) + 8 * P(phi + h) - P(phi + 2 * h)) / (12 * h);
        const double q = q_kernel(Dim(m), r, phi);
        CHECK(std::abs(q - fd) <= 1e-7 * std::max(1.0, std::abs(q)));
      }
    }
  }
}

TEST_CASE("positivity and monotonicity of the angular kernels") {
  for (int m : {2, 3, 5}) {
    for (double r : {0.0, 0.3, 0.9, 0.999}) {
      double prev = p_tilde(Dim(m), r, 0.0);
      for (int i = 1; i <= 200; ++i) {
        const double phi = pi * i / 200.0;
        const double p = p_tilde(Dim(m), r, phi);
        CHECK(p > 0.0);
        CHECK(q_kernel(Dim(m), r, phi) >= 0.0);
        if (r > 0.0 && i < 200) CHECK(p < prev);
        prev = p;
      }
    }
  }
}

TEST_CASE("cap measure closed forms and quadrature") {
  CHECK(cap_measure(Dim(3), pi / 2) == doctest::Approx(2.0 * pi).epsilon(1e-15));
  CHECK(cap_measure(Dim(3), pi) == doctest::Approx(4.0 * pi).epsilon(1e-15));
  CHECK(cap_measure(Dim(2), 0.3) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(cap_measure(Dim(4), pi) == doctest::Approx(2.0 * pi * pi).epsilon(1e-14));
  // m = 5: gamma_3 * (2/3 - cos + cos^3/3)
  for (double phi : {1e-4, 0.05, 0.7, 2.0, pi}) {
    const double c = std::cos(phi);
    const double exact = 2.0 * pi * pi * (2.0 / 3.0 - c + c * c * c / 3.0);
    CHECK(cap_measure(Dim(5), phi) == doctest::Approx(exact).epsilon(phi < 1e-2 ? 1e-6 : 1e-12));
  }
  // the small-angle series for m = 4 joins the direct formula continuously
  const double lo = cap_measure(Dim(4), 0.1 - 1e-12), hi = cap_measure(Dim(4), 0.1 + 1e-12);
  CHECK(hi == doctest::Approx(lo).epsilon(1e-10));
  // derivative equals the ring area
  for (int m : {2, 3, 4, 5, 7}) {
    for (double phi : {0.3, 1.1, 2.4}) {
      const double h = 1e-5;
      const double fd = (cap_measure(Dim(m), phi + h) - cap_measure(Dim(m), phi - h)) / (2 * h);
      CHECK(fd == doctest::Approx(sphere_area(m - 1) * std::pow(std::sin(phi), m - 2)).epsilon(1e-7));
    }
  }
  CHECK_THROWS_AS(cap_measure(Dim(3), 0.0), DomainError);
  CHECK_THROWS_AS(cap_measure(Dim(3), 3.2), DomainError);
}

TEST_CASE("cap measure is increasing with power-law constants") {
  for (int m : {2, 3, 4, 5}) {
    double prev = 0.0;
    for (int i = 1; i <= 100; ++i) {
      const double c = cap_measure(Dim(m), pi * i / 100.0);
      CHECK(c > prev);
      prev = c;
    }
    const auto k = cap_constants(Dim(m), pi / 2);
    CHECK(k.C1_hat > 0.0);
    CHECK(k.C2_hat < 1e3);
    CHECK(k.C1_hat <= k.C2_hat);
  }
  // m = 3: ratio 4 pi sin^2(phi/2) / phi^2 decreases from pi
  const auto k3 = cap_constants(Dim(3), pi / 2);
  CHECK(k3.C2_hat == doctest::Approx(pi).epsilon(1e-6));
  CHECK(k3.C1_hat == doctest::Approx(4.0 * pi * 0.5 / (pi * pi / 4)).epsilon(1e-12));
}

TEST_CASE("telescoping identity for Q on random (m, r)") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> U(0.0, 0.99);
  for (int i = 0; i < 20; ++i) {
    const int m = 2 + i % 2;
    const double r = U(gen);
    const double lhs = integrate_q(Dim(m), r, 0.0, pi);
    const double rhs = p_tilde(Dim(m), r, 0.0) - p_tilde(Dim(m), r, pi);
    CHECK(std::abs(lhs - rhs) <= 1e-10);
  }
}

TEST_CASE("bound ratios against closed-form antiderivatives") {
  for (int m : {2, 3}) {
    const auto radii = dyadic_radii(2, 10);
    const double d = 0.1;
    const auto rep = kernel_bound_report(Dim(m), radii, d);
    REQUIRE(rep.rows.size() == radii.size());
    for (const auto& row : rep.rows) {
      const double eps = 1.0 - row.r;
      const double R1 = std::pow(eps, m - 1) * (p_tilde(Dim(m), row.r, 0.0) - p_tilde(Dim(m), row.r, eps));
      const double R2 = std::pow(d, m) * (p_tilde(Dim(m), row.r, d) - p_tilde(Dim(m), row.r, pi));
      CHECK(row.R1 == doctest::Approx(R1).epsilon(1e-10));
      CHECK(row.R2 == doctest::Approx(R2).epsilon(1e-9));
      // integration by parts: R3 = sigma(eps) P(eps) - sigma(pi) P(pi) + 1 - int_0^eps ring * P
      const double r = row.r;
      double inner;
      if (m == 2) {
        inner = (2.0 / pi) * std::atan((1.0 + r) / (1.0 - r) * std::tan(eps / 2.0));
      } else {
        inner = (1.0 - r * r) / (2.0 * r) * (1.0 / (1.0 - r) - 1.0 / std::sqrt(1.0 + r * r - 2.0 * r * std::cos(eps)));
      }
      const double R3 = cap_measure(Dim(m), eps) * p_tilde(Dim(m), r, eps) -
                        cap_measure(Dim(m), pi) * p_tilde(Dim(m), r, pi) + 1.0 - inner;
      CHECK(row.R3 == doctest::Approx(R3).epsilon(1e-9));
    }
    // limits of R1 as r -> 1: (2/gamma)(1 - 2^{-m/2})
    CHECK(rep.rows.back().R1 == doctest::Approx(2.0 / surface_area(Dim(m)) * (1.0 - std::pow(2.0, -m / 2.0))).epsilon(2e-3));
    CHECK(rep.stability() <= 0.10);
  }
  CHECK_THROWS_AS(kernel_bound_report(Dim(3), std::vector<double>{0.4}, 0.1), DomainError);
}

TEST_CASE("Poisson extension reproduces constants and harmonic polynomials") {
  QuadratureSpec q;
  for (int m : {2, 3}) {
    for (double r : {0.0, 0.5, 0.9, 0.99}) {
      std::vector<double> x(m, 0.0);
      x[0] = r * 0.6;
      x[1] = r * 0.8;
      const auto one = poisson_extend(Dim(m), BoundaryFunction([](std::span<const double>) { return 1.0; }), ball(x), q);
      CHECK(std::abs(one.value - 1.0) <= 1e-8);
      const auto three = poisson_extend(Dim(m), BoundaryFunction([](std::span<const double>) { return -3.0; }), ball(x), q);
      CHECK(std::abs(three.value + 3.0) <= 3e-8);
      const AzimuthSteps ones({0.0}, {1.0});
      CHECK(std::abs(poisson_extend(Dim(m), ones, ball(x), q).value - 1.0) <= 1e-8);
    }
  }
  std::mt19937_64 gen(11);
  std::normal_distribution<double> N;
  std::uniform_real_distribution<double> U(0.0, 0.995);
  for (int m : {2, 3}) {
    for (int i = 0; i < 10; ++i) {
      std::vector<double> d(m);
      double n = 0.0;
      for (double& c : d) {
        c = N(gen);
        n += c * c;
      }
      const double r = U(gen);
      for (double& c : d) c *= r / std::sqrt(n);
      const auto u = poisson_extend(Dim(m), BoundaryFunction([](std::span<const double> z) { return z[0] * z[0] - z[1] * z[1] + z[1]; }), ball(d), q);
      CHECK(std::abs(u.value - (d[0] * d[0] - d[1] * d[1] + d[1])) <= 1e-8);
    }
  }
}

TEST_CASE("Poisson extension in dimension 4 by Monte Carlo") {
  QuadratureSpec q;
  q.tol = 2e-3;
  q.max_nodes = 64;
  const std::vector<double> x{0.3, 0.2, -0.1, 0.4};
  const auto u = poisson_extend(Dim(4), BoundaryFunction([](std::span<const double> z) { return z[0] + z[2] * z[3]; }), ball(x), q);
  CHECK(std::abs(u.value - (0.3 - 0.04)) <= 1e-2);
  const auto again = poisson_extend(Dim(4), BoundaryFunction([](std::span<const double> z) { return z[0] + z[2] * z[3]; }), ball(x), q);
  CHECK(u.value == again.value);
}

TEST_CASE("azimuth step data matches harmonic measure of an arc") {
  QuadratureSpec q;
  const double a = 0.4, b = 1.9;
  const AzimuthSteps arc({a, b}, {1.0, 0.0});
  for (double r : {0.0, 0.3, 0.9, 0.999, 1.0 - 1e-6}) {
    for (double th : {0.1, 0.4, 1.0, 3.5}) {
      const double x = r * std::cos(th), y = r * std::sin(th);
      const auto u = poisson_extend(Dim(2), arc, ball({x, y}), q);
      CHECK(std::abs(u.value - arc_measure(a, b, x, y)) <= 1e-9);
    }
  }
}

TEST_CASE("hemisphere data in dimension 3 on the symmetry axis") {
  QuadratureSpec q;
  const AzimuthSteps half({0.0, pi}, {1.0, 0.0});
  for (double t : {0.2, 0.7, 0.99, 0.9999}) {
    const auto u = poisson_extend(Dim(3), half, ball({0.0, t, 0.0}), q);
    const double exact = (1 - t * t) / (2 * t) * (1 / (1 - t) - 1 / std::sqrt(1 + t * t));
    CHECK(std::abs(u.value - exact) <= 1e-8);
  }
  // off the axis: Legendre expansion 1/2 + sum_{l odd} (P_{l-1}(0) - P_{l+1}(0))/2 r^l P_l(cos theta)
  auto legendre = [](int l, double t) {
    double p0 = 1.0, p1 = t;
    if (l == 0) return p0;
    for (int k = 2; k <= l; ++k) {
      const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    return p1;
  };
  for (const auto& x : std::vector<std::vector<double>>{{0.3, 0.2, 0.5}, {-0.5, 0.4, -0.2}, {0.1, -0.6, 0.3}}) {
    const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    const double ct = x[1] / r;
    double series = 0.5;
    for (int l = 1; l < 400; l += 2) series += 0.5 * (legendre(l - 1, 0.0) - legendre(l + 1, 0.0)) * std::pow(r, l) * legendre(l, ct);
    CHECK(std::abs(poisson_extend(Dim(3), half, ball(x), q).value - series) <= 1e-9);
  }
}

TEST_CASE("quadrature spec and boundary policy") {
  QuadratureSpec q;
  q.nodes = 4;
  CHECK_THROWS_AS(q.validate(Dim(2)), DomainError);
  QuadratureSpec f;
  f.method = QuadMethod::fourier_oracle;
  CHECK_NOTHROW(f.validate(Dim(2)));
  CHECK_THROWS_AS(f.validate(Dim(3)), DomainError);
  QuadratureSpec ok;
  const AzimuthSteps ones({0.0}, {1.0});
  CHECK_THROWS_AS(poisson_extend(Dim(2), ones, BallPoint(1.0 - 1e-7, SpherePoint({1.0, 0.0})), ok), DomainError);
  CHECK(parse_method("monte-carlo") == QuadMethod::monte_carlo);
  CHECK_THROWS_AS(parse_method("simpson"), ValidationError);
}

TEST_CASE("Fourier route for step data agrees with quadrature") {
  QuadratureSpec q, f;
  f.method = QuadMethod::fourier_oracle;
  f.tol = 1e-10;
  const AzimuthSteps arc({0.4, 1.9, 4.0}, {1.0, -0.5, 2.0});
  for (double r : {0.0, 0.5, 0.95}) {
    const auto x = ball({r * std::cos(1.3), r * std::sin(1.3)});
    CHECK(std::abs(poisson_extend(Dim(2), arc, x, q).value - poisson_extend(Dim(2), arc, x, f).value) <= 1e-8);
  }
}
