#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "radgrowth/errors.hpp"
#include "radgrowth/positive.hpp"

using namespace radgrowth;
using namespace radgrowth::positive;
using majorant::Majorant;
using std::numbers::pi;

namespace {

DiscreteMeasure random_atoms(int m, int n, std::mt19937_64& rng) {
  std::normal_distribution<double> G(0.0, 1.0);
  std::uniform_real_distribution<double> U(0.1, 2.0);
  DiscreteMeasure mu(Ambient::sphere, m);
  for (int i = 0; i < n; ++i) {
    std::vector<double> x;
    for (int j = 0; j < m; ++j) x.push_back(G(rng));
    mu.add(SpherePoint::normalized(x).coords(), U(rng));
  }
  return mu;
}

}  // namespace

TEST_CASE("nu_k mass and stage consistency") {
  for (int m : {2, 3}) {
    // gamma must stay below m - 1 for d_k > k
    const auto v = Majorant::power(m == 2 ? 0.5 : 1.0);
    const auto d = majorant::d_sequence(v, Dim(m), 5);
    for (int k = 0; k <= 4; ++k) CHECK(nu_k_build(Dim(m), d, k, 3).total_mass() == doctest::Approx(1.0).epsilon(1e-12));
    const auto u0 = nu_k_build(Dim(m), d, 0, 4);
    CHECK(u0.size() == static_cast<std::size_t>(std::pow(4, m - 1)));
    // mass of the first generation-j box: 2^{(m-1)j} l_j^{m-1}
    const auto scheme = cantor::positive_cantor(d);
    for (int j = 1; j <= 3; ++j) {
      const double lj = scheme.length(j);
      const std::vector<double> lo(static_cast<std::size_t>(m - 1), 1.0), hi(static_cast<std::size_t>(m - 1), 1.0 + lj);
      const double expect = std::pow(std::ldexp(lj, j), m - 1);
      for (int k = j; k <= 4; ++k) CHECK(nu_k_build(Dim(m), d, k, 2).box_mass(lo, hi) == doctest::Approx(expect).epsilon(1e-12));
    }
  }
  const std::vector<int> d{2, 4, 6, 8, 10, 12, 14};
  CHECK_THROWS_AS(nu_k_build(Dim(3), d, 7, 1), DomainError);
  CHECK_THROWS_AS(nu_k_build(Dim(4), d, 6, 4), ResourceError);
}

TEST_CASE("hyperspherical map and pushforward") {
  const HypersphericalMap f3(Dim(3));
  const auto p = f3(std::vector<double>{pi / 2, 0.0});
  CHECK(p[0] == doctest::Approx(0.0));
  CHECK(p[1] == doctest::Approx(1.0));
  CHECK(p[2] == doctest::Approx(0.0));
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> U(1.0, 2.0);
  for (int m : {2, 3, 4}) {
    const HypersphericalMap f{Dim(m)};
    for (int i = 0; i < 20; ++i) {
      std::vector<double> a;
      for (int j = 0; j < m - 1; ++j) a.push_back(U(rng));
      const auto back = f.inverse(f(a));
      for (int j = 0; j < m - 1; ++j) CHECK(back[j] == doctest::Approx(a[j]).epsilon(1e-12));
    }
  }
  const double L = f3.bilipschitz_estimate(10000, 1);
  CHECK(L >= 1.0);
  CHECK(L <= 10.0);
  const auto s = build_stage(Majorant::power(1.0), Dim(3), 3, 2);
  CHECK(s.mu.total_mass() == doctest::Approx(s.nu.total_mass()).epsilon(1e-14));
  CHECK(s.mu.size() == s.nu.size());
}

TEST_CASE("Poisson integrals of atomic measures") {
  DiscreteMeasure one(Ambient::sphere, 3);
  const std::vector<double> z{0.0, 0.6, 0.8};
  one.add(z, 1.0);
  const std::vector<double> x{0.1, 0.2, 0.3};
  CHECK(poisson_measure_eval(one, BallPoint::from_cartesian(x)) == doctest::Approx(kernel::poisson_kernel(x, z)));
  std::mt19937_64 rng(8);
  const auto mu = random_atoms(3, 30, rng);
  CHECK(poisson_measure_eval(mu, BallPoint::from_cartesian(std::vector<double>{0, 0, 0})) ==
        doctest::Approx(mu.total_mass() / (4 * pi)));
  const auto uni = uniform_sphere_measure(Dim(3), 200, 4 * pi);
  CHECK(poisson_measure_eval(uni, BallPoint(0.5, SpherePoint::from_azimuth(3, 0.3, 0.5))) == doctest::Approx(1.0).epsilon(1e-4));
  const auto uni2 = uniform_sphere_measure(Dim(2), 2000, 2 * pi);
  CHECK(poisson_measure_eval(uni2, BallPoint(0.9, SpherePoint::from_azimuth(2, 1.0))) == doctest::Approx(1.0).epsilon(1e-9));
  for (int i = 0; i < 20; ++i) {
    const double r = 0.999 * std::uniform_real_distribution<double>(0, 1)(rng);
    CHECK(poisson_measure_eval(mu, BallPoint(r, SpherePoint::from_azimuth(3, 0.7 * i, 0.6))) > 0.0);
  }
}

TEST_CASE("integration by parts identity") {
  for (int m : {2, 3}) {
    const auto x = SpherePoint::from_azimuth(m, 0.4, m == 2 ? 1.0 : 0.8);
    DiscreteMeasure at(Ambient::sphere, m);
    at.add(x.coords(), 1.0);
    const auto a = parts_identity_check(at, 0.7, x);
    CHECK(a.lhs == doctest::Approx(kernel::p_tilde(Dim(m), 0.7, 0.0)));
    CHECK(a.rhs == doctest::Approx(kernel::p_tilde(Dim(m), 0.7, 0.0)));
    DiscreteMeasure anti(Ambient::sphere, m);
    std::vector<double> y(x.coords().begin(), x.coords().end());
    for (double& c : y) c = -c;
    anti.add(y, 1.0);
    const auto b = parts_identity_check(anti, 0.7, x);
    CHECK(b.lhs == doctest::Approx(kernel::p_tilde(Dim(m), 0.7, pi)));
    CHECK(b.rhs == doctest::Approx(kernel::p_tilde(Dim(m), 0.7, pi)));
  }
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    const int m = 2 + t % 2;
    const auto mu = random_atoms(m, 20, rng);
    const double r = t < 10 ? 0.95 : 0.99 * U(rng);
    const auto x = m == 2 ? SpherePoint::from_azimuth(2, 6 * U(rng)) : SpherePoint::from_azimuth(3, 6 * U(rng), U(rng));
    const auto res = parts_identity_check(mu, r, x);
    CHECK(res.gap <= 1e-12);
    CHECK(res.gap_quadrature <= 1e-10);
  }
}

TEST_CASE("measure condition on caps") {
  const auto v = Majorant::power(1.0);
  const auto uni = uniform_sphere_measure(Dim(2), 100000);
  const std::vector<double> e1{1.0, 0.0};
  for (double rho : {0.01, 0.1, 1.0}) {
    const double ratio = mu_condition_ratio(uni, v, e1, rho, 1e-3);
    CHECK(ratio == doctest::Approx(1.0 / (2 * pi * v.g(pi / rho))).epsilon(1e-3));
  }
  CHECK_THROWS_AS(mu_condition_ratio(uni, v, e1, 1e-4, 1e-3), ValidationError);
  DiscreteMeasure atom(Ambient::sphere, 3);
  atom.add(std::vector<double>{0, 0, 1}, 1.0);
  CHECK(mu_condition_check(atom, v, 50, 3, 1e-6).sup_ratio > 1e3);
  CHECK(mu_condition_ratio(atom, v, std::vector<double>{0, 0, 1}, 1e-6, 1e-6) > 1e5);

  std::vector<double> sups;
  for (int k = 2; k <= 5; ++k) {
    const auto s = build_stage(v, Dim(3), k, 2);
    sups.push_back(mu_condition_check(s.mu, v, 200, 11, s.rho_min).sup_ratio);
  }
  const auto [lo, hi] = std::minmax_element(sups.begin(), sups.end());
  CHECK(*hi / *lo <= 2.0);
}

TEST_CASE("growth along G and negative controls") {
  const auto v = Majorant::power(1.0);
  const auto s4 = build_stage(v, Dim(3), 4, 2);
  const auto s5 = build_stage(v, Dim(3), 5, 2);
  const auto sched = positive_schedule(s4);
  REQUIRE(sched.size() == 4);
  for (const auto& y : surviving_centers(s5, 4, 2)) {
    const auto g4 = growth_check_positive(s4, y, sched);
    const auto g5 = growth_check_positive(s5, y, sched);
    CHECK(g4.min_ratio > 0.05);
    CHECK(g5.min_ratio / g4.min_ratio == doctest::Approx(1.0).epsilon(0.5));
    CHECK(g4.cap_lower > 0.0);
  }
  const auto gap = gap_point(s4);
  CHECK_THROWS_AS(growth_check_positive(s4, gap, sched), ValidationError);
  const auto xg = SpherePoint::normalized(HypersphericalMap(Dim(3))(gap));
  const auto neg = growth_ratios_along(s4, xg, sched);
  CHECK(neg.ratio.back() < 0.01 * neg.ratio.front());
  std::vector<double> anti(xg.coords().begin(), xg.coords().end());
  for (double& c : anti) c = -c;
  CHECK(growth_ratios_along(s4, SpherePoint(anti), sched).ratio.back() < 1e-3);
}

TEST_CASE("Delta search") {
  const auto v = Majorant::power(1.0);
  const auto c = kernel::kernel_constants(Dim(3));
  const auto s = build_stage(v, Dim(3), 4, 2);
  const auto y = surviving_centers(s, 1, 3).front();
  const auto x = SpherePoint::normalized(HypersphericalMap(Dim(3))(y));
  const auto ds = lemma41_delta_search(s.mu, x, 2, v, s.d.back(), c);
  CHECK(ds.k_hat == doctest::Approx(1.0 / ((c.C2 * c.C4 + c.C9) * 6.0)));
  CHECK(ds.delta.size() == static_cast<std::size_t>(s.d.back()));
  for (std::size_t j = 1; j < ds.delta.size(); ++j) CHECK(ds.delta[j] < ds.delta[j - 1]);
  std::vector<double> anti(x.coords().begin(), x.coords().end());
  for (double& a : anti) a = -a;
  CHECK_THROWS_AS(lemma41_delta_search(s.mu, SpherePoint(anti), 2, v, 8, c), CertificationFailure);

  // uniform measure: cap mass is sigma(B)/gamma exactly in the limit
  const auto uni = uniform_sphere_measure(Dim(2), 200000);
  const auto lg = Majorant::log(1.0);
  const auto c2 = kernel::kernel_constants(Dim(2));
  const auto du = lemma41_delta_evaluate(uni, SpherePoint::from_azimuth(2, 0.3), 1, lg, 12, c2);
  for (std::size_t j = 0; j < du.scales.size(); ++j) {
    if (du.k_hat * lg.v(1.0 - du.scales[j]) * 1.01 <= 1.0 / (2 * pi)) CHECK(du.delta[j] > 0.0);
  }
}

TEST_CASE("doubling inheritance and measure CSV") {
  CHECK(doubling_inheritance(Majorant::power(1.0), Dim(3)) == doctest::Approx(0.5));
  CHECK(doubling_inheritance(Majorant::log(1.0), Dim(2)) <= 1.0);
  const auto s = build_stage(Majorant::power(1.0), Dim(3), 1, 1);
  std::stringstream ss;
  s.mu.write_csv(ss);
  CHECK(ss.str().rfind("x1,x2,x3,weight\n", 0) == 0);
  const auto back = DiscreteMeasure::read_csv(ss, Ambient::sphere);
  REQUIRE(back.size() == s.mu.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back.weight(i) == s.mu.weight(i));
    for (int j = 0; j < 3; ++j) CHECK(back.location(i)[j] == s.mu.location(i)[j]);
  }
  std::stringstream bad("x1,weight\n1.5,-1\n");
  CHECK_THROWS_AS(DiscreteMeasure::read_csv(bad, Ambient::cube), ValidationError);
}
