#include <doctest.h>

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "radgrowth/cantor.hpp"
#include "radgrowth/errors.hpp"
#include "radgrowth/majorant.hpp"

using namespace radgrowth;
using namespace radgrowth::cantor;
using majorant::GaugeFunction;
using majorant::power_gauge;

namespace {

const double kCantorDim = std::log(2.0) / std::log(3.0);

// Plain recursion over every dyadic interval, with intersection tested
// against the raw (unmerged) intervals. No full-cube shortcut, no memo.
double naive_net(const std::vector<Interval>& set, const std::function<double(double)>& h, double delta, int n_max) {
  auto hits = [&](double a, double b) {
    for (const auto& iv : set)
      if (iv.lo < b && iv.hi >= a) return true;
    return false;
  };
  std::function<double(int, long)> rec = [&](int n, long i) {
    const double side = std::ldexp(1.0, -n);
    const double whole = side < delta ? h(side) : std::numeric_limits<double>::infinity();
    if (n == n_max) return whole;
    double sum = 0.0;
    for (long c = 2 * i; c <= 2 * i + 1; ++c) {
      const double a = std::ldexp(static_cast<double>(c), -(n + 1));
      if (hits(a, a + side / 2)) sum += rec(n + 1, c);
    }
    return std::min(whole, sum);
  };
  double total = 0.0;
  for (long i = -1; i <= 2; ++i)
    if (hits(static_cast<double>(i), static_cast<double>(i + 1))) total += rec(0, i);
  return total;
}

bool in_b_arc(double phi, int k) {
  const double x = std::fmod(phi / std::numbers::pi * std::ldexp(1.0, k), 2.0);
  return x <= 0.25 || x >= 1.75;
}

}  // namespace

TEST_CASE("middle thirds generations") {
  const auto C = CantorScheme::middle_thirds(6);
  const auto g2 = build_generation(C, 2);
  REQUIRE(g2.size() == 4);
  const double expect[4][2] = {{0, 1.0 / 9}, {2.0 / 9, 1.0 / 3}, {2.0 / 3, 7.0 / 9}, {8.0 / 9, 1}};
  for (int i = 0; i < 4; ++i) {
    CHECK(g2.intervals[i].lo == doctest::Approx(expect[i][0]));
    CHECK(g2.intervals[i].hi == doctest::Approx(expect[i][1]));
  }
  for (int s = 0; s < 6; ++s) {
    const auto a = build_generation(C, s), b = build_generation(C, s + 1);
    CHECK(b.size() == 2 * a.size());
    CHECK(b.total_length() == doctest::Approx(a.total_length() * 2.0 / 3.0));
    for (const auto& iv : b.intervals) CHECK((a.contains(iv.lo + 1e-12) && a.contains(iv.hi - 1e-12)));
  }
  CHECK(build_generation(C, 6).contains(0.25));
  CHECK(build_generation(C, 2).contains(0.15) == false);
  CHECK(build_generation(C, 1).contains(0.5) == false);
}

TEST_CASE("scheme validation and resource limits") {
  CHECK_THROWS_AS(CantorScheme(0.0, {1.0, 0.5}, {2}, Placement::symmetric), ValidationError);
  CHECK_THROWS_AS(CantorScheme(0.0, {1.0, 0.1}, {}, Placement::symmetric), ValidationError);
  CHECK_THROWS_AS(build_generation(CantorScheme::middle_thirds(20), 20), ResourceError);
  const auto set = build_generation(CantorScheme::middle_thirds(3), 3);
  const auto h = power_gauge(kCantorDim);
  CHECK_THROWS_AS(net_premeasure(set, h, 0.1, 25), ResourceError);
  CHECK_THROWS_AS(net_premeasure(set, h, std::ldexp(1.0, -10), 10), DomainError);
}

TEST_CASE("net premeasure agrees with plain dyadic recursion") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int trial = 0; trial < 12; ++trial) {
    IntervalSet set;
    double x = U(rng) * 0.1;
    while (x < 1.2 && set.intervals.size() < 8) {
      const double len = U(rng) * 0.15;
      set.intervals.push_back({x, x + len});
      x += len + U(rng) * 0.2;
    }
    const double s = 0.3 + 0.7 * U(rng);
    const auto h = power_gauge(s, 2.0);
    for (double delta : {0.3, 0.05, 0.01}) {
      const double got = net_premeasure(set, h, delta, 10);
      const double ref = naive_net(set.intervals, [s](double t) { return std::pow(t, s); }, delta, 10);
      CHECK(got == doctest::Approx(ref).epsilon(1e-12));
    }
  }
}

TEST_CASE("net premeasure sanity values") {
  IntervalSet unit;
  unit.intervals.push_back({0.0, 1.0});
  const auto lin = power_gauge(1.0);
  CHECK(net_premeasure(unit, lin, 0.1, 20) == doctest::Approx(1.0).epsilon(1e-6));
  IntervalSet seg;
  seg.intervals.push_back({0.0, 0.3});
  const double v = net_premeasure(seg, lin, 0.01, 20);
  CHECK(v >= 0.3);
  CHECK(v <= 0.3 + std::ldexp(1.0, -19));
  CHECK(net_premeasure(IntervalSet{}, lin, 0.1, 10) == 0.0);
  IntervalSet point;
  point.intervals.push_back({0.5, 0.5});
  CHECK(net_premeasure(point, lin, 0.1, 16) == doctest::Approx(std::ldexp(1.0, -16)));

  IntervalSet sq;
  sq.intervals.push_back({0.0, 1.0});
  const std::vector<Axis> axes{{sq, false}, {sq, true}};
  const auto area = power_gauge(2.0);
  // The closed edge x = 1 costs one extra column of 2^8 cubes.
  CHECK(net_premeasure(axes, area, 0.2, 8) == doctest::Approx(1.0 + std::ldexp(1.0, -8)).epsilon(1e-12));
}

TEST_CASE("net cover is a cover and sums to the premeasure") {
  const auto set = build_generation(CantorScheme::middle_thirds(5), 5);
  const auto h = power_gauge(kCantorDim);
  const std::vector<Axis> axes{{set, false}};
  const auto res = net_premeasure_cover(axes, h, 1.0 / 27.0, 12);
  double sum = 0.0;
  for (const auto& c : res.cover) {
    CHECK(c.side() < 1.0 / 27.0);
    sum += h(c.side());
  }
  CHECK(sum == doctest::Approx(res.value).epsilon(1e-12));
  for (const auto& iv : set.intervals) {
    for (double x : {iv.lo, 0.5 * (iv.lo + iv.hi), iv.hi}) {
      bool covered = false;
      for (const auto& c : res.cover) {
        const double a = std::ldexp(static_cast<double>(c.index[0]), -c.level);
        covered = covered || (a <= x && x < a + c.side());
      }
      CHECK(covered);
    }
  }
}

TEST_CASE("middle thirds premeasures") {
  const auto C = CantorScheme::middle_thirds(18);
  const auto h = power_gauge(kCantorDim);
  const auto g = build_generation(C, 12);
  // Hausdorff premeasure of the Cantor set in its own dimension is 1.
  CHECK(interval_premeasure(g, h, std::pow(3.0, -6)) == doctest::Approx(1.0).epsilon(1e-9));
  double prev = 0.0;
  for (int j = 2; j <= 6; ++j) {
    const double v = net_premeasure(g, h, std::pow(3.0, -j), 18);
    CHECK(v >= prev - 1e-12);
    CHECK(v >= 1.0 - 1e-9);
    CHECK(v <= 2.0 / h.halving() + 1e-9);
    prev = v;
  }
}

TEST_CASE("mass ratio bounds on self-similar schemes") {
  const auto C = CantorScheme::middle_thirds(10);
  const auto b = lemma_a_bounds(C, power_gauge(kCantorDim));
  CHECK(b.a == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
  CHECK(b.lower == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  CHECK(b.upper == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(b.s_star == 5);
  const auto lin = lemma_a_bounds(C, power_gauge(1.0));
  CHECK(lin.a == doctest::Approx(1.0));
  CHECK(lin.upper == doctest::Approx(std::pow(2.0 / 3.0, 10)));
  CHECK_THROWS_AS(lemma_a_bounds(CantorScheme::middle_thirds(2), power_gauge(1.0)), DomainError);
}

TEST_CASE("count criterion proxy closed forms") {
  const auto C = CantorScheme::middle_thirds(16);
  CHECK(hatano_criterion(C, power_gauge(kCantorDim), 1, 16) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(hatano_criterion(C, power_gauge(0.7), 1, 16) == doctest::Approx(std::pow(2.0 * std::pow(3.0, -0.7), 16)));
  CHECK(hatano_criterion(C, power_gauge(2.0), 2, 16) == doctest::Approx(std::pow(4.0 / 9.0, 16)));
  CHECK(hatano_criterion(C, power_gauge(1.0), 2, 15) == doctest::Approx(std::pow(4.0 / 3.0, 8)));
  const CantorScheme left(0.0, {1.0, 0.25}, {2}, Placement::left_equispaced);
  CHECK_THROWS_AS(hatano_criterion(left, power_gauge(1.0), 1, 1), ValidationError);
}

TEST_CASE("product premeasure check on a full square") {
  IntervalSet unit;
  unit.intervals.push_back({0.0, 1.0});
  const auto res = product_premeasure_check(unit, 2, power_gauge(1.0), 0.25);
  CHECK(res.nu_premeasure_F == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(res.h_premeasure_E == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(res.consistent);
}

TEST_CASE("growth Cantor arcs") {
  for (const std::vector<int>& b : {std::vector<int>{1, 3, 5}, std::vector<int>{1, 4, 7}, std::vector<int>{1, 2, 5, 6}}) {
    const auto gc = growth_cantor(b);
    REQUIRE(gc.generations.size() == b.size());
    for (std::size_t j = 0; j < b.size(); ++j) {
      CHECK(gc.half_interval_counts[j] == doctest::Approx(4.0 * gc.scheme.count(static_cast<int>(j))));
      const auto& set = gc.generations[j];
      for (const auto& iv : set.intervals) {
        const double mid = 0.5 * (iv.lo + iv.hi);
        for (std::size_t i = 0; i <= j; ++i) CHECK(in_b_arc(mid, b[i]));
      }
      std::mt19937_64 rng(j);
      std::uniform_real_distribution<double> U(0.0, 2.0 * std::numbers::pi);
      for (int t = 0; t < 2000; ++t) {
        const double phi = U(rng);
        bool all = true;
        for (std::size_t i = 0; i <= j; ++i) all = all && in_b_arc(phi, b[i]);
        CHECK(set.contains(phi) == all);
      }
    }
  }
  CHECK(growth_cantor(std::vector<int>{1, 3, 5}).scheme.branches(0) == 1);
  CHECK(growth_cantor(std::vector<int>{1, 4, 7}).scheme.count(2) == 4);
  CHECK_THROWS_AS(growth_cantor(std::vector<int>{2, 3}), ValidationError);
}

TEST_CASE("positive Cantor construction") {
  const std::vector<int> d{2, 4, 6, 8};
  const auto s = positive_cantor(d);
  for (int k = 0; k <= 4; ++k) {
    CHECK(s.length(k) == doctest::Approx(std::pow(4.0, -k)));
    CHECK(s.count(k) == doctest::Approx(std::pow(2.0, k)));
  }
  const auto g = build_generation(s, 2);
  CHECK(g.intervals.front().lo == 1.0);
  for (int k = 0; k < 4; ++k) {
    const auto a = build_generation(s, k), b = build_generation(s, k + 1);
    for (const auto& iv : b.intervals) CHECK((a.contains(iv.lo) && a.contains(iv.hi)));
  }
  CHECK_THROWS_AS(positive_cantor(std::vector<int>{1, 3}), ValidationError);
  CHECK_THROWS_AS(positive_cantor(std::vector<int>{3, 3}), ValidationError);
  std::ostringstream os;
  const std::vector<IntervalSet> sets{build_generation(s, 1)};
  write_csv(os, sets);
  CHECK(os.str().rfind("generation,left,right\n1,1,1.25\n", 0) == 0);
}
