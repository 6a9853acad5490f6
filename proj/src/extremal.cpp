#include "radgrowth/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "radgrowth/cantor.hpp"
#include "radgrowth/errors.hpp"

namespace radgrowth::extremal {

namespace {

constexpr double pi = std::numbers::pi;

// (phi / pi) 2^k reduced to [0, 2)
double scaled_azimuth(double phi, int k) {
  const long double x = static_cast<long double>(wrap_angle(phi)) / std::numbers::pi_v<long double>;
  long double y = std::fmod(std::ldexp(x, k), 2.0L);
  if (y < 0) y += 2.0L;
  return static_cast<double>(y);
}

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

void check_k(Dim m, int k, kernel::QuadMethod method) {
  if (k < 0) throw DomainError("k must be nonnegative");
  if (k > max_k(m, method))
    throw DomainError("u_k with k = " + std::to_string(k) + " exceeds the cap " + std::to_string(max_k(m, method)) +
                      " for " + kernel::to_string(method) + " in dimension " + std::to_string(m.value()));
}

}  // namespace

double alpha(int k) { return std::ldexp(pi, -k); }

bool SectorSet::contains(double phi) const {
  const double x = scaled_azimuth(phi, k);
  switch (kind) {
    case SectorKind::S:
      return x < 1.0;
    case SectorKind::T:
      return x >= 0.25 && x <= 0.75;
    case SectorKind::B:
      return x <= 0.25 || x >= 1.75;
  }
  return false;
}

bool SphereSector::contains(const SpherePoint& eta) const {
  const double phi = eta.azimuth();
  switch (kind) {
    case SphereKind::E:
      return SectorSet{SectorKind::S, k}.contains(phi);
    case SphereKind::F:
      return eta.planar_radius() >= 0.75 && SectorSet{SectorKind::T, k}.contains(phi);
    case SphereKind::H:
      return eta.planar_radius() >= 0.75 && SectorSet{SectorKind::B, k}.contains(phi);
  }
  return false;
}

bool sector_membership(const SectorSet& set, double phi) { return set.contains(phi); }
bool sector_membership(const SphereSector& set, const SpherePoint& eta) { return set.contains(eta); }

std::vector<double> BlockRotation::apply(std::span<const double> x) const { return rotate12(x, angle()); }
std::vector<double> BlockRotation::inverse(std::span<const double> x) const { return rotate12(x, -angle()); }

BallPoint BlockRotation::apply(const BallPoint& x) const {
  return BallPoint(x.r(), SpherePoint::normalized(apply(x.direction().coords())));
}
BallPoint BlockRotation::inverse(const BallPoint& x) const {
  return BallPoint(x.r(), SpherePoint::normalized(inverse(x.direction().coords())));
}

kernel::AzimuthSteps square_wave(int k) {
  if (k < 0 || k > 24) throw DomainError("square wave index out of range");
  const std::size_t n = std::size_t{2} << k;
  std::vector<double> breaks(n), values(n);
  for (std::size_t j = 0; j < n; ++j) {
    breaks[j] = std::ldexp(pi * static_cast<double>(j), -k);
    values[j] = j % 2 == 0 ? 1.0 : -1.0;
  }
  return kernel::AzimuthSteps(std::move(breaks), std::move(values));
}

int max_k(Dim m, kernel::QuadMethod method) {
  if (method == kernel::QuadMethod::fourier_oracle) return m.value() == 2 ? 24 : -1;
  if (m.value() == 2 && method == kernel::QuadMethod::reduced_product) return 16;
  return 10;
}

double u_k_planar(int k, double r, double theta) {
  if (k < 0 || k > 24) throw DomainError("closed form is limited to k <= 24");
  if (!(r >= 0.0 && r < 1.0)) throw DomainError("radius must lie in [0, 1)");
  if (r == 0.0) return 0.0;
  const double L = std::ldexp(std::log(r), k);  // log |w|
  const double mag = std::exp(L);
  const double gap = -std::expm1(2.0 * L);       // 1 - |w|^2
  const double ang = pi * scaled_azimuth(theta, k);
  return 2.0 / pi * std::atan2(2.0 * mag * std::sin(ang), gap);
}

kernel::Estimate u_k_eval(Dim m, int k, const BallPoint& x, const kernel::QuadratureSpec& q) {
  q.validate(m);
  check_k(m, k, q.method);
  if (x.dim() != m.value()) throw DomainError("point dimension does not match m");
  if (1.0 - x.r() < kernel::kMinBoundaryDistance * (1.0 - 1e-9))
    throw DomainError("evaluation point closer than 1e-6 to the boundary: " + x.str());
  if (q.method == kernel::QuadMethod::fourier_oracle)
    return {u_k_planar(k, x.r(), x.direction().azimuth()), 0.0, 0};
  return kernel::poisson_extend(m, square_wave(k), x, q);
}

kernel::Estimate h_k_eval(Dim m, int k, const BallPoint& x, const kernel::QuadratureSpec& q) {
  return u_k_eval(m, k, BlockRotation(k + 1).apply(x), q);
}

bool LemmaEx1Record::pass() const { return failure() == nullptr; }

const Clause* LemmaEx1Record::failure() const {
  for (const Clause* c : {&a, &b, &c, &d_clause}) {
    if (!c->pass) return c;
  }
  if (oracle_checked && !oracle.pass) return &oracle;
  return nullptr;
}

namespace {

constexpr double kClauseTol = 1e-8;
constexpr double kOracleTol = 1e-6;

struct Sample {
  int k;
  BallPoint x;
  double u;
};

// 1 - |x| = s 2^{-k} with s on a log grid in [1/8, 16], kept inside [0, 1 - 1e-6].
std::vector<double> certify_radii(int k) {
  std::vector<double> out;
  constexpr int n = 8;
  for (int i = 0; i < n; ++i) {
    const double s = std::ldexp(std::pow(2.0, 7.0 * i / (n - 1)), -3);
    const double eps = std::ldexp(s, -k);
    if (eps <= 1.0 && eps >= kernel::kMinBoundaryDistance) out.push_back(1.0 - eps);
  }
  return out;
}

SpherePoint direction(int m, double phi, double t) {
  return m == 2 ? SpherePoint::from_azimuth(2, phi) : SpherePoint::from_azimuth(m, phi, t);
}

}  // namespace

LemmaEx1Record lemma_ex1_evaluate(Dim m, const LemmaEx1Options& opt) {
  if (opt.k_lo < 2 || opt.k_hi > 8 || opt.k_lo > opt.k_hi) throw DomainError("k range must lie in [2, 8]");
  if (opt.d < 1 || opt.d > 3) throw DomainError("order d must be 1, 2 or 3");
  if (opt.sample_count < 1) throw DomainError("sample_count must be positive");
  opt.quad.validate(m);
  const int md = m.value();
  LemmaEx1Record rec;
  rec.m = md;
  rec.d = opt.d;
  rec.quad = opt.quad;
  rec.oracle_checked = md == 2 && opt.quad.method != kernel::QuadMethod::fourier_oracle;

  double oracle_diff = 0.0;
  std::string oracle_witness;
  auto eval = [&](int k, const BallPoint& x) {
    const double u = u_k_eval(m, k, x, opt.quad).value;
    if (rec.oracle_checked) {
      const double diff = std::abs(u - u_k_planar(k, x.r(), x.direction().azimuth()));
      if (diff >= oracle_diff) {
        oracle_diff = diff;
        oracle_witness = "k=" + std::to_string(k) + " x=" + x.str();
      }
    }
    return u;
  };

  double a_max = 0.0, b_min = std::numeric_limits<double>::infinity();
  std::string a_wit, b_wit;
  long a_n = 0, b_n = 0;
  for (int k = opt.k_lo; k <= opt.k_hi; ++k) {
    rec.ks.push_back(k);
    std::mt19937_64 rng(mix(opt.seed, static_cast<std::uint64_t>(k)));
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::vector<SpherePoint> dirs;
    // centers of an S_k arc and of a complementary arc, where |u_k| peaks
    dirs.push_back(direction(md, 0.5 * alpha(k), 1.0));
    dirs.push_back(direction(md, 1.5 * alpha(k), 1.0));
    for (int i = 0; i < opt.sample_count; ++i) {
      const double phi = 2.0 * pi * U(rng);
      dirs.push_back(direction(md, phi, std::sqrt(U(rng))));
    }
    std::array<double, 3> ck{};
    const SphereSector E{SphereKind::E, k};
    for (double r : certify_radii(k)) {
      const double eps = 1.0 - r;
      for (const auto& eta : dirs) {
        const BallPoint x(r, eta);
        const double u = eval(k, x);
        ++a_n;
        if (std::abs(u) >= a_max) {
          a_max = std::abs(u);
          a_wit = "k=" + std::to_string(k) + " x=" + x.str();
        }
        if (E.contains(eta)) {
          ++b_n;
          if (u < b_min) {
            b_min = u;
            b_wit = "k=" + std::to_string(k) + " x=" + x.str();
          }
        }
        for (int d = 1; d <= 3; ++d)
          ck[d - 1] = std::max(ck[d - 1], std::abs(u) * std::pow(std::ldexp(eps, k), d));
      }
    }
    for (int d = 0; d < 3; ++d) rec.c_hat_per_k[d].push_back(ck[d]);
  }
  for (int d = 0; d < 3; ++d)
    rec.c_hat[d] = *std::max_element(rec.c_hat_per_k[d].begin(), rec.c_hat_per_k[d].end());

  rec.a = {"(a) |u_k| <= 1", a_max <= 1.0 + kClauseTol, a_max, 1.0, kClauseTol, a_n, a_wit};
  rec.b = {"(b) u_k >= 0 on E_k", b_min >= -kClauseTol, b_min, 0.0, kClauseTol, b_n, b_wit};
  {
    const auto& c = rec.c_hat_per_k[opt.d - 1];
    const auto [lo, hi] = std::minmax_element(c.begin(), c.end());
    const double ratio = *lo > 0.0 ? *hi / *lo : std::numeric_limits<double>::infinity();
    const int k_lo = rec.ks[static_cast<std::size_t>(lo - c.begin())];
    const int k_hi = rec.ks[static_cast<std::size_t>(hi - c.begin())];
    rec.c = {"(c) c_hat stable within factor 2 across k", ratio <= 2.0, ratio, 2.0, 0.0,
             static_cast<long>(c.size()),
             "d=" + std::to_string(opt.d) + " min at k=" + std::to_string(k_lo) + " max at k=" + std::to_string(k_hi)};
  }

  // (d): sampled F_k directions, corners first
  std::vector<std::vector<SpherePoint>> fdirs;
  for (int k : rec.ks) {
    std::mt19937_64 rng(mix(opt.seed ^ 0xdULL, static_cast<std::uint64_t>(k)));
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::vector<SpherePoint> dirs;
    for (double t : md == 2 ? std::vector<double>{1.0} : std::vector<double>{0.75, 1.0})
      for (double x : {0.25, 0.75}) dirs.push_back(direction(md, x * alpha(k), t));
    for (int i = 0; i < std::max(2, opt.sample_count / 2); ++i) {
      const double j = std::floor(U(rng) * std::ldexp(1.0, k));
      const double phi = (2.0 * j + 0.25 + 0.5 * U(rng)) * alpha(k);
      dirs.push_back(direction(md, phi, md == 2 ? 1.0 : 0.75 + 0.25 * U(rng)));
    }
    fdirs.push_back(std::move(dirs));
  }
  std::string d_wit;
  long d_n = 0;
  auto holds = [&](double a) {
    for (std::size_t i = 0; i < rec.ks.size(); ++i) {
      const int k = rec.ks[i];
      const double r = 1.0 - a * std::ldexp(1.0, -k);
      for (const auto& eta : fdirs[i]) {
        const BallPoint x(r, eta);
        ++d_n;
        const double u = eval(k, x);
        if (!(u > 0.25)) {
          d_wit = "a=" + fmt(a) + " k=" + std::to_string(k) + " x=" + x.str() + " u=" + fmt(u);
          return false;
        }
      }
    }
    return true;
  };
  double lo = 0.0, hi = 1.0;
  if (holds(1.0)) {
    lo = 1.0;
  } else {
    while (hi - lo > std::ldexp(1.0, -10)) {
      const double mid = 0.5 * (lo + hi);
      (holds(mid) ? lo : hi) = mid;
    }
  }
  rec.a_hat = lo;
  rec.d_clause = {"(d) u_k > 1/4 on F_k for 1 - |x| < a 2^-k", lo > 0.0, lo, 0.0, std::ldexp(1.0, -10), d_n,
                  lo < 1.0 ? d_wit : "none"};

  rec.oracle_max_diff = oracle_diff;
  rec.oracle = {"m=2 closed-form cross-check", !rec.oracle_checked || oracle_diff <= kOracleTol, oracle_diff,
                kOracleTol, 0.0, a_n + d_n, oracle_witness};
  return rec;
}

LemmaEx1Record lemma_ex1_report(Dim m, const LemmaEx1Options& opt) {
  auto rec = lemma_ex1_evaluate(m, opt);
  if (const Clause* c = rec.failure()) throw CertificationFailure(c->name, c->witness);
  return rec;
}

ExtremalSeries make_series(const majorant::Majorant& v, Dim m, double A1, std::array<double, 3> c_hat,
                           const kernel::QuadratureSpec& quad, double rel_tol) {
  quad.validate(m);
  if (!(rel_tol > 0.0)) throw DomainError("rel_tol must be positive");
  for (double c : c_hat)
    if (!(c > 0.0)) throw DomainError("c_hat constants must be positive");
  ExtremalSeries s{v, m, A1, {}, quad, c_hat, majorant::doubling_constant(v).D_hat, 2, rel_tol};
  s.d = static_cast<int>(std::ceil(std::log2(s.D_hat))) + 1;
  const int cap = max_k(m, quad.method);
  // one term past the cap anchors the tail bound
  for (int N = 1;; ++N) {
    s.b = majorant::b_sequence(v, A1, N);
    if (s.b.back() > cap) break;
  }
  return s;
}

double term_bound(const ExtremalSeries& s, int b, double eps) {
  const double lg = s.v.log2_g_pow2(b);
  double best = std::exp2(lg);
  for (int d = 1; d <= 3; ++d)
    best = std::min(best, s.c_hat[d - 1] * std::exp2(lg - b * d - d * std::log2(eps)));
  return best;
}

double tail_bound(const ExtremalSeries& s, int n, double eps) {
  const int L = static_cast<int>(s.b.size()) - 1;  // evaluable terms; s.b[L] is past the cap
  double sum = 0.0;
  for (int j = n; j < L; ++j) sum += term_bound(s, s.b[static_cast<std::size_t>(j)], eps);
  // beyond: consecutive (c)-bounds shrink by at least 2^{-(d - gamma)}
  const double gamma = std::log2(s.D_hat);
  const int bL = s.b.back();
  double beyond = std::numeric_limits<double>::infinity();
  for (int d = 1; d <= 3; ++d) {
    if (!(d > gamma)) continue;
    const double q = std::exp2(-(d - gamma));
    const double first = s.c_hat[d - 1] * std::exp2(s.v.log2_g_pow2(bL) - bL * d - d * std::log2(eps));
    beyond = std::min(beyond, first / (1.0 - q));
  }
  return sum + beyond;
}

int truncation(const ExtremalSeries& s, double r) {
  const double eps = 1.0 - r;
  const double target = s.rel_tol * s.v.v(r);
  const int L = static_cast<int>(s.b.size()) - 1;
  for (int n = 0; n <= L; ++n)
    if (tail_bound(s, n, eps) <= target) return n;
  throw ResourceError("series tail at |x| = " + fmt(r) + " exceeds " + fmt(target) + " with all terms up to b = " +
                      std::to_string(s.b[static_cast<std::size_t>(L - 1)]) + "; need d > " +
                      std::to_string(s.d) + " or a larger term cap");
}

SeriesValue series_eval(const ExtremalSeries& s, const BallPoint& x, int extra_terms) {
  const int L = static_cast<int>(s.b.size()) - 1;
  const int N = truncation(s, x.r()) + extra_terms;
  if (N > L) throw ResourceError("requested terms exceed the evaluable range");
  SeriesValue out;
  double sum = 0.0, err = 0.0;
  for (int n = 0; n < N; ++n) {
    const int b = s.b[static_cast<std::size_t>(n)];
    const double g = s.v.g_pow2(b);
    const auto h = h_k_eval(s.m, b, x, s.quad);
    sum += g * h.value;
    err += g * h.error;
  }
  out.value = sum;
  out.quad_error = err;
  out.tail = tail_bound(s, N, 1.0 - x.r());
  out.terms = N;
  return out;
}

std::vector<std::pair<double, double>> growth_arcs(const ExtremalSeries& s, int depth) {
  if (depth < 1 || depth > static_cast<int>(s.b.size())) throw DomainError("depth outside the series");
  const auto gc = cantor::growth_cantor(std::span<const int>(s.b.data(), static_cast<std::size_t>(depth)));
  std::vector<std::pair<double, double>> out;
  for (const auto& iv : gc.generations.back().intervals) out.emplace_back(iv.lo, iv.hi);
  return out;
}

std::vector<SpherePoint> sample_growth_directions(const ExtremalSeries& s, int depth, int count,
                                                  std::uint64_t seed) {
  auto arcs = growth_arcs(s, depth);
  std::mt19937_64 rng(seed);
  std::shuffle(arcs.begin(), arcs.end(), rng);
  std::vector<SpherePoint> out;
  for (int i = 0; i < count && i < static_cast<int>(arcs.size()); ++i) {
    const auto [lo, hi] = arcs[static_cast<std::size_t>(i)];
    out.push_back(SpherePoint::from_azimuth(s.m.value(), 0.5 * (lo + hi), 1.0));
  }
  return out;
}

std::vector<double> growth_schedule(const ExtremalSeries& s, double a_hat, int depth) {
  if (!(a_hat > 0.0 && a_hat <= 1.0)) throw DomainError("a_hat must lie in (0, 1]");
  if (depth < 1 || depth > static_cast<int>(s.b.size())) throw DomainError("depth outside the series");
  std::vector<double> r;
  for (int n = 0; n < depth; ++n) {
    const double eps = a_hat * std::ldexp(1.0, -s.b[static_cast<std::size_t>(n)]);
    if (eps >= kernel::kMinBoundaryDistance) r.push_back(1.0 - eps);
  }
  return r;
}

GrowthScan growth_scan(const ExtremalSeries& s, const SpherePoint& eta, std::span<const double> r_schedule) {
  if (r_schedule.size() > s.b.size()) throw DomainError("schedule longer than the series");
  const double t = eta.planar_radius();
  if (!(t * t > 0.25)) throw ValidationError("direction has eta1^2 + eta2^2 <= 1/4: " + eta.str());
  for (std::size_t n = 0; n < r_schedule.size(); ++n) {
    if (!SphereSector{SphereKind::H, s.b[n]}.contains(eta))
      throw ValidationError("direction " + eta.str() + " is not in H_" + std::to_string(s.b[n]));
    if (n > 0 && !(r_schedule[n] > r_schedule[n - 1])) throw ValidationError("schedule must be increasing");
  }
  GrowthScan out;
  out.min_ratio = std::numeric_limits<double>::infinity();
  for (double r : r_schedule) {
    const auto val = series_eval(s, BallPoint(r, eta));
    const double v = s.v.v(r);
    out.r.push_back(r);
    out.u.push_back(val.value);
    out.v.push_back(v);
    out.ratio.push_back(val.value / v);
    out.error.push_back(val.error());
    out.min_ratio = std::min(out.min_ratio, val.value / v);
  }
  return out;
}

double tau_neighborhood(double K, double D, double c, Dim m) {
  if (!(K >= 1.0) || !(D >= 1.0)) throw DomainError("tau needs K, D >= 1");
  if (c == 0.0 || !std::isfinite(c)) throw DomainError("tau needs c != 0");
  const double KD = K * D;
  double q;
  if (c > 0.0) {
    if (!(KD > c)) throw DomainError("tau needs K D > c for c > 0");
    q = (KD - c) / (KD - 0.5 * c);
  } else {
    q = (KD - 0.5 * c) / (KD - c);
  }
  return 0.5 * (1.0 - std::pow(q, 1.0 / m.value()));
}

TauCheck tau_propagation_check(const ExtremalSeries& s, double K_hat, double c, std::span<const BallPoint> bases,
                               int per_base, std::uint64_t seed) {
  TauCheck out;
  out.tau = tau_neighborhood(K_hat, s.D_hat, c, s.m);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::normal_distribution<double> G(0.0, 1.0);
  const int md = s.m.value();
  for (const auto& x : bases) {
    const double r = x.r(), v = s.v.v(r);
    const auto ux = series_eval(s, x);
    if (!(c > 0.0 ? ux.value > c * v : ux.value < c * v)) continue;
    const auto xhat = x.direction().coords();
    for (int i = 0; i < per_base; ++i) {
      // tangent direction at xhat, then a rotation of chord length rho / r
      std::vector<double> w(static_cast<std::size_t>(md));
      double dot = 0.0;
      for (int j = 0; j < md; ++j) {
        w[j] = G(rng);
        dot += w[j] * xhat[j];
      }
      double wn = 0.0;
      for (int j = 0; j < md; ++j) {
        w[j] -= dot * xhat[j];
        wn += w[j] * w[j];
      }
      wn = std::sqrt(wn);
      const double rho = U(rng) * out.tau * (1.0 - r) * (1.0 - 1e-9);
      const double theta = 2.0 * std::asin(std::min(1.0, 0.5 * rho / r));
      std::vector<double> y(static_cast<std::size_t>(md));
      for (int j = 0; j < md; ++j) y[j] = std::cos(theta) * xhat[j] + std::sin(theta) * w[j] / wn;
      const BallPoint xp(r, SpherePoint::normalized(std::move(y)));
      const auto up = series_eval(s, xp);
      const double tol = ux.error() + up.error();
      ++out.pairs;
      const bool ok = c > 0.0 ? up.value >= 0.5 * c * v - tol : up.value <= 0.5 * c * v + tol;
      if (!ok) {
        ++out.violations;
        if (out.witness.empty()) out.witness = "x=" + x.str() + " x'=" + xp.str();
      }
    }
  }
  return out;
}

}  // namespace radgrowth::extremal
