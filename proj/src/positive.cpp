#include "radgrowth/positive.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "radgrowth/errors.hpp"
#include "radgrowth/quadrature.hpp"

namespace radgrowth::positive {

namespace {

constexpr double pi = std::numbers::pi;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

std::string fmt_point(std::span<const double> x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) s += (i ? ", " : "") + fmt(x[i]);
  return s + ")";
}

}  // namespace

void DiscreteMeasure::add(std::span<const double> location, double weight) {
  if (static_cast<int>(location.size()) != dim_) throw ValidationError("atom has the wrong dimension");
  if (!(weight > 0.0) || !std::isfinite(weight)) throw ValidationError("atom weights must be positive");
  if (ambient_ == Ambient::sphere) {
    double n = 0.0;
    for (double c : location) n += c * c;
    if (std::abs(std::sqrt(n) - 1.0) > 1e-12) throw ValidationError("atom off the unit sphere: " + fmt_point(location));
  } else {
    for (double c : location)
      if (!(c >= 1.0 && c <= 2.0)) throw ValidationError("atom outside [1,2]^d: " + fmt_point(location));
  }
  coords_.insert(coords_.end(), location.begin(), location.end());
  weights_.push_back(weight);
}

double DiscreteMeasure::total_mass() const {
  quad::CompensatedSum s;
  for (double w : weights_) s.add(w);
  return s.value();
}

double DiscreteMeasure::box_mass(std::span<const double> lo, std::span<const double> hi) const {
  quad::CompensatedSum s;
  for (std::size_t i = 0; i < size(); ++i) {
    const auto p = location(i);
    bool in = true;
    for (int j = 0; j < dim_ && in; ++j) in = p[j] >= lo[j] && p[j] <= hi[j];
    if (in) s.add(weights_[i]);
  }
  return s.value();
}

double DiscreteMeasure::cap_mass(std::span<const double> x, double rho) const {
  quad::CompensatedSum s;
  for (std::size_t i = 0; i < size(); ++i)
    if (geodesic_distance(x, location(i)) <= rho) s.add(weights_[i]);
  return s.value();
}

void DiscreteMeasure::write_csv(std::ostream& os) const {
  for (int j = 0; j < dim_; ++j) os << 'x' << (j + 1) << ',';
  os << "weight\n";
  const auto old = os.precision(17);
  for (std::size_t i = 0; i < size(); ++i) {
    for (double c : location(i)) os << c << ',';
    os << weights_[i] << '\n';
  }
  os.precision(old);
}

DiscreteMeasure DiscreteMeasure::read_csv(std::istream& is, Ambient ambient) {
  std::string line;
  if (!std::getline(is, line)) throw ValidationError("empty measure CSV");
  const int cols = static_cast<int>(std::count(line.begin(), line.end(), ',')) + 1;
  if (cols < 2) throw ValidationError("measure CSV needs coordinates and a weight column");
  DiscreteMeasure mu(ambient, cols - 1);
  std::vector<double> row;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    row.clear();
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        throw ValidationError("bad number on line " + std::to_string(lineno) + ": " + cell);
      }
    }
    if (static_cast<int>(row.size()) != cols) throw ValidationError("wrong column count on line " + std::to_string(lineno));
    mu.add(std::span<const double>(row.data(), static_cast<std::size_t>(cols - 1)), row.back());
  }
  return mu;
}

std::vector<double> HypersphericalMap::operator()(std::span<const double> angles) const {
  const int m = m_.value();
  if (static_cast<int>(angles.size()) != m - 1) throw DomainError("hyperspherical map needs m-1 angles");
  std::vector<double> x(static_cast<std::size_t>(m));
  double prod = 1.0;
  for (int i = 0; i < m - 1; ++i) {
    x[i] = prod * std::cos(angles[i]);
    prod *= std::sin(angles[i]);
  }
  x[m - 1] = prod;
  return x;
}

std::vector<double> HypersphericalMap::inverse(std::span<const double> x) const {
  const int m = m_.value();
  if (static_cast<int>(x.size()) != m) throw DomainError("point dimension does not match m");
  std::vector<double> a(static_cast<std::size_t>(m - 1));
  for (int i = 0; i < m - 2; ++i) {
    double tail = 0.0;
    for (int j = i + 1; j < m; ++j) tail += x[j] * x[j];
    a[i] = std::atan2(std::sqrt(tail), x[i]);
  }
  a[m - 2] = wrap_angle(std::atan2(x[m - 1], x[m - 2]));
  return a;
}

double HypersphericalMap::bilipschitz_estimate(int pairs, std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(1.0, 2.0);
  const int n = m_.value() - 1;
  double worst = 1.0;
  std::vector<double> a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n));
  for (int p = 0; p < pairs; ++p) {
    double d2 = 0.0;
    for (int i = 0; i < n; ++i) {
      a[i] = U(rng);
      b[i] = U(rng);
      d2 += (a[i] - b[i]) * (a[i] - b[i]);
    }
    if (d2 == 0.0) continue;
    const double ratio = geodesic_distance((*this)(a), (*this)(b)) / std::sqrt(d2);
    worst = std::max({worst, ratio, 1.0 / ratio});
  }
  return worst;
}

DiscreteMeasure nu_k_build(Dim m, std::span<const int> d_seq, int k, int cells) {
  if (k < 0 || k > kMaxStage) throw DomainError("stage k must lie in [0, 6]");
  if (cells < 1) throw DomainError("cells per interval must be positive");
  if (static_cast<int>(d_seq.size()) < k) throw DomainError("d sequence shorter than the stage");
  const int dim = m.value() - 1;
  const cantor::IntervalSet Fk =
      k == 0 ? cantor::IntervalSet{0, {{1.0, 2.0}}}
             : cantor::build_generation(cantor::positive_cantor(d_seq.first(static_cast<std::size_t>(k))), k);
  const double per_axis = static_cast<double>(Fk.size()) * cells;
  if (std::pow(per_axis, dim) > kMaxAtoms) throw ResourceError("nu_k needs more than 1e6 atoms");
  std::vector<double> centers;
  for (const auto& iv : Fk.intervals) {
    const double h = iv.length() / cells;
    for (int i = 0; i < cells; ++i) centers.push_back(iv.lo + (i + 0.5) * h);
  }
  const double side = Fk.intervals.front().length() / cells;
  const double weight = std::ldexp(std::pow(side, dim), dim * k);
  DiscreteMeasure nu(Ambient::cube, dim);
  std::vector<std::size_t> idx(static_cast<std::size_t>(dim), 0);
  std::vector<double> p(static_cast<std::size_t>(dim));
  while (true) {
    for (int j = 0; j < dim; ++j) p[j] = centers[idx[j]];
    nu.add(p, weight);
    int j = 0;
    for (; j < dim; ++j) {
      if (++idx[j] < centers.size()) break;
      idx[j] = 0;
    }
    if (j == dim) break;
  }
  return nu;
}

DiscreteMeasure pushforward(const HypersphericalMap& f, const DiscreteMeasure& nu) {
  if (nu.ambient() != Ambient::cube) throw DomainError("pushforward needs a cube measure");
  DiscreteMeasure mu(Ambient::sphere, f.m().value());
  for (std::size_t i = 0; i < nu.size(); ++i) {
    auto x = f(nu.location(i));
    // renormalize against rounding so the sphere check holds
    double n = 0.0;
    for (double c : x) n += c * c;
    n = std::sqrt(n);
    for (double& c : x) c /= n;
    mu.add(x, nu.weight(i));
  }
  return mu;
}

Stage build_stage(const majorant::Majorant& v, Dim m, int k, int cells) {
  std::vector<int> d = k > 0 ? majorant::d_sequence(v, m, k) : std::vector<int>{};
  cantor::CantorScheme scheme = k > 0 ? cantor::positive_cantor(d)
                                      : cantor::CantorScheme(1.0, {1.0}, {}, cantor::Placement::left_equispaced);
  DiscreteMeasure nu = nu_k_build(m, d, k, cells);
  DiscreteMeasure mu = pushforward(HypersphericalMap(m), nu);
  const double rho_min = 2.0 * std::sqrt(m.value() - 1.0) * scheme.length(k) / cells;
  return Stage{m, v, k, cells, std::move(d), std::move(scheme), std::move(nu), std::move(mu), rho_min};
}

std::vector<std::vector<double>> surviving_centers(const Stage& s, int count, std::uint64_t seed) {
  const auto Fk = cantor::build_generation(s.scheme, s.k);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, Fk.size() - 1);
  std::vector<std::vector<double>> out;
  for (int c = 0; c < count; ++c) {
    std::vector<double> y;
    for (int j = 0; j < s.m.value() - 1; ++j) {
      const auto& iv = Fk.intervals[pick(rng)];
      y.push_back(0.5 * (iv.lo + iv.hi));
    }
    out.push_back(std::move(y));
  }
  return out;
}

std::vector<double> gap_point(const Stage& s) {
  if (s.k < 1) throw DomainError("stage 0 has no gaps");
  const double l1 = s.scheme.length(1);
  return std::vector<double>(static_cast<std::size_t>(s.m.value() - 1), 1.0 + 1.5 * l1);
}

double poisson_measure_eval(const DiscreteMeasure& mu, const BallPoint& x) {
  if (mu.ambient() != Ambient::sphere) throw DomainError("Poisson integral needs a sphere measure");
  if (x.dim() != mu.dim()) throw DomainError("point dimension does not match the measure");
  if (1.0 - x.r() < kernel::kMinBoundaryDistance * (1.0 - 1e-9))
    throw DomainError("evaluation point closer than 1e-6 to the boundary: " + x.str());
  const int m = mu.dim();
  const auto xc = x.cartesian();
  const double r = x.r();
  const double scale = (1.0 - r) * (1.0 + r) / kernel::sphere_area(m);
  quad::CompensatedSum s;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const auto z = mu.location(i);
    double d2 = 0.0;
    for (int j = 0; j < m; ++j) d2 += (xc[j] - z[j]) * (xc[j] - z[j]);
    s.add(mu.weight(i) * scale / std::pow(d2, 0.5 * m));
  }
  return s.value();
}

PartsIdentity parts_identity_check(const DiscreteMeasure& mu, double r, const SpherePoint& x) {
  if (mu.ambient() != Ambient::sphere) throw DomainError("parts identity needs a sphere measure");
  const Dim m(mu.dim());
  const std::size_t n = mu.size();
  std::vector<double> phi(n);
  for (std::size_t i = 0; i < n; ++i) phi[i] = geodesic_distance(x.coords(), mu.location(i));
  PartsIdentity out;
  quad::CompensatedSum lhs;
  for (std::size_t i = 0; i < n; ++i) lhs.add(mu.weight(i) * kernel::p_tilde(m, r, phi[i]));
  out.lhs = lhs.value();

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return phi[a] < phi[b]; });
  const double total = mu.total_mass();
  const bool with_quad = n <= 5000;
  quad::CompensatedSum rhs, rhs_q, cum;
  rhs.add(kernel::p_tilde(m, r, pi) * total);
  rhs_q.add(kernel::p_tilde(m, r, pi) * total);
  for (std::size_t j = 0; j < n; ++j) {
    cum.add(mu.weight(order[j]));
    const double a = phi[order[j]];
    const double b = j + 1 < n ? phi[order[j + 1]] : pi;
    if (!(b > a)) continue;
    // mu(closed cap of radius phi) is the cumulative mass on [a, b)
    rhs.add(cum.value() * (kernel::p_tilde(m, r, a) - kernel::p_tilde(m, r, b)));
    if (with_quad) rhs_q.add(cum.value() * kernel::integrate_q(m, r, a, b));
  }
  out.rhs = rhs.value();
  out.rhs_quadrature = with_quad ? rhs_q.value() : std::numeric_limits<double>::quiet_NaN();
  out.gap = std::abs(out.lhs - out.rhs) / (1.0 + std::abs(out.lhs));
  out.gap_quadrature = with_quad ? std::abs(out.lhs - out.rhs_quadrature) / (1.0 + std::abs(out.lhs))
                                 : std::numeric_limits<double>::quiet_NaN();
  return out;
}

double mu_condition_ratio(const DiscreteMeasure& mu, const majorant::Majorant& v, std::span<const double> x,
                          double rho, double rho_min) {
  if (!(rho >= rho_min)) throw ValidationError("cap radius " + fmt(rho) + " below the construction scale " + fmt(rho_min));
  if (rho > pi) throw DomainError("cap radius above pi");
  const Dim m(mu.dim());
  return mu.cap_mass(x, rho) / (kernel::cap_measure(m, rho) * v.g(pi / rho));
}

MuCondition mu_condition_check(const DiscreteMeasure& mu, const majorant::Majorant& v, int ball_samples,
                               std::uint64_t seed, double rho_min) {
  if (mu.ambient() != Ambient::sphere) throw DomainError("measure condition needs a sphere measure");
  if (!(rho_min > 0.0 && rho_min <= pi)) throw DomainError("rho_min must lie in (0, pi]");
  if (mu.size() == 0) throw DomainError("empty measure");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::normal_distribution<double> G(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> atom(0, mu.size() - 1);
  MuCondition out;
  const int m = mu.dim();
  for (int i = 0; i < ball_samples; ++i) {
    std::vector<double> x;
    if (i % 2 == 0) {
      const auto p = mu.location(atom(rng));
      x.assign(p.begin(), p.end());
    } else {
      double n = 0.0;
      for (int j = 0; j < m; ++j) {
        x.push_back(G(rng));
        n += x.back() * x.back();
      }
      for (double& c : x) c /= std::sqrt(n);
    }
    const double rho = std::min(pi, rho_min * std::pow(pi / rho_min, U(rng)));
    const double ratio = mu_condition_ratio(mu, v, x, rho, rho_min);
    ++out.samples;
    if (ratio > out.sup_ratio) {
      out.sup_ratio = ratio;
      out.witness = "x=" + fmt_point(x) + " rho=" + fmt(rho);
    }
  }
  return out;
}

std::vector<double> positive_schedule(const Stage& s) {
  std::vector<double> r;
  for (int dj : s.d) {
    const double eps = std::ldexp(1.0, -dj);
    if (eps >= kernel::kMinBoundaryDistance) r.push_back(1.0 - eps);
  }
  return r;
}

GrowthPositive growth_ratios_along(const Stage& s, const SpherePoint& x, std::span<const double> r_schedule) {
  if (x.dim() != s.m.value()) throw DomainError("direction dimension does not match m");
  GrowthPositive out;
  out.min_ratio = std::numeric_limits<double>::infinity();
  out.cap_lower = std::numeric_limits<double>::infinity();
  const int dim = s.m.value() - 1;
  const double finest = s.scheme.length(s.k);
  for (double r : r_schedule) {
    const double u = poisson_measure_eval(s.mu, BallPoint(r, x));
    const double v = s.v.v(r);
    out.r.push_back(r);
    out.u.push_back(u);
    out.v.push_back(v);
    out.ratio.push_back(u / v);
    out.min_ratio = std::min(out.min_ratio, u / v);
    const double eps = 1.0 - r;
    const int k0 = static_cast<int>(std::floor(std::log2(v) / dim)) + 1;
    constexpr int grid = 8;
    const double lo = std::min(finest, eps);
    for (int i = 0; i < grid; ++i) {
      const double phi = lo * std::pow(eps / lo, static_cast<double>(i) / (grid - 1));
      const double c = s.mu.cap_mass(x.coords(), phi) / (std::ldexp(1.0, dim * k0) * std::pow(phi, dim));
      out.cap_lower = std::min(out.cap_lower, c);
    }
  }
  return out;
}

GrowthPositive growth_check_positive(const Stage& s, std::span<const double> y, std::span<const double> r_schedule) {
  const int dim = s.m.value() - 1;
  if (static_cast<int>(y.size()) != dim) throw DomainError("cube point needs m-1 coordinates");
  const auto Fk = cantor::build_generation(s.scheme, s.k);
  for (double c : y)
    if (!Fk.contains(c)) throw ValidationError("point " + fmt_point(y) + " is not in C_" + std::to_string(s.k));
  const auto x = SpherePoint::normalized(HypersphericalMap(s.m)(y));
  return growth_ratios_along(s, x, r_schedule);
}

DeltaSearch lemma41_delta_evaluate(const DiscreteMeasure& mu, const SpherePoint& x, int n,
                                   const majorant::Majorant& v, int j_max, const kernel::KernelConstants& c) {
  if (n < 1) throw DomainError("growth index n must be positive");
  if (j_max < 1 || j_max > 40) throw DomainError("j_max must lie in [1, 40]");
  const Dim m(mu.dim());
  DeltaSearch out;
  out.k_hat = 1.0 / ((c.C2 * c.C4 + c.C9) * 3.0 * n);
  constexpr int grid = 16;
  for (int j = 1; j <= j_max; ++j) {
    const double dj = std::ldexp(1.0, -j);
    out.scales.push_back(dj);
    double found = 0.0;
    for (int i = 0; i < grid; ++i) {
      const double phi = dj * std::exp2(-static_cast<double>(i) / grid);
      if (mu.cap_mass(x.coords(), phi) >= out.k_hat * kernel::cap_measure(m, phi) * v.v(1.0 - phi)) {
        found = phi;
        break;
      }
    }
    out.delta.push_back(found);
    if (found == 0.0) out.failed.push_back(j);
  }
  return out;
}

DeltaSearch lemma41_delta_search(const DiscreteMeasure& mu, const SpherePoint& x, int n,
                                 const majorant::Majorant& v, int j_max, const kernel::KernelConstants& c) {
  auto out = lemma41_delta_evaluate(mu, x, n, v, j_max, c);
  if (!out.failed.empty())
    throw CertificationFailure("Delta_j search (no Delta at scale 2^-" + std::to_string(out.failed.front()) + ")",
                               x.str());
  return out;
}

DiscreteMeasure uniform_sphere_measure(Dim m, int n, double mass) {
  if (n < 1) throw DomainError("atom count must be positive");
  if (!(mass > 0.0)) throw DomainError("mass must be positive");
  DiscreteMeasure mu(Ambient::sphere, m.value());
  if (m.value() == 2) {
    for (int i = 0; i < n; ++i) {
      const double a = (i + 0.5) * 2.0 * pi / n;
      mu.add(std::vector<double>{std::cos(a), std::sin(a)}, mass / n);
    }
  } else if (m.value() == 3) {
    const int nphi = 2 * n;
    for (int i = 0; i < n; ++i) {
      const double z = -1.0 + (i + 0.5) * 2.0 / n;
      const double s = std::sqrt((1.0 - z) * (1.0 + z));
      for (int j = 0; j < nphi; ++j) {
        const double a = (j + 0.5) * 2.0 * pi / nphi;
        auto p = SpherePoint::normalized({s * std::cos(a), s * std::sin(a), z});
        mu.add(p.coords(), mass / (static_cast<double>(n) * nphi));
      }
    }
  } else {
    throw DomainError("uniform sphere measure is available for m = 2, 3");
  }
  return mu;
}

double doubling_inheritance(const majorant::Majorant& v, Dim m, int j_max) {
  double worst = 0.0;
  for (int j = 1; j <= j_max; ++j) {
    const double t = std::ldexp(1.0, -j);
    worst = std::max(worst, v.v(1.0 - 0.5 * t) / (std::ldexp(1.0, m.value() - 1) * v.v(1.0 - t)));
  }
  return worst;
}

}  // namespace radgrowth::positive
