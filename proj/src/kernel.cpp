#include "radgrowth/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "radgrowth/errors.hpp"
#include "radgrowth/quadrature.hpp"

namespace radgrowth::kernel {

namespace {

constexpr double pi = std::numbers::pi;

void check_radius(double r) {
  if (!(r >= 0.0) || !(r < 1.0)) throw DomainError("radius must lie in [0, 1), got " + std::to_string(r));
}

// 1 + r^2 - 2 r cos(phi), written to keep relative accuracy near phi = 0, r = 1.
double kernel_denominator(double r, double phi) {
  const double s = std::sin(0.5 * phi);
  return (1.0 - r) * (1.0 - r) + 4.0 * r * s * s;
}

double pow_half(double d2, int m) {
  // d2^{m/2}
  if (m % 2 == 0) return std::pow(d2, m / 2);
  return std::pow(d2, m / 2) * std::sqrt(d2);
}

void check_boundary_distance(const BallPoint& x) {
  if (1.0 - x.r() < kMinBoundaryDistance * (1.0 - 1e-9))
    throw DomainError("evaluation point closer than 1e-6 to the boundary: " + x.str());
}

// Orthonormal basis of the tangent space at xhat.
std::vector<std::vector<double>> tangent_basis(std::span<const double> xhat) {
  const std::size_t m = xhat.size();
  std::vector<std::vector<double>> basis;
  std::vector<std::vector<double>> all{std::vector<double>(xhat.begin(), xhat.end())};
  std::size_t skip = 0;
  for (std::size_t i = 1; i < m; ++i)
    if (std::abs(xhat[i]) > std::abs(xhat[skip])) skip = i;
  for (std::size_t i = 0; i < m; ++i) {
    if (i == skip) continue;
    std::vector<double> v(m, 0.0);
    v[i] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& u : all) {
        double d = 0.0;
        for (std::size_t j = 0; j < m; ++j) d += v[j] * u[j];
        for (std::size_t j = 0; j < m; ++j) v[j] -= d * u[j];
      }
    }
    double n = 0.0;
    for (double c : v) n += c * c;
    n = std::sqrt(n);
    for (double& c : v) c /= n;
    all.push_back(v);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Fourier series of piecewise-constant azimuth data, m = 2.
Estimate fourier_steps(const AzimuthSteps& f, const BallPoint& x, double tol) {
  const double r = x.r();
  const double psi = x.direction().azimuth();
  const auto& br = f.breaks();
  const auto& val = f.values();
  const std::size_t p = br.size();
  double mean = 0.0;
  for (std::size_t i = 0; i < p; ++i) {
    const double b = (i + 1 < p) ? br[i + 1] : br[0] + 2.0 * pi;
    mean += val[i] * (b - br[i]);
  }
  mean /= 2.0 * pi;
  if (r == 0.0) return {mean, 0.0, 0};
  double vsum = 0.0;
  for (double v : val) vsum += 2.0 * std::abs(v);
  quad::CompensatedSum total;
  total.add(mean);
  const long n_cap = std::max<long>(1000, 20000000L / static_cast<long>(p));
  long n = 1;
  double rn = r;
  for (; n <= n_cap; ++n, rn *= r) {
    // 2 Re(c_n e^{i n psi}) r^n with c_n = (1/2pi) sum v_i (e^{-i n a} - e^{-i n b}) / (i n)
    double re = 0.0;
    for (std::size_t i = 0; i < p; ++i) {
      const double a = br[i];
      const double b = (i + 1 < p) ? br[i + 1] : br[0] + 2.0 * pi;
      // Re[(e^{i n (psi - a)} - e^{i n (psi - b)}) / (i n)] = (sin n(psi-a) - sin n(psi-b)) / n
      re += val[i] * (std::sin(n * (psi - a)) - std::sin(n * (psi - b)));
    }
    total.add(rn * re / (pi * static_cast<double>(n)));
    if (rn * vsum / (pi * n * (1.0 - r)) < 0.1 * tol) break;
  }
  if (n > n_cap) throw ResourceError("Fourier oracle needs more than the term cap at " + x.str());
  return {total.value(), 0.1 * tol, static_cast<int>(std::min<long>(n, 1L << 30))};
}

}  // namespace

double sphere_area(int n) {
  if (n < 1) throw DomainError("sphere_area needs n >= 1");
  return 2.0 * std::pow(pi, 0.5 * n) / std::tgamma(0.5 * n);
}

double surface_area(Dim m) { return sphere_area(m.value()); }

double p_tilde(Dim m, double r, double phi) {
  check_radius(r);
  return (1.0 - r) * (1.0 + r) / (surface_area(m) * pow_half(kernel_denominator(r, phi), m));
}

double q_kernel(Dim m, double r, double phi) {
  check_radius(r);
  if (phi < 0.0 || phi > pi) throw DomainError("angle must lie in [0, pi]");
  const double den = kernel_denominator(r, phi);
  return m.value() * r * (1.0 - r) * (1.0 + r) * std::sin(phi) /
         (surface_area(m) * pow_half(den, m.value() + 2));
}

double cap_measure(Dim m, double phi) {
  if (!(phi > 0.0) || phi > pi) throw DomainError("cap radius must lie in (0, pi]");
  switch (m.value()) {
    case 2:
      return 2.0 * phi;
    case 3: {
      const double s = std::sin(0.5 * phi);
      return 4.0 * pi * s * s;
    }
    case 4: {
      // 2pi (phi - sin phi cos phi); series below 0.1 avoids cancellation
      double core;
      if (phi < 0.1) {
        const double t = 2.0 * phi;
        double term = t * t * t / 6.0, sum = 0.0;
        for (int k = 1; k <= 8; ++k) {
          sum += term;
          term *= -t * t / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
        }
        core = 0.5 * sum;
      } else {
        core = phi - std::sin(phi) * std::cos(phi);
      }
      return 2.0 * pi * core;
    }
    default: {
      const int p = m.value() - 2;
      auto eval = [&](int n) {
        const double b[2] = {0.0, phi};
        return quad::integrate_panels([p](double t) { return std::pow(std::sin(t), p); }, b,
                                      quad::gauss_legendre(n));
      };
      const double first = eval(16);
      const auto res = quad::refine(eval, 16, 1024, 1e-13 * std::max(first, 1e-300), "cap measure");
      return sphere_area(m.value() - 1) * res.value;
    }
  }
}

double poisson_kernel(std::span<const double> x, std::span<const double> zeta) {
  double x2 = 0.0, d2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    x2 += x[i] * x[i];
    d2 += (x[i] - zeta[i]) * (x[i] - zeta[i]);
  }
  const int m = static_cast<int>(x.size());
  if (!(x2 < 1.0)) throw DomainError("Poisson kernel needs |x| < 1");
  const double r = std::sqrt(x2);
  return (1.0 - r) * (1.0 + r) / (sphere_area(m) * pow_half(d2, m));
}

std::string to_string(QuadMethod m) {
  switch (m) {
    case QuadMethod::reduced_product:
      return "reduced-product";
    case QuadMethod::monte_carlo:
      return "monte-carlo";
    case QuadMethod::fourier_oracle:
      return "fourier-oracle";
  }
  return "?";
}

QuadMethod parse_method(const std::string& s) {
  if (s == "reduced-product") return QuadMethod::reduced_product;
  if (s == "monte-carlo") return QuadMethod::monte_carlo;
  if (s == "fourier-oracle") return QuadMethod::fourier_oracle;
  throw ValidationError("unknown quadrature method '" + s + "'");
}

void QuadratureSpec::validate(Dim m) const {
  if (nodes < 8 || !is_pow2(nodes)) throw DomainError("quadrature nodes must be a power of two >= 8");
  if (max_nodes < 2 * nodes || max_nodes > quad::kMaxGaussNodes || !is_pow2(max_nodes))
    throw DomainError("quadrature max_nodes must be a power of two in [2*nodes, 4096]");
  if (!(tol > 0.0)) throw DomainError("quadrature tol must be positive");
  if (method == QuadMethod::fourier_oracle && m.value() != 2)
    throw DomainError("fourier-oracle quadrature is only available in dimension 2");
}

QuadratureSpec QuadratureSpec::doubled() const {
  QuadratureSpec q = *this;
  q.nodes = std::min(2 * nodes, quad::kMaxGaussNodes / 2);
  q.max_nodes = std::min(2 * max_nodes, quad::kMaxGaussNodes);
  q.tol = tol / 10.0;
  return q;
}

AzimuthSteps::AzimuthSteps(std::vector<double> breaks, std::vector<double> values)
    : breaks_(std::move(breaks)), values_(std::move(values)) {
  if (breaks_.empty() || breaks_.size() != values_.size())
    throw ValidationError("azimuth steps need one value per break");
  for (std::size_t i = 0; i < breaks_.size(); ++i) {
    if (breaks_[i] < 0.0 || breaks_[i] >= 2.0 * pi) throw ValidationError("azimuth breaks must lie in [0, 2pi)");
    if (i && !(breaks_[i] > breaks_[i - 1])) throw ValidationError("azimuth breaks must be increasing");
  }
}

double AzimuthSteps::operator()(double phi) const {
  const double w = wrap_angle(phi);
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), w);
  if (it == breaks_.begin()) return values_.back();
  return values_[static_cast<std::size_t>(it - breaks_.begin() - 1)];
}

double AzimuthSteps::at(std::span<const double> zeta) const {
  return (*this)(std::atan2(zeta[1], zeta[0]));
}

double AzimuthSteps::sup_abs() const noexcept {
  double s = 0.0;
  for (double v : values_) s = std::max(s, std::abs(v));
  return s;
}

Estimate poisson_extend(Dim m, const BoundaryFunction& f, const BallPoint& x, const QuadratureSpec& q) {
  q.validate(m);
  if (x.dim() != m.value()) throw DomainError("point dimension does not match m");
  check_boundary_distance(x);
  if (q.method == QuadMethod::fourier_oracle)
    throw DomainError("fourier-oracle quadrature needs azimuth step data");
  const int md = m.value();
  const double r = x.r();
  const double eps = 1.0 - r;
  const auto xhat = x.direction().coords();
  const auto tb = tangent_basis(xhat);
  const double ring = sphere_area(md - 1);
  const bool mc = q.method == QuadMethod::monte_carlo || md >= 4;
  const auto breaks = quad::graded_breaks(0.0, pi, 0.0, eps / 4.0);
  std::vector<double> eta(static_cast<std::size_t>(md));

  auto eval = [&](int n) {
    const auto& rule = quad::gauss_legendre(n);
    std::uint64_t node_id = 0;
    auto integrand = [&](double th) {
      const double c = std::cos(th), s = std::sin(th);
      const double w = p_tilde(m, r, th) * ring * std::pow(s, md - 2);
      double avg = 0.0;
      if (md == 2) {
        for (int sign : {1, -1}) {
          for (int i = 0; i < 2; ++i) eta[i] = c * xhat[i] + sign * s * tb[0][i];
          avg += 0.5 * f(eta);
        }
      } else if (!mc) {
        const int M = 2 * n;
        for (int j = 0; j < M; ++j) {
          const double a = 2.0 * pi * (j + 0.5) / M;
          const double ca = std::cos(a), sa = std::sin(a);
          for (int i = 0; i < md; ++i) eta[i] = c * xhat[i] + s * (ca * tb[0][i] + sa * tb[1][i]);
          avg += f(eta) / M;
        }
      } else {
        // Stratified over the azimuth in the first two tangent directions; the
        // remaining components follow the uniform law on S^{m-2}.
        const int M = 16 * n;
        std::mt19937_64 gen(mix(q.seed, mix(static_cast<std::uint64_t>(n), node_id++)));
        std::uniform_real_distribution<double> U(0.0, 1.0);
        std::normal_distribution<double> N01;
        const int dt = md - 1;  // tangent dimension
        std::vector<double> w_t(static_cast<std::size_t>(dt));
        for (int j = 0; j < M; ++j) {
          const double a = 2.0 * pi * (j + U(gen)) / M;
          double rho2 = 1.0;
          if (dt > 2) rho2 = 1.0 - std::pow(1.0 - U(gen), 2.0 / (dt - 2));
          const double rho = std::sqrt(rho2);
          w_t[0] = rho * std::cos(a);
          w_t[1] = rho * std::sin(a);
          if (dt > 2) {
            double nn = 0.0;
            for (int i = 2; i < dt; ++i) {
              w_t[i] = N01(gen);
              nn += w_t[i] * w_t[i];
            }
            const double sc = std::sqrt((1.0 - rho2) / nn);
            for (int i = 2; i < dt; ++i) w_t[i] *= sc;
          }
          for (int i = 0; i < md; ++i) {
            double t = 0.0;
            for (int l = 0; l < dt; ++l) t += w_t[l] * tb[l][i];
            eta[i] = c * xhat[i] + s * t;
          }
          avg += f(eta) / M;
        }
      }
      return w * avg;
    };
    return quad::integrate_panels(integrand, breaks, rule);
  };
  const auto res = quad::refine(eval, q.nodes, q.max_nodes, q.tol, "Poisson extension at " + x.str());
  return {res.value, res.error(), res.nodes};
}

Estimate poisson_extend(Dim m, const AzimuthSteps& f, const BallPoint& x, const QuadratureSpec& q) {
  q.validate(m);
  if (x.dim() != m.value()) throw DomainError("point dimension does not match m");
  check_boundary_distance(x);
  const int md = m.value();
  if (q.method == QuadMethod::fourier_oracle) return fourier_steps(f, x, q.tol);
  if (md >= 4 || q.method == QuadMethod::monte_carlo) {
    BoundaryFunction g = [&f](std::span<const double> z) { return f.at(z); };
    return poisson_extend(m, g, x, q);
  }
  const double r = x.r();
  const double eps = 1.0 - r;
  const auto xhat = x.direction().coords();
  const double psi = x.direction().azimuth();
  const double rho_hat = std::hypot(xhat[0], xhat[1]);
  const double scale = (1.0 - r) * (1.0 + r) / sphere_area(md);

  // azimuth panels on [psi - pi, psi + pi], split at the jumps
  std::vector<double> phis;
  const double lo = psi - pi, hi = psi + pi;
  for (double b : f.breaks()) phis.push_back(lo + wrap_angle(b - lo));
  const double base_phi = 0.25 * eps / std::max(rho_hat, eps);
  for (double g : quad::graded_breaks(lo, hi, psi, base_phi)) phis.push_back(g);
  quad::normalize_breaks(phis);
  std::vector<double> pval(phis.size(), 0.0);
  for (std::size_t p = 0; p + 1 < phis.size(); ++p) pval[p] = f(0.5 * (phis[p] + phis[p + 1]));

  auto eval = [&](int n) {
    const auto& rule = quad::gauss_legendre(n);
    quad::CompensatedSum total;
    for (std::size_t p = 0; p + 1 < phis.size(); ++p) {
      if (pval[p] == 0.0) continue;
      const double a = phis[p], b = phis[p + 1];
      const double h = 0.5 * (b - a), c = 0.5 * (a + b);
      double s = 0.0;
      for (int i = 0; i < rule.size(); ++i) {
        const double phi = c + h * rule.nodes[i];
        double kval;
        if (md == 2) {
          const double sn = std::sin(0.5 * (phi - psi));
          kval = scale / (eps * eps + 4.0 * r * sn * sn);
        } else {
          // azimuthal marginal of the kernel: integral over the polar angle
          const double cp = std::cos(phi), sp = std::sin(phi);
          const double A = rho_hat * std::cos(phi - psi), B = xhat[2];
          const double th_star = A >= 0.0 ? std::atan2(A, B) : (B >= 0.0 ? 0.0 : pi);
          auto d2_at = [&](double th) {
            const double st = std::sin(th), ct = std::cos(th);
            const double e0 = xhat[0] - st * cp, e1 = xhat[1] - st * sp, e2 = xhat[2] - ct;
            return eps * eps + r * (e0 * e0 + e1 * e1 + e2 * e2);
          };
          const double dmin = std::sqrt(d2_at(th_star));
          const auto tb = quad::graded_breaks(0.0, pi, th_star, 0.25 * dmin);
          kval = quad::integrate_panels(
              [&](double th) {
                const double d2 = d2_at(th);
                return scale * std::sin(th) / (d2 * std::sqrt(d2));
              },
              tb, rule);
        }
        s += rule.weights[i] * kval;
      }
      total.add(pval[p] * h * s);
    }
    return total.value();
  };
  const auto res = quad::refine(eval, q.nodes, q.max_nodes, q.tol, "Poisson extension at " + x.str());
  return {res.value, res.error(), res.nodes};
}

namespace {

template <class F>
double integrate_graded(F&& f, double r, double a, double b, double tol, const char* what) {
  const double eps = 1.0 - r;
  const auto br = quad::graded_breaks(a, b, 0.0, eps / 8.0);
  auto eval = [&](int n) { return quad::integrate_panels(f, br, quad::gauss_legendre(n)); };
  const double first = eval(8);
  return quad::refine(eval, 8, 1024, tol * std::max(1.0, std::abs(first)), what).value;
}

}  // namespace

double integrate_q(Dim m, double r, double a, double b, double tol) {
  check_radius(r);
  if (!(a >= 0.0 && b <= pi && a <= b)) throw DomainError("integration range must lie in [0, pi]");
  if (a == b) return 0.0;
  return integrate_graded([&](double t) { return q_kernel(m, r, t); }, r, a, b, tol, "integral of Q");
}

double integrate_cap_q(Dim m, double r, double a, double b, double tol) {
  check_radius(r);
  if (!(a > 0.0 && b <= pi && a <= b)) throw DomainError("integration range must lie in (0, pi]");
  if (a == b) return 0.0;
  return integrate_graded([&](double t) { return cap_measure(m, t) * q_kernel(m, r, t); }, r, a, b, tol,
                          "integral of cap * Q");
}

double KernelBoundReport::stability() const {
  auto rel = [](double a, double b) { return a > 0.0 ? std::abs(a - b) / a : 0.0; };
  return std::max({rel(C4_hat, C4_prev), rel(C6_hat, C6_prev), rel(C9_hat, C9_prev)});
}

KernelBoundReport kernel_bound_report(Dim m, std::span<const double> r_grid, double cutoff) {
  if (!(cutoff > 0.0) || cutoff >= pi) throw DomainError("cutoff d must lie in (0, pi)");
  if (r_grid.empty()) throw DomainError("empty radius grid");
  KernelBoundReport rep;
  rep.m = m.value();
  rep.cutoff = cutoff;
  for (double r : r_grid) {
    if (!(r > 0.5 && r < 1.0)) throw DomainError("bound report radii must lie in (1/2, 1)");
    const double eps = 1.0 - r;
    BoundRow row;
    row.r = r;
    row.R1 = std::pow(eps, m.value() - 1) * integrate_q(m, r, 0.0, eps);
    row.R2 = std::pow(cutoff, m.value()) * integrate_q(m, r, cutoff, pi);
    row.R3 = integrate_cap_q(m, r, eps, pi);
    rep.rows.push_back(row);
  }
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const auto& row = rep.rows[i];
    if (i + 1 < rep.rows.size()) {
      rep.C4_prev = std::max(rep.C4_prev, row.R1);
      rep.C6_prev = std::max(rep.C6_prev, row.R2);
      rep.C9_prev = std::max(rep.C9_prev, row.R3);
    }
    rep.C4_hat = std::max(rep.C4_hat, row.R1);
    rep.C6_hat = std::max(rep.C6_hat, row.R2);
    rep.C9_hat = std::max(rep.C9_hat, row.R3);
  }
  if (rep.rows.size() == 1) {
    rep.C4_prev = rep.C4_hat;
    rep.C6_prev = rep.C6_hat;
    rep.C9_prev = rep.C9_hat;
  }
  return rep;
}

std::vector<double> dyadic_radii(int j_lo, int j_hi) {
  if (j_lo < 2 || j_hi < j_lo || j_hi > 19) throw DomainError("dyadic radii need 2 <= j_lo <= j_hi <= 19");
  std::vector<double> out;
  for (int j = j_lo; j <= j_hi; ++j) out.push_back(1.0 - std::ldexp(1.0, -j));
  return out;
}

CapConstants cap_constants(Dim m, double phi_max, int samples) {
  if (!(phi_max > 0.0) || phi_max > pi || samples < 2) throw DomainError("bad cap grid");
  CapConstants c{1e300, 0.0};
  for (int i = 0; i < samples; ++i) {
    const double phi = phi_max * std::pow(1e-6, static_cast<double>(i) / (samples - 1));
    const double ratio = cap_measure(m, phi) / std::pow(phi, m.value() - 1);
    c.C1_hat = std::min(c.C1_hat, ratio);
    c.C2_hat = std::max(c.C2_hat, ratio);
  }
  return c;
}

KernelConstants kernel_constants(Dim m, double cutoff) {
  const auto radii = dyadic_radii(2, 19);
  const auto rep = kernel_bound_report(m, radii, cutoff);
  return {cap_constants(m, pi).C2_hat, rep.C4_hat, rep.C6_hat, rep.C9_hat};
}

}  // namespace radgrowth::kernel
