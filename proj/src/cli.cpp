#include "radgrowth/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "radgrowth/cantor.hpp"
#include "radgrowth/errors.hpp"
#include "radgrowth/extremal.hpp"
#include "radgrowth/kernel.hpp"
#include "radgrowth/majorant.hpp"
#include "radgrowth/positive.hpp"

namespace radgrowth::cli {

namespace {

using nlohmann::json;
constexpr double pi = std::numbers::pi;

struct Config {
  int m = 2;
  std::string majorant = "power:1";
  double A1 = 4.0;
  std::string k = "";
  int d = 1;
  int depth = 4;
  int cells = 2;
  int samples = 8;
  std::uint64_t seed = 1;
  double delta = 0.0;
  std::string gauge = "";
  std::string scheme = "middle-thirds";
  std::string quad_method = "reduced-product";
  int quad_nodes = 8;
  int quad_max_nodes = 128;
  double quad_tol = 1e-9;
  std::string out_dir;

  json to_json() const {
    return {{"m", m},           {"majorant", majorant},   {"A1", A1},
            {"k", k},           {"d", d},                 {"depth", depth},
            {"cells", cells},   {"samples", samples},     {"seed", seed},
            {"delta", delta},   {"gauge", gauge},         {"scheme", scheme},
            {"quad_method", quad_method}, {"quad_nodes", quad_nodes}, {"quad_max_nodes", quad_max_nodes},
            {"quad_tol", quad_tol}};
  }

  kernel::QuadratureSpec quad() const {
    kernel::QuadratureSpec q;
    q.method = kernel::parse_method(quad_method);
    q.nodes = quad_nodes;
    q.max_nodes = quad_max_nodes;
    q.seed = seed;
    q.tol = quad_tol;
    return q;
  }
};

std::pair<int, int> parse_range(const std::string& s, int lo, int hi) {
  if (s.empty()) return {lo, hi};
  const auto dots = s.find("..");
  try {
    if (dots == std::string::npos) {
      const int k = std::stoi(s);
      return {k, k};
    }
    return {std::stoi(s.substr(0, dots)), std::stoi(s.substr(dots + 2))};
  } catch (const std::exception&) {
    throw DomainError("cannot read k range '" + s + "' (expected N or A..B)");
  }
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex(std::uint64_t x) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << x;
  return os.str();
}

double finite_or_null(double x) { return std::isfinite(x) ? x : std::numeric_limits<double>::quiet_NaN(); }

class Report {
 public:
  Report(std::string experiment, const Config& cfg) : experiment_(std::move(experiment)), cfg_(cfg) {}

  void check(const std::string& name, bool pass, double value, double bound, double tolerance,
             const std::string& witness = "") {
    checks_.push_back({{"name", name},
                       {"pass", pass},
                       {"value", finite_or_null(value)},
                       {"bound", finite_or_null(bound)},
                       {"tolerance", tolerance},
                       {"witness", witness}});
    pass_ = pass_ && pass;
  }
  json& data() { return data_; }
  bool pass() const { return pass_; }

  json finish() const {
    const json config = cfg_.to_json();
    std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return {{"experiment", experiment_},
            {"config", config},
            {"provenance", {{"config_hash", hex(fnv1a(config.dump()))}, {"seed", cfg_.seed}}},
            {"checks", checks_},
            {"data", data_},
            {"pass", pass_},
            {"timestamp", buf}};
  }

 private:
  std::string experiment_;
  const Config& cfg_;
  json checks_ = json::array();
  json data_ = json::object();
  bool pass_ = true;
};

class Output {
 public:
  explicit Output(const std::string& dir) : dir_(dir) {
    if (!dir_.empty()) std::filesystem::create_directories(dir_);
  }
  bool enabled() const { return !dir_.empty(); }
  // Opens dir/name for writing; the stream is not open when output is disabled.
  std::ofstream open(const std::string& name) const {
    std::ofstream f;
    if (enabled()) {
      f.open(std::filesystem::path(dir_) / name);
      if (!f) throw ResourceError("cannot write " + (std::filesystem::path(dir_) / name).string());
    }
    return f;
  }

 private:
  std::string dir_;
};

// ---- kernel verify ----

void kernel_verify(const Config& cfg, Report& rep, const Output& out) {
  const Dim m(cfg.m);
  const auto q = cfg.quad();
  const kernel::BoundaryFunction one = [](std::span<const double>) { return 1.0; };
  double worst = 0.0;
  std::string wit;
  for (double r : {0.0, 0.5, 0.9, 0.99}) {
    const BallPoint x(r, SpherePoint::from_azimuth(cfg.m, 0.7, cfg.m == 2 ? 1.0 : 0.6));
    const double gap = std::abs(kernel::poisson_extend(m, one, x, q).value - 1.0);
    if (gap >= worst) {
      worst = gap;
      wit = x.str();
    }
  }
  rep.check("Poisson normalization", worst <= 1e-8, worst, 1e-8, 0.0, wit);

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> U(0.0, 0.99);
  double tele = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double r = U(rng);
    const double lhs = kernel::integrate_q(m, r, 0.0, pi);
    const double rhs = kernel::p_tilde(m, r, 0.0) - kernel::p_tilde(m, r, pi);
    // absolute for m <= 3; scaled by P~(0) above, where it grows like (1-r)^{1-m}
    const double scale = cfg.m <= 3 ? 1.0 : std::max(1.0, kernel::p_tilde(m, r, 0.0));
    if (std::abs(lhs - rhs) / scale >= tele) {
      tele = std::abs(lhs - rhs) / scale;
      wit = "r=" + std::to_string(r);
    }
  }
  rep.check("telescoping of Q", tele <= 1e-10, tele, 1e-10, 0.0, wit);

  const auto radii = kernel::dyadic_radii(2, 10);
  const auto br = kernel::kernel_bound_report(m, radii, 0.1);
  rep.check("bound ratios stable across the two finest levels", br.stability() <= 0.10, br.stability(), 0.10, 0.0);
  rep.data()["C4_hat"] = br.C4_hat;
  rep.data()["C6_hat"] = br.C6_hat;
  rep.data()["C9_hat"] = br.C9_hat;
  if (auto f = out.open("bounds.csv"); f.is_open()) {
    f << "r,R1,R2,R3\n" << std::setprecision(17);
    for (const auto& row : br.rows) f << row.r << ',' << row.R1 << ',' << row.R2 << ',' << row.R3 << '\n';
  }
}

// ---- extremal ----

json record_json(const extremal::LemmaEx1Record& rec) {
  json c = json::object();
  for (int d = 1; d <= 3; ++d) {
    c[std::to_string(d)] = {{"max", rec.c_hat[d - 1]}, {"per_k", rec.c_hat_per_k[d - 1]}};
  }
  return {{"m", rec.m}, {"d", rec.d}, {"k", rec.ks}, {"a_hat", rec.a_hat}, {"c_hat", c},
          {"oracle_checked", rec.oracle_checked}, {"oracle_max_diff", rec.oracle_max_diff},
          {"quadrature", kernel::to_string(rec.quad.method)}};
}

void add_clause(Report& rep, const extremal::Clause& c) {
  rep.check(c.name, c.pass, c.value, c.bound, c.tolerance, c.witness);
}

extremal::LemmaEx1Record certify(const Config& cfg, int k_lo, int k_hi, int d) {
  extremal::LemmaEx1Options opt;
  opt.k_lo = k_lo;
  opt.k_hi = k_hi;
  opt.d = d;
  opt.sample_count = cfg.samples;
  opt.seed = cfg.seed;
  opt.quad = cfg.quad();
  return extremal::lemma_ex1_evaluate(Dim(cfg.m), opt);
}

void extremal_certify(const Config& cfg, Report& rep, const Output&) {
  const auto [k_lo, k_hi] = parse_range(cfg.k, 2, cfg.m == 2 ? 8 : 6);
  const auto rec = certify(cfg, k_lo, k_hi, cfg.d);
  for (const auto* c : {&rec.a, &rec.b, &rec.c, &rec.d_clause}) add_clause(rep, *c);
  if (rec.oracle_checked) add_clause(rep, rec.oracle);
  rep.data() = record_json(rec);
}

void extremal_scan(const Config& cfg, Report& rep, const Output& out) {
  const auto v = majorant::Majorant::parse(cfg.majorant);
  const Dim m(cfg.m);
  const auto [k_lo, k_hi] = parse_range(cfg.k, 2, cfg.m == 2 ? 8 : 6);
  const auto rec = certify(cfg, k_lo, k_hi, 1);
  if (!rec.pass()) {
    const auto* c = rec.failure();
    rep.check("auxiliary function constants", false, c->value, c->bound, c->tolerance, c->name + ": " + c->witness);
    return;
  }
  const auto series = extremal::make_series(v, m, cfg.A1, rec.c_hat, cfg.quad());
  const auto sched = extremal::growth_schedule(series, rec.a_hat, cfg.depth);
  const auto dirs = extremal::sample_growth_directions(series, cfg.depth, cfg.samples, cfg.seed);
  double min_ratio = std::numeric_limits<double>::infinity();
  std::string wit;
  json scans = json::array();
  auto f = out.open("growth.csv");
  if (f.is_open()) f << "eta_id,r,u,v,ratio\n" << std::setprecision(17);
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const auto scan = extremal::growth_scan(series, dirs[i], sched);
    if (scan.min_ratio < min_ratio) {
      min_ratio = scan.min_ratio;
      wit = dirs[i].str();
    }
    scans.push_back({{"eta", dirs[i].str()}, {"ratio", scan.ratio}, {"error", scan.error}});
    if (f.is_open())
      for (std::size_t n = 0; n < scan.r.size(); ++n)
        f << i << ',' << scan.r[n] << ',' << scan.u[n] << ',' << scan.v[n] << ',' << scan.ratio[n] << '\n';
  }
  rep.check("growth ratio bounded below along sampled directions of F", min_ratio >= 0.01, min_ratio, 0.01, 0.0, wit);
  rep.data() = {{"b", series.b},   {"a_hat", rec.a_hat}, {"c_hat", rec.c_hat}, {"D_hat", series.D_hat},
                {"d", series.d},   {"schedule", sched},  {"c5_hat", min_ratio}, {"scans", scans}};
}

// ---- cantor ----

cantor::CantorScheme scheme_from(const Config& cfg) {
  if (cfg.scheme == "middle-thirds") return cantor::CantorScheme::middle_thirds(cfg.depth);
  const auto v = majorant::Majorant::parse(cfg.majorant);
  if (cfg.scheme == "growth") return cantor::growth_cantor(majorant::b_sequence(v, cfg.A1, cfg.depth)).scheme;
  if (cfg.scheme == "positive") return cantor::positive_cantor(majorant::d_sequence(v, Dim(cfg.m), cfg.depth));
  throw DomainError("unknown scheme '" + cfg.scheme + "' (middle-thirds, growth, positive)");
}

majorant::GaugeFunction gauge_from(const Config& cfg) {
  if (cfg.gauge.empty()) return majorant::power_gauge(std::log(2.0) / std::log(3.0));
  if (cfg.gauge.rfind("power:", 0) == 0) return majorant::power_gauge(std::stod(cfg.gauge.substr(6)));
  if (cfg.gauge.rfind("lambda", 0) == 0) return majorant::lambda_gauge(majorant::Majorant::parse(cfg.majorant), Dim(cfg.m));
  throw DomainError("unknown gauge '" + cfg.gauge + "' (power:s or lambda)");
}

void cantor_measure(const Config& cfg, Report& rep, const Output& out) {
  const auto scheme = scheme_from(cfg);
  const auto h = gauge_from(cfg);
  const double delta = cfg.delta > 0.0 ? cfg.delta : scheme.length(std::min(scheme.depth(), 6));
  std::vector<cantor::IntervalSet> gens;
  for (int s = 0; s <= scheme.depth(); ++s) {
    if (scheme.count(s) > cantor::kMaxIntervals) break;
    gens.push_back(cantor::build_generation(scheme, s));
  }
  const auto& last = gens.back();
  const double net = cantor::net_premeasure(last, h, delta);
  const double net_half = cantor::net_premeasure(last, h, 0.5 * delta);
  const double ivl = cantor::interval_premeasure(last, h, delta);
  rep.check("net premeasure nondecreasing as delta halves", net_half >= net * (1 - 1e-12), net_half, net, 1e-12);
  rep.check("net premeasure finite", std::isfinite(net), net, std::numeric_limits<double>::infinity(), 0.0);
  json data = {{"generation", last.generation},
               {"intervals", last.size()},
               {"delta", delta},
               {"gauge", h.name()},
               {"net_premeasure", net},
               {"net_premeasure_half_delta", net_half},
               {"interval_premeasure", ivl},
               {"halving_constant", h.halving()}};
  if (scheme.placement() == cantor::Placement::symmetric) {
    data["count_criterion"] = cantor::hatano_criterion(scheme, h, 1, scheme.depth());
  }
  rep.data() = data;
  if (auto f = out.open("intervals.csv"); f.is_open()) cantor::write_csv(f, gens);
}

void cantor_lemma_a(const Config& cfg, Report& rep, const Output&) {
  const auto scheme = scheme_from(cfg);
  const auto h = gauge_from(cfg);
  const auto b = cantor::lemma_a_bounds(scheme, h);
  rep.check("mass ratio constant a positive", b.a > 0.0, b.a, 0.0, 0.0);
  rep.check("lower bound below upper bound", b.lower <= b.upper * (1 + 1e-12), b.lower, b.upper, 1e-12);
  rep.data() = {{"a", b.a}, {"lower", b.lower}, {"upper", b.upper}, {"s_star", b.s_star}, {"mass", b.mass}};
}

// ---- positive ----

positive::Stage stage_from(const Config& cfg, int k) {
  return positive::build_stage(majorant::Majorant::parse(cfg.majorant), Dim(cfg.m), k, cfg.cells);
}

void positive_build(const Config& cfg, Report& rep, const Output& out) {
  const auto [k, k_hi] = parse_range(cfg.k, 4, 4);
  (void)k_hi;
  const auto s = stage_from(cfg, k);
  const double nu = s.nu.total_mass(), mu = s.mu.total_mass();
  rep.check("nu_k total mass", std::abs(nu - 1.0) <= 1e-12, nu, 1.0, 1e-12);
  rep.check("pushforward preserves mass", std::abs(mu - nu) <= 1e-14, mu, nu, 1e-14);
  const double L = positive::HypersphericalMap(Dim(cfg.m)).bilipschitz_estimate(10000, cfg.seed);
  rep.check("bilipschitz distortion of f on the cube", L <= 10.0, L, 10.0, 0.0);
  rep.data() = {{"k", k}, {"d", s.d}, {"atoms", s.mu.size()}, {"rho_min", s.rho_min}, {"L_hat", L}};
  if (auto f = out.open("measure.csv"); f.is_open()) s.mu.write_csv(f);
  if (auto f = out.open("cube_measure.csv"); f.is_open()) s.nu.write_csv(f);
  if (auto f = out.open("intervals.csv"); f.is_open()) {
    std::vector<cantor::IntervalSet> gens;
    for (int j = 0; j <= k; ++j) gens.push_back(cantor::build_generation(s.scheme, j));
    cantor::write_csv(f, gens);
  }
}

void positive_verify(const Config& cfg, Report& rep, const Output&) {
  const auto v = majorant::Majorant::parse(cfg.majorant);
  const auto [k_lo, k_hi] = parse_range(cfg.k, 2, 5);
  std::vector<double> sups;
  json per = json::array();
  std::string wit;
  for (int k = k_lo; k <= k_hi; ++k) {
    const auto s = stage_from(cfg, k);
    const auto mc = positive::mu_condition_check(s.mu, v, std::max(cfg.samples, 200), cfg.seed, s.rho_min);
    sups.push_back(mc.sup_ratio);
    per.push_back({{"k", k}, {"sup_ratio", mc.sup_ratio}, {"witness", mc.witness}, {"rho_min", s.rho_min}});
    if (mc.sup_ratio >= *std::max_element(sups.begin(), sups.end())) wit = "k=" + std::to_string(k) + " " + mc.witness;
    std::mt19937_64 rng(cfg.seed + static_cast<std::uint64_t>(k));
    std::uniform_real_distribution<double> U(0.0, 0.99);
    const auto x = SpherePoint::from_azimuth(cfg.m, 6.0 * U(rng), cfg.m == 2 ? 1.0 : 0.5 + 0.5 * U(rng));
    const auto pid = positive::parts_identity_check(s.mu, U(rng), x);
    rep.check("integration by parts identity, k=" + std::to_string(k), pid.gap <= 1e-12, pid.gap, 1e-12, 0.0, x.str());
  }
  const auto [lo, hi] = std::minmax_element(sups.begin(), sups.end());
  const double C_hat = *hi;
  rep.check("cap condition sup ratio finite", std::isfinite(C_hat), C_hat, std::numeric_limits<double>::infinity(), 0.0, wit);
  rep.check("cap condition sup ratio stable across stages", *hi <= 2.0 * *lo, *hi / *lo, 2.0, 0.0);
  rep.data() = {{"C_hat", C_hat}, {"stages", per}};
}

void positive_growth(const Config& cfg, Report& rep, const Output& out) {
  const auto [k, k_hi] = parse_range(cfg.k, 4, 4);
  (void)k_hi;
  const auto s = stage_from(cfg, k);
  const bool refine = k + 1 <= positive::kMaxStage;
  const auto fine = refine ? stage_from(cfg, k + 1) : s;
  const auto sched = positive::positive_schedule(s);
  const auto ys = positive::surviving_centers(fine, cfg.samples, cfg.seed);
  double min_ratio = std::numeric_limits<double>::infinity(), worst_stab = 1.0, cap_lower = min_ratio;
  std::string wit;
  auto f = out.open("growth.csv");
  if (f.is_open()) f << "eta_id,r,u,v,ratio\n" << std::setprecision(17);
  json scans = json::array();
  for (std::size_t i = 0; i < ys.size(); ++i) {
    const auto g = positive::growth_check_positive(s, ys[i], sched);
    const auto gf = positive::growth_check_positive(fine, ys[i], sched);
    if (g.min_ratio < min_ratio) {
      min_ratio = g.min_ratio;
      wit = SpherePoint::normalized(positive::HypersphericalMap(Dim(cfg.m))(ys[i])).str();
    }
    cap_lower = std::min(cap_lower, g.cap_lower);
    worst_stab = std::max({worst_stab, gf.min_ratio / g.min_ratio, g.min_ratio / gf.min_ratio});
    scans.push_back({{"ratio", g.ratio}, {"ratio_refined", gf.ratio}});
    if (f.is_open())
      for (std::size_t n = 0; n < g.r.size(); ++n)
        f << i << ',' << g.r[n] << ',' << g.u[n] << ',' << g.v[n] << ',' << g.ratio[n] << '\n';
  }
  rep.check("growth ratio bounded below along G", min_ratio > 0.0, min_ratio, 0.0, 0.0, wit);
  if (refine) rep.check("growth ratio stable under stage refinement", worst_stab <= 2.0, worst_stab, 2.0, 0.0);
  const auto gap = positive::gap_point(s);
  const auto xg = SpherePoint::normalized(positive::HypersphericalMap(Dim(cfg.m))(gap));
  const auto neg = positive::growth_ratios_along(s, xg, sched);
  const double decay = neg.ratio.back() / neg.ratio.front();
  rep.check("gap direction ratios decay (negative control)", sched.size() < 2 || decay < 0.5, decay, 0.5, 0.0, xg.str());
  rep.data() = {{"k", k}, {"d", s.d}, {"schedule", sched}, {"c1_hat", min_ratio}, {"cap_lower", cap_lower},
                {"gap_ratios", neg.ratio}, {"scans", scans}};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Radial growth of harmonic functions: numerical certification suites", "radgrowth"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value file; flags given on the command line take precedence");
  Config cfg;
  if (const char* env = std::getenv("RADGROWTH_OUT")) cfg.out_dir = env;
  app.add_option("--m", cfg.m, "ambient dimension")->capture_default_str();
  app.add_option("--majorant", cfg.majorant, "power:GAMMA | log:S | logpower:GAMMA:S")->capture_default_str();
  app.add_option("--A1", cfg.A1, "lacunarity factor of the series")->capture_default_str();
  app.add_option("--k", cfg.k, "scale index or range A..B");
  app.add_option("--d", cfg.d, "decay order d in |u_k| <= c (2^k (1-|x|))^-d")->capture_default_str();
  app.add_option("--depth", cfg.depth, "generations or series depth")->capture_default_str();
  app.add_option("--cells", cfg.cells, "atoms per construction interval and axis")->capture_default_str();
  app.add_option("--samples", cfg.samples, "sample count")->capture_default_str();
  app.add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  app.add_option("--delta", cfg.delta, "premeasure scale (0 = length of generation min(depth, 6))");
  app.add_option("--gauge", cfg.gauge, "power:S or lambda (default: power:log2/log3)");
  app.add_option("--scheme", cfg.scheme, "middle-thirds | growth | positive")->capture_default_str();
  app.add_option("--quad-method", cfg.quad_method, "reduced-product | monte-carlo | fourier-oracle")->capture_default_str();
  app.add_option("--quad-nodes", cfg.quad_nodes, "starting Gauss-Legendre size")->capture_default_str();
  app.add_option("--quad-max-nodes", cfg.quad_max_nodes, "refinement limit")->capture_default_str();
  app.add_option("--quad-tol", cfg.quad_tol, "absolute quadrature tolerance")->capture_default_str();
  app.add_option("--out", cfg.out_dir, "output directory (default $RADGROWTH_OUT)");

  using Handler = void (*)(const Config&, Report&, const Output&);
  std::string experiment;
  Handler handler = nullptr;
  auto group = [&](const char* name, const char* help,
                   std::initializer_list<std::tuple<const char*, const char*, Handler>> cmds) {
    auto* g = app.add_subcommand(name, help);
    g->require_subcommand(1);
    for (const auto& [sub, sub_help, h] : cmds) {
      g->add_subcommand(sub, sub_help)->callback([&, n = std::string(name) + " " + sub, h = h] {
        experiment = n;
        handler = h;
      });
    }
  };
  group("kernel", "Poisson kernel checks", {{"verify", "normalization, telescoping and bound ratios", kernel_verify}});
  group("extremal", "auxiliary functions and the lacunary series",
        {{"certify", "certify the auxiliary functions u_k", extremal_certify},
         {"scan", "growth of the series along directions of F", extremal_scan}});
  group("cantor", "Cantor schemes and premeasures",
        {{"measure", "net and interval premeasures", cantor_measure}, {"lemmaA", "mass ratio bounds of a Cantor scheme", cantor_lemma_a}});
  group("positive", "positive harmonic functions from Cantor measures",
        {{"build", "build nu_k and mu_k", positive_build},
         {"verify", "cap condition and integration by parts", positive_verify},
         {"growth", "growth along G with negative controls", positive_growth}});

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  if (!handler) {
    err << "error: no subcommand\n";
    return kExitUsage;
  }

  Report rep(experiment, cfg);
  try {
    Dim(cfg.m);
    cfg.quad().validate(Dim(cfg.m));
    const Output output(cfg.out_dir);
    handler(cfg, rep, output);
    const json report = rep.finish();
    out << report.dump(2) << '\n';
    if (auto f = output.open(std::string(experiment).replace(experiment.find(' '), 1, "_") + ".json"); f.is_open())
      f << report.dump(2) << '\n';
    return rep.pass() ? kExitPass : kExitCheckFailed;
  } catch (const CertificationFailure& e) {
    rep.check(e.clause(), false, std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN(),
              0.0, e.witness());
    out << rep.finish().dump(2) << '\n';
    return kExitCheckFailed;
  } catch (const NumericalError& e) {
    rep.check("numerical convergence", false, e.last(), e.previous(), 0.0, e.what());
    out << rep.finish().dump(2) << '\n';
    return kExitCheckFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace radgrowth::cli
