#pragma once

// Experiment plumbing shared by the command-line tool and its tests: a typed
// view of the declarative config, and one runner per subcommand that renders
// its artifact in every output format. Outputs depend only on the config and seed.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hdisc/acceptance.hpp"
#include "hdisc/config.hpp"
#include "hdisc/domains.hpp"
#include "hdisc/harmonic.hpp"
#include "hdisc/maps.hpp"
#include "hdisc/opnorm.hpp"
#include "hdisc/qgeo.hpp"
#include "hdisc/rates.hpp"
#include "hdisc/report.hpp"
#include "hdisc/semiflow.hpp"
#include "hdisc/slope.hpp"

namespace hdisc {

// Invocation errors that must not produce artifacts.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OutputFormat { csv, json, svg };

inline OutputFormat parse_format(const std::string& s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  if (s == "svg") return OutputFormat::svg;
  throw UsageError("unknown output format '" + s + "' (expected csv, json or svg)");
}

inline const char* extension(OutputFormat f) {
  switch (f) {
    case OutputFormat::csv: return "csv";
    case OutputFormat::json: return "json";
    case OutputFormat::svg: return "svg";
  }
  return "txt";
}

inline const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> s{"orbit", "rate", "slope", "qg", "semiflow", "hm", "opnorm", "accept"};
  return s;
}

struct GridSpec {
  std::string kind;  // default, log, range, list; empty selects the command default
  std::uint64_t n_max = 1'000'000;
  std::uint64_t lo = 1;
  std::uint64_t hi = 1'000'000;
  int per_decade = 20;
  std::vector<std::uint64_t> values;
  bool lo_set = false;
  bool hi_set = false;
};

struct ExperimentConfig {
  std::string map = "koebe";
  cplx start{0.0, 0.0};
  GridSpec grid;
  double rate_epsilon = 0.01;
  double slope_tail = 0.25;
  std::string qg_mode = "orbit";  // orbit or curve
  std::uint64_t qg_m_max = 10'000;
  std::uint64_t qg_seed = 1;
  std::string qg_domain = "disc";
  std::vector<cplx> qg_points;
  SemiflowOptions semiflow;
  double dump_t_max = 10.0;
  double dump_dt = 0.1;
  std::string hm_mode = "tail";  // tail, arc or slit
  std::vector<double> hm_n{10.0, 100.0, 1000.0};
  double hm_theta1 = 0.0;
  double hm_theta2 = std::numbers::pi;
  std::vector<cplx> hm_slit;
  double hm_bound = 5.0;
  WosOptions wos;
  double op_p = 2.0;
  double op_alpha = 0.0;
  std::uint64_t op_n_max = 1'000'000;
  OutputFormat format = OutputFormat::csv;
  std::string out_dir = ".";

  // Reads every known key; any other key is a ConfigError naming its line.
  // Relative custom:PATH map files resolve against base_dir (the config's directory).
  static ExperimentConfig from(const Config& cfg, const std::filesystem::path& base_dir = {}) {
    ExperimentConfig e;
    e.map = cfg.get_or("map.name", e.map);
    if (e.map.starts_with("custom:") && !base_dir.empty()) {
      const std::filesystem::path p(e.map.substr(7));
      if (p.is_relative()) e.map = "custom:" + (base_dir / p).string();
    }
    if (auto z = cfg.get_complex("start.z")) e.start = *z;
    e.grid.kind = cfg.get_or("grid.kind", "");
    e.grid.n_max = cfg.get_uint_or("grid.n_max", e.grid.n_max);
    if (auto v = cfg.get_uint("grid.lo")) e.grid.lo = *v, e.grid.lo_set = true;
    if (auto v = cfg.get_uint("grid.hi")) e.grid.hi = *v, e.grid.hi_set = true;
    if (auto v = cfg.get_uint("grid.per_decade")) {
      if (*v < 1 || *v > 1000) throw ConfigError("'grid.per_decade' must lie in [1, 1000]", cfg.line_of("grid.per_decade"));
      e.grid.per_decade = static_cast<int>(*v);
    }
    if (auto v = cfg.get("grid.values")) {
      for (double x : real_list(*v, cfg.line_of("grid.values"), "grid.values")) {
        if (!(x >= 0.0) || x != std::floor(x)) throw ConfigError("'grid.values' expects non-negative integers", cfg.line_of("grid.values"));
        e.grid.values.push_back(static_cast<std::uint64_t>(x));
      }
      if (e.grid.kind.empty()) e.grid.kind = "list";
    }
    e.rate_epsilon = positive(cfg, "rate.epsilon", e.rate_epsilon);
    e.slope_tail = cfg.get_double_or("slope.tail_fraction", e.slope_tail);
    if (!(e.slope_tail > 0.0 && e.slope_tail <= 1.0)) throw ConfigError("'slope.tail_fraction' must lie in (0, 1]", cfg.line_of("slope.tail_fraction"));
    e.qg_mode = cfg.get_or("qg.mode", e.qg_mode);
    if (e.qg_mode != "orbit" && e.qg_mode != "curve") throw ConfigError("'qg.mode' must be orbit or curve", cfg.line_of("qg.mode"));
    e.qg_m_max = cfg.get_uint_or("qg.m_max", e.qg_m_max);
    e.qg_seed = cfg.get_uint_or("qg.seed", e.qg_seed);
    e.qg_domain = cfg.get_or("qg.domain", e.qg_domain);
    if (auto p = cfg.get_complex_list("qg.points")) e.qg_points = *p;
    e.semiflow.embed_n = cfg.get_uint_or("semiflow.embed_n", e.semiflow.embed_n);
    e.semiflow.invariance_t_max = positive(cfg, "semiflow.invariance_t_max", e.semiflow.invariance_t_max);
    e.semiflow.invariance_dt = positive(cfg, "semiflow.invariance_dt", e.semiflow.invariance_dt);
    e.semiflow.lipschitz_t_max = positive(cfg, "semiflow.lipschitz_t_max", e.semiflow.lipschitz_t_max);
    e.semiflow.slope_t_max = positive(cfg, "semiflow.slope_t_max", e.semiflow.slope_t_max);
    e.semiflow.landing_t_max = positive(cfg, "semiflow.landing_t_max", e.semiflow.landing_t_max);
    e.dump_t_max = positive(cfg, "semiflow.dump_t_max", e.dump_t_max);
    e.dump_dt = positive(cfg, "semiflow.dump_dt", e.dump_dt);
    e.hm_mode = cfg.get_or("hm.mode", e.hm_mode);
    if (e.hm_mode != "tail" && e.hm_mode != "arc" && e.hm_mode != "slit") throw ConfigError("'hm.mode' must be tail, arc or slit", cfg.line_of("hm.mode"));
    if (auto v = cfg.get("hm.n_values")) e.hm_n = real_list(*v, cfg.line_of("hm.n_values"), "hm.n_values");
    e.hm_theta1 = cfg.get_double_or("hm.theta1", e.hm_theta1);
    e.hm_theta2 = cfg.get_double_or("hm.theta2", e.hm_theta2);
    if (auto p = cfg.get_complex_list("hm.slit")) e.hm_slit = *p;
    e.hm_bound = positive(cfg, "hm.bound", e.hm_bound);
    e.wos.epsilon = positive(cfg, "wos.epsilon", e.wos.epsilon);
    e.wos.cap = cfg.get_uint_or("wos.cap", e.wos.cap);
    e.wos.seed = cfg.get_uint_or("wos.seed", e.wos.seed);
    e.wos.walks = cfg.get_uint_or("wos.walks", e.wos.walks);
    e.wos.threads = static_cast<unsigned>(cfg.get_uint_or("wos.threads", e.wos.threads));
    e.op_p = cfg.get_double_or("opnorm.p", e.op_p);
    e.op_alpha = cfg.get_double_or("opnorm.alpha", e.op_alpha);
    e.op_n_max = cfg.get_uint_or("opnorm.n_max", e.op_n_max);
    if (auto f = cfg.get("output.format")) {
      try {
        e.format = parse_format(*f);
      } catch (const UsageError& err) {
        throw ConfigError(err.what(), cfg.line_of("output.format"));
      }
    }
    e.out_dir = cfg.get_or("output.dir", e.out_dir);
    cfg.reject_unknown();
    return e;
  }

  // Seeds every random component: the WOS walks and the certificate audit.
  void set_seed(std::uint64_t s) {
    wos.seed = s;
    qg_seed = s;
  }

 private:
  static std::vector<double> real_list(const std::string& v, int line, const std::string& key) {
    std::vector<double> out;
    std::istringstream ss(v);
    std::string tok;
    while (ss >> tok) out.push_back(Config::parse_double(tok, line, key));
    return out;
  }
  static double positive(const Config& cfg, const std::string& key, double fallback) {
    const double v = cfg.get_double_or(key, fallback);
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("'" + key + "' must be a positive number", cfg.line_of(key));
    return v;
  }
};

// The n-grid of a command. Any empty grid is a usage error.
inline Grid resolve_grid(const GridSpec& g, const std::string& command) {
  std::string kind = g.kind;
  if (kind.empty()) kind = command == "orbit" ? "range" : "default";
  Grid out;
  if (kind == "default") {
    out = default_grid(g.n_max);
  } else if (kind == "log") {
    if (g.lo >= 1 && g.hi >= g.lo) out = log_grid(g.lo, g.hi, g.per_decade);
  } else if (kind == "range") {
    const std::uint64_t lo = g.lo_set ? g.lo : 0, hi = g.hi_set ? g.hi : 10;
    for (std::uint64_t n = lo; n <= hi && hi - lo <= 10'000'000; ++n) out.push_back(n);
    if (hi >= lo && hi - lo > 10'000'000) throw UsageError("range grid longer than 1e7 points");
  } else if (kind == "list") {
    out = g.values;
    normalize_grid(out);
  } else {
    throw UsageError("unknown grid.kind '" + kind + "' (expected default, log, range or list)");
  }
  if (out.empty()) throw UsageError("empty grid: " + command + " needs at least one grid point");
  return out;
}

struct Rendered {
  std::string csv;
  Json json;
  std::string svg;
  int status = 0;       // nonzero when the command's own verdicts fail (accept)
  std::string summary;  // one line for the terminal
};

namespace detail {
inline std::vector<double> log10_of(const std::vector<double>& v) {
  std::vector<double> o;
  for (double x : v) o.push_back(x > 0.0 ? std::log10(x) : NAN);
  return o;
}
inline Json header(const std::string& command, const ExperimentConfig& e) {
  Json j = json_document(command);
  j["map"] = e.map;
  j["start"] = json_complex(e.start);
  return j;
}
}  // namespace detail

inline Rendered run_orbit(const ExperimentConfig& e) {
  const auto f = make_map(e.map);
  const Grid grid = resolve_grid(e.grid, "orbit");
  const auto orbit = orbit_for_grid(f, DiskPoint(e.start), grid);
  Rendered r;
  CsvTable t({"n", "re", "im", "one_minus_mod", "d"});
  Json pts = Json::array();
  std::vector<double> x, y;
  for (auto n : grid) {
    const auto z = orbit.disk(n);
    const double re = z ? z->value().real() : NAN, im = z ? z->value().imag() : NAN;
    const double gap = orbit.available(n) ? std::exp(orbit.log_one_minus_mod(n)) : NAN;
    const double d = orbit.available(n) ? orbit.distance(0, n) : NAN;
    t.add({CsvTable::cell(n), CsvTable::cell(re), CsvTable::cell(im), CsvTable::cell(gap), CsvTable::cell(d)});
    pts.push_back(Json{{"n", n}, {"z", Json::array({json_number(re), json_number(im)})}, {"one_minus_mod", json_number(gap)}, {"d", json_number(d)}});
    x.push_back(static_cast<double>(n));
    y.push_back(gap);
  }
  r.csv = t.str();
  r.json = detail::header("orbit", e);
  r.json["points"] = pts;
  r.json["saturated_from"] = orbit.saturated_from() ? Json(*orbit.saturated_from()) : Json(nullptr);
  r.svg = svg_plot("orbit of " + f.name(), "log10 n", "log10 (1 - |f^n z|)", {{"1 - |f^n z|", detail::log10_of(x), detail::log10_of(y), true}});
  r.summary = "orbit: " + std::to_string(grid.size()) + " points of " + f.name();
  return r;
}

inline Rendered run_rate(const ExperimentConfig& e) {
  const auto f = make_map(e.map);
  const Grid grid = resolve_grid(e.grid, "rate");
  const auto rep = rate_report(f, DiskPoint(e.start), grid, e.rate_epsilon);
  Rendered r;
  CsvTable t({"n", "d", "one_minus_mod", "dist_to_tau", "step"});
  std::vector<double> x, y, fit;
  for (const auto& row : rep.rows) {
    t.add({CsvTable::cell(row.n), CsvTable::cell(row.d), CsvTable::cell(row.one_minus_mod), CsvTable::cell(row.dist_to_tau), CsvTable::cell(row.step)});
    if (!row.available || row.n == 0) continue;
    x.push_back(std::log(static_cast<double>(row.n)));
    y.push_back(row.d);
    fit.push_back(rep.d_vs_logn.slope * x.back() + rep.d_vs_logn.intercept);
  }
  r.csv = t.str();
  r.json = detail::header("rate", e);
  r.json["epsilon"] = rep.epsilon;
  r.json["points"] = rep.rows.size();
  r.json["excluded"] = rep.excluded;
  r.json["fits"] = Json{{"d_vs_logn", json_fit(rep.d_vs_logn)},
                        {"d_vs_n", json_fit(rep.d_vs_n)},
                        {"log_dist_to_tau_vs_logn", json_fit(rep.log_dist_vs_logn)},
                        {"log_one_minus_mod_vs_logn", json_fit(rep.log_gap_vs_logn)}};
  r.json["floor_c"] = json_number(rep.floor_c);
  r.json["tangentiality"] = to_string(rep.tangentiality);
  r.json["verdicts"] = json_verdicts(rep.verdicts);
  r.json["passed"] = rep.passed();
  r.svg = svg_plot("divergence rate of " + f.name(), "log n", "d(z, f^n z)", {{"d(n)", x, y, true}, {"last-decade fit", x, fit, false}});
  r.summary = "rate: " + f.name() + ", d/log n = " + fmt_double(rep.d_vs_logn.slope) + (rep.passed() ? ", all verdicts pass" : ", some verdicts fail");
  return r;
}

inline Rendered run_slope(const ExperimentConfig& e) {
  const auto f = make_map(e.map);
  const Grid grid = resolve_grid(e.grid, "slope");
  const auto rep = slope_report(f, DiskPoint(e.start), grid, e.slope_tail);
  Rendered r;
  CsvTable t({"n", "theta"});
  std::vector<double> x;
  for (std::size_t i = 0; i < rep.n.size(); ++i) {
    t.add({CsvTable::cell(rep.n[i]), CsvTable::cell(rep.theta[i])});
    x.push_back(static_cast<double>(rep.n[i]));
  }
  r.csv = t.str();
  r.json = detail::header("slope", e);
  r.json["tail_fraction"] = rep.tail_fraction;
  r.json["excluded"] = rep.excluded;
  r.json["cluster"] = Json{{"lo", rep.cluster.lo}, {"hi", rep.cluster.hi}, {"status", to_string(rep.cluster.status)}};
  r.json["verdict"] = to_string(rep.verdict);
  r.svg = svg_plot("slope of " + f.name(), "log10 n", "theta_n = arg(1 - conj(tau) f^n z)", {{"theta_n", detail::log10_of(x), rep.theta, false}});
  r.summary = std::string("slope: ") + f.name() + ", cluster " + to_string(rep.cluster.status) + ", " + to_string(rep.verdict);
  return r;
}

inline Json json_pair(const QgPair& p) {
  return Json{{"a", p.a}, {"b", p.b}, {"length", json_number(p.length)}, {"distance", json_number(p.distance)}, {"ratio", json_number(QgCertificate::ratio(p))}};
}

inline Rendered run_qg(const ExperimentConfig& e) {
  QgCertificate c;
  Json j = detail::header("qg", e);
  if (e.qg_mode == "curve") {
    if (e.qg_points.size() < 2) throw UsageError("qg curve mode needs at least two qg.points");
    const auto dom = parse_domain(e.qg_domain);
    std::vector<CurveSample> samples;
    for (std::size_t i = 0; i < e.qg_points.size(); ++i) samples.push_back({static_cast<double>(i), e.qg_points[i]});
    c = curve_qg_check(samples, dom);
    j["mode"] = "curve";
    j["domain"] = domain_name(dom);
  } else {
    if (e.qg_m_max < 1) throw UsageError("qg.m_max must be at least 1");
    c = discrete_qg_fit(make_map(e.map), DiskPoint(e.start), e.qg_m_max, e.qg_seed);
    j["mode"] = "orbit";
    j["m_max"] = e.qg_m_max;
  }
  Rendered r;
  CsvTable t({"a", "b", "length", "distance"});
  std::vector<double> x, y;
  for (const auto& p : c.pairs) {
    t.add({CsvTable::cell(p.a), CsvTable::cell(p.b), CsvTable::cell(p.length), CsvTable::cell(p.distance)});
    x.push_back(p.distance);
    y.push_back(p.length);
  }
  r.csv = t.str();
  j["box"] = qg_box_text();
  j["verdict"] = to_string(c.verdict);
  j["A"] = json_number(c.A);
  j["B"] = json_number(c.B);
  j["min_slack"] = json_number(c.min_slack);
  j["triangle_ok"] = c.triangle_ok;
  j["pairs"] = c.pairs.size();
  j["excluded"] = c.excluded;
  j["audit"] = Json{{"pairs", c.audited}, {"min_slack", json_number(c.audit_min_slack)}, {"ok", c.audit_ok}, {"seed", e.qg_seed}};
  j["witness"] = c.witness ? json_pair(*c.witness) : Json(nullptr);
  // The five pairs closest to violating the certificate, or with the largest ratio when refuted.
  std::vector<QgPair> worst = c.pairs;
  const auto key = [&](const QgPair& p) {
    return c.verdict == QgVerdict::certified ? c.A * p.distance + c.B - p.length : -QgCertificate::ratio(p);
  };
  std::stable_sort(worst.begin(), worst.end(), [&](const QgPair& a, const QgPair& b) { return key(a) < key(b); });
  Json wp = Json::array();
  for (std::size_t i = 0; i < std::min<std::size_t>(5, worst.size()); ++i) wp.push_back(json_pair(worst[i]));
  j["witness_pairs"] = wp;
  j["note"] = c.note;
  r.json = j;
  std::vector<PlotSeries> plot{{"pairs", x, y, true}};
  if (c.verdict == QgVerdict::certified && !x.empty()) {
    const double xm = *std::max_element(x.begin(), x.end());
    plot.push_back({"A d + B", {0.0, xm}, {c.B, c.A * xm + c.B}, false});
  }
  r.svg = svg_plot("quasi-geodesic certificate", "distance", "length", plot);
  r.summary = std::string("qg: ") + to_string(c.verdict) + (c.verdict == QgVerdict::certified ? " with (A, B) = (" + fmt_double(c.A) + ", " + fmt_double(c.B) + ")" : "");
  return r;
}

inline Rendered run_semiflow(const ExperimentConfig& e) {
  const auto f = make_map(e.map);
  const auto rep = semiflow_report(f, DiskPoint(e.start), e.semiflow);
  const Trajectory T(f, DiskPoint(e.start));
  Rendered r;
  CsvTable t({"t", "re", "im"});
  std::vector<double> x, y, cx, cy;
  for (double s : uniform_grid(0.0, e.dump_t_max, e.dump_dt)) {
    const auto z = T.disk(s);
    const double re = z ? z->value().real() : NAN, im = z ? z->value().imag() : NAN;
    t.add({CsvTable::cell(s), CsvTable::cell(re), CsvTable::cell(im)});
    x.push_back(re);
    y.push_back(im);
  }
  for (int k = 0; k <= 180; ++k) {
    cx.push_back(std::cos(k * std::numbers::pi / 90.0));
    cy.push_back(std::sin(k * std::numbers::pi / 90.0));
  }
  r.csv = t.str();
  Json j = detail::header("semiflow", e);
  j["n0"] = rep.n0;
  Json checks = Json::array();
  for (const auto& c : rep.checks)
    checks.push_back(Json{{"name", c.name},
                          {"pass", c.pass},
                          {"max_error", json_number(c.max_error)},
                          {"bound", json_number(c.bound)},
                          {"checked", c.checked},
                          {"skipped", c.skipped},
                          {"detail", c.detail}});
  j["checks"] = checks;
  j["landing"] = Json{{"c", json_number(rep.landing.c)}, {"tail", json_fit(rep.landing.tail)}, {"pass", rep.landing.pass}};
  j["passed"] = rep.passed();
  r.json = j;
  r.svg = svg_plot("trajectory of " + f.name(), "Re", "Im", {{"unit circle", cx, cy, false}, {"phi_t(z)", x, y, false}});
  r.summary = "semiflow: " + f.name() + (rep.passed() ? ", all checks pass" : ", some checks fail");
  return r;
}

inline Json json_estimate(const HmEstimate& h) {
  return Json{{"value", h.value},     {"method", to_string(h.method)}, {"se", h.se},           {"walks", h.walks},
              {"accepted", h.accepted}, {"discards", h.discards},      {"mean_steps", h.mean_steps}, {"flagged", h.flagged}};
}

inline Rendered run_hm(const ExperimentConfig& e) {
  Rendered r;
  Json j = detail::header("hm", e);
  j["mode"] = e.hm_mode;
  j["wos"] = Json{{"epsilon", e.wos.epsilon}, {"cap", e.wos.cap}, {"seed", e.wos.seed}, {"walks", e.wos.walks}};
  if (e.hm_mode == "tail") {
    if (e.hm_n.empty()) throw UsageError("empty grid: hm.n_values lists no n");
    const auto s = tail_hm_series(make_map(e.map), DiskPoint(e.start), e.hm_n, e.wos, e.hm_bound);
    CsvTable t({"n", "omega_hat", "se", "discards", "dist_to_tau", "arcsin_floor", "scaled"});
    Json rows = Json::array();
    std::vector<double> x, y;
    for (const auto& row : s.rows) {
      t.add({CsvTable::cell(row.n), CsvTable::cell(row.omega_hat), CsvTable::cell(row.se), CsvTable::cell(row.discards), CsvTable::cell(row.dist_to_tau),
             CsvTable::cell(row.arcsin_floor), CsvTable::cell(row.scaled)});
      rows.push_back(Json{{"n", row.n}, {"omega_hat", row.omega_hat}, {"se", row.se}, {"floor_ok", row.floor_ok}, {"flagged", row.flagged}});
      x.push_back(std::log10(row.n));
      y.push_back(row.scaled);
    }
    r.csv = t.str();
    j["rows"] = rows;
    j["max_scaled"] = s.max_scaled;
    j["bound"] = s.bound;
    j["bounded"] = s.bounded;
    j["floor_chain_ok"] = s.floor_chain_ok;
    r.svg = svg_plot("harmonic measure of the trajectory tail", "log10 n", "omega_hat sqrt(n)", {{"omega_hat sqrt(n)", x, y, false}});
    r.summary = "hm: max omega_hat sqrt(n) = " + fmt_double(s.max_scaled) + (s.floor_chain_ok ? ", floor chain holds" : ", floor chain fails");
    r.json = j;
    return r;
  }
  CsvTable t({"method", "value", "se", "walks", "discards"});
  std::vector<HmEstimate> est;
  if (e.hm_mode == "arc") {
    est.push_back(hm_disk_arc(DiskPoint(e.start), e.hm_theta1, e.hm_theta2));
    est.push_back(hm_wos(SlitDiskDomain{}, DiskPoint(e.start), HmTarget::arc(e.hm_theta1, e.hm_theta2), e.wos));
    j["arc"] = Json::array({e.hm_theta1, e.hm_theta2});
  } else {
    if (e.hm_slit.size() < 2) throw UsageError("hm slit mode needs at least two hm.slit vertices");
    est.push_back(hm_wos(SlitDiskDomain(e.hm_slit), DiskPoint(e.start), HmTarget::slit(), e.wos));
    Json v = Json::array();
    for (auto p : e.hm_slit) v.push_back(json_complex(p));
    j["slit"] = v;
  }
  Json ej = Json::array();
  std::vector<double> x, y;
  for (std::size_t i = 0; i < est.size(); ++i) {
    const auto& h = est[i];
    t.add({to_string(h.method), CsvTable::cell(h.value), CsvTable::cell(h.se), CsvTable::cell(h.walks), CsvTable::cell(h.discards)});
    ej.push_back(json_estimate(h));
    x.push_back(static_cast<double>(i));
    y.push_back(h.value);
  }
  r.csv = t.str();
  j["estimates"] = ej;
  r.json = j;
  r.svg = svg_plot("harmonic measure estimates", "estimate index", "omega", {{"omega", x, y, true}});
  r.summary = "hm: omega = " + fmt_double(est.back().value) + " (" + to_string(est.back().method) + ")";
  return r;
}

inline Rendered run_opnorm(const ExperimentConfig& e) {
  const auto f = make_map(e.map);
  const auto rep = asymptotic_verdicts(f, e.op_p, e.op_alpha, e.op_n_max);
  Rendered r;
  r.csv = rep.series.csv();
  Json j = json_document("opnorm");
  j["map"] = e.map;
  j["n_max"] = e.op_n_max;
  j["excluded"] = rep.series.excluded;
  const auto fits = [](const ExponentFits& x) {
    return Json{{"lower_vs_n", json_fit(x.lower_vs_n)},
                {"upper_vs_n", json_fit(x.upper_vs_n)},
                {"lower_vs_logn", json_fit(x.lower_vs_logn)},
                {"upper_vs_logn", json_fit(x.upper_vs_logn)},
                {"min_lower_ratio", json_number(x.min_lower_ratio)}};
  };
  const std::string key = "(" + fmt_double(e.op_p) + ", " + fmt_double(e.op_alpha) + ")";
  j["verdicts"] = Json{{key,
                        Json{{"p", e.op_p},
                             {"alpha", e.op_alpha},
                             {"type", rep.type ? to_string(*rep.type) : "unknown"},
                             {"hardy_target", json_number(rep.hardy_target)},
                             {"bergman_target", json_number(rep.bergman_target)},
                             {"hardy", fits(rep.series.hardy_fit)},
                             {"bergman", fits(rep.series.bergman_fit)},
                             {"checks", json_verdicts(rep.verdicts)},
                             {"passed", rep.passed()}}}};
  r.json = j;
  std::vector<double> x, hl, hu, bl;
  for (const auto& row : rep.series.rows) {
    x.push_back(std::log(static_cast<double>(row.n)));
    hl.push_back(row.log_hardy.lower);
    hu.push_back(row.log_hardy.upper);
    bl.push_back(row.log_bergman.lower);
  }
  r.svg = svg_plot("composition-operator norm bounds for " + f.name(), "log n", "log bound",
                   {{"Hardy lower", x, hl, false}, {"Hardy upper", x, hu, false}, {"Bergman lower", x, bl, false}});
  r.summary = "opnorm: " + f.name() + " at (p, alpha) = " + key + (rep.passed() ? ", all verdicts pass" : ", some verdicts fail");
  return r;
}

inline Rendered run_accept(const ExperimentConfig& e) {
  const auto res = run_acceptance({e.wos.seed, e.wos.threads});
  Rendered r;
  CsvTable t({"id", "name", "pass", "detail"});
  Json crit = Json::array();
  std::vector<double> x, y;
  int failed = 0;
  for (const auto& c : res) {
    t.add({std::to_string(c.id), c.name, c.pass ? "true" : "false", CsvTable::cell(c.detail)});
    crit.push_back(Json{{"id", c.id}, {"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    x.push_back(c.id);
    y.push_back(c.pass ? 1.0 : 0.0);
    if (!c.pass) ++failed;
  }
  r.csv = t.str();
  r.json = json_document("accept");
  r.json["seed"] = e.wos.seed;
  r.json["criteria"] = crit;
  r.json["passed"] = failed == 0;
  r.svg = svg_plot("acceptance criteria", "criterion", "pass (1) or fail (0)", {{"result", x, y, true}});
  r.status = failed == 0 ? 0 : 1;
  for (const auto& c : res) r.summary += format_criterion(c) + "\n";
  r.summary += std::to_string(res.size()) + " criteria, " + std::to_string(failed) + " failed";
  return r;
}

// Runs a subcommand. UnsupportedMap names the offending map and module.
inline Rendered run_experiment(const std::string& command, const ExperimentConfig& e) {
  try {
    if (command == "orbit") return run_orbit(e);
    if (command == "rate") return run_rate(e);
    if (command == "slope") return run_slope(e);
    if (command == "qg") return run_qg(e);
    if (command == "semiflow") return run_semiflow(e);
    if (command == "hm") return run_hm(e);
    if (command == "opnorm") return run_opnorm(e);
    if (command == "accept") return run_accept(e);
  } catch (const UnsupportedMap& u) {
    throw UnsupportedMap("unsupported combination: " + command + " with map " + e.map + " (" + u.what() + ")");
  }
  throw UsageError("unknown subcommand '" + command + "'");
}

inline std::string render(const Rendered& r, OutputFormat f) {
  switch (f) {
    case OutputFormat::csv: return r.csv;
    case OutputFormat::json: return json_text(r.json);
    case OutputFormat::svg: return r.svg;
  }
  return {};
}

}  // namespace hdisc
