#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "hdisc/experiments.hpp"

using namespace hdisc;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string c;
    while (std::getline(ls, c, ',')) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

ExperimentConfig cfg(const std::string& text) { return ExperimentConfig::from(Config::parse(text)); }

// Scratch directory removed at scope exit.
struct Scratch {
  fs::path dir;
  explicit Scratch(const std::string& tag) : dir(fs::temp_directory_path() / ("hdisc_cli_" + tag + "_" + std::to_string(::getpid()))) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
};

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(HDISC_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string config_file(const std::string& name) { return std::string(HDISC_CONFIG_DIR) + "/" + name; }

}  // namespace

TEST(ExperimentConfig, DefaultsAndOverrides) {
  const auto e = cfg("");
  EXPECT_EQ(e.map, "koebe");
  EXPECT_EQ(e.start, cplx(0.0, 0.0));
  EXPECT_EQ(e.format, OutputFormat::csv);
  const auto f = cfg("[map]\nname = quad\n[start]\nz = 0.1, -0.2\n[wos]\nseed = 9\nwalks = 1e3\n[output]\nformat = svg\n");
  EXPECT_EQ(f.map, "quad");
  EXPECT_EQ(f.start, cplx(0.1, -0.2));
  EXPECT_EQ(f.wos.seed, 9u);
  EXPECT_EQ(f.wos.walks, 1000u);
  EXPECT_EQ(f.format, OutputFormat::svg);
  auto g = f;
  g.set_seed(42);
  EXPECT_EQ(g.wos.seed, 42u);
  EXPECT_EQ(g.qg_seed, 42u);
}

TEST(ExperimentConfig, RejectsUnknownAndMalformedKeysWithLines) {
  try {
    (void)cfg("[map]\nname = koebe\n\n[rate]\nepsilom = 0.1\n");
    FAIL() << "unknown key accepted";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 5);
    EXPECT_NE(std::string(e.what()).find("rate.epsilom"), std::string::npos);
  }
  EXPECT_THROW((void)cfg("[rate]\nepsilon = -1\n"), ConfigError);
  EXPECT_THROW((void)cfg("[grid]\nper_decade = 0\n"), ConfigError);
  EXPECT_THROW((void)cfg("[grid]\nvalues = 1 2.5\n"), ConfigError);
  EXPECT_THROW((void)cfg("[output]\nformat = png\n"), ConfigError);
  EXPECT_THROW((void)cfg("[hm]\nmode = disc\n"), ConfigError);
  EXPECT_THROW((void)cfg("[qg]\nmode = tree\n"), ConfigError);
  EXPECT_THROW((void)cfg("[wos]\nwalks = many\n"), ConfigError);
  EXPECT_THROW((void)cfg("no equals sign\n"), ConfigError);
}

TEST(ResolveGrid, KindsAndEmptyGrids) {
  EXPECT_EQ(resolve_grid(cfg("").grid, "orbit"), (Grid{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10}));
  EXPECT_EQ(resolve_grid(cfg("").grid, "rate"), default_grid(1'000'000));
  EXPECT_EQ(resolve_grid(cfg("[grid]\nvalues = 5 1 3 3\n").grid, "rate"), (Grid{1, 3, 5}));
  EXPECT_EQ(resolve_grid(cfg("[grid]\nkind = log\nlo = 1\nhi = 100\nper_decade = 2\n").grid, "rate"), (Grid{1, 3, 10, 32, 100}));
  EXPECT_THROW((void)resolve_grid(cfg("[grid]\nvalues =\n").grid, "rate"), UsageError);
  EXPECT_THROW((void)resolve_grid(cfg("[grid]\nkind = range\nlo = 5\nhi = 4\n").grid, "orbit"), UsageError);
  EXPECT_THROW((void)resolve_grid(cfg("[grid]\nkind = default\nn_max = 0\n").grid, "rate"), UsageError);
  EXPECT_THROW((void)resolve_grid(cfg("[grid]\nkind = spiral\n").grid, "rate"), UsageError);
}

TEST(RunOrbit, QuadraticExample) {
  const auto r = run_experiment("orbit", cfg("[map]\nname = quad\n[grid]\nkind = range\nlo = 0\nhi = 3\n"));
  const auto rows = parse_csv(r.csv);
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0][0], "n");
  const double expected[] = {0.0, 0.5, 0.625, 0.6953125};
  for (int n = 0; n < 4; ++n) {
    EXPECT_EQ(std::stoull(rows[n + 1][0]), static_cast<unsigned long long>(n));
    EXPECT_EQ(std::stod(rows[n + 1][1]), expected[n]);
    EXPECT_EQ(std::stod(rows[n + 1][2]), 0.0);
  }
}

TEST(RunRate, KoebeDivergenceColumn) {
  const auto r = run_experiment("rate", cfg(""));
  const auto rows = parse_csv(r.csv);
  ASSERT_GT(rows.size(), 10u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"n", "d", "one_minus_mod", "dist_to_tau", "step"}));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double n = std::stod(rows[i][0]);
    EXPECT_NEAR(std::stod(rows[i][1]), 0.25 * std::log1p(n), 1e-12) << n;
  }
  EXPECT_EQ(r.json["schema"], report_schema);
  EXPECT_TRUE(r.json["passed"].get<bool>());
  EXPECT_EQ(r.json["verdicts"].size(), 5u);
}

TEST(RunSubcommands, ArtifactsInEveryFormat) {
  const auto e = cfg("[wos]\nwalks = 2000\n[opnorm]\nn_max = 1e4\n[semiflow]\nslope_t_max = 1e4\nlanding_t_max = 1e4\nembed_n = 100\n");
  for (const auto& c : {"orbit", "rate", "slope", "qg", "semiflow", "hm", "opnorm"}) {
    const auto r = run_experiment(c, e);
    EXPECT_EQ(r.status, 0) << c;
    EXPECT_EQ(r.json["schema"], report_schema) << c;
    EXPECT_EQ(r.json["command"], c);
    EXPECT_FALSE(r.csv.empty()) << c;
    EXPECT_EQ(r.svg.rfind("<svg", 0), 0u) << c;
    EXPECT_NE(r.svg.find("</svg>"), std::string::npos) << c;
    EXPECT_EQ(render(r, OutputFormat::json).back(), '\n');
  }
}

TEST(RunSubcommands, Reproducible) {
  const auto e = cfg("[hm]\nn_values = 10 100\n[wos]\nwalks = 5000\nseed = 3\n");
  const auto a = run_experiment("hm", e);
  const auto b = run_experiment("hm", e);
  EXPECT_EQ(a.csv, b.csv);
  EXPECT_EQ(json_text(a.json), json_text(b.json));
  EXPECT_EQ(a.svg, b.svg);
  auto e2 = e;
  e2.set_seed(4);
  EXPECT_NE(run_experiment("hm", e2).csv, a.csv);
  const auto q = cfg("[map]\nname = hyp:2\n");
  EXPECT_EQ(json_text(run_experiment("qg", q).json), json_text(run_experiment("qg", q).json));
}

TEST(RunSubcommands, UnsupportedCombinationIsNamed) {
  const auto e = cfg("[map]\nname = quad\n");
  for (const auto& c : {"semiflow", "hm"}) {
    try {
      (void)run_experiment(c, e);
      FAIL() << c;
    } catch (const UnsupportedMap& u) {
      const std::string w = u.what();
      EXPECT_NE(w.find(c), std::string::npos);
      EXPECT_NE(w.find("quad"), std::string::npos);
    }
  }
  EXPECT_THROW((void)run_experiment("orbit", cfg("[map]\nname = spiral\n")), std::invalid_argument);
  EXPECT_THROW((void)run_experiment("fly", cfg("")), UsageError);
}

TEST(RunQg, CertificateJsonAndCurveMode) {
  const auto p = run_experiment("qg", cfg("[map]\nname = parab-aut\n"));
  EXPECT_EQ(p.json["verdict"], "refuted");
  EXPECT_GT(p.json["witness"]["ratio"].get<double>(), 20.0);
  EXPECT_EQ(p.json["witness_pairs"].size(), 5u);
  const auto k = run_experiment("qg", cfg("[map]\nname = koebe\n"));
  EXPECT_EQ(k.json["verdict"], "certified");
  EXPECT_EQ(k.json["A"].get<double>(), 1.0);
  EXPECT_EQ(k.json["B"].get<double>(), 0.0);
  const auto axis = run_experiment("qg", cfg("[qg]\nmode = curve\ndomain = rhp\npoints = 1 2 4 8 16\n"));
  EXPECT_EQ(axis.json["verdict"], "certified");
  EXPECT_EQ(axis.json["domain"], "rhp");
  const auto horizontal = run_experiment("qg", cfg("[qg]\nmode = curve\ndomain = uhp\npoints = 0,1 1e2,1 1e4,1 1e6,1 1e8,1\n"));
  EXPECT_EQ(horizontal.json["verdict"], "refuted");  // horocycle: length x against distance 2 log x
  EXPECT_THROW((void)run_experiment("qg", cfg("[qg]\nmode = curve\ndomain = uhp\npoints = 0,1\n")), UsageError);
  EXPECT_THROW((void)run_experiment("qg", cfg("[qg]\nmode = curve\ndomain = uhp\npoints = 0,1 0,-1\n")), std::domain_error);
  EXPECT_THROW((void)run_experiment("qg", cfg("[qg]\nmode = curve\ndomain = moebius\npoints = 0,1 0,2\n")), std::invalid_argument);
}

TEST(RunHm, ArcModeAgreesWithQuadrature) {
  const auto r = run_experiment("hm", cfg("[start]\nz = 0.3, 0.2\n[hm]\nmode = arc\ntheta1 = -0.5\ntheta2 = 1.5\n[wos]\nwalks = 20000\n"));
  const auto& est = r.json["estimates"];
  ASSERT_EQ(est.size(), 2u);
  EXPECT_EQ(est[0]["method"], "poisson-quadrature");
  EXPECT_NEAR(est[1]["value"].get<double>(), est[0]["value"].get<double>(), 4.0 * est[1]["se"].get<double>());
  EXPECT_THROW((void)run_experiment("hm", cfg("[hm]\nmode = slit\nslit = 0.5\n")), UsageError);
  EXPECT_THROW((void)run_experiment("hm", cfg("[hm]\nn_values =\n")), UsageError);
}

TEST(RunOpnorm, VerdictsKeyedByExponents) {
  const auto r = run_experiment("opnorm", cfg("[opnorm]\np = 2\nalpha = 0\n"));
  ASSERT_TRUE(r.json["verdicts"].contains("(2, 0)"));
  const auto& v = r.json["verdicts"]["(2, 0)"];
  EXPECT_TRUE(v["passed"].get<bool>());
  EXPECT_NEAR(v["hardy"]["lower_vs_logn"]["slope"].get<double>(), 0.25, 0.0125);
  EXPECT_EQ(parse_csv(r.csv)[0], (std::vector<std::string>{"n", "mod_f0", "hardy_lo", "hardy_hi", "bergman_lo", "bergman_hi"}));
}

TEST(RunAccept, AllCriteria) {
  const auto r = run_experiment("accept", cfg(""));
  EXPECT_EQ(r.status, 0) << r.summary;
  EXPECT_EQ(r.json["criteria"].size(), 11u);
  EXPECT_EQ(parse_csv(r.csv).size(), 12u);
}

TEST(CsvTable, QuotingAndWidth) {
  CsvTable t({"a", "b"});
  t.add({"x,y", CsvTable::cell(std::string("say \"hi\""))});
  EXPECT_EQ(t.str(), "a,b\nx,y,\"say \"\"hi\"\"\"\n");
  EXPECT_EQ(CsvTable::cell(std::string("a,b")), "\"a,b\"");
  EXPECT_THROW(t.add({"1"}), std::invalid_argument);
  EXPECT_EQ(CsvTable::cell(0.1), "0.10000000000000001");
}

TEST(Binary, OrbitAndDeterminism) {
  Scratch s("orbit");
  ASSERT_EQ(run_cli("orbit --config " + config_file("quad_orbit.cfg") + " --out " + (s.dir / "a").string(), s.dir / "log"), 0) << slurp(s.dir / "log");
  const auto csv = slurp(s.dir / "a" / "orbit.csv");
  EXPECT_EQ(csv, "n,re,im,one_minus_mod,d\n0,0,0,1,0\n1,0.5,0,0.5,0.54930614433405478\n2,0.625,0,0.375,0.73316853439671359\n3,0.6953125,0,0.3046875,0.85816785370540649\n");
  ASSERT_EQ(run_cli("hm --config " + config_file("slit_hm.cfg") + " --format json --out " + (s.dir / "h1").string(), s.dir / "log"), 0);
  ASSERT_EQ(run_cli("hm --config " + config_file("slit_hm.cfg") + " --format json --out " + (s.dir / "h2").string(), s.dir / "log"), 0);
  EXPECT_EQ(slurp(s.dir / "h1" / "hm.json"), slurp(s.dir / "h2" / "hm.json"));
  ASSERT_EQ(run_cli("hm --config " + config_file("slit_hm.cfg") + " --seed 8 --format json --out " + (s.dir / "h3").string(), s.dir / "log"), 0);
  EXPECT_NE(slurp(s.dir / "h1" / "hm.json"), slurp(s.dir / "h3" / "hm.json"));
}

TEST(Binary, ErrorsProduceNoArtifacts) {
  Scratch s("errors");
  std::ofstream(s.dir / "empty.cfg") << "[grid]\nkind = list\nvalues =\n";
  EXPECT_EQ(run_cli("rate --config " + (s.dir / "empty.cfg").string() + " --out " + (s.dir / "e").string(), s.dir / "log"), 2);
  EXPECT_NE(slurp(s.dir / "log").find("empty grid"), std::string::npos);
  EXPECT_FALSE(fs::exists(s.dir / "e"));
  std::ofstream(s.dir / "unknown.cfg") << "[map]\nname = koebe\n[rate]\nfoo = 1\n";
  EXPECT_EQ(run_cli("rate --config " + (s.dir / "unknown.cfg").string() + " --out " + (s.dir / "u").string(), s.dir / "log"), 2);
  EXPECT_NE(slurp(s.dir / "log").find("line 4"), std::string::npos);
  EXPECT_FALSE(fs::exists(s.dir / "u"));
  std::ofstream(s.dir / "quad.cfg") << "[map]\nname = quad\n";
  EXPECT_EQ(run_cli("semiflow --config " + (s.dir / "quad.cfg").string() + " --out " + (s.dir / "q").string(), s.dir / "log"), 3);
  EXPECT_NE(slurp(s.dir / "log").find("semiflow with map quad"), std::string::npos);
  EXPECT_FALSE(fs::exists(s.dir / "q"));
  EXPECT_EQ(run_cli("rate --config " + (s.dir / "missing.cfg").string(), s.dir / "log"), 2);
  EXPECT_EQ(run_cli("rate --format png", s.dir / "log"), 2);
  EXPECT_EQ(run_cli("", s.dir / "log"), 2);
  EXPECT_EQ(run_cli("--help", s.dir / "log"), 0);
}

TEST(Binary, SampleConfigsRun) {
  Scratch s("configs");
  const std::vector<std::pair<std::string, std::string>> runs{{"koebe_rate.cfg", "rate"},         {"parabolic_slope.cfg", "slope"},
                                                              {"hyperbolic_qg.cfg", "qg"},        {"slit_curve_qg.cfg", "qg"},
                                                              {"koebe_semiflow.cfg", "semiflow"}, {"koebe_hm_tail.cfg", "hm"},
                                                              {"koebe_opnorm.cfg", "opnorm"},     {"custom_rate.cfg", "rate"}};
  for (const auto& [file, command] : runs) {
    const auto out = s.dir / file;
    EXPECT_EQ(run_cli(command + " --config " + config_file(file) + " --out " + out.string(), s.dir / "log"), 0) << file << ": " << slurp(s.dir / "log");
    EXPECT_EQ(std::distance(fs::directory_iterator(out), fs::directory_iterator{}), 1) << file;
  }
  EXPECT_EQ(run_cli("rate --format svg --out " + (s.dir / "svg").string(), s.dir / "log"), 0);
  EXPECT_EQ(slurp(s.dir / "svg" / "rate.svg").rfind("<svg", 0), 0u);
}
