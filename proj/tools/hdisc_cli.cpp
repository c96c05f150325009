// hdisc: run orbit, rate, slope, quasi-geodesic, semiflow, harmonic-measure and
// operator-norm experiments from a declarative config, or the acceptance suite.
//
// Exit status: 0 success, 1 failed verdicts (accept) or runtime error,
// 2 usage or config error, 3 unsupported map/module combination.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hdisc/experiments.hpp"

namespace {

const char* describe(const std::string& c) {
  if (c == "orbit") return "orbit points f^n(z) on the n-grid";
  if (c == "rate") return "divergence and Euclidean rates with verdicts";
  if (c == "slope") return "slope series and cluster-set verdict";
  if (c == "qg") return "quasi-geodesic certificate for an orbit or a sampled curve";
  if (c == "semiflow") return "continuous-time semiflow checks and trajectory dump";
  if (c == "hm") return "harmonic measure: trajectory tails, arcs or slits";
  if (c == "opnorm") return "composition-operator norm bounds with asymptotic verdicts";
  if (c == "accept") return "run the acceptance suite";
  return "";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Iteration experiments for holomorphic self-maps of the unit disc"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  std::string config_path, out_dir, format;
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config_path, "config file (flat key = value with [section] headers)");
  app.add_option("--out", out_dir, "output directory (default: output.dir or .)");
  app.add_option("--seed", seed, "seed for every random component");
  app.add_option("--format", format, "artifact format")->check(CLI::IsMember({"csv", "json", "svg"}));
  for (const auto& c : hdisc::subcommands()) app.add_subcommand(c, describe(c));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    const hdisc::Config cfg = config_path.empty() ? hdisc::Config{} : hdisc::Config::load(config_path);
    auto exp = hdisc::ExperimentConfig::from(cfg, config_path.empty() ? std::filesystem::path{} : std::filesystem::path(config_path).parent_path());
    if (seed) exp.set_seed(*seed);
    if (!format.empty()) exp.format = hdisc::parse_format(format);
    if (!out_dir.empty()) exp.out_dir = out_dir;

    const auto result = hdisc::run_experiment(command, exp);
    const std::filesystem::path dir(exp.out_dir);
    std::filesystem::create_directories(dir);
    const auto path = dir / (command + "." + hdisc::extension(exp.format));
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << hdisc::render(result, exp.format);
    out.close();
    if (!out) throw std::runtime_error("failed writing " + path.string());
    std::cout << result.summary << "\nwrote " << path.string() << "\n";
    return result.status;
  } catch (const hdisc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const hdisc::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const hdisc::UnsupportedMap& e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
