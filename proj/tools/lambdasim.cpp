#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lambdasim/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitIntegrity = 2;

struct Options {
  std::string config_path;
  std::string out_path;
  std::optional<int> threads;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, Options& opt) {
  cmd->add_option("--config", opt.config_path, "Scenario file (flat key = value)")->check(CLI::ExistingFile);
  cmd->add_option("--out", opt.out_path, "Output file (default: 'output' key, else stdout)");
  cmd->add_option("--threads", opt.threads, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--override", opt.overrides, "key=value applied after the config file (repeatable)");
}

lambdasim::ScenarioConfig load(const Options& opt) {
  lambdasim::ScenarioConfig cfg = opt.config_path.empty() ? lambdasim::ScenarioConfig{} : lambdasim::load_config(opt.config_path);
  for (const auto& o : opt.overrides) lambdasim::apply_override(cfg, o);
  if (opt.threads) cfg.threads = *opt.threads;
  if (!opt.out_path.empty()) cfg.output_path = opt.out_path;
  return cfg;
}

template <typename Writer>
void emit(const std::string& path, Writer&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw lambdasim::ConfigError("output", "cannot open '" + path + "' for writing");
  write(out);
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lambda-qutrit ensemble coupled to a boson mode: Lindblad and semiclassical simulations"};
  app.require_subcommand(1);

  Options run_opt, scan_opt, cmp_opt, dark_opt;
  auto* run_cmd = app.add_subcommand("run", "Integrate the master equation and write a CSV trajectory");
  auto* scan_cmd = app.add_subcommand("scan-ratio", "Revival height versus Omega / (g sqrt(n))");
  auto* cmp_cmd = app.add_subcommand("compare", "Exact evolution next to the semiclassical rate models");
  auto* dark_cmd = app.add_subcommand("inspect-dark", "Report on the master dark state");
  add_common(run_cmd, run_opt);
  add_common(scan_cmd, scan_opt);
  add_common(cmp_cmd, cmp_opt);
  add_common(dark_cmd, dark_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run_cmd) {
      auto cfg = load(run_opt);
      const auto traj = lambdasim::run(cfg);
      emit(cfg.output_path, [&](std::ostream& os) { lambdasim::write_trajectory_csv(os, traj); });
    } else if (*scan_cmd) {
      auto cfg = load(scan_opt);
      if (cfg.ratio_grid.empty()) cfg.ratio_grid = lambdasim::parse_grid("0.01:0.20:0.01");
      lambdasim::finalize_config(cfg);
      const auto rows = lambdasim::scan_ratio(cfg, cfg.ratio_grid, cfg.threads);
      emit(cfg.output_path, [&](std::ostream& os) { lambdasim::write_scan_csv(os, rows); });
    } else if (*cmp_cmd) {
      auto cfg = load(cmp_opt);
      const auto cmp = lambdasim::compare_semiclassical(cfg);
      for (const auto& w : cmp.warnings) std::cerr << "warning: " << w << '\n';
      emit(cfg.output_path, [&](std::ostream& os) { lambdasim::write_comparison_csv(os, cmp); });
    } else if (*dark_cmd) {
      auto cfg = load(dark_opt);
      const auto report = lambdasim::inspect_dark(cfg);
      emit(cfg.output_path, [&](std::ostream& os) { os << report; });
    }
  } catch (const lambdasim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const lambdasim::IntegrityError& e) {
    std::cerr << "numerical integrity abort: " << e.what() << '\n';
    return kExitIntegrity;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIntegrity;
  }
  return kExitOk;
}
