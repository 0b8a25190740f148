#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lambdasim/basis.hpp"
#include "lambdasim/lindblad.hpp"
#include "lambdasim/operators.hpp"
#include "lambdasim/semiclassical.hpp"

namespace lambdasim {

/// Flat key=value scenario description. See README.md for the schema.
struct ScenarioConfig {
  ModelParams params;
  Representation representation = Representation::symmetric;
  std::string initial_state = "zp1";
  double t_max = 100.0;
  double dt = 0.0;               ///< 0: default step from the stability guard
  int record_every = 0;          ///< steps between records; 0: derive from record_interval
  double record_interval = 0.5;  ///< g t between records when record_every = 0
  std::vector<std::string> populations;
  std::string output_path;
  std::vector<double> ratio_grid;
  int threads = 1;

  /// Ratio Omega / (g sqrt(n)); when set it overrides `params.omega`.
  std::optional<double> omega_ratio;
  /// Ratio Delta / (g sqrt(n)); when set it overrides `params.delta`.
  std::optional<double> delta_ratio;
};

/// Parse a configuration stream. Unknown keys, malformed values and
/// duplicate keys raise ConfigError carrying the line number.
ScenarioConfig parse_config(std::istream& in);
ScenarioConfig load_config(const std::string& path);

/// Apply one "key=value" override on top of a parsed configuration.
void apply_override(ScenarioConfig& config, const std::string& assignment);

/// Resolve ratio keys into params and check cross-field constraints.
/// Throws ConfigError.
void finalize_config(ScenarioConfig& config);

/// Named states: "vacuum", "zp0", "zp1", "z:P.I" (I-th zero-energy state with
/// P excitations) and "sc:k0.kp.km". Zero-energy states are those of the
/// resonant Hamiltonian.
StateVector resolve_state(const std::string& name, const ModelParams& params, const BasisPtr& basis);

BasisPtr make_basis(const ScenarioConfig& config);
EvolveOptions evolve_options(const ScenarioConfig& config);

Trajectory run(const ScenarioConfig& config);
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

/// max_{t > t_min} E_N(t) - E_N(t_min), with t_min the position of the
/// deepest trough (first occurrence of the global minimum). Zero when the
/// minimum sits at either end of the series, e.g. for monotone input.
double revival_height(std::span<const double> series);

struct ScanRow {
  double ratio = 0.0;
  double revival_height = 0.0;
  double dark_negativity = 0.0;
  double p100_reference = 0.0;
  double estimate_negativity = 0.0;
  double p100_analytic = 0.0;
};

/// One full simulation per coupling ratio Omega/(g sqrt(n)), fanned out over
/// `threads` workers; rows come back in grid order.
std::vector<ScanRow> scan_ratio(const ScenarioConfig& config, const std::vector<double>& ratios, int threads);
void write_scan_csv(std::ostream& out, const std::vector<ScanRow>& rows);

struct Comparison {
  std::vector<double> times;
  std::vector<SemiclassicalLabel> labels;  ///< states whose populations are reported
  Eigen::MatrixXd exact;                   ///< rows: times
  Eigen::MatrixXd full_ladder;
  Eigen::MatrixXd dominant;                ///< empty unless p = 3
  std::vector<double> en_exact;
  std::vector<double> en_full_ladder;
  std::vector<double> en_dominant;
  std::vector<std::string> warnings;
};

Comparison compare_semiclassical(const ScenarioConfig& config);
void write_comparison_csv(std::ostream& out, const Comparison& comparison);

/// Human-readable dump of the master dark state: amplitudes, |H v|,
/// Schmidt spectrum, E_N and the zero-energy subspace dimension.
std::string inspect_dark(const ScenarioConfig& config);

/// Parse "start:stop:step" or a comma separated list.
std::vector<double> parse_grid(const std::string& text);

}  // namespace lambdasim
