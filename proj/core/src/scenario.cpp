#include "lambdasim/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "lambdasim/measures.hpp"
#include "lambdasim/spectral.hpp"

namespace lambdasim {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& value, const std::string& key, int line) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size() || !std::isfinite(v)) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key, "expected a finite number, got '" + value + "'", line);
  }
}

int parse_int(const std::string& value, const std::string& key, int line) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return static_cast<int>(v);
  } catch (const std::exception&) {
    throw ConfigError(key, "expected an integer, got '" + value + "'", line);
  }
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void set_key(ScenarioConfig& c, const std::string& key, const std::string& value, int line) {
  auto& p = c.params;
  if (key == "n") p.n = parse_int(value, key, line);
  else if (key == "p") p.p = parse_int(value, key, line);
  else if (key == "g") p.g = parse_double(value, key, line);
  else if (key == "omega") p.omega = parse_double(value, key, line);
  else if (key == "omega_ratio") c.omega_ratio = parse_double(value, key, line);
  else if (key == "kappa") p.kappa = parse_double(value, key, line);
  else if (key == "gamma0") p.gamma0 = parse_double(value, key, line);
  else if (key == "gamma2") p.gamma2 = parse_double(value, key, line);
  else if (key == "gamma10") p.gamma10 = parse_double(value, key, line);
  else if (key == "gamma12") p.gamma12 = parse_double(value, key, line);
  else if (key == "delta") p.delta = parse_double(value, key, line);
  else if (key == "delta_ratio") c.delta_ratio = parse_double(value, key, line);
  else if (key == "representation") {
    if (value == "symmetric") c.representation = Representation::symmetric;
    else if (value == "full") c.representation = Representation::full;
    else throw ConfigError(key, "expected 'symmetric' or 'full', got '" + value + "'", line);
  } else if (key == "initial_state") c.initial_state = value;
  else if (key == "t_max") c.t_max = parse_double(value, key, line);
  else if (key == "dt") c.dt = parse_double(value, key, line);
  else if (key == "record_every") c.record_every = parse_int(value, key, line);
  else if (key == "record_interval") c.record_interval = parse_double(value, key, line);
  else if (key == "populations") c.populations = split_list(value);
  else if (key == "output") c.output_path = value;
  else if (key == "ratio_grid") {
    try {
      c.ratio_grid = parse_grid(value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(key, e.what(), line);
    }
  } else if (key == "threads") c.threads = parse_int(value, key, line);
  else throw ConfigError(key, "unknown key", line);
}

std::pair<std::string, std::string> split_assignment(const std::string& text, int line) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw ConfigError("", "expected key = value, got '" + text + "'", line);
  std::string key = trim(text.substr(0, eq));
  std::string value = trim(text.substr(eq + 1));
  if (key.empty()) throw ConfigError("", "missing key", line);
  if (value.empty()) throw ConfigError(key, "missing value", line);
  return {key, value};
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.8e", v == 0.0 ? 0.0 : v);  // 9 significant digits, no "-0"
  return buf;
}

std::vector<StateVector> semiclassical_vectors(const std::vector<SemiclassicalLabel>& labels, const ModelParams& params,
                                               const BasisPtr& basis) {
  std::vector<StateVector> out;
  out.reserve(labels.size());
  for (const auto& l : labels) out.push_back(semiclassical_eigenstate(l, params, basis).vector);
  return out;
}

DenseMatrix semiclassical_mixture(const std::vector<StateVector>& vectors, const Eigen::VectorXd& weights) {
  const auto d = vectors.front().size();
  DenseMatrix rho = DenseMatrix::Zero(d, d);
  for (std::size_t a = 0; a < vectors.size(); ++a) {
    const double w = weights[static_cast<Eigen::Index>(a)];
    if (w != 0.0) rho.noalias() += w * (vectors[a] * vectors[a].adjoint());
  }
  return rho;
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::stringstream ss(text);
    std::string a, b, c;
    if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c)) {
      throw std::invalid_argument("grid must be start:stop:step");
    }
    const double start = std::stod(a), stop = std::stod(b), step = std::stod(c);
    if (!(step > 0.0) || stop < start) throw std::invalid_argument("grid needs step > 0 and stop >= start");
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (long k = 0; k < count; ++k) out.push_back(start + static_cast<double>(k) * step);
    return out;
  }
  for (const auto& item : split_list(text)) {
    std::size_t pos = 0;
    out.push_back(std::stod(item, &pos));
    if (pos != item.size()) throw std::invalid_argument("malformed grid value '" + item + "'");
  }
  return out;
}

ScenarioConfig parse_config(std::istream& in) {
  ScenarioConfig config;
  std::set<std::string> seen;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty()) continue;
    auto [key, value] = split_assignment(text, line);
    if (!seen.insert(key).second) throw ConfigError(key, "duplicate key", line);
    set_key(config, key, value, line);
  }
  return config;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
  return parse_config(in);
}

void apply_override(ScenarioConfig& config, const std::string& assignment) {
  auto [key, value] = split_assignment(assignment, 0);
  set_key(config, key, value, 0);
}

void finalize_config(ScenarioConfig& config) {
  auto& p = config.params;
  const double scale = p.g * std::sqrt(static_cast<double>(std::max(p.n, 1)));
  if (config.omega_ratio) p.omega = *config.omega_ratio * scale;
  if (config.delta_ratio) p.delta = *config.delta_ratio * scale;
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("params", e.what());
  }
  if (p.has_individual_decay() && config.representation != Representation::full) {
    throw ConfigError("representation", "individual decay (gamma10/gamma12) requires representation = full");
  }
  if (config.representation == Representation::full && p.n > kMaxFullQutrits) {
    throw ConfigError("n", "full representation is limited to n <= " + std::to_string(kMaxFullQutrits));
  }
  if (!(config.t_max > 0.0)) throw ConfigError("t_max", "must be positive");
  if (config.dt < 0.0) throw ConfigError("dt", "must be positive (or 0 for automatic)");
  if (config.dt > kMaxStepFactor / p.rate_scale() * (1.0 + 1e-12)) {
    throw ConfigError("dt", "exceeds the stability guard 0.05 / max(epsilon, kappa, Gamma) = " +
                                std::to_string(kMaxStepFactor / p.rate_scale()));
  }
  if (config.record_every < 0) throw ConfigError("record_every", "must be >= 1 (or 0 for automatic)");
  if (config.record_every == 0 && !(config.record_interval > 0.0)) {
    throw ConfigError("record_interval", "must be positive");
  }
  if (config.threads < 1) throw ConfigError("threads", "must be >= 1");

  const BasisPtr basis = make_basis(config);
  try {
    (void)resolve_state(config.initial_state, p, basis);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("initial_state", e.what());
  }
  for (const auto& name : config.populations) {
    try {
      (void)resolve_state(name, p, basis);
    } catch (const std::exception& e) {
      throw ConfigError("populations", "'" + name + "': " + e.what());
    }
  }
}

BasisPtr make_basis(const ScenarioConfig& config) {
  const auto& p = config.params;
  return config.representation == Representation::full ? enumerate_full(p.n, p.p) : enumerate_symmetric(p.n, p.p);
}

StateVector resolve_state(const std::string& name, const ModelParams& params, const BasisPtr& basis) {
  ModelParams resonant = params;
  resonant.delta = 0.0;
  const bool full = basis->representation() == Representation::full;
  const auto lift = [&](const BasisPtr& sym, StateVector v) {
    return full ? embed_symmetric(v, *sym, *basis) : v;
  };
  const auto symmetric_basis = [&] {
    return full ? enumerate_symmetric(params.n, basis->p_max()) : basis;
  };

  if (name == "vacuum") {
    const BasisPtr sym = symmetric_basis();
    StateVector v = StateVector::Zero(static_cast<Eigen::Index>(sym->size()));
    v[static_cast<Eigen::Index>(*sym->index_of(SymState{params.n, 0, 0, 0}))] = 1.0;
    return lift(sym, v);
  }
  int p = -1;
  int i = -1;
  if (name == "zp0" || name == "zp1") {
    p = params.p;
    i = name == "zp0" ? 0 : 1;
  } else if (name.rfind("z:", 0) == 0) {
    char dot = 0;
    std::istringstream in(name.substr(2));
    if (!(in >> p >> dot >> i) || dot != '.' || !in.eof()) {
      throw ConfigError("state", "malformed zero-energy state name '" + name + "' (expected z:P.I)");
    }
  } else if (name.rfind("sc:", 0) == 0) {
    const auto label = SemiclassicalLabel::parse(name.substr(3));
    return semiclassical_eigenstate(label, params, basis).vector;
  } else {
    throw ConfigError("state", "unknown state name '" + name + "'");
  }

  if (p < 0 || p > basis->p_max()) throw ConfigError("state", "'" + name + "' needs p within [0, " + std::to_string(basis->p_max()) + "]");
  const BasisPtr sym = symmetric_basis();
  if (i == 0) return lift(sym, master_dark_state(resonant, sym, p).vector);
  const auto zero = zero_energy_basis(resonant, sym, p);
  if (i < 0 || i >= static_cast<int>(zero.size())) {
    throw ConfigError("state", "'" + name + "': the zero-energy subspace with p = " + std::to_string(p) + " has dimension " +
                                   std::to_string(zero.size()));
  }
  return lift(sym, zero[static_cast<std::size_t>(i)]);
}

EvolveOptions evolve_options(const ScenarioConfig& config) {
  EvolveOptions opt;
  opt.t_max = config.t_max;
  opt.rate_scale = config.params.rate_scale();
  double dt = config.dt > 0.0 ? config.dt : default_time_step(opt.rate_scale);
  if (config.record_every > 0) {
    opt.record_every = config.record_every;
  } else {
    // Shrink dt so that record_interval is a whole number of steps.
    const double per_record = std::ceil(config.record_interval / dt - 1e-9);
    dt = config.record_interval / per_record;
    opt.record_every = static_cast<int>(per_record);
  }
  const double ratio = config.t_max / dt;
  const double steps = std::abs(ratio - std::round(ratio)) < 1e-6 ? std::round(ratio) : std::ceil(ratio);
  opt.dt = config.t_max / std::max(1.0, steps);
  return opt;
}

Trajectory run(const ScenarioConfig& config) {
  ScenarioConfig cfg = config;
  finalize_config(cfg);
  const BasisPtr basis = make_basis(cfg);
  const StateVector psi0 = resolve_state(cfg.initial_state, cfg.params, basis);
  std::vector<NamedState> pops;
  for (const auto& name : cfg.populations) pops.push_back({name, resolve_state(name, cfg.params, basis)});
  const Operator h = hamiltonian(cfg.params, basis);
  const auto channels = jump_channels(cfg.params, basis);
  return evolve(DensityMatrix::pure(basis, psi0), h, channels, pops, evolve_options(cfg));
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << "t_g,E_N,purity,trace_dev,min_eig";
  for (const auto& name : traj.population_names) out << ",P[" << name << "]";
  out << '\n';
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const auto& r = traj.records[k];
    out << format_number(traj.times[k]) << ',' << format_number(r.log_negativity) << ',' << format_number(r.purity)
        << ',' << format_number(r.trace_deviation) << ',' << format_number(r.min_eigenvalue);
    for (double p : r.populations) out << ',' << format_number(p);
    out << '\n';
  }
}

double revival_height(std::span<const double> e) {
  if (e.size() < 3) return 0.0;
  const auto lowest = std::min_element(e.begin(), e.end());
  if (lowest == e.begin() || lowest + 1 == e.end()) return 0.0;
  return *std::max_element(lowest + 1, e.end()) - *lowest;
}

std::vector<ScanRow> scan_ratio(const ScenarioConfig& config, const std::vector<double>& ratios, int threads) {
  if (ratios.size() < 3) throw ConfigError("ratio_grid", "needs at least 3 points");
  if (!(config.params.kappa > 0.0)) throw ConfigError("kappa", "scan-ratio requires boson loss (kappa > 0)");
  const auto& p = config.params;
  if (p.gamma0 > 0.0 || p.gamma2 > 0.0 || p.gamma10 > 0.0 || p.gamma12 > 0.0) {
    throw ConfigError("gamma", "scan-ratio assumes no qutrit decay");
  }
  for (double r : ratios) {
    if (!(r > 0.0)) throw ConfigError("ratio_grid", "ratios must be positive");
  }
  ScenarioConfig base = config;
  base.omega_ratio.reset();
  base.populations.clear();

  const auto estimates = ratio_scan_estimate(base.params, ratios);
  std::vector<ScanRow> rows(ratios.size());
  std::vector<std::exception_ptr> errors(ratios.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t k = next++; k < ratios.size(); k = next++) {
      try {
        ScenarioConfig cfg = base;
        cfg.omega_ratio = ratios[k];
        const Trajectory traj = run(cfg);
        std::vector<double> en;
        en.reserve(traj.records.size());
        for (const auto& r : traj.records) en.push_back(r.log_negativity);
        rows[k].ratio = ratios[k];
        rows[k].revival_height = revival_height(en);
        rows[k].dark_negativity = estimates[k].dark_negativity;
        rows[k].p100_reference = estimates[k].p100;
        rows[k].estimate_negativity = estimates[k].estimate_negativity;
        rows[k].p100_analytic = estimates[k].p100_analytic;
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const int pool = std::clamp(threads, 1, static_cast<int>(ratios.size()));
  std::vector<std::thread> workers;
  for (int t = 1; t < pool; ++t) workers.emplace_back(worker);
  worker();
  for (auto& w : workers) w.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

void write_scan_csv(std::ostream& out, const std::vector<ScanRow>& rows) {
  out << "ratio,revival_height,E_N_dark,P100_ref,E_N_estimate,P100_analytic\n";
  for (const auto& r : rows) {
    out << format_number(r.ratio) << ',' << format_number(r.revival_height) << ',' << format_number(r.dark_negativity)
        << ',' << format_number(r.p100_reference) << ',' << format_number(r.estimate_negativity) << ','
        << format_number(r.p100_analytic) << '\n';
  }
}

Comparison compare_semiclassical(const ScenarioConfig& config) {
  ScenarioConfig cfg = config;
  finalize_config(cfg);
  if (cfg.representation != Representation::symmetric) {
    throw ConfigError("representation", "compare requires the symmetric representation");
  }
  const auto& params = cfg.params;
  if (params.n < params.p) throw ConfigError("n", "the semiclassical states need n >= p");

  Comparison cmp;
  if (params.n < 5 * params.p) {
    cmp.warnings.push_back("n = " + std::to_string(params.n) + " < 5 p: the semiclassical reduction assumes n >> p");
  }

  const BasisPtr basis = make_basis(cfg);
  const Bipartition bip = Bipartition::qutrits_vs_boson(*basis);
  const StateVector psi0 = resolve_state(cfg.initial_state, params, basis);

  const auto ladder = full_ladder_states(params.p);
  const auto ladder_vectors = semiclassical_vectors(ladder, params, basis);
  const bool with_dominant = params.p == 3;
  cmp.labels = with_dominant ? dominant_path_states(3) : ladder;

  std::vector<NamedState> named;
  for (const auto& l : cmp.labels) named.push_back({"sc:" + l.to_string(), semiclassical_eigenstate(l, params, basis).vector});

  const Operator h = hamiltonian(params, basis);
  const auto channels = jump_channels(params, basis);
  const Trajectory traj = evolve(DensityMatrix::pure(basis, psi0), h, channels, named, evolve_options(cfg));
  cmp.times = traj.times;

  const auto rows = static_cast<Eigen::Index>(traj.times.size());
  const auto cols = static_cast<Eigen::Index>(cmp.labels.size());
  cmp.exact.resize(rows, cols);
  for (Eigen::Index k = 0; k < rows; ++k) {
    cmp.en_exact.push_back(traj.records[static_cast<std::size_t>(k)].log_negativity);
    for (Eigen::Index a = 0; a < cols; ++a) cmp.exact(k, a) = traj.records[static_cast<std::size_t>(k)].populations[static_cast<std::size_t>(a)];
  }

  const auto initial_weights = [&](const std::vector<StateVector>& vectors) {
    Eigen::VectorXd w(static_cast<Eigen::Index>(vectors.size()));
    for (std::size_t a = 0; a < vectors.size(); ++a) w[static_cast<Eigen::Index>(a)] = std::norm(vectors[a].dot(psi0));
    return Eigen::VectorXd(w / w.sum());
  };
  const auto fill = [&](const std::vector<SemiclassicalLabel>& labels, const std::vector<StateVector>& vectors,
                        Eigen::MatrixXd& pops, std::vector<double>& en) {
    const RateModel model = build_rate_model(params, labels);
    const PopulationTrace trace = solve_rates(model, initial_weights(vectors), traj.times);
    pops.resize(rows, cols);
    for (Eigen::Index a = 0; a < cols; ++a) {
      pops.col(a) = trace.populations.col(static_cast<Eigen::Index>(model.index_of(cmp.labels[static_cast<std::size_t>(a)])));
    }
    for (Eigen::Index k = 0; k < rows; ++k) {
      en.push_back(log_negativity(semiclassical_mixture(vectors, trace.populations.row(k).transpose()), bip));
    }
  };
  fill(ladder, ladder_vectors, cmp.full_ladder, cmp.en_full_ladder);
  if (with_dominant) {
    const auto dom = dominant_path_states(3);
    fill(dom, semiclassical_vectors(dom, params, basis), cmp.dominant, cmp.en_dominant);
  }
  return cmp;
}

void write_comparison_csv(std::ostream& out, const Comparison& cmp) {
  const bool dominant = !cmp.en_dominant.empty();
  out << "t_g,E_N_exact,E_N_sc_full";
  if (dominant) out << ",E_N_sc_dominant";
  for (const auto& l : cmp.labels) {
    out << ",P_exact[" << l.to_string() << "],P_sc_full[" << l.to_string() << "]";
    if (dominant) out << ",P_sc_dominant[" << l.to_string() << "]";
  }
  out << '\n';
  for (std::size_t k = 0; k < cmp.times.size(); ++k) {
    const auto row = static_cast<Eigen::Index>(k);
    out << format_number(cmp.times[k]) << ',' << format_number(cmp.en_exact[k]) << ','
        << format_number(cmp.en_full_ladder[k]);
    if (dominant) out << ',' << format_number(cmp.en_dominant[k]);
    for (Eigen::Index a = 0; a < static_cast<Eigen::Index>(cmp.labels.size()); ++a) {
      out << ',' << format_number(cmp.exact(row, a)) << ',' << format_number(cmp.full_ladder(row, a));
      if (dominant) out << ',' << format_number(cmp.dominant(row, a));
    }
    out << '\n';
  }
}

std::string inspect_dark(const ScenarioConfig& config) {
  ScenarioConfig cfg = config;
  cfg.initial_state = "zp0";
  cfg.populations.clear();
  finalize_config(cfg);
  ModelParams params = cfg.params;
  const BasisPtr basis = enumerate_symmetric(params.n, params.p);
  const DarkState dark = master_dark_state(params, basis);
  const Operator h = hamiltonian_symmetric(params, basis);
  const Bipartition bip = Bipartition::qutrits_vs_boson(*basis);
  const DenseMatrix rho = dark.vector * dark.vector.adjoint();

  params.delta = 0.0;
  const auto zero = zero_energy_basis(params, basis, params.p);

  std::ostringstream out;
  out << "# master dark state: n = " << params.n << ", p = " << params.p << ", g = " << format_number(params.g)
      << ", omega = " << format_number(params.omega) << ", delta = " << format_number(cfg.params.delta) << '\n';
  out << "zero_energy_dimension = " << zero.size() << '\n';
  out << "residual_norm = " << format_number((h.matrix * dark.vector).norm()) << '\n';
  out << "log_negativity = " << format_number(log_negativity(rho, bip)) << '\n';
  const Eigen::VectorXd schmidt = schmidt_coefficients(dark.vector, bip);
  out << "schmidt =";
  for (Eigen::Index k = 0; k < schmidt.size(); ++k) {
    if (schmidt[k] > 1e-15) out << ' ' << format_number(schmidt[k]);
  }
  out << "\n\nstate,re,im\n";
  for (std::size_t i = 0; i < basis->size(); ++i) {
    const cplx a = dark.vector[static_cast<Eigen::Index>(i)];
    if (std::abs(a) < 1e-15) continue;
    out << basis->label(i) << ',' << format_number(a.real()) << ',' << format_number(a.imag()) << '\n';
  }
  return out.str();
}

}  // namespace lambdasim
