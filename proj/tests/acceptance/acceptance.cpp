// Acceptance suite: one pass/fail line per criterion.
//   lambdasim_acceptance            run every criterion
//   lambdasim_acceptance 3 7        run a subset
// Exit status is nonzero when any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "lambdasim/basis.hpp"
#include "lambdasim/lindblad.hpp"
#include "lambdasim/measures.hpp"
#include "lambdasim/operators.hpp"
#include "lambdasim/scenario.hpp"
#include "lambdasim/semiclassical.hpp"
#include "lambdasim/spectral.hpp"

using namespace lambdasim;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) pass = false;
    detail << (detail.tellp() > 0 ? "; " : "") << what << (ok ? "" : " [FAILED]");
  }
};

std::string fmt(double v, int digits = 3) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

double max_abs(const SparseMatrix& m) {
  double out = 0.0;
  for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(m, r); it; ++it) out = std::max(out, std::abs(it.value()));
  }
  return out;
}

std::vector<double> negativity_series(const Trajectory& traj) {
  std::vector<double> out;
  for (const auto& r : traj.records) out.push_back(r.log_negativity);
  return out;
}

std::size_t first_local_minimum(const std::vector<double>& e) {
  for (std::size_t i = 1; i + 1 < e.size(); ++i) {
    if (e[i - 1] > e[i] && e[i] <= e[i + 1]) return i;
  }
  return e.size();
}

ScenarioConfig revival_config() {
  ScenarioConfig c;
  c.params.n = 4;
  c.params.p = 3;
  c.params.omega = 0.15;
  c.params.kappa = 0.1;
  c.params.gamma0 = 0.05;
  c.params.gamma2 = 0.0025;
  c.initial_state = "zp1";
  c.t_max = 100.0;
  c.record_interval = 0.5;
  c.populations = {"zp1", "z:1.0", "z:0.0"};
  return c;
}

ScenarioConfig large_n_config() {
  ScenarioConfig c;
  c.params.n = 20;
  c.params.p = 3;
  c.omega_ratio = 0.1;
  c.initial_state = "sc:1.1.1";
  c.record_interval = 0.5;
  return c;
}

// 1. [H, N] = 0, {Pi1, H} = 0, zero-energy dimension, dark state, a1 |Z> = 0.
void structural(Outcome& out) {
  double comm = 0.0, anti = 0.0, residual = 0.0, infidelity = 0.0, a1_dark = 0.0;
  bool dims_ok = true;
  std::string dims;
  for (int n : {4, 6, 8}) {
    ModelParams params;
    params.n = n;
    params.p = 4;
    const BasisPtr basis = enumerate_symmetric(n, 4);
    const SparseMatrix h = hamiltonian(params, basis).matrix;
    const SparseMatrix num = excitation_number(basis).matrix;
    const SparseMatrix par = excited_parity(basis).matrix;
    comm = std::max(comm, max_abs(SparseMatrix(h * num - num * h)));
    anti = std::max(anti, max_abs(SparseMatrix(par * h + h * par)));
    const SparseMatrix a1 = mode_op(basis, Mode::a1).matrix;
    const Operator hop{h, basis};
    for (int p = 0; p <= 4; ++p) {
      const DenseMatrix block = sector_block(hop, basis->sector(p));
      const DenseMatrix null = nullspace(block);
      const auto expected = p / 2 + 1;
      if (null.cols() != expected) dims_ok = false;
      if (n == 4) dims += (dims.empty() ? "" : ",") + std::to_string(null.cols());

      const StateVector z = master_dark_state(params, basis, p).vector;
      residual = std::max(residual, (h * z).norm());
      a1_dark = std::max(a1_dark, (a1 * z).cwiseAbs().maxCoeff());
      StateVector zp(static_cast<Eigen::Index>(basis->sector(p).size()));
      const auto idx = basis->sector(p);
      for (std::size_t k = 0; k < idx.size(); ++k) zp[static_cast<Eigen::Index>(k)] = z[static_cast<Eigen::Index>(idx[k])];
      const double fidelity = (null.adjoint() * zp).squaredNorm();
      infidelity = std::max(infidelity, 1.0 - fidelity);
    }
  }
  out.check(comm == 0.0, "max|[H,N]| = " + fmt(comm));
  out.check(anti == 0.0, "max|{Pi1,H}| = " + fmt(anti));
  out.check(dims_ok, "nullspace dims floor(p/2)+1 (n=4: " + dims + ")");
  out.check(residual <= 1e-10, "max|H Z_p^0| = " + fmt(residual));
  out.check(infidelity <= 1e-10, "max 1-fidelity = " + fmt(infidelity));
  out.check(a1_dark == 0.0, "max|a1 Z_p^0| = " + fmt(a1_dark));
}

// 2. Mode mixing unitarity and semiclassical spectrum.
void semiclassical_algebra(Outcome& out) {
  double unit = 0.0, spec = 0.0;
  const BasisPtr modes = enumerate_modes(3);
  for (const auto& [n, omega] : std::vector<std::pair<int, double>>{{20, 0.1 * std::sqrt(20.0)}, {4, 0.15}, {6, 0.7}}) {
    ModelParams params;
    params.n = n;
    params.omega = omega;
    const ModeMixing mix = semiclassical_modes(params);
    unit = std::max(unit, (mix.coefficients * mix.coefficients.transpose() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff());
    const SparseMatrix h = hamiltonian_semiclassical(params, modes).matrix;
    for (const auto& label : full_ladder_states(3)) {
      const StateVector v = semiclassical_eigenstate(label, params, modes).vector;
      const double e = (label.kp - label.km) * params.epsilon();
      spec = std::max(spec, (h * v - e * v).norm());
    }
  }
  out.check(unit <= 1e-14, "max|M M^T - 1| = " + fmt(unit));
  out.check(spec <= 1e-10, "max|H_sc E - (k+ - k-) eps E| = " + fmt(spec));
}

// 3. Integrator quality.
void integrator(Outcome& out) {
  const ScenarioConfig base = revival_config();
  const Trajectory coarse = run(base);
  ScenarioConfig halved = base;
  halved.dt = 0.5 * evolve_options(base).dt;
  const Trajectory fine = run(halved);

  double drift = 0.0, lowest = 0.0, shift = 0.0;
  for (std::size_t k = 0; k < coarse.records.size(); ++k) {
    const auto& a = coarse.records[k];
    const auto& b = fine.records[k];
    drift = std::max({drift, a.trace_deviation, b.trace_deviation});
    lowest = std::min({lowest, a.min_eigenvalue, b.min_eigenvalue});
    shift = std::max({shift, std::abs(a.log_negativity - b.log_negativity), std::abs(a.purity - b.purity)});
    for (std::size_t j = 0; j < a.populations.size(); ++j) shift = std::max(shift, std::abs(a.populations[j] - b.populations[j]));
  }
  const bool grids_match = coarse.times.size() == fine.times.size() &&
                           std::abs(coarse.times.back() - fine.times.back()) < 1e-12;
  out.check(grids_match, "record grids match");
  out.check(drift < 1e-8, "trace drift " + fmt(drift));
  out.check(lowest > -1e-8, "min eigenvalue " + fmt(lowest));
  out.check(shift < 1e-6, "dt-halving shift " + fmt(shift));

  ModelParams params;
  params.n = 4;
  params.p = 1;
  params.kappa = 0.1;
  const BasisPtr basis = enumerate_symmetric(4, 1);
  const Operator zero{SparseMatrix(static_cast<Eigen::Index>(basis->size()), static_cast<Eigen::Index>(basis->size())), basis};
  StateVector one = StateVector::Zero(static_cast<Eigen::Index>(basis->size()));
  one[static_cast<Eigen::Index>(*basis->index_of(SymState{4, 0, 0, 1}))] = 1.0;
  EvolveOptions opt;
  opt.t_max = 50.0;
  opt.rate_scale = params.kappa;
  opt.record_every = 100;
  const Trajectory decay = evolve(DensityMatrix::pure(basis, one), zero, jump_channels(params, basis), {{"one", one}}, opt);
  double err = 0.0;
  for (std::size_t k = 0; k < decay.times.size(); ++k) {
    err = std::max(err, std::abs(decay.records[k].populations[0] - std::exp(-params.kappa * decay.times[k])));
  }
  out.check(err < 1e-6, "single-mode decay error " + fmt(err));
}

// 4. Revival in the two-stage prototype.
void revival_existence(Outcome& out) {
  const Trajectory traj = run(revival_config());
  const auto e = negativity_series(traj);
  const auto trough = static_cast<std::size_t>(std::min_element(e.begin(), e.end()) - e.begin());
  const double height = revival_height(e);
  const bool has_min = first_local_minimum(e) < e.size();
  double min_purity = 1.0, missing = 0.0;
  for (std::size_t k = 0; k <= trough; ++k) {
    const auto& r = traj.records[k];
    min_purity = std::min(min_purity, r.purity);
    missing = std::max(missing, 1.0 - r.populations[0] - r.populations[1] - r.populations[2]);
  }
  out.check(has_min && trough + 1 < e.size(), "E_N trough at g t = " + fmt(traj.times[trough]));
  out.check(height > 0.02, "revival height " + fmt(height));
  out.check(min_purity < 0.9, "min purity " + fmt(min_purity));
  out.check(missing > 0.1, "peak 1-P31-P10-P00 = " + fmt(missing));
}

// 5. Semiclassical agreement for the large-n boson-loss case.
void semiclassical_agreement(Outcome& out) {
  ScenarioConfig cfg = large_n_config();
  cfg.params.kappa = 0.1;
  cfg.t_max = 60.0;
  const Comparison cmp = compare_semiclassical(cfg);
  const double pop_dev = (cmp.exact - cmp.dominant).cwiseAbs().maxCoeff();
  const std::size_t start = first_local_minimum(cmp.en_exact);
  double en_dev = 0.0;
  for (std::size_t k = start; k < cmp.times.size(); ++k) {
    en_dev = std::max(en_dev, std::abs(cmp.en_exact[k] - cmp.en_full_ladder[k]));
  }
  out.check(cmp.dominant.size() > 0 && pop_dev < 0.05, "five-state population deviation " + fmt(pop_dev));
  out.check(start < cmp.times.size() && en_dev < 0.05,
            "full-ladder E_N deviation after g t = " + fmt(start < cmp.times.size() ? cmp.times[start] : -1.0) + ": " + fmt(en_dev));
}

// 6. Saturation under collective qutrit decay.
void qutrit_decay(Outcome& out) {
  const auto saturate = [](double gamma0, double gamma2) {
    ScenarioConfig cfg = large_n_config();
    cfg.params.gamma0 = gamma0;
    cfg.params.gamma2 = gamma2;
    cfg.t_max = 300.0;
    cfg.record_interval = 1.0;
    return negativity_series(run(cfg));
  };
  const auto tail_dev = [](const std::vector<double>& e, double target) {
    double d = 0.0;
    for (std::size_t k = e.size() * 4 / 5; k < e.size(); ++k) d = std::max(d, std::abs(e[k] - target));
    return d;
  };
  ScenarioConfig ref = large_n_config();
  ref.params.gamma2 = 0.02;
  finalize_config(ref);
  const BasisPtr basis = make_basis(ref);
  const Bipartition bip = Bipartition::qutrits_vs_boson(*basis);
  const auto dark_en = [&](const char* name) {
    const StateVector v = resolve_state(name, ref.params, basis);
    return log_negativity(v * v.adjoint(), bip);
  };
  // The exact fixed points are the master dark states; the semiclassical
  // vectors E_(p;00) approximate them at finite n.
  const double target_a = dark_en("z:3.0");
  const double target_b = dark_en("z:1.0");
  const double approx_a = dark_en("sc:3.0.0");
  const double approx_b = dark_en("sc:1.0.0");

  // Gamma = 0.02 g, with sqrt(n) Gamma0 = Gamma for the a0'a1 channel.
  const double gamma = 0.02;
  const double gamma0 = gamma / std::sqrt(20.0);
  const auto a = saturate(0.0, gamma);
  const auto b = saturate(gamma0, 0.0);
  const auto c = saturate(gamma0, gamma);
  const double da = tail_dev(a, target_a);
  const double db = tail_dev(b, target_b);
  out.check(da < 0.02, "(a) Gamma2 only: E_N -> " + fmt(a.back(), 4) + " vs Z_3^0 " + fmt(target_a, 4) +
                          " (semiclassical E_(3;00): " + fmt(approx_a, 4) + ")");
  out.check(db < 0.02, "(b) Gamma0 only: E_N -> " + fmt(b.back(), 4) + " vs Z_1^0 " + fmt(target_b, 4) +
                          " (semiclassical E_(1;00): " + fmt(approx_b, 4) + ")");
  out.check(c.back() < a.back() && c.back() < b.back(), "(c) both: E_N -> " + fmt(c.back(), 4));
}

// 7. Optimal coupling ratio.
void optimal_ratio(Outcome& out) {
  ScenarioConfig cfg = large_n_config();
  cfg.params.kappa = 0.1;
  cfg.t_max = 200.0;
  const auto grid = parse_grid("0.01:0.20:0.01");
  const int threads = std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
  const auto rows = scan_ratio(cfg, grid, threads);
  const auto argmax = [&](auto key) {
    return std::max_element(rows.begin(), rows.end(), [&](const ScanRow& x, const ScanRow& y) { return key(x) < key(y); })->ratio;
  };
  const double best_revival = argmax([](const ScanRow& r) { return r.revival_height; });
  const double best_estimate = argmax([](const ScanRow& r) { return r.estimate_negativity; });
  out.check(best_revival >= 0.05 - 1e-9 && best_revival <= 0.10 + 1e-9, "revival argmax " + fmt(best_revival));
  out.check(std::abs(best_estimate - 0.13) <= 0.02 + 1e-9, "estimator argmax " + fmt(best_estimate));

  ModelParams params = cfg.params;
  params.omega = params.g * std::sqrt(static_cast<double>(params.n)) / 10.0;
  const RateModel model = build_rate_model(params, dominant_path_states(3));
  Eigen::VectorXd p0 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(model.size()));
  p0[static_cast<Eigen::Index>(model.index_of({1, 1, 1}))] = 1.0;
  std::vector<double> times;
  for (int k = 0; k <= 100; ++k) times.push_back(0.1 * k / params.kappa);
  const auto trace = solve_rates(model, p0, times);
  const auto col = static_cast<Eigen::Index>(model.index_of({1, 0, 0}));
  double dev = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    dev = std::max(dev, std::abs(trace.populations(static_cast<Eigen::Index>(k), col) -
                                 analytic_p100(times[k], params.theta(), params.kappa)));
  }
  out.check(dev < 0.05, "closed-form P_(1;00) vs five-state model at tan(theta)=10: " + fmt(dev));
}

// 8. Individual qutrit decay in the full space.
void individual_decay(Outcome& out) {
  ModelParams params;
  params.n = 4;
  params.p = 3;
  params.omega = 0.2;
  params.gamma10 = 0.05;
  const BasisPtr full = enumerate_full(4, 3);
  const DecayBranching branching = individual_decay_probabilities(params, full);
  const auto best = static_cast<std::size_t>(
      std::max_element(branching.probabilities.begin(), branching.probabilities.end()) - branching.probabilities.begin());
  const auto [first, count] = branching.final_spectrum.multiplets[best];
  const StateVector dark = semiclassical_eigenstate({1, 0, 0}, params, full).vector;
  const double overlap = (branching.final_spectrum.vectors.middleCols(first, count).adjoint() * dark).squaredNorm();
  out.check(overlap > 1.0 - 1e-9, "branching argmax multiplet P = " + fmt(branching.probabilities[best]) +
                                       ", overlap with E_(1;00) " + fmt(overlap, 12));

  const auto height = [](double g10, double g12) {
    ScenarioConfig cfg;
    cfg.representation = Representation::full;
    cfg.params.n = 4;
    cfg.params.p = 3;
    cfg.params.omega = 0.2;
    cfg.params.gamma10 = g10;
    cfg.params.gamma12 = g12;
    cfg.initial_state = "sc:1.1.1";
    cfg.t_max = 300.0;
    cfg.dt = 0.01;
    cfg.record_interval = 1.0;
    return revival_height(negativity_series(run(cfg)));
  };
  const double ha = height(0.05, 2.5e-3);
  const double hb = height(2.5e-3, 0.05);
  const double hc = height(0.05, 0.05);
  out.check(ha > 0.01, "Gamma10-dominant revival " + fmt(ha));
  out.check(hb > 0.01, "Gamma12-dominant revival " + fmt(hb));
  out.check(hc < 0.005, "comparable rates revival " + fmt(hc));

  ScenarioConfig sym = revival_config();
  sym.t_max = 20.0;
  sym.dt = 0.0025;
  sym.populations.clear();
  ScenarioConfig fullcfg = sym;
  fullcfg.representation = Representation::full;
  const Trajectory ts = run(sym);
  const Trajectory tf = run(fullcfg);
  double diff = 0.0;
  for (std::size_t k = 0; k < ts.records.size(); ++k) {
    diff = std::max(diff, std::abs(ts.records[k].log_negativity - tf.records[k].log_negativity));
  }
  out.check(ts.records.size() == tf.records.size() && diff < 1e-6, "symmetric vs full E_N " + fmt(diff));
}

// 9. Detuning.
void detuning(Outcome& out) {
  std::vector<double> heights;
  for (double ratio : {0.0, 0.2, 0.4}) {
    ScenarioConfig cfg;
    cfg.params.n = 4;
    cfg.params.p = 3;
    cfg.params.kappa = 0.1;
    cfg.omega_ratio = 0.1;
    cfg.delta_ratio = ratio;
    cfg.initial_state = "sc:1.1.1";
    cfg.t_max = 200.0;
    heights.push_back(revival_height(negativity_series(run(cfg))));
  }
  out.check(heights[0] > heights[1] && heights[1] > heights[2],
            "heights " + fmt(heights[0]) + " > " + fmt(heights[1]) + " > " + fmt(heights[2]));
  out.check(heights[1] > 0.0, "positive at 0.2");

  double residual = 0.0;
  const BasisPtr basis = enumerate_symmetric(4, 3);
  for (double delta : {0.0, 0.4, 0.8, 1.7, -3.0}) {
    ModelParams params;
    params.n = 4;
    params.p = 3;
    params.omega = 0.2;
    params.delta = delta;
    const SparseMatrix h = hamiltonian(params, basis).matrix;
    for (int p = 0; p <= 3; ++p) residual = std::max(residual, (h * master_dark_state(params, basis, p).vector).norm());
  }
  out.check(residual <= 1e-10, "max|H_Delta Z_p^0| = " + fmt(residual));
}

// 10. Entanglement oracle.
void entanglement_oracle(Outcome& out) {
  std::mt19937_64 rng(20240917);
  std::normal_distribution<double> normal;
  double worst = 0.0;
  const std::vector<BasisPtr> bases = {enumerate_symmetric(4, 3), enumerate_symmetric(9, 4), enumerate_full(3, 2)};
  for (int trial = 0; trial < 100; ++trial) {
    const BasisPtr& basis = bases[static_cast<std::size_t>(trial) % bases.size()];
    StateVector v(static_cast<Eigen::Index>(basis->size()));
    for (auto& x : v) x = {normal(rng), normal(rng)};
    v.normalize();
    const Bipartition bip = Bipartition::qutrits_vs_boson(*basis);
    const double en = log_negativity(v * v.adjoint(), bip);
    const double oracle = 2.0 * std::log2(schmidt_coefficients(v, bip).sum());
    worst = std::max(worst, std::abs(en - oracle));
  }
  out.check(worst <= 1e-9, "100 random pure states, max |E_N - 2 log2 sum s| = " + fmt(worst));

  ModelParams params;
  params.n = 4;
  params.p = 1;
  params.omega = 0.15;
  const BasisPtr basis = enumerate_symmetric(4, 1);
  const StateVector z = master_dark_state(params, basis).vector;
  const double en = log_negativity(z * z.adjoint(), Bipartition::qutrits_vs_boson(*basis));
  out.check(std::abs(en - 0.2010) <= 1e-3, "E_N(Z_1^0) = " + fmt(en, 6));
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;  ///< 0: no time limit
  std::function<void(Outcome&)> body;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "structural suite", 5.0, structural},
      {2, "semiclassical algebra", 1.0, semiclassical_algebra},
      {3, "integrator quality", 30.0, integrator},
      {4, "revival existence", 60.0, revival_existence},
      {5, "semiclassical agreement", 120.0, semiclassical_agreement},
      {6, "qutrit-decay saturation", 120.0, qutrit_decay},
      {7, "optimal-ratio scan", 600.0, optimal_ratio},
      {8, "individual decay", 600.0, individual_decay},
      {9, "detuning robustness", 60.0, detuning},
      {10, "entanglement oracle", 0.0, entanglement_oracle},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::stoi(argv[i]));

  int failures = 0;
  for (const auto& c : all) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.body(out);
    } catch (const std::exception& e) {
      out.check(false, std::string("exception: ") + e.what());
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0.0) out.check(elapsed < c.budget_s, "time " + fmt(elapsed) + " s < " + fmt(c.budget_s) + " s");
    std::cout << (out.pass ? "PASS" : "FAIL") << "  criterion " << c.id << " (" << c.name << "): " << out.detail.str()
              << std::endl;
    if (!out.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
