#include "lambdasim/semiclassical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

#include "lambdasim/measures.hpp"

namespace lambdasim {

std::size_t RateModel::index_of(const SemiclassicalLabel& label) const {
  const auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) throw std::out_of_range("RateModel: label " + label.to_string() + " not in model");
  return static_cast<std::size_t>(it - labels.begin());
}

double RateModel::rate(const SemiclassicalLabel& from, const SemiclassicalLabel& to) const {
  return gamma(static_cast<Eigen::Index>(index_of(to)), static_cast<Eigen::Index>(index_of(from)));
}

RateModel build_rate_model(const ModelParams& params, const std::vector<SemiclassicalLabel>& labels) {
  params.validate();
  int cutoff = 0;
  for (const auto& l : labels) cutoff = std::max(cutoff, l.total());
  const BasisPtr modes = enumerate_modes(cutoff);

  std::vector<StateVector> states;
  RateModel model;
  model.labels = labels;
  for (const auto& l : labels) {
    auto s = semiclassical_eigenstate(l, params, modes);
    model.energies.push_back(s.energy);
    states.push_back(std::move(s.vector));
  }

  struct Channel {
    double rate;
    SparseMatrix op;
  };
  std::vector<Channel> channels;
  if (params.kappa > 0.0) channels.push_back({params.kappa, mode_op(modes, Mode::c).matrix});
  if (params.gamma0 > 0.0) channels.push_back({params.n * params.gamma0, mode_op(modes, Mode::a1).matrix});
  if (params.gamma2 > 0.0) channels.push_back({params.gamma2, level_transfer(modes, 1, 2).matrix});

  const auto m = static_cast<Eigen::Index>(labels.size());
  model.gamma = Eigen::MatrixXd::Zero(m, m);
  for (const auto& ch : channels) {
    for (Eigen::Index b = 0; b < m; ++b) {
      const StateVector image = ch.op * states[static_cast<std::size_t>(b)];
      for (Eigen::Index a = 0; a < m; ++a) {
        if (a == b) continue;
        model.gamma(a, b) += ch.rate * std::norm(states[static_cast<std::size_t>(a)].dot(image));
      }
    }
  }
  for (Eigen::Index b = 0; b < m; ++b) model.gamma(b, b) = -model.gamma.col(b).sum();
  return model;
}

std::vector<SemiclassicalLabel> dominant_path_states(int p) {
  if (p != 3) throw std::invalid_argument("dominant_path_states: only p = 3 is supported");
  return {{1, 1, 1}, {1, 1, 0}, {1, 0, 1}, {1, 0, 0}, {0, 0, 0}};
}

std::vector<SemiclassicalLabel> full_ladder_states(int p) {
  if (p < 0) throw std::invalid_argument("full_ladder_states: p must be non-negative");
  std::vector<SemiclassicalLabel> out;
  for (int k0 = 0; k0 <= p; ++k0) {
    for (int kp = 0; k0 + kp <= p; ++kp) {
      for (int km = 0; k0 + kp + km <= p; ++km) out.push_back({k0, kp, km});
    }
  }
  return out;
}

PopulationTrace solve_rates(const RateModel& model, const Eigen::VectorXd& p0, const std::vector<double>& times) {
  const auto m = static_cast<Eigen::Index>(model.size());
  if (p0.size() != m) throw std::invalid_argument("solve_rates: initial vector size does not match the model");
  if ((p0.array() < -1e-12).any()) throw std::invalid_argument("solve_rates: negative initial probability");
  if (std::abs(p0.sum() - 1.0) > 1e-9) throw std::invalid_argument("solve_rates: initial probabilities must sum to 1");

  PopulationTrace trace;
  trace.times = times;
  trace.labels = model.labels;
  trace.populations.resize(static_cast<Eigen::Index>(times.size()), m);
  for (std::size_t k = 0; k < times.size(); ++k) {
    const Eigen::MatrixXd prop = (model.gamma * times[k]).exp();
    trace.populations.row(static_cast<Eigen::Index>(k)) = (prop * p0).transpose();
  }
  return trace;
}

DensityMatrix reconstruct_density(const PopulationTrace& trace, const ModelParams& params, const BasisPtr& basis,
                                  std::size_t time_index) {
  if (time_index >= trace.times.size()) throw std::out_of_range("reconstruct_density: time index out of range");
  const auto d = static_cast<Eigen::Index>(basis->size());
  DenseMatrix rho = DenseMatrix::Zero(d, d);
  for (std::size_t a = 0; a < trace.labels.size(); ++a) {
    const double pa = trace.populations(static_cast<Eigen::Index>(time_index), static_cast<Eigen::Index>(a));
    if (pa == 0.0) continue;
    const StateVector v = semiclassical_eigenstate(trace.labels[a], params, basis).vector;
    rho.noalias() += pa * (v * v.adjoint());
  }
  return {basis, std::move(rho)};
}

DensityMatrix reconstruct_density_at(const PopulationTrace& trace, const ModelParams& params, const BasisPtr& basis,
                                     double t) {
  for (std::size_t k = 0; k < trace.times.size(); ++k) {
    if (std::abs(trace.times[k] - t) <= 1e-9 * std::max(1.0, std::abs(t))) {
      return reconstruct_density(trace, params, basis, k);
    }
  }
  throw std::out_of_range("reconstruct_density: t is not on the trace grid");
}

double analytic_p100(double t, double theta, double kappa) {
  if (t < 0.0) throw std::invalid_argument("analytic_p100: t must be non-negative");
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  const double rise = 1.0 - std::exp(s / (2.0 * (s + c)) * kappa * t);
  return std::exp(-kappa * t) * rise * rise;
}

std::vector<RatioEstimate> ratio_scan_estimate(const ModelParams& params, const std::vector<double>& ratios,
                                               double kappa_t_ref) {
  params.validate();
  if (!(params.kappa > 0.0)) throw std::invalid_argument("ratio_scan_estimate: requires kappa > 0");
  if (params.p < 2) throw std::invalid_argument("ratio_scan_estimate: requires p >= 2");
  const BasisPtr basis = enumerate_symmetric(params.n, params.p);
  const Bipartition bip = Bipartition::qutrits_vs_boson(*basis);
  const auto labels = full_ladder_states(params.p);
  const SemiclassicalLabel start{params.p - 2, 1, 1};
  const SemiclassicalLabel dark{1, 0, 0};
  const SemiclassicalLabel vacuum{0, 0, 0};
  const double t_ref = kappa_t_ref / params.kappa;

  std::vector<RatioEstimate> out;
  out.reserve(ratios.size());
  for (double ratio : ratios) {
    if (!(ratio > 0.0) || !std::isfinite(ratio)) {
      throw std::invalid_argument("ratio_scan_estimate: ratios must be positive and finite");
    }
    ModelParams q = params;
    q.omega = ratio * q.g * std::sqrt(static_cast<double>(q.n));
    q.gamma0 = q.gamma2 = q.gamma10 = q.gamma12 = 0.0;

    RatioEstimate est;
    est.ratio = ratio;
    est.theta = q.theta();
    const RateModel model = build_rate_model(q, labels);
    Eigen::VectorXd p0 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(model.size()));
    p0[static_cast<Eigen::Index>(model.index_of(start))] = 1.0;
    const auto trace = solve_rates(model, p0, {t_ref});
    est.p100 = trace.populations(0, static_cast<Eigen::Index>(model.index_of(dark)));
    est.p100_analytic = analytic_p100(t_ref, est.theta, q.kappa);

    const StateVector e100 = semiclassical_eigenstate(dark, q, basis).vector;
    const StateVector e000 = semiclassical_eigenstate(vacuum, q, basis).vector;
    const DenseMatrix pure_dark = e100 * e100.adjoint();
    est.dark_negativity = log_negativity(pure_dark, bip);
    const DenseMatrix mixture = est.p100 * pure_dark + (1.0 - est.p100) * (e000 * e000.adjoint());
    est.estimate_negativity = log_negativity(mixture, bip);
    out.push_back(est);
  }
  return out;
}

DecayBranching individual_decay_probabilities(const ModelParams& params, const BasisPtr& basis,
                                              const StateVector& initial) {
  params.validate();
  if (basis->representation() != Representation::full) {
    throw BasisMismatch("individual_decay_probabilities: requires the full representation");
  }
  if (!(params.gamma10 > 0.0)) throw std::invalid_argument("individual_decay_probabilities: requires Gamma10 > 0");
  if (params.p < 2) throw std::invalid_argument("individual_decay_probabilities: requires p >= 2");
  if (initial.size() != static_cast<Eigen::Index>(basis->size())) {
    throw BasisMismatch("individual_decay_probabilities: initial state has the wrong dimension");
  }

  std::vector<SparseMatrix> lowering;
  for (int j = 0; j < basis->n(); ++j) lowering.push_back(individual_lowering(basis, j, 0).matrix);

  const SectorSpectrum mid = sector_eigenstates(params, basis, params.p - 1);
  DecayBranching out;
  out.final_spectrum = sector_eigenstates(params, basis, params.p - 2);
  const auto& fin = out.final_spectrum;
  const DenseMatrix fin_adj = fin.vectors.adjoint();

  const auto multiplet_weights = [&](const StateVector& y, std::vector<double>& acc, double scale) {
    const StateVector coeff = fin_adj * y;
    for (std::size_t m = 0; m < fin.multiplets.size(); ++m) {
      const auto [first, count] = fin.multiplets[m];
      acc[m] += scale * coeff.segment(first, count).squaredNorm();
    }
  };

  const double rate = params.gamma10;
  std::vector<double> first_step;
  std::vector<std::vector<double>> second_step;
  for (const auto& [first, count] : mid.multiplets) {
    const DenseMatrix v = mid.vectors.middleCols(first, count);
    double w = 0.0;
    std::vector<double> g(fin.multiplets.size(), 0.0);
    for (const auto& a : lowering) {
      const StateVector u = v.adjoint() * (a * initial);
      const double wi = rate * u.squaredNorm();
      if (wi == 0.0) continue;
      w += wi;
      const StateVector x = v * u;
      for (const auto& b : lowering) multiplet_weights(b * x, g, rate * rate);
    }
    first_step.push_back(w);
    second_step.push_back(std::move(g));
  }

  const double total = std::accumulate(first_step.begin(), first_step.end(), 0.0);
  if (!(total > 0.0)) throw std::invalid_argument("individual_decay_probabilities: initial state has no Gamma10 outflow");

  out.probabilities.assign(fin.multiplets.size(), 0.0);
  for (std::size_t k = 0; k < first_step.size(); ++k) {
    if (first_step[k] == 0.0) continue;
    const double weight = first_step[k] / total;
    const double outflow = std::accumulate(second_step[k].begin(), second_step[k].end(), 0.0);
    if (outflow <= 1e-14 * first_step[k] * rate) {
      out.trapped_weight += weight;
      ++out.trapped_branches;
      continue;
    }
    for (std::size_t m = 0; m < fin.multiplets.size(); ++m) out.probabilities[m] += weight * second_step[k][m] / outflow;
  }
  if (out.trapped_weight < 1.0) {
    for (auto& p : out.probabilities) p /= 1.0 - out.trapped_weight;
  }
  return out;
}

DecayBranching individual_decay_probabilities(const ModelParams& params, const BasisPtr& basis) {
  const StateVector start = semiclassical_eigenstate({params.p - 2, 1, 1}, params, basis).vector;
  return individual_decay_probabilities(params, basis, start);
}

}  // namespace lambdasim
