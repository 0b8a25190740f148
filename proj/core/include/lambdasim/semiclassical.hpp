#pragma once

#include <vector>

#include <Eigen/Dense>

#include "lambdasim/basis.hpp"
#include "lambdasim/lindblad.hpp"
#include "lambdasim/operators.hpp"
#include "lambdasim/spectral.hpp"

namespace lambdasim {

/// Classical rate equation dP/dt = gamma P between semiclassical eigenstates.
/// gamma(a, b) is the rate b -> a; the diagonal holds minus the column sums.
struct RateModel {
  std::vector<SemiclassicalLabel> labels;
  Eigen::MatrixXd gamma;
  std::vector<double> energies;

  std::size_t size() const noexcept { return labels.size(); }
  /// Position of `label` in `labels`; throws std::out_of_range if absent.
  std::size_t index_of(const SemiclassicalLabel& label) const;
  /// Off-diagonal rate from -> to.
  double rate(const SemiclassicalLabel& from, const SemiclassicalLabel& to) const;
};

struct PopulationTrace {
  std::vector<double> times;
  std::vector<SemiclassicalLabel> labels;
  Eigen::MatrixXd populations;  ///< rows: times, columns: labels
};

/// gamma(a,b) = kappa |<a|c|b>|^2 + n Gamma0 |<a|a1|b>|^2 + Gamma2 |<a|a2'a1|b>|^2,
/// evaluated on the three-mode space (the Gamma0 channel uses a0'a1 ~ sqrt(n) a1).
RateModel build_rate_model(const ModelParams& params, const std::vector<SemiclassicalLabel>& labels);

/// (1;11), (1;10), (1;01), (1;00), (0;00). Only p = 3 is supported.
std::vector<SemiclassicalLabel> dominant_path_states(int p);

/// Every label with k0 + k+ + k- <= p, lexicographically ordered.
std::vector<SemiclassicalLabel> full_ladder_states(int p);

/// Exact propagation P(t) = exp(gamma t) P0 on each requested time.
PopulationTrace solve_rates(const RateModel& model, const Eigen::VectorXd& p0, const std::vector<double>& times);

/// sum_a P_a(t) |E_a><E_a| for the trace row `time_index`.
DensityMatrix reconstruct_density(const PopulationTrace& trace, const ModelParams& params, const BasisPtr& basis,
                                  std::size_t time_index);
/// As above; `t` must lie on the trace grid (to 1e-9 relative).
DensityMatrix reconstruct_density_at(const PopulationTrace& trace, const ModelParams& params, const BasisPtr& basis,
                                     double t);

/// Closed-form population of E_(1;00) after boson loss:
/// exp(-kappa t) (1 - exp(sin(theta) kappa t / (2 (sin(theta) + cos(theta)))))^2.
double analytic_p100(double t, double theta, double kappa);

struct RatioEstimate {
  double ratio = 0.0;            ///< 1 / tan(theta) = Omega / (g sqrt(n))
  double theta = 0.0;
  double p100 = 0.0;             ///< P_(1;00) from the full-ladder rate equation at kappa t_ref
  double p100_analytic = 0.0;    ///< closed form, for reference
  double dark_negativity = 0.0;  ///< E_N of E_(1;00)
  double estimate_negativity = 0.0;  ///< E_N of the two-state mixture
};

/// Late-time estimate rho~ = P |E_(1;00)><.| + (1-P) |E_(0;00)><.| at
/// kappa t = kappa_t_ref for each coupling ratio, starting from E_(p-2;11).
std::vector<RatioEstimate> ratio_scan_estimate(const ModelParams& params, const std::vector<double>& ratios,
                                               double kappa_t_ref = 10.0);

struct DecayBranching {
  SectorSpectrum final_spectrum;      ///< eigenstates with p - 2 excitations
  std::vector<double> probabilities;  ///< one per final multiplet, sums to 1
  double trapped_weight = 0.0;        ///< first-step weight on intermediates with no Gamma10 outflow
  int trapped_branches = 0;
};

/// Two-step branching estimate for individual |1> -> |0> decay: from
/// `initial` (p excitations) through the eigen-multiplets of the p-1 block
/// into those of the p-2 block. Degenerate multiplets are treated as a whole
/// (projectors), so the result does not depend on the eigenbasis chosen
/// inside a multiplet.
DecayBranching individual_decay_probabilities(const ModelParams& params, const BasisPtr& full_basis,
                                              const StateVector& initial);

/// Same, starting from E_(p-2;11).
DecayBranching individual_decay_probabilities(const ModelParams& params, const BasisPtr& full_basis);

}  // namespace lambdasim
