#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "lambdasim/basis.hpp"
#include "lambdasim/measures.hpp"
#include "lambdasim/operators.hpp"
#include "lambdasim/types.hpp"

namespace lambdasim {

/// Hermitian, unit-trace matrix over a SectorBasis.
class DensityMatrix {
public:
  DensityMatrix(BasisPtr basis, DenseMatrix matrix);

  static DensityMatrix pure(BasisPtr basis, const StateVector& psi);

  const DenseMatrix& matrix() const noexcept { return matrix_; }
  const BasisPtr& basis() const noexcept { return basis_; }

  double trace_deviation() const;
  double hermiticity_error() const;

  /// Throws IntegrityError unless |Tr - 1| < trace_tol, |rho - rho'|max <
  /// hermiticity_tol and the smallest eigenvalue exceeds -eigen_tol.
  void check(double trace_tol = 1e-8, double hermiticity_tol = 1e-10, double eigen_tol = 1e-8) const;

private:
  BasisPtr basis_;
  DenseMatrix matrix_;
};

/// Generator rho -> -i[H, rho] + sum_c rate_c (L rho L' - {L'L, rho}/2),
/// stored as an effective non-Hermitian Hamiltonian plus recycling terms.
class Liouvillian {
public:
  Liouvillian(const Operator& hamiltonian, const std::vector<JumpChannel>& channels);

  const BasisPtr& basis() const noexcept { return basis_; }
  Eigen::Index dim() const noexcept { return h_eff_.rows(); }

  /// Valid for any square rho.
  DenseMatrix apply(const DenseMatrix& rho) const;
  /// Faster path assuming rho is Hermitian; `out` is overwritten and
  /// `scratch` resized as needed.
  void apply_hermitian(const DenseMatrix& rho, DenseMatrix& out, DenseMatrix& scratch) const;

private:
  using ColumnSparse = Eigen::SparseMatrix<cplx, Eigen::ColMajor>;

  BasisPtr basis_;
  SparseMatrix h_eff_;
  std::vector<std::pair<double, SparseMatrix>> jumps_;
  ColumnSparse h_eff_adj_;
  SparseMatrix recycling_;  ///< sum_c rate_c conj(L_c) (x) L_c acting on column-major vec(rho)
};

/// -i[H, rho] + sum_c rate_c D[L_c] rho. Throws BasisMismatch when the
/// operands disagree on the basis.
DenseMatrix rhs(const Operator& hamiltonian, const std::vector<JumpChannel>& channels, const DenseMatrix& rho);

struct NamedState {
  std::string name;
  StateVector vector;
};

struct Observables {
  double log_negativity = 0.0;
  double purity = 0.0;
  double trace_deviation = 0.0;
  double min_eigenvalue = 0.0;
  std::vector<double> populations;
};

struct Trajectory {
  std::vector<double> times;  ///< g t
  std::vector<Observables> records;
  std::vector<std::string> population_names;
  double dt = 0.0;
};

struct EvolveOptions {
  double t_max = 0.0;
  double dt = 0.0;  ///< 0 selects the default 0.005 / rate_scale
  int record_every = 1;
  double rate_scale = 1.0;  ///< max(epsilon, kappa, total decay), see ModelParams::rate_scale
  bool enforce_invariants = true;
  /// Called with (t, rho) on every recorded step.
  std::function<void(double, const DenseMatrix&)> on_record;
};

inline constexpr double kDefaultStepFactor = 0.005;
inline constexpr double kMaxStepFactor = 0.05;

/// Default step 0.005 / rate_scale.
double default_time_step(double rate_scale);

/// Classic fixed-step fourth-order Runge-Kutta integration of the master
/// equation. rho is re-symmetrized after every step; the trace is never
/// renormalized so its drift stays visible as a diagnostic.
Trajectory evolve(const DensityMatrix& rho0, const Liouvillian& generator, const std::vector<NamedState>& populations,
                  const EvolveOptions& options);

Trajectory evolve(const DensityMatrix& rho0, const Operator& hamiltonian, const std::vector<JumpChannel>& channels,
                  const std::vector<NamedState>& populations, const EvolveOptions& options);

}  // namespace lambdasim
