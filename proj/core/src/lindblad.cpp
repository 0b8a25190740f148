#include "lambdasim/lindblad.hpp"

#include <cmath>
#include <sstream>

namespace lambdasim {

DensityMatrix::DensityMatrix(BasisPtr basis, DenseMatrix matrix) : basis_(std::move(basis)), matrix_(std::move(matrix)) {
  const auto d = static_cast<Eigen::Index>(basis_->size());
  if (matrix_.rows() != d || matrix_.cols() != d) throw BasisMismatch("DensityMatrix: matrix does not match basis size");
}

DensityMatrix DensityMatrix::pure(BasisPtr basis, const StateVector& psi) {
  if (std::abs(psi.norm() - 1.0) > 1e-9) throw std::invalid_argument("DensityMatrix::pure: state is not normalized");
  DenseMatrix m = psi * psi.adjoint();
  return {std::move(basis), std::move(m)};
}

double DensityMatrix::trace_deviation() const { return std::abs(matrix_.trace() - cplx(1.0, 0.0)); }

double DensityMatrix::hermiticity_error() const {
  return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
}

void DensityMatrix::check(double trace_tol, double hermiticity_tol, double eigen_tol) const {
  if (!matrix_.allFinite()) throw IntegrityError("density matrix has non-finite entries");
  if (trace_deviation() >= trace_tol) {
    throw IntegrityError("density matrix trace deviates by " + std::to_string(trace_deviation()));
  }
  if (hermiticity_error() >= hermiticity_tol) {
    throw IntegrityError("density matrix is not Hermitian (error " + std::to_string(hermiticity_error()) + ")");
  }
  const double lo = min_eigenvalue(matrix_);
  if (lo <= -eigen_tol) throw IntegrityError("density matrix has eigenvalue " + std::to_string(lo));
}

Liouvillian::Liouvillian(const Operator& hamiltonian, const std::vector<JumpChannel>& channels)
    : basis_(hamiltonian.basis) {
  h_eff_ = hamiltonian.matrix;
  for (const auto& ch : channels) {
    if (ch.op.basis != basis_ && !ch.op.basis->same_space(*basis_)) {
      throw BasisMismatch("Liouvillian: jump operator '" + ch.name + "' lives on a different basis");
    }
    if (ch.rate < 0.0) throw std::invalid_argument("Liouvillian: negative rate on channel '" + ch.name + "'");
    if (ch.rate == 0.0) continue;
    SparseMatrix ldl = SparseMatrix(ch.op.matrix.adjoint()) * ch.op.matrix;
    h_eff_ -= cplx(0.0, 0.5 * ch.rate) * ldl;
    jumps_.emplace_back(ch.rate, ch.op.matrix);
  }
  h_eff_.makeCompressed();

  const Eigen::Index d = dim();
  std::vector<Triplet> entries;
  for (const auto& [rate, l] : jumps_) {
    std::vector<Triplet> nz;
    for (Eigen::Index r = 0; r < l.outerSize(); ++r) {
      for (SparseMatrix::InnerIterator it(l, r); it; ++it) nz.emplace_back(it.row(), it.col(), it.value());
    }
    // (L rho L')(i, j) = sum L(i, k) rho(k, m) conj(L(j, m))
    for (const auto& a : nz) {
      for (const auto& b : nz) {
        entries.emplace_back(a.row() + b.row() * d, a.col() + b.col() * d, rate * a.value() * std::conj(b.value()));
      }
    }
  }
  recycling_.resize(d * d, d * d);
  recycling_.setFromTriplets(entries.begin(), entries.end());
  recycling_.makeCompressed();
  h_eff_adj_ = ColumnSparse(h_eff_.adjoint());
  h_eff_adj_.makeCompressed();
}

namespace {

// x = a * s, column by column; much faster than Eigen's generic sparse
// product for the small, very sparse operators used here.
void times_sparse(const DenseMatrix& a, const Eigen::SparseMatrix<cplx, Eigen::ColMajor>& s, DenseMatrix& x) {
  using It = Eigen::SparseMatrix<cplx, Eigen::ColMajor>::InnerIterator;
  for (Eigen::Index j = 0; j < s.outerSize(); ++j) {
    auto col = x.col(j);
    col.setZero();
    for (It it(s, j); it; ++it) col.noalias() += it.value() * a.col(it.index());
  }
}

}  // namespace

DenseMatrix Liouvillian::apply(const DenseMatrix& rho) const {
  if (rho.rows() != dim() || rho.cols() != dim()) throw BasisMismatch("Liouvillian::apply: dimension mismatch");
  const DenseMatrix rho_dag = rho.adjoint();
  // -i (Heff rho - rho Heff'), with rho Heff' = (Heff rho')'
  DenseMatrix left = h_eff_ * rho;
  DenseMatrix right = h_eff_ * rho_dag;
  DenseMatrix out = cplx(0.0, -1.0) * left + cplx(0.0, 1.0) * right.adjoint();
  for (const auto& [rate, l] : jumps_) {
    // L rho L' = L (L rho')'
    DenseMatrix t = l * rho_dag;
    out.noalias() += rate * (l * t.adjoint());
  }
  return out;
}

void Liouvillian::apply_hermitian(const DenseMatrix& rho, DenseMatrix& out, DenseMatrix& scratch) const {
  const Eigen::Index d = dim();
  out.resize(d, d);
  scratch.resize(d, d);
  // With rho Hermitian, Heff rho = (rho Heff')'.
  times_sparse(rho, h_eff_adj_, scratch);
  out = cplx(0.0, 1.0) * scratch;
  out += cplx(0.0, -1.0) * scratch.adjoint();
  if (recycling_.nonZeros() > 0) {
    Eigen::Map<StateVector> out_vec(out.data(), d * d);
    out_vec.noalias() += recycling_ * Eigen::Map<const StateVector>(rho.data(), d * d);
  }
}

DenseMatrix rhs(const Operator& hamiltonian, const std::vector<JumpChannel>& channels, const DenseMatrix& rho) {
  if (rho.rows() != hamiltonian.dim() || rho.cols() != hamiltonian.dim()) {
    throw BasisMismatch("rhs: density matrix does not match the Hamiltonian's basis");
  }
  return Liouvillian(hamiltonian, channels).apply(rho);
}

double default_time_step(double rate_scale) {
  if (!(rate_scale > 0.0)) throw std::invalid_argument("default_time_step: rate scale must be positive");
  return kDefaultStepFactor / rate_scale;
}

namespace {

Observables observe(const DenseMatrix& rho, const Bipartition& bip, const std::vector<NamedState>& populations) {
  Observables o;
  o.log_negativity = log_negativity(rho, bip);
  o.purity = purity(rho);
  o.trace_deviation = std::abs(rho.trace() - cplx(1.0, 0.0));
  o.min_eigenvalue = min_eigenvalue(rho);
  o.populations.reserve(populations.size());
  for (const auto& s : populations) o.populations.push_back(population(rho, s.vector));
  return o;
}

void enforce(const Observables& o, double t) {
  std::ostringstream msg;
  if (o.trace_deviation >= 1e-8) msg << "trace drift " << o.trace_deviation;
  else if (o.min_eigenvalue <= -1e-8) msg << "negative eigenvalue " << o.min_eigenvalue;
  else return;
  msg << " at g t = " << t;
  throw IntegrityError(msg.str());
}

}  // namespace

Trajectory evolve(const DensityMatrix& rho0, const Liouvillian& generator, const std::vector<NamedState>& populations,
                  const EvolveOptions& options) {
  if (rho0.basis() != generator.basis() && !rho0.basis()->same_space(*generator.basis())) {
    throw BasisMismatch("evolve: initial state and generator live on different bases");
  }
  if (!(options.t_max >= 0.0)) throw std::invalid_argument("evolve: t_max must be non-negative");
  if (options.record_every < 1) throw std::invalid_argument("evolve: record_every must be >= 1");
  for (const auto& s : populations) {
    if (s.vector.size() != generator.dim()) throw BasisMismatch("evolve: population state '" + s.name + "' has wrong size");
  }

  double dt = options.dt > 0.0 ? options.dt : default_time_step(options.rate_scale);
  const double dt_limit = kMaxStepFactor / options.rate_scale;
  if (dt > dt_limit * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "evolve: dt = " << dt << " violates the stability guard dt <= " << dt_limit;
    throw std::invalid_argument(msg.str());
  }
  // Land exactly on t_max with a uniform step no larger than requested.
  const auto steps = static_cast<long long>(std::ceil(options.t_max / dt - 1e-9));
  if (steps > 0) dt = options.t_max / static_cast<double>(steps);

  const Bipartition bip = Bipartition::qutrits_vs_boson(*rho0.basis());

  Trajectory traj;
  traj.dt = dt;
  for (const auto& s : populations) traj.population_names.push_back(s.name);

  DenseMatrix rho = rho0.matrix();
  const auto record = [&](double t) {
    if (!rho.allFinite()) throw IntegrityError("evolve: non-finite density matrix at g t = " + std::to_string(t));
    traj.times.push_back(t);
    traj.records.push_back(observe(rho, bip, populations));
    if (options.enforce_invariants) enforce(traj.records.back(), t);
    if (options.on_record) options.on_record(t, rho);
  };
  record(0.0);

  const Eigen::Index d = rho.rows();
  DenseMatrix k1(d, d), k2(d, d), k3(d, d), k4(d, d), stage(d, d), scratch(d, d);
  for (long long step = 1; step <= steps; ++step) {
    generator.apply_hermitian(rho, k1, scratch);
    stage = rho + (0.5 * dt) * k1;
    generator.apply_hermitian(stage, k2, scratch);
    stage = rho + (0.5 * dt) * k2;
    generator.apply_hermitian(stage, k3, scratch);
    stage = rho + dt * k3;
    generator.apply_hermitian(stage, k4, scratch);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    stage = 0.5 * (rho + rho.adjoint());
    rho.swap(stage);

    if (!std::isfinite(std::abs(rho.trace()))) {
      throw IntegrityError("evolve: integration diverged at g t = " + std::to_string(step * dt));
    }
    if (step % options.record_every == 0) record(static_cast<double>(step) * dt);
  }
  return traj;
}

Trajectory evolve(const DensityMatrix& rho0, const Operator& hamiltonian, const std::vector<JumpChannel>& channels,
                  const std::vector<NamedState>& populations, const EvolveOptions& options) {
  return evolve(rho0, Liouvillian(hamiltonian, channels), populations, options);
}

}  // namespace lambdasim
