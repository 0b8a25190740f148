#include "lambdasim/spectral.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace lambdasim {

std::string SemiclassicalLabel::to_string() const {
  return std::to_string(k0) + "." + std::to_string(kp) + "." + std::to_string(km);
}

SemiclassicalLabel SemiclassicalLabel::parse(const std::string& text) {
  SemiclassicalLabel label;
  char dot1 = 0, dot2 = 0;
  std::istringstream in(text);
  if (!(in >> label.k0 >> dot1 >> label.kp >> dot2 >> label.km) || dot1 != '.' || dot2 != '.' || !in.eof() ||
      label.k0 < 0 || label.kp < 0 || label.km < 0) {
    throw std::invalid_argument("malformed semiclassical label '" + text + "' (expected k0.kp.km)");
  }
  return label;
}

void fix_phase(StateVector& v) {
  if (v.size() == 0) return;
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  const double mag = std::abs(v[imax]);
  if (mag == 0.0) return;
  v *= std::conj(v[imax]) / mag;
  v[imax] = mag;
}

DenseMatrix sector_block(const Operator& op, const std::vector<std::size_t>& indices) {
  const auto m = static_cast<Eigen::Index>(indices.size());
  std::vector<Eigen::Index> position(static_cast<std::size_t>(op.dim()), -1);
  for (Eigen::Index k = 0; k < m; ++k) position[indices[static_cast<std::size_t>(k)]] = k;
  DenseMatrix block = DenseMatrix::Zero(m, m);
  for (Eigen::Index k = 0; k < m; ++k) {
    const auto row = static_cast<Eigen::Index>(indices[static_cast<std::size_t>(k)]);
    for (SparseMatrix::InnerIterator it(op.matrix, row); it; ++it) {
      const auto col = position[static_cast<std::size_t>(it.col())];
      if (col >= 0) block(k, col) = it.value();
    }
  }
  return block;
}

namespace {

double factorial(int k) { return std::tgamma(k + 1.0); }

StateVector scatter(const StateVector& block_vec, const std::vector<std::size_t>& indices, std::size_t dim) {
  StateVector v = StateVector::Zero(static_cast<Eigen::Index>(dim));
  for (std::size_t k = 0; k < indices.size(); ++k) v[static_cast<Eigen::Index>(indices[k])] = block_vec[static_cast<Eigen::Index>(k)];
  return v;
}

StateVector gather(const StateVector& v, const std::vector<std::size_t>& indices) {
  StateVector out(static_cast<Eigen::Index>(indices.size()));
  for (std::size_t k = 0; k < indices.size(); ++k) out[static_cast<Eigen::Index>(k)] = v[static_cast<Eigen::Index>(indices[k])];
  return out;
}

}  // namespace

DarkState master_dark_state(const ModelParams& params, const BasisPtr& basis, int p) {
  params.validate();
  if (p < 0 || p > params.n) throw std::invalid_argument("master_dark_state: requires 0 <= p <= n");
  if (p > basis->p_max()) throw std::invalid_argument("master_dark_state: p exceeds the basis cutoff");
  if (basis->n() != params.n && basis->representation() != Representation::modes) {
    throw BasisMismatch("master_dark_state: basis and parameters disagree on n");
  }
  if (basis->representation() == Representation::modes) {
    throw BasisMismatch("master_dark_state: needs the symmetric or full representation");
  }
  if (p > 0 && params.omega == 0.0) throw std::invalid_argument("master_dark_state: Omega must be nonzero for p > 0");

  const BasisPtr sym = basis->representation() == Representation::symmetric ? basis
                                                                             : enumerate_symmetric(params.n, basis->p_max());
  StateVector v = StateVector::Zero(static_cast<Eigen::Index>(sym->size()));
  // Work in log-magnitudes: g^(p-k) Omega^k spans many decades for small Omega.
  std::vector<double> log_mag(static_cast<std::size_t>(p + 1));
  for (int k = 0; k <= p; ++k) {
    log_mag[static_cast<std::size_t>(k)] = 0.5 * std::log(binomial(params.n, k)) - 0.5 * std::lgamma(p - k + 1.0) -
                                           (p - k) * std::log(params.g) - k * std::log(std::abs(params.omega));
  }
  const double shift = *std::max_element(log_mag.begin(), log_mag.end());
  for (int k = 0; k <= p; ++k) {
    const auto idx = sym->index_of(SymState{params.n - k, 0, k, p - k});
    double amp = std::exp(log_mag[static_cast<std::size_t>(k)] - shift);
    if ((p - k) % 2 == 1) amp = -amp;
    if (params.omega < 0.0 && k % 2 == 1) amp = -amp;
    v[static_cast<Eigen::Index>(*idx)] = amp;
  }
  v.normalize();
  fix_phase(v);
  if (basis->representation() == Representation::full) v = embed_symmetric(v, *sym, *basis);
  return {std::move(v), p};
}

DarkState master_dark_state(const ModelParams& params, const BasisPtr& basis) {
  return master_dark_state(params, basis, params.p);
}

DenseMatrix nullspace(const DenseMatrix& m) {
  if (m.size() == 0) return DenseMatrix(m.cols(), 0);
  Eigen::JacobiSVD<DenseMatrix> svd(m, Eigen::ComputeFullV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double smax = sigma.size() > 0 ? sigma[0] : 0.0;
  if (smax == 0.0) return DenseMatrix::Identity(m.cols(), m.cols());
  const double threshold = 1e-10 * smax;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma[i] > threshold / 10.0 && sigma[i] < threshold * 10.0) {
      std::ostringstream msg;
      msg << "nullspace: singular value " << sigma[i] << " is within a factor 10 of the threshold " << threshold;
      throw SpectralAmbiguity(msg.str());
    }
    if (sigma[i] > threshold) ++rank;
  }
  return svd.matrixV().rightCols(m.cols() - rank);
}

ModeMixing semiclassical_modes(const ModelParams& params) {
  if (params.n < 1) throw std::invalid_argument("semiclassical_modes: n must be >= 1");
  ModeMixing mix;
  mix.theta = params.theta();
  const double c = std::cos(mix.theta);
  const double s = params.omega == 0.0 ? 1.0 : std::sin(mix.theta);
  const double cth = params.omega == 0.0 ? 0.0 : c;
  const double r = 1.0 / std::sqrt(2.0);
  // columns: c, a2, a1. The a1 sign is chosen so that C+ carries energy +epsilon.
  mix.coefficients << cth, -s, 0.0,
                      s * r, cth * r, r,
                      s * r, cth * r, -r;
  return mix;
}

SemiclassicalState semiclassical_eigenstate(const SemiclassicalLabel& label, const ModelParams& params,
                                            const BasisPtr& basis) {
  if (label.k0 < 0 || label.kp < 0 || label.km < 0) throw std::invalid_argument("semiclassical_eigenstate: negative label");
  if (label.total() > basis->p_max()) {
    throw std::invalid_argument("semiclassical_eigenstate: label " + label.to_string() + " exceeds the basis cutoff");
  }
  const BasisPtr modes = basis->representation() == Representation::modes ? basis : enumerate_modes(basis->p_max());
  const ModeMixing mix = semiclassical_modes(params);

  const std::array<SparseMatrix, 3> create = {
      SparseMatrix(mode_op(modes, Mode::c).matrix.adjoint()),
      SparseMatrix(mode_op(modes, Mode::a2).matrix.adjoint()),
      SparseMatrix(mode_op(modes, Mode::a1).matrix.adjoint()),
  };
  std::array<SparseMatrix, 3> mode_create;
  for (int i = 0; i < 3; ++i) {
    mode_create[static_cast<std::size_t>(i)] = mix.coefficients(i, 0) * create[0] + mix.coefficients(i, 1) * create[1] +
                                               mix.coefficients(i, 2) * create[2];
  }

  StateVector v = StateVector::Zero(static_cast<Eigen::Index>(modes->size()));
  v[static_cast<Eigen::Index>(*modes->index_of(SymState{0, 0, 0, 0}))] = 1.0;
  const std::array<int, 3> counts = {label.k0, label.kp, label.km};
  for (std::size_t i = 0; i < 3; ++i) {
    for (int k = 0; k < counts[i]; ++k) v = (mode_create[i] * v).eval();
  }
  v /= std::sqrt(factorial(label.k0) * factorial(label.kp) * factorial(label.km));

  SemiclassicalState out{label, {}, (label.kp - label.km) * params.epsilon()};
  if (basis->representation() == Representation::modes) {
    out.vector = std::move(v);
    return out;
  }

  if (basis->n() != params.n) throw BasisMismatch("semiclassical_eigenstate: basis and parameters disagree on n");
  const BasisPtr sym = basis->representation() == Representation::symmetric ? basis
                                                                             : enumerate_symmetric(params.n, basis->p_max());
  StateVector w = StateVector::Zero(static_cast<Eigen::Index>(sym->size()));
  for (std::size_t i = 0; i < modes->size(); ++i) {
    const cplx amp = v[static_cast<Eigen::Index>(i)];
    if (std::abs(amp) < 1e-15) continue;
    const SymState& m = modes->sym(i);
    const int n0 = params.n - m.n1 - m.n2;
    if (n0 < 0) {
      throw std::domain_error("semiclassical_eigenstate: " + label.to_string() + " needs more than n = " +
                              std::to_string(params.n) + " qutrits");
    }
    w[static_cast<Eigen::Index>(*sym->index_of(SymState{n0, m.n1, m.n2, m.nc}))] = amp;
  }
  out.vector = basis->representation() == Representation::full ? embed_symmetric(w, *sym, *basis) : std::move(w);
  return out;
}

std::vector<StateVector> zero_energy_basis(const ModelParams& params, const BasisPtr& basis, int p) {
  if (basis->representation() != Representation::symmetric) {
    throw BasisMismatch("zero_energy_basis: requires the symmetric representation");
  }
  if (params.delta != 0.0) throw std::invalid_argument("zero_energy_basis: requires zero detuning");
  if (p < 0 || p > basis->p_max()) throw std::invalid_argument("zero_energy_basis: p outside the basis cutoff");

  const auto indices = basis->sector(p);
  const Operator h = hamiltonian_symmetric(params, basis);
  const DenseMatrix null = nullspace(sector_block(h, indices));

  std::vector<StateVector> chosen;
  const auto project_out = [&](StateVector r) {
    r = (null * (null.adjoint() * r)).eval();
    for (const auto& c : chosen) r -= c * c.dot(r);
    for (const auto& c : chosen) r -= c * c.dot(r);  // second pass for orthogonality
    return r;
  };

  const DarkState dark = master_dark_state(params, basis, p);
  const StateVector z0 = gather(dark.vector, indices);
  const double fidelity = (null.adjoint() * z0).squaredNorm();
  if (fidelity < 1.0 - 1e-10) {
    throw SpectralAmbiguity("zero_energy_basis: master dark state lies outside the numerical nullspace (fidelity " +
                            std::to_string(fidelity) + ")");
  }
  chosen.push_back(z0);

  for (int i = 1; 2 * i <= p && static_cast<Eigen::Index>(chosen.size()) < null.cols(); ++i) {
    const SemiclassicalLabel label{p - 2 * i, i, i};
    StateVector target;
    try {
      target = gather(semiclassical_eigenstate(label, params, basis).vector, indices);
    } catch (const std::domain_error&) {
      continue;
    }
    StateVector r = project_out(target);
    if (r.norm() < 1e-8) continue;
    chosen.push_back(r.normalized());
  }
  for (Eigen::Index j = 0; j < null.cols() && static_cast<Eigen::Index>(chosen.size()) < null.cols(); ++j) {
    StateVector r = project_out(null.col(j));
    if (r.norm() < 1e-6) continue;
    chosen.push_back(r.normalized());
  }

  std::vector<StateVector> out;
  out.reserve(chosen.size());
  for (auto& c : chosen) {
    StateVector v = scatter(c, indices, basis->size());
    fix_phase(v);
    out.push_back(std::move(v));
  }
  return out;
}

SectorSpectrum sector_eigenstates(const ModelParams& params, const BasisPtr& basis, int p) {
  if (p < 0 || p > basis->p_max()) throw std::invalid_argument("sector_eigenstates: p outside the basis cutoff");
  const auto indices = basis->sector(p);
  const Operator h = hamiltonian(params, basis);
  DenseMatrix block = sector_block(h, indices);
  block = 0.5 * (block + block.adjoint()).eval();

  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(block);
  if (es.info() != Eigen::Success) throw SpectralAmbiguity("sector_eigenstates: eigensolver failed");

  SectorSpectrum out;
  out.energies = es.eigenvalues();
  const auto m = static_cast<Eigen::Index>(indices.size());
  out.vectors = DenseMatrix::Zero(static_cast<Eigen::Index>(basis->size()), m);
  for (Eigen::Index k = 0; k < m; ++k) {
    StateVector v = scatter(es.eigenvectors().col(k), indices, basis->size());
    fix_phase(v);
    out.vectors.col(k) = v;
  }
  const double scale = m > 0 ? out.energies.cwiseAbs().maxCoeff() : 0.0;
  out.tolerance = 1e-9 * (scale > 0.0 ? scale : 1.0);
  for (Eigen::Index k = 0; k < m; ++k) {
    if (k > 0 && out.energies[k] - out.energies[k - 1] <= out.tolerance) {
      ++out.multiplets.back().second;
    } else {
      out.multiplets.emplace_back(k, 1);
    }
  }
  return out;
}

}  // namespace lambdasim
