#include "lambdasim/measures.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace lambdasim {

Bipartition::Bipartition(std::vector<int> a, std::vector<int> b, int a_dim_, int b_dim_)
    : a_index(std::move(a)), b_index(std::move(b)), a_dim(a_dim_), b_dim(b_dim_) {
  if (a_index.size() != b_index.size()) throw BasisMismatch("Bipartition: label arrays differ in length");
  std::set<std::pair<int, int>> seen;
  for (std::size_t i = 0; i < a_index.size(); ++i) {
    if (a_index[i] < 0 || a_index[i] >= a_dim || b_index[i] < 0 || b_index[i] >= b_dim) {
      throw BasisMismatch("Bipartition: label out of range");
    }
    if (!seen.emplace(a_index[i], b_index[i]).second) {
      throw BasisMismatch("Bipartition: basis does not factorize (duplicate (A,B) label)");
    }
  }
}

Bipartition Bipartition::qutrits_vs_boson(const SectorBasis& basis) {
  // A labels are assigned in order of first appearance, which is
  // deterministic because the basis ordering is.
  std::vector<int> a(basis.size());
  std::vector<int> b(basis.size());
  if (basis.representation() == Representation::full) {
    std::map<std::vector<std::uint8_t>, int> labels;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const auto& s = basis.full(i);
      auto [it, inserted] = labels.emplace(s.levels, static_cast<int>(labels.size()));
      a[i] = it->second;
      b[i] = s.nc;
    }
    return {std::move(a), std::move(b), static_cast<int>(labels.size()), basis.p_max() + 1};
  }
  std::map<std::pair<int, int>, int> labels;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto& s = basis.sym(i);
    auto [it, inserted] = labels.emplace(std::pair{s.n1, s.n2}, static_cast<int>(labels.size()));
    a[i] = it->second;
    b[i] = s.nc;
  }
  return {std::move(a), std::move(b), static_cast<int>(labels.size()), basis.p_max() + 1};
}

DenseMatrix to_product_space(const DenseMatrix& rho, const Bipartition& bip) {
  const auto d = static_cast<Eigen::Index>(bip.size());
  if (rho.rows() != d || rho.cols() != d) throw BasisMismatch("to_product_space: dimension mismatch");
  DenseMatrix out = DenseMatrix::Zero(bip.product_dim(), bip.product_dim());
  for (Eigen::Index j = 0; j < d; ++j) {
    const int pj = bip.product_index(static_cast<std::size_t>(j));
    for (Eigen::Index i = 0; i < d; ++i) out(bip.product_index(static_cast<std::size_t>(i)), pj) = rho(i, j);
  }
  return out;
}

DenseMatrix partial_transpose(const DenseMatrix& in, int a_dim, int b_dim) {
  const Eigen::Index d = static_cast<Eigen::Index>(a_dim) * b_dim;
  if (in.rows() != d || in.cols() != d) throw BasisMismatch("partial_transpose: dimension mismatch");
  DenseMatrix out(d, d);
  for (int a2 = 0; a2 < a_dim; ++a2) {
    for (int b2 = 0; b2 < b_dim; ++b2) {
      for (int a1 = 0; a1 < a_dim; ++a1) {
        for (int b1 = 0; b1 < b_dim; ++b1) {
          out(a1 * b_dim + b1, a2 * b_dim + b2) = in(a1 * b_dim + b2, a2 * b_dim + b1);
        }
      }
    }
  }
  return out;
}

DenseMatrix partial_transpose_boson(const DenseMatrix& rho, const Bipartition& bip) {
  return partial_transpose(to_product_space(rho, bip), bip.a_dim, bip.b_dim);
}

double log_negativity(const DenseMatrix& rho, const Bipartition& bip) {
  DenseMatrix pt = partial_transpose_boson(rho, bip);
  pt = 0.5 * (pt + pt.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(pt, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw IntegrityError("log_negativity: eigensolver failed");
  const double norm = es.eigenvalues().cwiseAbs().sum();
  const double en = std::log2(norm);
  if (!std::isfinite(en)) throw IntegrityError("log_negativity: non-finite trace norm");
  if (en < 0.0) {
    if (en < -1e-9) throw IntegrityError("log_negativity: trace norm below one (" + std::to_string(norm) + ")");
    return 0.0;
  }
  return en;
}

double purity(const DenseMatrix& rho) { return rho.cwiseAbs2().sum(); }

double population(const DenseMatrix& rho, const StateVector& v) {
  if (v.size() != rho.rows()) throw BasisMismatch("population: dimension mismatch");
  if (std::abs(v.norm() - 1.0) > 1e-9) throw std::invalid_argument("population: state vector is not normalized");
  const double p = v.dot(rho * v).real();
  return std::clamp(p, 0.0, 1.0);
}

Eigen::VectorXd schmidt_coefficients(const StateVector& v, const Bipartition& bip) {
  if (v.size() != static_cast<Eigen::Index>(bip.size())) throw BasisMismatch("schmidt_coefficients: dimension mismatch");
  DenseMatrix coeff = DenseMatrix::Zero(bip.a_dim, bip.b_dim);
  for (std::size_t i = 0; i < bip.size(); ++i) coeff(bip.a_index[i], bip.b_index[i]) = v[static_cast<Eigen::Index>(i)];
  Eigen::JacobiSVD<DenseMatrix> svd(coeff);
  return svd.singularValues();
}

double min_eigenvalue(const DenseMatrix& rho) {
  const DenseMatrix h = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw IntegrityError("min_eigenvalue: eigensolver failed");
  return es.eigenvalues().minCoeff();
}

}  // namespace lambdasim
