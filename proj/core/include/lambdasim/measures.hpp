#pragma once

#include <vector>

#include "lambdasim/basis.hpp"
#include "lambdasim/types.hpp"

namespace lambdasim {

/// Qutrit (A) / boson (B) split of a basis. Each basis state maps to a pair
/// (a, b); the pairs span a product space of dimension a_dim * b_dim in which
/// partial transposes are taken, since the truncated basis itself is not a
/// tensor product.
struct Bipartition {
  std::vector<int> a_index;
  std::vector<int> b_index;
  int a_dim = 0;
  int b_dim = 0;

  /// Throws BasisMismatch if two basis states share the same (a, b) pair.
  Bipartition(std::vector<int> a, std::vector<int> b, int a_dim, int b_dim);

  static Bipartition qutrits_vs_boson(const SectorBasis& basis);

  std::size_t size() const noexcept { return a_index.size(); }
  int product_dim() const noexcept { return a_dim * b_dim; }
  int product_index(std::size_t i) const noexcept { return a_index[i] * b_dim + b_index[i]; }
};

/// Lift a basis-indexed operator into the A x B product space.
DenseMatrix to_product_space(const DenseMatrix& rho, const Bipartition& bip);

/// Transpose on the B factor of a product-space matrix:
/// out((a,b),(a',b')) = in((a,b'),(a',b)).
DenseMatrix partial_transpose(const DenseMatrix& product_rho, int a_dim, int b_dim);

/// Partial transpose with respect to the boson of a basis-indexed matrix.
DenseMatrix partial_transpose_boson(const DenseMatrix& rho, const Bipartition& bip);

/// log2 of the trace norm of the boson partial transpose. Roundoff negatives
/// down to -1e-9 are clamped to zero; anything lower raises IntegrityError.
double log_negativity(const DenseMatrix& rho, const Bipartition& bip);

/// Tr(rho^2) for Hermitian rho.
double purity(const DenseMatrix& rho);

/// <v|rho|v>, clamped to [0,1]. Throws std::invalid_argument for |v| != 1.
double population(const DenseMatrix& rho, const StateVector& v);

/// Schmidt coefficients of a pure state across the bipartition, descending.
Eigen::VectorXd schmidt_coefficients(const StateVector& v, const Bipartition& bip);

/// Smallest eigenvalue of a Hermitian matrix.
double min_eigenvalue(const DenseMatrix& rho);

}  // namespace lambdasim
