#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lambdasim/basis.hpp"
#include "lambdasim/operators.hpp"
#include "lambdasim/types.hpp"

namespace lambdasim {

/// Occupations (k0; k+ k-) of the semiclassical eigenmodes C0, C+, C-.
struct SemiclassicalLabel {
  int k0 = 0;
  int kp = 0;
  int km = 0;

  int total() const noexcept { return k0 + kp + km; }
  /// "k0.kp.km"
  std::string to_string() const;
  /// Parses "k0.kp.km"; throws std::invalid_argument on malformed input.
  static SemiclassicalLabel parse(const std::string& text);

  auto operator<=>(const SemiclassicalLabel&) const = default;
};

/// Zero-energy state with no excited-level population (sum over Dicke states).
struct DarkState {
  StateVector vector;
  int p = 0;
};

/// Semiclassical eigenmodes. Rows of `coefficients` express C0, C+, C- in
/// terms of (c, a2, a1).
struct ModeMixing {
  double theta = 0.0;
  Eigen::Matrix3d coefficients;
};

struct SemiclassicalState {
  SemiclassicalLabel label;
  StateVector vector;
  double energy = 0.0;  ///< (k+ - k-) epsilon
};

/// Exact eigen-decomposition of one excitation-number block.
struct SectorSpectrum {
  Eigen::VectorXd energies;  ///< ascending
  DenseMatrix vectors;       ///< columns over the whole basis
  std::vector<std::pair<Eigen::Index, Eigen::Index>> multiplets;  ///< (first column, count)
  double tolerance = 0.0;    ///< energy gap used for grouping
};

/// Rotate v so that its largest-magnitude amplitude is real and positive.
void fix_phase(StateVector& v);

/// Restrict H to the block of basis states with exactly p excitations.
DenseMatrix sector_block(const Operator& op, const std::vector<std::size_t>& indices);

/// Dark state with p excitations. Amplitude on (n-k, 0, k; p-k) proportional to
/// (-1)^(p-k) sqrt(C(n,k)) / (sqrt((p-k)!) g^(p-k) Omega^k). Requires p <= n
/// and p <= basis cutoff; on a full basis the symmetric vector is embedded.
DarkState master_dark_state(const ModelParams& params, const BasisPtr& basis, int p);
DarkState master_dark_state(const ModelParams& params, const BasisPtr& basis);

/// Orthonormal basis of the zero-energy subspace of the symmetric N = p
/// block (Delta must vanish). The first vector is the master dark state; the
/// rest follow maximal overlap with the semiclassical states E_(p-2i; i i).
std::vector<StateVector> zero_energy_basis(const ModelParams& params, const BasisPtr& basis, int p);

/// Singular-value nullspace of a dense matrix with threshold
/// 1e-10 * sigma_max. Throws SpectralAmbiguity when any singular value falls
/// within a factor of ten of the threshold.
DenseMatrix nullspace(const DenseMatrix& m);

ModeMixing semiclassical_modes(const ModelParams& params);

/// (k0! k+! k-!)^(-1/2) (C0')^k0 (C+')^k+ (C-')^k- |vac>, built on the
/// three-mode space and mapped onto `basis` with n0 = n - n1 - n2. Throws
/// std::domain_error if the state needs more than n qutrits.
SemiclassicalState semiclassical_eigenstate(const SemiclassicalLabel& label, const ModelParams& params,
                                            const BasisPtr& basis);

/// Diagonalize H on the N = p block; degenerate levels (gap below
/// 1e-9 * ||H_p||) are grouped into multiplets.
SectorSpectrum sector_eigenstates(const ModelParams& params, const BasisPtr& basis, int p);

}  // namespace lambdasim
