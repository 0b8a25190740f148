#pragma once

#include <string>
#include <vector>

#include "lambdasim/basis.hpp"
#include "lambdasim/types.hpp"

namespace lambdasim {

/// Physical constants of the lambda-qutrit / single-mode model. Energies and
/// rates are in units of the coupling g unless stated otherwise.
struct ModelParams {
  int n = 4;             ///< number of qutrits
  int p = 3;             ///< initial excitation number (basis cutoff)
  double g = 1.0;        ///< qutrit-boson coupling
  double omega = 0.15;   ///< Rabi amplitude of the |1>-|2> drive
  double kappa = 0.0;    ///< boson loss
  double gamma0 = 0.0;   ///< collective decay |1> -> |0>
  double gamma2 = 0.0;   ///< collective decay |1> -> |2>
  double gamma10 = 0.0;  ///< individual decay |1> -> |0>
  double gamma12 = 0.0;  ///< individual decay |1> -> |2>
  double delta = 0.0;    ///< detuning of the excited level

  /// Throws std::invalid_argument on negative rates, g <= 0, n < 1 or p < 0.
  void validate() const;

  /// Semiclassical mode frequency sqrt(g^2 n + Omega^2).
  double epsilon() const;
  /// Mixing angle with tan(theta) = g sqrt(n) / Omega; theta = pi/2 at Omega = 0.
  double theta() const;
  /// Largest rate scale entering the integrator step guard.
  double rate_scale() const;

  bool has_individual_decay() const noexcept { return gamma10 > 0.0 || gamma12 > 0.0; }
};

/// Sparse matrix tagged with the basis it acts on.
struct Operator {
  SparseMatrix matrix;
  BasisPtr basis;

  Eigen::Index dim() const noexcept { return matrix.rows(); }
};

struct JumpChannel {
  double rate = 0.0;
  Operator op;
  std::string name;
};

enum class Mode { a0, a1, a2, c };

/// Annihilation of one quantum in `mode` with amplitude sqrt(occupation).
/// On the symmetric basis the removed qutrit quantum returns to |0> (n0
/// absorbs it, the a0 mode acting as a reservoir); a0 itself would leave the
/// fixed-n sector and therefore yields the zero operator. Throws BasisMismatch
/// on the full representation, std::invalid_argument for a0 on `modes`.
Operator mode_op(const BasisPtr& basis, Mode mode);

/// a_to^dagger a_from for qutrit levels on the symmetric basis, or for the
/// (a1, a2) modes on the `modes` basis.
Operator level_transfer(const BasisPtr& basis, int from_level, int to_level);

/// Excitation number a1'a1 + a2'a2 + c'c (diagonal).
Operator excitation_number(const BasisPtr& basis);

/// exp(i pi a1'a1): diagonal +-1 parity of the excited-level occupation.
Operator excited_parity(const BasisPtr& basis);

/// Delta a1'a1 + g (c' a0' a1 + h.c.) + Omega (a2' a1 + h.c.).
Operator hamiltonian_symmetric(const ModelParams& params, const BasisPtr& basis);

/// sum_k [g c |1><0|_k + Omega |1><2|_k + h.c.] + Delta sum_k |1><1|_k.
Operator hamiltonian_full(const ModelParams& params, const BasisPtr& basis);

/// Dispatches on the basis representation.
Operator hamiltonian(const ModelParams& params, const BasisPtr& basis);

/// g sqrt(n) (c' a1 + h.c.) + Omega (a2' a1 + h.c.) on the three-mode space.
Operator hamiltonian_semiclassical(const ModelParams& params, const BasisPtr& modes_basis);
Operator hamiltonian_semiclassical(const ModelParams& params);

/// Jump operators with nonzero rate. Collective channels are built in the
/// representation of the basis; individual channels (one per qutrit and
/// target level) exist only on the full basis and are rejected otherwise.
std::vector<JumpChannel> jump_channels(const ModelParams& params, const BasisPtr& basis);

/// Individual lowering |to><1| acting on qutrit `site` (full basis only).
Operator individual_lowering(const BasisPtr& full_basis, int site, int to_level);

}  // namespace lambdasim
