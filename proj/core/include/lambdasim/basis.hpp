#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "lambdasim/types.hpp"

namespace lambdasim {

enum class Representation {
  symmetric,  ///< occupation numbers (n0, n1, n2; nc) of the permutation-symmetric sector
  full,       ///< explicit qutrit configurations tensored with a boson Fock state
  modes,      ///< three bosonic modes (a1, a2, c); the a0 mode is treated as classical
};

/// Occupation-number state of the symmetric sector. For the `modes`
/// representation n0 is unused and stays 0.
struct SymState {
  int n0 = 0;
  int n1 = 0;
  int n2 = 0;
  int nc = 0;

  int excitations() const noexcept { return n1 + n2 + nc; }
  auto operator<=>(const SymState&) const = default;
};

/// Qutrit configuration (one level per qutrit, each in {0,1,2}) plus boson occupation.
struct FullState {
  std::vector<std::uint8_t> levels;
  int nc = 0;

  int excitations() const noexcept;
  auto operator<=>(const FullState&) const = default;
};

/// Qutrit count above which the tensor-product space is refused.
inline constexpr int kMaxFullQutrits = 8;

/// Deterministically ordered (lexicographic) set of basis states with an
/// index map. Immutable after construction.
class SectorBasis {
public:
  Representation representation() const noexcept { return rep_; }
  int n() const noexcept { return n_; }
  int p_max() const noexcept { return p_max_; }
  std::size_t size() const noexcept;

  const SymState& sym(std::size_t i) const;
  const FullState& full(std::size_t i) const;

  std::optional<std::size_t> index_of(const SymState& s) const;
  std::optional<std::size_t> index_of(const FullState& s) const;

  /// Eigenvalue of the excitation-number operator on basis state i.
  int excitations(std::size_t i) const;
  /// Indices of all basis states with exactly p excitations, in basis order.
  std::vector<std::size_t> sector(int p) const;

  /// Same representation, qutrit number and cutoff.
  bool same_space(const SectorBasis& other) const noexcept;

  std::string label(std::size_t i) const;

private:
  friend std::shared_ptr<const SectorBasis> enumerate_symmetric(int n, int p_max);
  friend std::shared_ptr<const SectorBasis> enumerate_full(int n, int p_max);
  friend std::shared_ptr<const SectorBasis> enumerate_modes(int p_max);

  SectorBasis(Representation rep, int n, int p_max) : rep_(rep), n_(n), p_max_(p_max) {}

  std::size_t sym_key(const SymState& s) const;
  std::uint64_t full_key(const FullState& s) const;

  Representation rep_;
  int n_;
  int p_max_;
  std::vector<SymState> sym_states_;
  std::vector<FullState> full_states_;
  std::vector<std::int64_t> sym_index_;  // dense table over (n1, n2, nc); -1 = absent
  std::unordered_map<std::uint64_t, std::size_t> full_index_;
};

using BasisPtr = std::shared_ptr<const SectorBasis>;

/// All (n0, n1, n2; nc) with n0+n1+n2 = n and n1+n2+nc <= p_max. The cutoff
/// is exact: the Hamiltonian conserves the excitation number and every
/// dissipator lowers or preserves it, so no padding levels are needed.
BasisPtr enumerate_symmetric(int n, int p_max);

/// All qutrit configurations and boson numbers with at most p_max
/// excitations. Throws SizeLimitExceeded for n > kMaxFullQutrits.
BasisPtr enumerate_full(int n, int p_max);

/// Fock space of the three modes (a1, a2, c) truncated at total occupation p_max.
BasisPtr enumerate_modes(int p_max);

/// Normalized Dicke state: equal-amplitude superposition over the C(n,k)
/// distinct configurations with k qutrits in |2> and n-k in |0>, with the
/// boson in Fock state `nc`.
StateVector dicke_vector(const SectorBasis& full, int k, int nc = 0);

/// Isometry mapping the symmetric basis into the full basis. Each
/// (n0,n1,n2;nc) goes to the normalized superposition of all configurations
/// with those occupation counts, tensored with |nc>.
SparseMatrix embedding_isometry(const SectorBasis& symmetric, const SectorBasis& full);

StateVector embed_symmetric(const StateVector& v, const SectorBasis& symmetric,
                            const SectorBasis& full);

/// Binomial coefficient as a double (exact for the sizes used here).
double binomial(int n, int k);

}  // namespace lambdasim
