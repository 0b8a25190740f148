#include "lambdasim/basis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lambdasim {

int FullState::excitations() const noexcept {
  const auto excited = std::count_if(levels.begin(), levels.end(), [](auto l) { return l != 0; });
  return static_cast<int>(excited) + nc;
}

std::size_t SectorBasis::size() const noexcept {
  return rep_ == Representation::full ? full_states_.size() : sym_states_.size();
}

const SymState& SectorBasis::sym(std::size_t i) const {
  if (rep_ == Representation::full) throw BasisMismatch("sym(): basis uses the full representation");
  return sym_states_.at(i);
}

const FullState& SectorBasis::full(std::size_t i) const {
  if (rep_ != Representation::full) throw BasisMismatch("full(): basis is not the full representation");
  return full_states_.at(i);
}

std::size_t SectorBasis::sym_key(const SymState& s) const {
  const auto side = static_cast<std::size_t>(p_max_ + 1);
  return (static_cast<std::size_t>(s.n1) * side + static_cast<std::size_t>(s.n2)) * side +
         static_cast<std::size_t>(s.nc);
}

std::uint64_t SectorBasis::full_key(const FullState& s) const {
  std::uint64_t key = 0;
  for (auto l : s.levels) key = key * 3 + l;
  return key * static_cast<std::uint64_t>(p_max_ + 1) + static_cast<std::uint64_t>(s.nc);
}

std::optional<std::size_t> SectorBasis::index_of(const SymState& s) const {
  if (rep_ == Representation::full) return std::nullopt;
  if (s.n1 < 0 || s.n2 < 0 || s.nc < 0 || s.excitations() > p_max_) return std::nullopt;
  if (rep_ == Representation::symmetric && (s.n0 < 0 || s.n0 + s.n1 + s.n2 != n_)) return std::nullopt;
  if (rep_ == Representation::modes && s.n0 != 0) return std::nullopt;
  const auto idx = sym_index_[sym_key(s)];
  if (idx < 0) return std::nullopt;
  return static_cast<std::size_t>(idx);
}

std::optional<std::size_t> SectorBasis::index_of(const FullState& s) const {
  if (rep_ != Representation::full) return std::nullopt;
  if (static_cast<int>(s.levels.size()) != n_ || s.nc < 0 || s.nc > p_max_) return std::nullopt;
  if (std::any_of(s.levels.begin(), s.levels.end(), [](auto l) { return l > 2; })) return std::nullopt;
  const auto it = full_index_.find(full_key(s));
  if (it == full_index_.end()) return std::nullopt;
  return it->second;
}

int SectorBasis::excitations(std::size_t i) const {
  return rep_ == Representation::full ? full_states_.at(i).excitations() : sym_states_.at(i).excitations();
}

std::vector<std::size_t> SectorBasis::sector(int p) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < size(); ++i) {
    if (excitations(i) == p) out.push_back(i);
  }
  return out;
}

bool SectorBasis::same_space(const SectorBasis& other) const noexcept {
  return rep_ == other.rep_ && n_ == other.n_ && p_max_ == other.p_max_;
}

std::string SectorBasis::label(std::size_t i) const {
  if (rep_ == Representation::full) {
    const auto& s = full_states_.at(i);
    std::string out = "|";
    for (auto l : s.levels) out += static_cast<char>('0' + l);
    return out + ";" + std::to_string(s.nc) + ">";
  }
  const auto& s = sym_states_.at(i);
  if (rep_ == Representation::modes) {
    return "(" + std::to_string(s.n1) + "," + std::to_string(s.n2) + ";" + std::to_string(s.nc) + ")";
  }
  return "(" + std::to_string(s.n0) + "," + std::to_string(s.n1) + "," + std::to_string(s.n2) + ";" +
         std::to_string(s.nc) + ")";
}

BasisPtr enumerate_symmetric(int n, int p_max) {
  if (n < 1) throw std::invalid_argument("enumerate_symmetric: n must be positive");
  if (p_max < 0) throw std::invalid_argument("enumerate_symmetric: p_max must be non-negative");

  std::shared_ptr<SectorBasis> basis(new SectorBasis(Representation::symmetric, n, p_max));
  // Lexicographic on (n0, n1, n2, nc): n0 ascending means n1 + n2 descending.
  for (int n0 = std::max(0, n - p_max); n0 <= n; ++n0) {
    for (int n1 = 0; n1 <= n - n0; ++n1) {
      const int n2 = n - n0 - n1;
      for (int nc = 0; n1 + n2 + nc <= p_max; ++nc) {
        basis->sym_states_.push_back({n0, n1, n2, nc});
      }
    }
  }
  const auto side = static_cast<std::size_t>(p_max + 1);
  basis->sym_index_.assign(side * side * side, -1);
  for (std::size_t i = 0; i < basis->sym_states_.size(); ++i) {
    basis->sym_index_[basis->sym_key(basis->sym_states_[i])] = static_cast<std::int64_t>(i);
  }
  return basis;
}

BasisPtr enumerate_full(int n, int p_max) {
  if (n < 1) throw std::invalid_argument("enumerate_full: n must be positive");
  if (p_max < 0) throw std::invalid_argument("enumerate_full: p_max must be non-negative");
  if (n > kMaxFullQutrits) {
    throw SizeLimitExceeded("enumerate_full: n = " + std::to_string(n) + " exceeds the limit of " +
                            std::to_string(kMaxFullQutrits) + " qutrits");
  }

  std::shared_ptr<SectorBasis> basis(new SectorBasis(Representation::full, n, p_max));
  std::size_t configs = 1;
  for (int k = 0; k < n; ++k) configs *= 3;

  // Base-3 counting with the first qutrit most significant is lexicographic.
  FullState state{std::vector<std::uint8_t>(static_cast<std::size_t>(n), 0), 0};
  for (std::size_t c = 0; c < configs; ++c) {
    std::size_t rest = c;
    for (int k = n - 1; k >= 0; --k) {
      state.levels[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(rest % 3);
      rest /= 3;
    }
    state.nc = 0;
    const int qutrit_exc = state.excitations();
    for (int nc = 0; qutrit_exc + nc <= p_max; ++nc) {
      state.nc = nc;
      basis->full_states_.push_back(state);
    }
  }
  basis->full_index_.reserve(basis->full_states_.size());
  for (std::size_t i = 0; i < basis->full_states_.size(); ++i) {
    basis->full_index_.emplace(basis->full_key(basis->full_states_[i]), i);
  }
  return basis;
}

BasisPtr enumerate_modes(int p_max) {
  if (p_max < 0) throw std::invalid_argument("enumerate_modes: p_max must be non-negative");
  std::shared_ptr<SectorBasis> basis(new SectorBasis(Representation::modes, 0, p_max));
  for (int n1 = 0; n1 <= p_max; ++n1) {
    for (int n2 = 0; n1 + n2 <= p_max; ++n2) {
      for (int nc = 0; n1 + n2 + nc <= p_max; ++nc) {
        basis->sym_states_.push_back({0, n1, n2, nc});
      }
    }
  }
  const auto side = static_cast<std::size_t>(p_max + 1);
  basis->sym_index_.assign(side * side * side, -1);
  for (std::size_t i = 0; i < basis->sym_states_.size(); ++i) {
    basis->sym_index_[basis->sym_key(basis->sym_states_[i])] = static_cast<std::int64_t>(i);
  }
  return basis;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
}

namespace {

double multinomial(int n0, int n1, int n2) {
  return binomial(n0 + n1 + n2, n0) * binomial(n1 + n2, n1);
}

SymState occupation_of(const FullState& s) {
  SymState occ{0, 0, 0, s.nc};
  for (auto l : s.levels) {
    if (l == 0) ++occ.n0;
    else if (l == 1) ++occ.n1;
    else ++occ.n2;
  }
  return occ;
}

}  // namespace

StateVector dicke_vector(const SectorBasis& full, int k, int nc) {
  if (full.representation() != Representation::full) {
    throw BasisMismatch("dicke_vector: requires the full representation");
  }
  const int n = full.n();
  if (k < 0 || k > n) throw std::invalid_argument("dicke_vector: k must lie in [0, n]");
  if (nc < 0 || k + nc > full.p_max()) {
    throw std::invalid_argument("dicke_vector: k + nc exceeds the basis cutoff");
  }
  StateVector v = StateVector::Zero(static_cast<Eigen::Index>(full.size()));
  const double amp = 1.0 / std::sqrt(binomial(n, k));
  for (std::size_t i = 0; i < full.size(); ++i) {
    const auto occ = occupation_of(full.full(i));
    if (occ.n1 == 0 && occ.n2 == k && occ.nc == nc) v[static_cast<Eigen::Index>(i)] = amp;
  }
  return v;
}

SparseMatrix embedding_isometry(const SectorBasis& symmetric, const SectorBasis& full) {
  if (symmetric.representation() != Representation::symmetric ||
      full.representation() != Representation::full) {
    throw BasisMismatch("embedding_isometry: expected a symmetric and a full basis");
  }
  if (symmetric.n() != full.n() || symmetric.p_max() != full.p_max()) {
    throw BasisMismatch("embedding_isometry: bases disagree on n or p_max");
  }
  std::vector<Triplet> triplets;
  triplets.reserve(full.size());
  for (std::size_t i = 0; i < full.size(); ++i) {
    const auto occ = occupation_of(full.full(i));
    const auto j = symmetric.index_of(occ);
    if (!j) continue;
    triplets.emplace_back(static_cast<int>(i), static_cast<int>(*j),
                          1.0 / std::sqrt(multinomial(occ.n0, occ.n1, occ.n2)));
  }
  SparseMatrix e(static_cast<Eigen::Index>(full.size()), static_cast<Eigen::Index>(symmetric.size()));
  e.setFromTriplets(triplets.begin(), triplets.end());
  return e;
}

StateVector embed_symmetric(const StateVector& v, const SectorBasis& symmetric, const SectorBasis& full) {
  if (v.size() != static_cast<Eigen::Index>(symmetric.size())) {
    throw BasisMismatch("embed_symmetric: vector length does not match the symmetric basis");
  }
  return embedding_isometry(symmetric, full) * v;
}

}  // namespace lambdasim
