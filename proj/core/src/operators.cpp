#include "lambdasim/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lambdasim {

void ModelParams::validate() const {
  if (n < 1) throw std::invalid_argument("ModelParams: n must be >= 1");
  if (p < 0) throw std::invalid_argument("ModelParams: p must be >= 0");
  if (!(g > 0.0)) throw std::invalid_argument("ModelParams: g must be positive");
  for (double r : {kappa, gamma0, gamma2, gamma10, gamma12}) {
    if (!(r >= 0.0)) throw std::invalid_argument("ModelParams: rates must be non-negative");
  }
  if (!std::isfinite(omega) || !std::isfinite(delta)) {
    throw std::invalid_argument("ModelParams: omega and delta must be finite");
  }
}

double ModelParams::epsilon() const { return std::sqrt(g * g * n + omega * omega); }

double ModelParams::theta() const {
  if (omega == 0.0) return std::numbers::pi / 2;
  return std::atan2(g * std::sqrt(static_cast<double>(n)), omega);
}

double ModelParams::rate_scale() const {
  const double collective = n * (gamma0 + gamma2);
  return std::max({epsilon(), kappa, collective + gamma10 + gamma12, std::abs(delta)});
}

namespace {

Operator assemble(const BasisPtr& basis, std::vector<Triplet>& triplets) {
  const auto d = static_cast<Eigen::Index>(basis->size());
  SparseMatrix m(d, d);
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return {std::move(m), basis};
}

void require_sym_like(const BasisPtr& basis, const char* who) {
  if (basis->representation() == Representation::full) {
    throw BasisMismatch(std::string(who) + ": not available on the full representation");
  }
}

void require_rep(const BasisPtr& basis, Representation rep, const char* who) {
  if (basis->representation() != rep) throw BasisMismatch(std::string(who) + ": wrong basis representation");
}

int& occupation(SymState& s, int level) {
  switch (level) {
    case 0: return s.n0;
    case 1: return s.n1;
    case 2: return s.n2;
    default: throw std::invalid_argument("qutrit level must be 0, 1 or 2");
  }
}

void add_hermitian_pair(std::vector<Triplet>& t, std::size_t row, std::size_t col, cplx amp) {
  t.emplace_back(static_cast<int>(row), static_cast<int>(col), amp);
  t.emplace_back(static_cast<int>(col), static_cast<int>(row), std::conj(amp));
}

}  // namespace

Operator mode_op(const BasisPtr& basis, Mode mode) {
  require_sym_like(basis, "mode_op");
  const bool modes = basis->representation() == Representation::modes;
  if (modes && mode == Mode::a0) throw std::invalid_argument("mode_op: the modes basis has no a0 mode");

  std::vector<Triplet> t;
  if (mode != Mode::a0) {
    for (std::size_t i = 0; i < basis->size(); ++i) {
      SymState s = basis->sym(i);
      int* occ = mode == Mode::a1 ? &s.n1 : mode == Mode::a2 ? &s.n2 : &s.nc;
      if (*occ == 0) continue;
      const double amp = std::sqrt(static_cast<double>(*occ));
      --*occ;
      if (!modes && mode != Mode::c) ++s.n0;
      if (auto j = basis->index_of(s)) t.emplace_back(static_cast<int>(*j), static_cast<int>(i), amp);
    }
  }
  return assemble(basis, t);
}

Operator level_transfer(const BasisPtr& basis, int from_level, int to_level) {
  require_sym_like(basis, "level_transfer");
  const bool modes = basis->representation() == Representation::modes;
  if (modes && (from_level == 0 || to_level == 0)) {
    throw std::invalid_argument("level_transfer: the modes basis has no a0 mode");
  }
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < basis->size(); ++i) {
    SymState s = basis->sym(i);
    const int n_from = occupation(s, from_level);
    if (n_from == 0) continue;
    if (from_level == to_level) {
      t.emplace_back(static_cast<int>(i), static_cast<int>(i), static_cast<double>(n_from));
      continue;
    }
    const int n_to = occupation(s, to_level);
    --occupation(s, from_level);
    ++occupation(s, to_level);
    if (auto j = basis->index_of(s)) {
      t.emplace_back(static_cast<int>(*j), static_cast<int>(i), std::sqrt(double(n_from) * (n_to + 1)));
    }
  }
  return assemble(basis, t);
}

Operator excitation_number(const BasisPtr& basis) {
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < basis->size(); ++i) {
    const int e = basis->excitations(i);
    if (e != 0) t.emplace_back(static_cast<int>(i), static_cast<int>(i), static_cast<double>(e));
  }
  return assemble(basis, t);
}

Operator excited_parity(const BasisPtr& basis) {
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < basis->size(); ++i) {
    int n1 = 0;
    if (basis->representation() == Representation::full) {
      const auto& lv = basis->full(i).levels;
      n1 = static_cast<int>(std::count(lv.begin(), lv.end(), std::uint8_t{1}));
    } else {
      n1 = basis->sym(i).n1;
    }
    t.emplace_back(static_cast<int>(i), static_cast<int>(i), n1 % 2 == 0 ? 1.0 : -1.0);
  }
  return assemble(basis, t);
}

Operator hamiltonian_symmetric(const ModelParams& params, const BasisPtr& basis) {
  require_rep(basis, Representation::symmetric, "hamiltonian_symmetric");
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < basis->size(); ++i) {
    const SymState& s = basis->sym(i);
    if (s.n1 == 0) continue;
    if (params.delta != 0.0) t.emplace_back(static_cast<int>(i), static_cast<int>(i), params.delta * s.n1);

    // c' a0' a1
    SymState up{s.n0 + 1, s.n1 - 1, s.n2, s.nc + 1};
    if (auto j = basis->index_of(up)) {
      const double amp = params.g * std::sqrt(double(s.n0 + 1) * s.n1 * (s.nc + 1));
      add_hermitian_pair(t, *j, i, amp);
    }
    // a2' a1
    SymState side{s.n0, s.n1 - 1, s.n2 + 1, s.nc};
    if (auto j = basis->index_of(side)) {
      add_hermitian_pair(t, *j, i, params.omega * std::sqrt(double(s.n1) * (s.n2 + 1)));
    }
  }
  return assemble(basis, t);
}

Operator hamiltonian_full(const ModelParams& params, const BasisPtr& basis) {
  require_rep(basis, Representation::full, "hamiltonian_full");
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < basis->size(); ++i) {
    const FullState& s = basis->full(i);
    int excited = 0;
    for (std::size_t k = 0; k < s.levels.size(); ++k) {
      const auto level = s.levels[k];
      if (level == 1) ++excited;
      if (level == 0 && s.nc > 0) {
        // c |1><0|_k, paired with its adjoint
        FullState target = s;
        target.levels[k] = 1;
        target.nc -= 1;
        if (auto j = basis->index_of(target)) add_hermitian_pair(t, *j, i, params.g * std::sqrt(double(s.nc)));
      } else if (level == 2) {
        FullState target = s;
        target.levels[k] = 1;
        if (auto j = basis->index_of(target)) add_hermitian_pair(t, *j, i, params.omega);
      }
    }
    if (params.delta != 0.0 && excited > 0) {
      t.emplace_back(static_cast<int>(i), static_cast<int>(i), params.delta * excited);
    }
  }
  return assemble(basis, t);
}

Operator hamiltonian(const ModelParams& params, const BasisPtr& basis) {
  switch (basis->representation()) {
    case Representation::symmetric: return hamiltonian_symmetric(params, basis);
    case Representation::full: return hamiltonian_full(params, basis);
    case Representation::modes: return hamiltonian_semiclassical(params, basis);
  }
  throw BasisMismatch("hamiltonian: unknown representation");
}

Operator hamiltonian_semiclassical(const ModelParams& params, const BasisPtr& basis) {
  require_rep(basis, Representation::modes, "hamiltonian_semiclassical");
  const double gn = params.g * std::sqrt(static_cast<double>(params.n));
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < basis->size(); ++i) {
    const SymState& s = basis->sym(i);
    if (s.n1 == 0) continue;
    if (auto j = basis->index_of(SymState{0, s.n1 - 1, s.n2, s.nc + 1})) {
      add_hermitian_pair(t, *j, i, gn * std::sqrt(double(s.n1) * (s.nc + 1)));
    }
    if (auto j = basis->index_of(SymState{0, s.n1 - 1, s.n2 + 1, s.nc})) {
      add_hermitian_pair(t, *j, i, params.omega * std::sqrt(double(s.n1) * (s.n2 + 1)));
    }
  }
  return assemble(basis, t);
}

Operator hamiltonian_semiclassical(const ModelParams& params) {
  return hamiltonian_semiclassical(params, enumerate_modes(params.p));
}

namespace {

Operator boson_lowering_full(const BasisPtr& basis) {
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < basis->size(); ++i) {
    FullState s = basis->full(i);
    if (s.nc == 0) continue;
    const double amp = std::sqrt(double(s.nc));
    s.nc -= 1;
    if (auto j = basis->index_of(s)) t.emplace_back(static_cast<int>(*j), static_cast<int>(i), amp);
  }
  return assemble(basis, t);
}

Operator collective_lowering_full(const BasisPtr& basis, int to_level) {
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < basis->size(); ++i) {
    const FullState& s = basis->full(i);
    for (std::size_t k = 0; k < s.levels.size(); ++k) {
      if (s.levels[k] != 1) continue;
      FullState target = s;
      target.levels[k] = static_cast<std::uint8_t>(to_level);
      if (auto j = basis->index_of(target)) t.emplace_back(static_cast<int>(*j), static_cast<int>(i), 1.0);
    }
  }
  return assemble(basis, t);
}

}  // namespace

Operator individual_lowering(const BasisPtr& basis, int site, int to_level) {
  require_rep(basis, Representation::full, "individual_lowering");
  if (site < 0 || site >= basis->n()) throw std::invalid_argument("individual_lowering: site out of range");
  if (to_level != 0 && to_level != 2) throw std::invalid_argument("individual_lowering: target level must be 0 or 2");
  std::vector<Triplet> t;
  const auto k = static_cast<std::size_t>(site);
  for (std::size_t i = 0; i < basis->size(); ++i) {
    const FullState& s = basis->full(i);
    if (s.levels[k] != 1) continue;
    FullState target = s;
    target.levels[k] = static_cast<std::uint8_t>(to_level);
    if (auto j = basis->index_of(target)) t.emplace_back(static_cast<int>(*j), static_cast<int>(i), 1.0);
  }
  return assemble(basis, t);
}

std::vector<JumpChannel> jump_channels(const ModelParams& params, const BasisPtr& basis) {
  params.validate();
  const bool full = basis->representation() == Representation::full;
  if (basis->representation() == Representation::modes) {
    throw BasisMismatch("jump_channels: the modes basis carries no dissipators");
  }
  if (!full && params.has_individual_decay()) {
    throw BasisMismatch("jump_channels: individual qutrit decay leaves the symmetric sector; use the full basis");
  }

  std::vector<JumpChannel> channels;
  if (params.kappa > 0.0) {
    channels.push_back({params.kappa, full ? boson_lowering_full(basis) : mode_op(basis, Mode::c), "c"});
  }
  if (params.gamma0 > 0.0) {
    channels.push_back({params.gamma0, full ? collective_lowering_full(basis, 0) : level_transfer(basis, 1, 0), "L0"});
  }
  if (params.gamma2 > 0.0) {
    channels.push_back({params.gamma2, full ? collective_lowering_full(basis, 2) : level_transfer(basis, 1, 2), "L2"});
  }
  if (full) {
    for (auto [rate, level] : {std::pair{params.gamma10, 0}, std::pair{params.gamma12, 2}}) {
      if (rate <= 0.0) continue;
      for (int j = 0; j < basis->n(); ++j) {
        channels.push_back({rate, individual_lowering(basis, j, level),
                            "A1" + std::to_string(level) + "_" + std::to_string(j + 1)});
      }
    }
  }
  return channels;
}

}  // namespace lambdasim
