#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lambdasim/measures.hpp"

using namespace lambdasim;

namespace {

StateVector random_state(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  StateVector v(static_cast<Eigen::Index>(dim));
  for (auto& x : v) x = {normal(rng), normal(rng)};
  return v.normalized();
}

Eigen::Index at(const BasisPtr& b, const SymState& s) { return static_cast<Eigen::Index>(*b->index_of(s)); }

}  // namespace

TEST(Measures, ProductStateHasNoNegativity) {
  const auto b = enumerate_symmetric(3, 2);
  StateVector v = StateVector::Zero(static_cast<Eigen::Index>(b->size()));
  v[at(b, {2, 0, 1, 0})] = 1.0;
  EXPECT_NEAR(log_negativity(v * v.adjoint(), Bipartition::qutrits_vs_boson(*b)), 0.0, 1e-14);
}

TEST(Measures, MaximallyEntangledPair) {
  // (|q_a>|0> + |q_b>|1>)/sqrt(2): E_N = log2(2) = 1.
  const auto b = enumerate_symmetric(3, 2);
  StateVector v = StateVector::Zero(static_cast<Eigen::Index>(b->size()));
  v[at(b, {2, 0, 1, 0})] = 1.0 / std::sqrt(2.0);
  v[at(b, {3, 0, 0, 1})] = -1.0 / std::sqrt(2.0);
  EXPECT_NEAR(log_negativity(v * v.adjoint(), Bipartition::qutrits_vs_boson(*b)), 1.0, 1e-13);
}

TEST(Measures, SeparableMixtureHasNoNegativity) {
  const auto b = enumerate_symmetric(3, 2);
  const auto d = static_cast<Eigen::Index>(b->size());
  DenseMatrix rho = DenseMatrix::Zero(d, d);
  rho(at(b, {2, 0, 1, 0}), at(b, {2, 0, 1, 0})) = 0.5;
  rho(at(b, {3, 0, 0, 1}), at(b, {3, 0, 0, 1})) = 0.5;
  EXPECT_NEAR(log_negativity(rho, Bipartition::qutrits_vs_boson(*b)), 0.0, 1e-14);
}

TEST(Measures, PureStateMatchesSchmidtFormula) {
  std::mt19937_64 rng(7);
  for (const auto& b : {enumerate_symmetric(4, 3), enumerate_full(2, 2)}) {
    const Bipartition bip = Bipartition::qutrits_vs_boson(*b);
    for (int k = 0; k < 10; ++k) {
      const StateVector v = random_state(b->size(), rng);
      const Eigen::VectorXd s = schmidt_coefficients(v, bip);
      EXPECT_NEAR(s.squaredNorm(), 1.0, 1e-13);
      for (Eigen::Index i = 1; i < s.size(); ++i) EXPECT_GE(s[i - 1], s[i]);
      EXPECT_NEAR(log_negativity(v * v.adjoint(), bip), 2.0 * std::log2(s.sum()), 1e-10);
    }
  }
}

TEST(Measures, PartialTransposeIsAnInvolution) {
  std::mt19937_64 rng(11);
  const int a = 3, bdim = 4;
  DenseMatrix m = DenseMatrix::Random(a * bdim, a * bdim);
  const DenseMatrix twice = partial_transpose(partial_transpose(m, a, bdim), a, bdim);
  EXPECT_LT((twice - m).norm(), 1e-15);
  EXPECT_NEAR(std::abs(partial_transpose(m, a, bdim).trace() - m.trace()), 0.0, 1e-13);
  // Element rule: out((i,j),(k,l)) = in((i,l),(k,j)).
  const DenseMatrix pt = partial_transpose(m, a, bdim);
  EXPECT_EQ(pt(1 * bdim + 2, 0 * bdim + 3), m(1 * bdim + 3, 0 * bdim + 2));
}

TEST(Measures, PurityAndPopulation) {
  const DenseMatrix mixed = DenseMatrix::Identity(5, 5) / 5.0;
  EXPECT_NEAR(purity(mixed), 0.2, 1e-15);
  StateVector e = StateVector::Zero(5);
  e[2] = 1.0;
  EXPECT_NEAR(population(mixed, e), 0.2, 1e-15);
  EXPECT_THROW(population(mixed, 2.0 * e), std::invalid_argument);
  EXPECT_NEAR(min_eigenvalue(mixed), 0.2, 1e-15);
}

TEST(Measures, BipartitionRejectsDuplicatePairs) {
  EXPECT_THROW(Bipartition({0, 0}, {1, 1}, 1, 2), BasisMismatch);
  EXPECT_NO_THROW(Bipartition({0, 0}, {0, 1}, 1, 2));
}

TEST(Measures, SubnormalizedInputIsRejected) {
  const auto b = enumerate_symmetric(1, 1);
  const auto d = static_cast<Eigen::Index>(b->size());
  DenseMatrix rho = DenseMatrix::Zero(d, d);
  rho(0, 0) = 0.5;
  EXPECT_THROW(log_negativity(rho, Bipartition::qutrits_vs_boson(*b)), IntegrityError);
}
