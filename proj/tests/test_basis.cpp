#include <gtest/gtest.h>

#include <cmath>

#include "lambdasim/basis.hpp"

using namespace lambdasim;

namespace {

std::size_t brute_symmetric_count(int n, int p) {
  std::size_t count = 0;
  for (int n1 = 0; n1 <= n; ++n1) {
    for (int n2 = 0; n1 + n2 <= n; ++n2) {
      for (int nc = 0; nc <= p; ++nc) count += (n1 + n2 + nc <= p) ? 1 : 0;
    }
  }
  return count;
}

std::size_t brute_full_count(int n, int p) {
  std::size_t configs = 1;
  for (int k = 0; k < n; ++k) configs *= 3;
  std::size_t count = 0;
  for (std::size_t c = 0; c < configs; ++c) {
    int excited = 0;
    std::size_t r = c;
    for (int k = 0; k < n; ++k, r /= 3) excited += (r % 3 != 0) ? 1 : 0;
    for (int nc = 0; nc <= p; ++nc) count += (excited + nc <= p) ? 1 : 0;
  }
  return count;
}

}  // namespace

TEST(Basis, SymmetricSizeMatchesBruteForce) {
  for (int n : {1, 2, 4, 7, 20}) {
    for (int p = 0; p <= 5; ++p) EXPECT_EQ(enumerate_symmetric(n, p)->size(), brute_symmetric_count(n, p)) << n << "," << p;
  }
  EXPECT_EQ(enumerate_symmetric(20, 3)->size(), 20u);
  EXPECT_EQ(enumerate_symmetric(4, 1)->size(), 4u);
}

TEST(Basis, FullSizeMatchesBruteForce) {
  for (int n : {1, 2, 3, 4}) {
    for (int p = 0; p <= 3; ++p) EXPECT_EQ(enumerate_full(n, p)->size(), brute_full_count(n, p)) << n << "," << p;
  }
  EXPECT_EQ(enumerate_full(4, 3)->size(), 108u);
}

TEST(Basis, ModesSizeIsTetrahedral) {
  for (int p = 0; p <= 5; ++p) {
    EXPECT_EQ(enumerate_modes(p)->size(), static_cast<std::size_t>((p + 1) * (p + 2) * (p + 3) / 6));
  }
}

TEST(Basis, IndexRoundTripAndOrdering) {
  const auto sym = enumerate_symmetric(5, 3);
  for (std::size_t i = 0; i < sym->size(); ++i) {
    EXPECT_EQ(sym->index_of(sym->sym(i)), i);
    if (i > 0) EXPECT_LT(sym->sym(i - 1), sym->sym(i));
  }
  const auto full = enumerate_full(3, 2);
  for (std::size_t i = 0; i < full->size(); ++i) {
    EXPECT_EQ(full->index_of(full->full(i)), i);
    if (i > 0) EXPECT_LT(full->full(i - 1), full->full(i));
  }
  EXPECT_FALSE(sym->index_of(SymState{0, 2, 2, 0}).has_value());
  EXPECT_FALSE(sym->index_of(SymState{5, 0, 0, 4}).has_value());
}

TEST(Basis, SectorsPartitionTheBasis) {
  const auto sym = enumerate_symmetric(4, 3);
  std::size_t total = 0;
  for (int p = 0; p <= 3; ++p) {
    for (auto i : sym->sector(p)) EXPECT_EQ(sym->excitations(i), p);
    total += sym->sector(p).size();
  }
  EXPECT_EQ(total, sym->size());
}

TEST(Basis, EnumerationIsDeterministic) {
  const auto a = enumerate_full(3, 3);
  const auto b = enumerate_full(3, 3);
  ASSERT_EQ(a->size(), b->size());
  for (std::size_t i = 0; i < a->size(); ++i) EXPECT_EQ(a->label(i), b->label(i));
  EXPECT_TRUE(a->same_space(*b));
  EXPECT_FALSE(a->same_space(*enumerate_full(3, 2)));
}

TEST(Basis, FullSizeLimit) {
  EXPECT_THROW(enumerate_full(kMaxFullQutrits + 1, 1), SizeLimitExceeded);
  EXPECT_NO_THROW(enumerate_full(kMaxFullQutrits, 0));
}

TEST(Basis, EmbeddingIsAnIsometry) {
  const auto sym = enumerate_symmetric(4, 3);
  const auto full = enumerate_full(4, 3);
  const SparseMatrix v = embedding_isometry(*sym, *full);
  const DenseMatrix gram = DenseMatrix(SparseMatrix(v.adjoint()) * v);
  EXPECT_LT((gram - DenseMatrix::Identity(gram.rows(), gram.cols())).norm(), 1e-13);
}

TEST(Basis, DickeVectorMatchesEmbeddedOccupationState) {
  const auto sym = enumerate_symmetric(4, 3);
  const auto full = enumerate_full(4, 3);
  for (int k = 0; k <= 3; ++k) {
    const StateVector d = dicke_vector(*full, k);
    EXPECT_NEAR(d.norm(), 1.0, 1e-14);
    Eigen::Index nonzero = 0;
    for (auto x : d) {
      if (std::abs(x) > 0) {
        ++nonzero;
        EXPECT_NEAR(std::abs(x), 1.0 / std::sqrt(binomial(4, k)), 1e-14);
      }
    }
    EXPECT_EQ(nonzero, static_cast<Eigen::Index>(binomial(4, k)));

    StateVector s = StateVector::Zero(static_cast<Eigen::Index>(sym->size()));
    s[static_cast<Eigen::Index>(*sym->index_of(SymState{4 - k, 0, k, 0}))] = 1.0;
    EXPECT_LT((embed_symmetric(s, *sym, *full) - d).norm(), 1e-14);
  }
}

TEST(Basis, Binomial) {
  EXPECT_EQ(binomial(10, 3), 120.0);
  EXPECT_EQ(binomial(20, 0), 1.0);
  EXPECT_EQ(binomial(4, 5), 0.0);
}
