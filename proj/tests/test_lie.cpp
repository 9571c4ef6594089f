#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "pingpong.hpp"

using namespace pingpong;

namespace {

using M = LieMatrix<double>;

M mat2(double a, double b, double c, double d) {
  M m(2, 2);
  m << a, b, c, d;
  return m;
}

const M E = mat2(0, 1, 0, 0);
const M Fm = mat2(0, 0, 1, 0);
const M H = mat2(1, 0, 0, -1);

// random traceless matrix of operator norm `size`
M random_traceless(Rng& rng, Eigen::Index n, double size) {
  std::normal_distribution<double> nd;
  M x(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) x(i, j) = nd(rng);
  x -= x.trace() / static_cast<double>(n) * M::Identity(n, n);
  return size / operator_norm<double>(x) * x;
}

// distance of y from the span of an orthonormal basis
double residual(const std::vector<M>& basis, const M& y) {
  M r = y;
  for (const auto& b : basis) r -= (b.cwiseProduct(r)).sum() * b;
  return r.norm();
}

}  // namespace

TEST(MatrixLog, Examples) {
  EXPECT_EQ(operator_norm<double>(matrix_log<double>(M(M::Identity(3, 3)))), 0.0);
  const M d = matrix_log<double>(mat2(std::exp(0.1), 0, 0, std::exp(-0.1)));
  EXPECT_NEAR(d(0, 0), 0.1, 1e-12);
  EXPECT_NEAR(d(1, 1), -0.1, 1e-12);
  EXPECT_NEAR(std::abs(d(0, 1)) + std::abs(d(1, 0)), 0.0, 1e-15);
  EXPECT_THROW(matrix_log<double>(mat2(2.5, 0, 0, 0.4)), DomainError);
}

TEST(MatrixLog, ExpInvertsLog) {
  Rng rng(61);
  std::uniform_real_distribution<double> radius(0.0, 0.95);
  for (int t = 0; t < 1000; ++t) {
    const Eigen::Index n = 2 + t % 4;
    const M a = random_traceless(rng, n, radius(rng));
    const M g = M::Identity(n, n) + a;  // ||g - I|| < 1
    ASSERT_LE((matrix_exp<double>(matrix_log<double>(g)) - g).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(MatrixLog, LogInvertsExpNearZero) {
  Rng rng(62);
  for (int t = 0; t < 200; ++t) {
    const M x = random_traceless(rng, 3, 0.5);
    ASSERT_LE((matrix_log<double>(matrix_exp<double>(x)) - x).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(MatrixLog, Complex) {
  using Z = std::complex<double>;
  LieMatrix<Z> g(2, 2);
  g << std::exp(Z(0, 0.3)), 0, 0, std::exp(Z(0, -0.3));
  const auto l = matrix_log<Z>(g);
  EXPECT_NEAR(std::abs(l(0, 0) - Z(0, 0.3)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(l(1, 1) - Z(0, -0.3)), 0.0, 1e-12);
}

TEST(Bracket, Sl2Relations) {
  EXPECT_EQ(bracket<double>(E, Fm), H);
  EXPECT_EQ(bracket<double>(H, E), 2 * E);
  EXPECT_EQ(bracket<double>(H, Fm), -2 * Fm);
}

TEST(GeneratedSubalgebra, Examples) {
  EXPECT_EQ(generated_subalgebra<double>({E, Fm}).dimension(), 3u);
  EXPECT_EQ(generated_subalgebra<double>({H}).dimension(), 1u);
  EXPECT_EQ(generated_subalgebra<double>({H, 3 * H}).dimension(), 1u);
  EXPECT_EQ(generated_subalgebra<double>({H, E}).dimension(), 2u);
}

TEST(GeneratedSubalgebra, RandomPairsGenerateSl2) {
  Rng rng(63);
  for (int t = 0; t < 100; ++t) {
    const auto b = generated_subalgebra<double>({random_traceless(rng, 2, 1.0), random_traceless(rng, 2, 1.0)});
    ASSERT_EQ(b.dimension(), 3u);
  }
}

TEST(GeneratedSubalgebra, ClosedContainsInputsPermutationInvariant) {
  Rng rng(64);
  for (int t = 0; t < 50; ++t) {
    std::vector<M> xs;
    // sometimes a proper subalgebra: block upper triangular in sl_3
    const bool block = t % 2 == 0;
    for (int k = 0; k < 3; ++k) {
      M x = random_traceless(rng, 3, 1.0);
      if (block) {
        x(2, 0) = x(2, 1) = 0.0;
      }
      xs.push_back(x);
    }
    const auto b = generated_subalgebra<double>(xs);
    ASSERT_TRUE(b.closed);
    for (const auto& x : xs) ASSERT_LT(residual(b.basis, x / x.norm()), 1e-8);
    for (const auto& u : b.basis)
      for (const auto& v : b.basis) ASSERT_LT(residual(b.basis, bracket<double>(u, v)), 1e-8);
    auto ys = xs;
    std::reverse(ys.begin(), ys.end());
    ASSERT_EQ(generated_subalgebra<double>(ys).dimension(), b.dimension());
    ASSERT_EQ(b.dimension(), block ? 6u : 8u);
  }
}

TEST(DensePairTest, Examples) {
  EXPECT_TRUE(dense_pair_test<double>(matrix_exp<double>(0.1 * E), matrix_exp<double>(0.1 * Fm)));
  EXPECT_FALSE(dense_pair_test<double>(matrix_exp<double>(0.1 * H), matrix_exp<double>(0.2 * H)));
  EXPECT_THROW(dense_pair_test<double>(mat2(2.5, 0, 0, 0.4), matrix_exp<double>(0.1 * E)), DomainError);
}

TEST(DensePairTest, RandomNearIdentityPairs) {
  Rng rng(65);
  for (int t = 0; t < 100; ++t) {
    const M x = matrix_exp<double>(random_traceless(rng, 2, 0.3));
    const M y = matrix_exp<double>(random_traceless(rng, 2, 0.3));
    ASSERT_TRUE(dense_pair_test<double>(x, y));
  }
}

TEST(DensePairTest, RejectsNonUnimodular) {
  EXPECT_THROW(dense_pair_test<double>(mat2(1.1, 0, 0, 1.1), matrix_exp<double>(0.1 * E)), DomainError);
}

TEST(DerivedSeries, Examples) {
  const auto sl2 = derived_series(generated_subalgebra<double>({E, Fm}));
  EXPECT_EQ(sl2.stabilization_index, 0u);
  EXPECT_EQ(sl2.final_dimension(), 3u);

  const auto borel = derived_series(generated_subalgebra<double>({H, E}));
  ASSERT_EQ(borel.terms.size(), 3u);
  EXPECT_EQ(borel.terms[0].dimension(), 2u);
  EXPECT_EQ(borel.terms[1].dimension(), 1u);
  EXPECT_EQ(borel.terms[2].dimension(), 0u);
  EXPECT_EQ(borel.stabilization_index, 2u);
  EXPECT_LT(residual(borel.terms[1].basis, E), 1e-12);

  M d1 = M::Zero(3, 3), d2 = M::Zero(3, 3);
  d1.diagonal() << 1, -1, 0;
  d2.diagonal() << 0, 1, -1;
  const auto abelian = derived_series(generated_subalgebra<double>({d1, d2}));
  ASSERT_EQ(abelian.terms.size(), 2u);
  EXPECT_EQ(abelian.terms[0].dimension(), 2u);
  EXPECT_EQ(abelian.final_dimension(), 0u);
  EXPECT_EQ(abelian.stabilization_index, 1u);
}

TEST(DerivedSeries, StrictlyDecreasing) {
  Rng rng(66);
  for (int t = 0; t < 30; ++t) {
    // upper triangular traceless 4x4 matrices: solvable
    std::vector<M> xs;
    for (int k = 0; k < 3; ++k) xs.push_back(M(random_traceless(rng, 4, 1.0).triangularView<Eigen::Upper>()));
    for (auto& x : xs) x -= x.trace() / 4.0 * M::Identity(4, 4);
    const auto s = derived_series(generated_subalgebra<double>(xs));
    for (std::size_t i = 0; i + 1 < s.terms.size(); ++i)
      ASSERT_LT(s.terms[i + 1].dimension(), s.terms[i].dimension());
    ASSERT_EQ(s.final_dimension(), 0u);
  }
}

TEST(DerivedSeries, NeedsClosedBasis) {
  SubalgebraBasis<double> b;
  b.basis = {E};
  EXPECT_THROW(derived_series(b), PreconditionError);
}
