#include "eabandit/errors.hpp"
#include "eabandit/linalg.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <Eigen/Cholesky>

#include <random>

using namespace eabandit;
using namespace testing_support;

TEST(Rank1Update, ZeroVectorIsNoOp) {
  const SymMatrix m = SymMatrix::identity(2);
  const SymMatrix r = rank1_update(m, Vec::Zero(2), 1.0);
  EXPECT_EQ(r.dense(), m.dense());
}

TEST(Rank1Update, ScalarCase) {
  const SymMatrix r = rank1_update(SymMatrix::identity(1), Vec::Ones(1), 1.0);
  EXPECT_EQ(r(0, 0), 2.0);
}

TEST(Rank1Update, MatchesNaiveOuterProduct) {
  std::mt19937_64 rng(7);
  const auto a = gaussian_vector(9, rng);
  oracle::Dense base(3, std::vector<double>(3, 0.0));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k) base[i][j] += a[i * 3 + k] * a[j * 3 + k];
  Eigen::MatrixXd dense(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) dense(i, j) = base[i][j];
  const auto x = gaussian_vector(3, rng);
  const SymMatrix r = rank1_update(SymMatrix(dense), to_vec(x), 0.5);
  EXPECT_LT(max_abs_diff(to_dense(r), oracle::outer_update(base, x, 0.5)), 1e-14);
  EXPECT_EQ(r.dense(), r.dense().transpose());
}

TEST(Rank1Update, RejectsBadInput) {
  const SymMatrix m = SymMatrix::identity(2);
  EXPECT_THROW(rank1_update(m, Vec::Ones(3), 1.0), std::invalid_argument);
  EXPECT_THROW(rank1_update(m, Vec::Ones(2), 0.0), std::invalid_argument);
}

TEST(SymMatrix, RejectsAsymmetric) {
  Eigen::MatrixXd m(2, 2);
  m << 1, 2, 3, 4;
  EXPECT_THROW(SymMatrix{m}, std::invalid_argument);
  EXPECT_THROW(SymMatrix{Eigen::MatrixXd(2, 3)}, std::invalid_argument);
}

TEST(ShermanMorrison, ScalarCase) {
  const SymMatrix r =
      sherman_morrison_inverse_update(SymMatrix::identity(1), Vec::Ones(1), 1.0);
  EXPECT_DOUBLE_EQ(r(0, 0), 0.5);
}

TEST(ShermanMorrison, ZeroVectorUnchanged) {
  const SymMatrix minv = SymMatrix::diagonal(to_vec({2.0, 0.5, 1.0}));
  const SymMatrix r = sherman_morrison_inverse_update(minv, Vec::Zero(3), 1.0);
  EXPECT_EQ(r.dense(), minv.dense());
}

TEST(ShermanMorrison, ChainMatchesDirectInverse) {
  std::mt19937_64 rng(11);
  const std::size_t d = 5;
  SymMatrix minv = SymMatrix::identity(d);
  oracle::Dense m = oracle::identity(d);
  for (int step = 0; step < 100; ++step) {
    const auto x = gaussian_vector(d, rng);
    minv = sherman_morrison_inverse_update(minv, to_vec(x), 1.0);
    m = oracle::outer_update(m, x, 1.0);
  }
  EXPECT_LT(max_abs_diff(to_dense(minv), oracle::inverse(m)), 1e-9);
}

TEST(ShermanMorrison, NonPositiveDenominatorThrows) {
  // Taking A^{-1} = I and c = -1 with unit x gives 1 + c x A^{-1} x = 0.
  SymMatrix minv = SymMatrix::identity(2);
  Vec x = Vec::Zero(2);
  x[0] = 1.0;
  try {
    minv.sherman_morrison(x, -1.0);
    FAIL() << "expected numeric error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNumeric);
  }
}

TEST(QuadForm, Examples) {
  Vec e = Vec::Zero(4);
  e[2] = 1.0;
  EXPECT_DOUBLE_EQ(quad_form(SymMatrix::identity(4), e), 1.0);
  EXPECT_EQ(quad_form(SymMatrix::identity(4), Vec::Zero(4)), 0.0);
  EXPECT_DOUBLE_EQ(quad_form(SymMatrix::diagonal(to_vec({2.0, 0.5})), Vec::Ones(2)), 2.5);
  EXPECT_THROW(quad_form(SymMatrix::identity(2), Vec::Ones(3)), std::invalid_argument);
}

TEST(MatVec, Examples) {
  const Vec v = to_vec({1.0, 2.0, 3.0});
  EXPECT_EQ(mat_vec(SymMatrix::identity(3), v), v);
  EXPECT_EQ(to_std(mat_vec(SymMatrix::diagonal(to_vec({2.0, 3.0})), Vec::Ones(2))),
            (std::vector<double>{2.0, 3.0}));
  EXPECT_THROW(mat_vec(SymMatrix::identity(2), v), std::invalid_argument);
}

TEST(MatVec, MatchesNaiveLoop) {
  std::mt19937_64 rng(3);
  const auto a = gaussian_vector(16, rng);
  Eigen::MatrixXd dense(4, 4);
  oracle::Dense naive(4, std::vector<double>(4));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const double v = a[static_cast<std::size_t>(i * 4 + j)] + a[static_cast<std::size_t>(j * 4 + i)];
      dense(i, j) = v;
      naive[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
    }
  const auto v = gaussian_vector(4, rng);
  const auto got = to_std(mat_vec(SymMatrix(dense), to_vec(v)));
  const auto want = oracle::mat_vec(naive, v);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(got[i], want[i], 1e-12);
}

TEST(SpdInverse, MatchesGaussJordan) {
  std::mt19937_64 rng(5);
  oracle::Dense m = oracle::identity(6, 2.0);
  for (int i = 0; i < 10; ++i) m = oracle::outer_update(m, gaussian_vector(6, rng), 1.0);
  Eigen::MatrixXd dense(6, 6);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      dense(i, j) = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  EXPECT_LT(max_abs_diff(to_dense(spd_inverse(SymMatrix(dense))), oracle::inverse(m)), 1e-12);
}

TEST(SpdInverse, IndefiniteThrows) {
  EXPECT_THROW(spd_inverse(SymMatrix::diagonal(to_vec({1.0, -1.0}))), Error);
}

TEST(IncrementalInverse, PositiveDefiniteAfterUpdates) {
  std::mt19937_64 rng(13);
  IncrementalInverse inc(8, 0.5);
  for (int i = 0; i < 300; ++i) {
    inc.add(to_vec(gaussian_vector(8, rng)), 1.0);
    ASSERT_TRUE(inc.matrix().is_positive_definite());
  }
  EXPECT_EQ(inc.update_count(), 300U);
}

TEST(IncrementalInverse, DriftBoundedAtTwentyDims) {
  std::mt19937_64 rng(17);
  const std::size_t d = 20;
  IncrementalInverse inc(d, 1.0);
  oracle::Dense m = oracle::identity(d);
  for (int i = 0; i < 1000; ++i) {
    auto x = gaussian_vector(d, rng);
    double norm = 0.0;
    for (double v : x) norm += v * v;
    for (double& v : x) v /= std::sqrt(norm);
    inc.add(to_vec(x), 1.0);
    m = oracle::outer_update(m, x, 1.0);
  }
  EXPECT_LT(max_abs_diff(to_dense(inc.inverse()), oracle::inverse(m)), 1e-8);
  EXPECT_LT(max_abs_diff(to_dense(inc.matrix()), m), 1e-10);
}

TEST(IncrementalInverse, WidthNonIncreasing) {
  std::mt19937_64 rng(19);
  IncrementalInverse inc(6, 1.0);
  const Vec probe = to_vec(gaussian_vector(6, rng));
  double previous = quad_form(inc.inverse(), probe);
  for (int i = 0; i < 200; ++i) {
    inc.add(to_vec(gaussian_vector(6, rng)), 1.0);
    const double now = quad_form(inc.inverse(), probe);
    EXPECT_LE(now, previous + 1e-12);
    previous = now;
  }
}

TEST(IncrementalInverse, RefreshKeepsInverse) {
  std::mt19937_64 rng(23);
  IncrementalInverse inc(4, 1.0, 7);
  oracle::Dense m = oracle::identity(4);
  for (int i = 0; i < 50; ++i) {
    const auto x = gaussian_vector(4, rng);
    inc.add(to_vec(x), 0.25);
    m = oracle::outer_update(m, x, 0.25);
  }
  EXPECT_LT(max_abs_diff(to_dense(inc.inverse()), oracle::inverse(m)), 1e-12);
}
