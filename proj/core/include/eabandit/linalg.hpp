#pragma once

// Small dense linear algebra for bandit statistics (d <= 64).
//
// Matrices are stored as full dense squares. Every mutating operation keeps
// the storage exactly symmetric so that quadratic forms stay consistent.

#include <Eigen/Dense>

#include <cstddef>

namespace eabandit {

using Vec = Eigen::VectorXd;

class SymMatrix {
 public:
  SymMatrix() = default;

  // Throws std::invalid_argument if `dense` is not square and symmetric.
  explicit SymMatrix(Eigen::MatrixXd dense);

  static SymMatrix identity(std::size_t dim, double scale = 1.0);
  static SymMatrix diagonal(const Vec& diag);

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  double operator()(std::size_t i, std::size_t j) const {
    return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  const Eigen::MatrixXd& dense() const { return m_; }

  // m += c * x x^T, computed so that (i,j) and (j,i) receive identical values.
  void add_outer(const Vec& x, double c);

  // In-place Sherman-Morrison step: *this is taken to be A^{-1} and becomes
  // (A + c x x^T)^{-1}. Throws Error(kNumeric) when 1 + c x^T A^{-1} x <= 0.
  void sherman_morrison(const Vec& x, double c);

  bool is_positive_definite() const;

 private:
  Eigen::MatrixXd m_;
};

// m + c * x^T x.
SymMatrix rank1_update(const SymMatrix& m, const Vec& x, double c);

// (M + c x^T x)^{-1} given minv = M^{-1}.
SymMatrix sherman_morrison_inverse_update(const SymMatrix& minv, const Vec& x,
                                          double c);

// x minv x^T, clamped at zero against round-off.
double quad_form(const SymMatrix& minv, const Vec& x);

Vec mat_vec(const SymMatrix& m, const Vec& v);

// Inverse of a symmetric positive-definite matrix via Cholesky.
// Throws Error(kNumeric) if the factorization fails.
SymMatrix spd_inverse(const SymMatrix& m);

// M and M^{-1} maintained together under rank-1 growth. M^{-1} is rebuilt
// from M by factorization every `refresh_interval` updates to bound drift.
class IncrementalInverse {
 public:
  static constexpr std::size_t kDefaultRefreshInterval = 1000;

  IncrementalInverse() = default;
  IncrementalInverse(std::size_t dim, double lambda,
                     std::size_t refresh_interval = kDefaultRefreshInterval);

  void add(const Vec& x, double c);
  void refresh();

  const SymMatrix& matrix() const { return m_; }
  const SymMatrix& inverse() const { return m_inv_; }
  std::size_t update_count() const { return updates_; }
  std::size_t dim() const { return m_.dim(); }

 private:
  SymMatrix m_;
  SymMatrix m_inv_;
  std::size_t updates_ = 0;
  std::size_t since_refresh_ = 0;
  std::size_t refresh_interval_ = kDefaultRefreshInterval;
};

}  // namespace eabandit
