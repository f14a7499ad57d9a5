#include "eabandit/linalg.hpp"

#include "eabandit/errors.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace eabandit {

namespace {

void require_dim(std::size_t expected, Eigen::Index got, const char* what) {
  if (static_cast<Eigen::Index>(expected) != got) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                std::to_string(expected) + " vs " +
                                std::to_string(got) + ")");
  }
}

}  // namespace

SymMatrix::SymMatrix(Eigen::MatrixXd dense) : m_(std::move(dense)) {
  if (m_.rows() != m_.cols()) {
    throw std::invalid_argument("SymMatrix: matrix is not square");
  }
  for (Eigen::Index i = 0; i < m_.rows(); ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      if (m_(i, j) != m_(j, i)) {
        throw std::invalid_argument("SymMatrix: matrix is not symmetric");
      }
    }
  }
}

SymMatrix SymMatrix::identity(std::size_t dim, double scale) {
  const auto n = static_cast<Eigen::Index>(dim);
  return SymMatrix(Eigen::MatrixXd::Identity(n, n) * scale);
}

SymMatrix SymMatrix::diagonal(const Vec& diag) {
  return SymMatrix(Eigen::MatrixXd(diag.asDiagonal()));
}

void SymMatrix::add_outer(const Vec& x, double c) {
  require_dim(dim(), x.size(), "rank1_update");
  const Eigen::Index n = m_.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j; i < n; ++i) {
      const double v = c * (x[i] * x[j]);
      m_(i, j) += v;
      if (i != j) m_(j, i) += v;
    }
  }
}

void SymMatrix::sherman_morrison(const Vec& x, double c) {
  require_dim(dim(), x.size(), "sherman_morrison_inverse_update");
  const Vec u = m_ * x;
  const double denom = 1.0 + c * x.dot(u);
  if (!(denom > 0.0)) {
    throw numeric_error("Sherman-Morrison update is singular (denominator " +
                        std::to_string(denom) + ")");
  }
  const double scale = c / denom;
  const Eigen::Index n = m_.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j; i < n; ++i) {
      const double v = scale * (u[i] * u[j]);
      m_(i, j) -= v;
      if (i != j) m_(j, i) -= v;
    }
  }
}

bool SymMatrix::is_positive_definite() const {
  if (m_.size() == 0) return false;
  Eigen::LLT<Eigen::MatrixXd> llt(m_);
  return llt.info() == Eigen::Success;
}

SymMatrix rank1_update(const SymMatrix& m, const Vec& x, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("rank1_update: c must be > 0");
  SymMatrix out = m;
  out.add_outer(x, c);
  return out;
}

SymMatrix sherman_morrison_inverse_update(const SymMatrix& minv, const Vec& x,
                                          double c) {
  SymMatrix out = minv;
  out.sherman_morrison(x, c);
  return out;
}

double quad_form(const SymMatrix& minv, const Vec& x) {
  require_dim(minv.dim(), x.size(), "quad_form");
  return std::max(0.0, x.dot(minv.dense() * x));
}

Vec mat_vec(const SymMatrix& m, const Vec& v) {
  require_dim(m.dim(), v.size(), "mat_vec");
  return m.dense() * v;
}

SymMatrix spd_inverse(const SymMatrix& m) {
  Eigen::LLT<Eigen::MatrixXd> llt(m.dense());
  if (llt.info() != Eigen::Success) {
    throw numeric_error("Cholesky factorization failed: matrix is not PD");
  }
  const auto n = static_cast<Eigen::Index>(m.dim());
  Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(n, n));
  Eigen::MatrixXd sym = 0.5 * (inv + inv.transpose());
  return SymMatrix(std::move(sym));
}

IncrementalInverse::IncrementalInverse(std::size_t dim, double lambda,
                                       std::size_t refresh_interval)
    : m_(SymMatrix::identity(dim, lambda)),
      m_inv_(SymMatrix::identity(dim, 1.0 / lambda)),
      refresh_interval_(refresh_interval) {
  if (dim == 0) throw config_error("feature dimension must be positive");
  if (!(lambda > 0.0)) throw config_error("lambda must be > 0");
}

void IncrementalInverse::add(const Vec& x, double c) {
  m_.add_outer(x, c);
  m_inv_.sherman_morrison(x, c);
  ++updates_;
  if (refresh_interval_ > 0 && ++since_refresh_ >= refresh_interval_) {
    refresh();
  }
}

void IncrementalInverse::refresh() {
  m_inv_ = spd_inverse(m_);
  since_refresh_ = 0;
}

}  // namespace eabandit
