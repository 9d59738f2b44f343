#pragma once

#include <Eigen/Dense>

#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace perla {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Error taxonomy mirrors the CLI exit codes: malformed input documents (2),
// numerical breakdown such as an indefinite gram (3), and violated structural
// invariants such as a non-subcomplex inclusion (4).
struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct invariant_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Tolerance {
  double rank_tol = 1e-10;  // relative to the largest singular value
  double eig_tol = 1e-9;    // relative to max(1, largest |eigenvalue|)

  void validate() const {
    if (!(rank_tol > 0.0) || !(eig_tol > 0.0))
      throw invariant_error("tolerances must be positive");
  }
};

inline double max_abs(const Matrix& m) {
  return m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
}

// An inner product on R^n given by a symmetric positive definite gram matrix.
// The Cholesky factorization W = L L^T is computed on first use and cached;
// it is the single gateway between W-coordinates and orthonormal coordinates.
class InnerProduct {
 public:
  InnerProduct() : gram_(Matrix::Identity(0, 0)) {}

  explicit InnerProduct(Matrix gram) : gram_(std::move(gram)) {
    if (gram_.rows() != gram_.cols())
      throw invariant_error("gram matrix must be square");
    if (gram_.size() && !gram_.allFinite())
      throw invariant_error("gram matrix has non-finite entries");
    const double scale = std::max(1.0, max_abs(gram_));
    if (gram_.size() &&
        max_abs(gram_ - gram_.transpose()) > 1e-12 * scale)
      throw invariant_error("gram matrix must be symmetric");
    diagonal_ = true;
    identity_ = true;
    for (Index j = 0; j < gram_.cols() && diagonal_; ++j)
      for (Index i = 0; i < gram_.rows(); ++i)
        if (i != j && gram_(i, j) != 0.0) {
          diagonal_ = false;
          identity_ = false;
          break;
        }
    if (identity_)
      for (Index i = 0; i < gram_.rows(); ++i)
        if (gram_(i, i) != 1.0) {
          identity_ = false;
          break;
        }
  }

  static InnerProduct identity(Index n) {
    return InnerProduct(Matrix::Identity(n, n));
  }

  static InnerProduct diagonal(const Vector& d) {
    for (Index i = 0; i < d.size(); ++i)
      if (!(d[i] > 0.0))
        throw invariant_error("diagonal gram entries must be positive");
    return InnerProduct(Matrix(d.asDiagonal()));
  }

  Index dim() const { return gram_.rows(); }
  const Matrix& gram() const { return gram_; }
  bool is_identity() const { return identity_; }
  bool is_diagonal() const { return diagonal_; }

  const Eigen::LLT<Matrix>& llt() const {
    if (!llt_) {
      llt_.emplace(gram_);
      if (dim() && llt_->info() != Eigen::Success)
        throw numeric_error("gram matrix is not positive definite");
    }
    return *llt_;
  }

  // W^{-1} X
  Matrix solve(const Matrix& x) const {
    if (dim() == 0) return Matrix(0, x.cols());
    if (is_identity()) return x;
    return llt().solve(x);
  }

  // L^T X — into orthonormal coordinates
  Matrix to_ortho(const Matrix& x) const {
    if (dim() == 0) return Matrix(0, x.cols());
    if (is_identity()) return x;
    return Matrix(llt().matrixU()) * x;
  }

  // L^{-T} X — out of orthonormal coordinates
  Matrix from_ortho(const Matrix& x) const {
    if (dim() == 0) return Matrix(0, x.cols());
    if (is_identity()) return x;
    return llt().matrixU().solve(x);
  }

  // A L^{-T}, i.e. the domain-side change of coordinates of a matrix acting
  // from this space.
  Matrix ortho_domain(const Matrix& a) const {
    if (dim() == 0) return Matrix(a.rows(), 0);
    if (is_identity()) return a;
    return llt().matrixL().solve(a.transpose()).transpose();
  }

  double inner(const Vector& v, const Vector& w) const {
    return v.dot(gram_ * w);
  }

 private:
  Matrix gram_;
  bool identity_ = true;
  bool diagonal_ = true;
  mutable std::optional<Eigen::LLT<Matrix>> llt_;
};

}  // namespace perla
