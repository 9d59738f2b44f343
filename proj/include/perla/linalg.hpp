#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "perla/types.hpp"

namespace perla {

// Adjoint of A : (dom, W_dom) -> (cod, W_cod) with respect to the weighted
// inner products: A* = W_dom^{-1} A^T W_cod, the unique matrix with
// <A v, w>_cod = <v, A* w>_dom for all v, w.
inline Matrix weighted_adjoint(const Matrix& a, const InnerProduct& w_dom,
                               const InnerProduct& w_cod) {
  if (w_dom.dim() != a.cols() || w_cod.dim() != a.rows())
    throw invariant_error("weighted_adjoint: gram dimensions do not match");
  if (w_dom.is_identity() && w_cod.is_identity()) return a.transpose();
  return w_dom.solve(a.transpose() * w_cod.gram());
}

// Eigenvalues of a symmetric matrix, ascending with multiplicity.
inline Vector symmetric_eigenvalues(const Matrix& s) {
  if (s.rows() != s.cols())
    throw invariant_error("symmetric_eigenvalues: matrix must be square");
  if (s.size() == 0) return Vector(0);
  const double scale = std::max(1.0, max_abs(s));
  if (max_abs(s - s.transpose()) > 1e-8 * scale)
    throw invariant_error("symmetric_eigenvalues: matrix is not symmetric");
  const Matrix sym = 0.5 * (s + s.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw numeric_error("symmetric eigensolver failed to converge");
  return es.eigenvalues();
}

inline Index rank_from_singular_values(const Vector& sv, double rank_tol) {
  if (sv.size() == 0) return 0;
  // Floor the scale at 1: matrices here have entries O(1), so singular
  // values below rank_tol outright are roundoff even when sigma_max itself
  // is noise (e.g. a projected matrix that is exactly zero in theory).
  const double cutoff = rank_tol * std::max(1.0, sv.maxCoeff());
  Index r = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv[i] > cutoff) ++r;
  return r;
}

inline Index matrix_rank(const Matrix& a, const Tolerance& tol = {}) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return rank_from_singular_values(svd.singularValues(), tol.rank_tol);
}

namespace detail {

// Flip each column so its largest-magnitude entry (first on ties) is
// positive; keeps computed bases deterministic up to the eigensolver.
inline void normalize_column_signs(Matrix& b) {
  for (Index j = 0; j < b.cols(); ++j) {
    Index piv = 0;
    double best = -1.0;
    for (Index i = 0; i < b.rows(); ++i) {
      const double v = std::abs(b(i, j));
      if (v > best) {  // first index on ties
        best = v;
        piv = i;
      }
    }
    if (b.rows() && b(piv, j) < 0.0) b.col(j) = -b.col(j);
  }
}

}  // namespace detail

// W-orthonormal basis of the column span of V. Rank is decided on the
// Cholesky-transformed matrix L^T V by singular values against
// rank_tol * max(1, sigma_max).
inline Matrix orthonormal_basis(const Matrix& v, const InnerProduct& w,
                                const Tolerance& tol = {}) {
  if (w.dim() != v.rows())
    throw invariant_error("orthonormal_basis: gram dimension mismatch");
  const Index n = v.rows();
  if (n == 0 || v.cols() == 0) return Matrix(n, 0);
  const Matrix y = w.to_ortho(v);
  Eigen::JacobiSVD<Matrix> svd(y, Eigen::ComputeThinU);
  const Index r = rank_from_singular_values(svd.singularValues(), tol.rank_tol);
  Matrix b = w.from_ortho(svd.matrixU().leftCols(r));
  detail::normalize_column_signs(b);
  return b;
}

// W_dom-orthonormal basis of ker(A); cols(N) + rank(A) = cols(A).
inline Matrix nullspace_basis(const Matrix& a, const InnerProduct& w_dom,
                              const Tolerance& tol = {}) {
  if (w_dom.dim() != a.cols())
    throw invariant_error("nullspace_basis: gram dimension mismatch");
  const Index n = a.cols();
  if (n == 0) return Matrix(0, 0);
  if (a.rows() == 0) {
    Matrix b = w_dom.from_ortho(Matrix::Identity(n, n));
    detail::normalize_column_signs(b);
    return b;
  }
  const Matrix ahat = w_dom.ortho_domain(a);  // A L^{-T}
  Eigen::JacobiSVD<Matrix> svd(ahat, Eigen::ComputeFullV);
  const Index r = rank_from_singular_values(svd.singularValues(), tol.rank_tol);
  Matrix b = w_dom.from_ortho(svd.matrixV().rightCols(n - r));
  detail::normalize_column_signs(b);
  return b;
}

// dim(span A  ∩  span B) = rank A + rank B - rank [A | B]; the ranks do not
// depend on the ambient inner product.
inline Index subspace_intersection_dim(const Matrix& a, const Matrix& b,
                                       const Tolerance& tol = {}) {
  if (a.rows() != b.rows())
    throw invariant_error(
        "subspace_intersection_dim: ambient dimensions differ");
  Matrix ab(a.rows(), a.cols() + b.cols());
  ab.leftCols(a.cols()) = a;
  ab.rightCols(b.cols()) = b;
  return matrix_rank(a, tol) + matrix_rank(b, tol) - matrix_rank(ab, tol);
}

}  // namespace perla
