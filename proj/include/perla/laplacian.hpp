#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "perla/complex.hpp"
#include "perla/linalg.hpp"

namespace perla {

enum class Kind { up, down, full };

inline const char* to_string(Kind k) {
  switch (k) {
    case Kind::up: return "up";
    case Kind::down: return "down";
    default: return "full";
  }
}

// A self-adjoint PSD operator on a weighted chain space, stored as its
// matrix in the chain basis together with the gram of that basis.
struct LaplacianRep {
  Matrix op;
  InnerProduct gram;
  Kind kind = Kind::full;
  int degree = 0;

  // self-adjointness wrt the gram: W op = op^T W
  void validate(const Tolerance& tol = {}) const {
    if (op.rows() != op.cols() || op.rows() != gram.dim())
      throw invariant_error("laplacian: shape mismatch");
    const Matrix wop = gram.gram() * op;
    if (max_abs(wop - wop.transpose()) > 1e-9)
      throw invariant_error("laplacian is not self-adjoint");
  }
};

struct Spectrum {
  std::vector<double> eigenvalues;  // ascending, with multiplicity
  Index kernel_dim = 0;

  Index dim() const { return static_cast<Index>(eigenvalues.size()); }
};

// Eigenvalues of a W-self-adjoint operator, computed from the symmetric
// matrix L^T op L^{-T} in W-orthonormal coordinates (W = L L^T). Values
// within the scaled eig tolerance of zero are reported as exactly zero and
// count toward the kernel; anything more negative is an error. Kernel
// dimensions are integers, so near-zero fuzz must not leak into reported
// spectra.
inline Spectrum spectrum(const LaplacianRep& lap, const Tolerance& tol = {}) {
  tol.validate();
  const Index n = lap.op.rows();
  if (n == 0) return Spectrum{};
  Matrix sym;
  if (lap.gram.is_identity()) {
    sym = 0.5 * (lap.op + lap.op.transpose());
  } else {
    const Matrix m = lap.gram.to_ortho(lap.gram.ortho_domain(lap.op));
    sym = 0.5 * (m + m.transpose());
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw numeric_error("laplacian eigensolver failed to converge");
  Vector ev = es.eigenvalues();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  const double cut = tol.eig_tol * scale;
  Spectrum s;
  s.eigenvalues.resize(n);
  for (Index i = 0; i < n; ++i) {
    double v = ev[i];
    if (v < -cut) throw numeric_error("laplacian is not PSD");
    if (v <= cut) {
      v = 0.0;
      ++s.kernel_dim;
    }
    s.eigenvalues[i] = v;
  }
  return s;
}

// λ_q: the q-th smallest eigenvalue with multiplicity (q >= 1); +inf past
// the dimension of the space. inf over an empty spectrum is +inf.
inline double lambda_q(const Spectrum& s, int q) {
  if (q < 1) throw invariant_error("lambda_q: q must be >= 1");
  if (q > s.dim()) return kInf;
  return s.eigenvalues[q - 1];
}

// d_{k+1} ∘ d_{k+1}^* on C_k.
inline LaplacianRep up_laplacian(const ChainComplexRep& c, int k) {
  const Matrix d = c.d(k + 1);
  const InnerProduct& wk = c.W(k);
  Matrix op;
  if (d.cols() == 0) {
    op = Matrix::Zero(c.dim(k), c.dim(k));
  } else {
    op = d * weighted_adjoint(d, c.W(k + 1), wk);
  }
  return LaplacianRep{std::move(op), wk, Kind::up, k};
}

// d_k^* ∘ d_k on C_k; the zero operator at k = 0.
inline LaplacianRep down_laplacian(const ChainComplexRep& c, int k) {
  const Matrix d = c.d(k);
  const InnerProduct& wk = c.W(k);
  Matrix op;
  if (d.rows() == 0) {
    op = Matrix::Zero(c.dim(k), c.dim(k));
  } else {
    op = weighted_adjoint(d, wk, c.W(k - 1)) * d;
  }
  return LaplacianRep{std::move(op), wk, Kind::down, k};
}

inline LaplacianRep full_laplacian(const ChainComplexRep& c, int k) {
  LaplacianRep up = up_laplacian(c, k);
  const LaplacianRep down = down_laplacian(c, k);
  return LaplacianRep{up.op + down.op, up.gram, Kind::full, k};
}

// A pair of chain complexes K ⊆ L with the inclusion maps.
struct PersistentPair {
  ChainComplexRep K, L;
  InclusionRep incl;

  void validate(double tol = 1e-12) const {
    K.validate(tol);
    L.validate(tol);
    incl.validate(K, L, tol);
  }
};

inline PersistentPair make_pair_rep(const WeightedComplex& K,
                                    const WeightedComplex& L,
                                    bool validate = true) {
  PersistentPair p{assemble(K), assemble(L), inclusion(K, L)};
  if (validate) p.validate();
  return p;
}

// W^L_{k+1}-orthonormal basis Z of the auxiliary space
// C^{K,L}_{k+1} = { c in C^L_{k+1} : d^L_{k+1} c ∈ ι(C^K_k) },
// computed as the kernel of Π d^L_{k+1} where Π is the W-orthogonal
// projection onto the complement of ι(C^K_k).
inline Matrix persistent_subspace(const PersistentPair& p, int k,
                                  const Tolerance& tol = {}) {
  const Matrix d = p.L.d(k + 1);
  const Matrix j = p.incl.j(k, p.K, p.L);
  const Index nl = p.L.dim(k);
  Matrix pi_d;
  if (nl == 0 || j.cols() == nl) {
    // ι surjective (or nothing to project): condition is vacuous
    pi_d = Matrix::Zero(0, d.cols());
  } else {
    // Π = I - J (W^K)^{-1} J^T W^L  (isometry: J^T W^L J = W^K)
    const Matrix jt_wl = j.transpose() * p.L.W(k).gram();
    pi_d = d - j * p.K.W(k).solve(jt_wl * d);
  }
  return nullspace_basis(pi_d, p.L.W(k + 1), tol);
}

// The persistent boundary d^{K,L}_{k+1} expressed on the Z basis of
// C^{K,L}_{k+1} and the chain basis of C_k^K: B = (W^K)^{-1} J^T W^L d Z.
// The defining property d Z = J B must hold up to tolerance.
inline Matrix persistent_boundary(const PersistentPair& p, int k,
                                  const Matrix& z, const Tolerance& tol = {}) {
  const Matrix d = p.L.d(k + 1);
  const Matrix j = p.incl.j(k, p.K, p.L);
  const Matrix dz = d * z;
  const Matrix b = p.K.W(k).solve(j.transpose() * p.L.W(k).gram() * dz);
  const double scale = std::max(1.0, max_abs(dz));
  if (max_abs(dz - j * b) > 1e-8 * scale)
    throw invariant_error(
        "persistent boundary does not factor through the inclusion");
  return b;
}

struct PersistentLaplacians {
  LaplacianRep up, down, full;
  Matrix subspace;  // Z, basis of C^{K,L}_{k+1} in C^L_{k+1} coordinates
  Matrix boundary;  // B = d^{K,L}_{k+1} on that basis
};

// Up, down and full persistent Laplacians of K ⊆ L at degree k. The down
// part is the down Laplacians of K alone; the up part is B B^* with the
// domain orthonormal by construction of Z. An empty auxiliary space gives
// the zero up part.
inline PersistentLaplacians persistent_laplacians(const PersistentPair& p,
                                                  int k,
                                                  const Tolerance& tol = {}) {
  PersistentLaplacians out;
  out.subspace = persistent_subspace(p, k, tol);
  out.boundary = persistent_boundary(p, k, out.subspace, tol);
  const InnerProduct& wk = p.K.W(k);
  // B : (C^{K,L}, I) -> (C^K_k, W): B^* = B^T W
  Matrix up_op = out.boundary * (out.boundary.transpose() * wk.gram());
  out.up = LaplacianRep{std::move(up_op), wk, Kind::up, k};
  out.down = down_laplacian(p.K, k);
  out.full = LaplacianRep{out.up.op + out.down.op, wk, Kind::full, k};
  return out;
}

// Up persistent Laplacian via the generalized Schur complement of the
// ambient up Laplacian, eliminating the coordinates outside ι(C^K_k).
// Requires a coordinate inclusion (0/1 column selection) and diagonal
// grams. The complement is taken on the symmetric form matrix
// F = W^L Δ^L_+ (the quadratic-form representative); eliminating with a
// Moore–Penrose pseudo-inverse on the F_RR block realizes
// min_v <x+v, Δ(x+v)>_W, which is exactly the persistent quadratic form.
inline LaplacianRep schur_persistent_up(const PersistentPair& p, int k,
                                        const Tolerance& tol = {}) {
  const Matrix j = p.incl.j(k, p.K, p.L);
  if (!p.L.W(k).is_diagonal() || !p.K.W(k).is_diagonal())
    throw invariant_error("schur_persistent_up: grams must be diagonal");
  std::vector<Index> kept;
  std::vector<bool> is_kept(j.rows(), false);
  for (Index c = 0; c < j.cols(); ++c) {
    Index row = -1;
    for (Index r = 0; r < j.rows(); ++r) {
      if (j(r, c) == 1.0 && row < 0) {
        row = r;
      } else if (j(r, c) != 0.0) {
        throw invariant_error(
            "schur_persistent_up: inclusion is not a column selection");
      }
    }
    if (row < 0)
      throw invariant_error(
          "schur_persistent_up: inclusion is not a column selection");
    kept.push_back(row);
    is_kept[row] = true;
  }
  std::vector<Index> gone;
  for (Index r = 0; r < j.rows(); ++r)
    if (!is_kept[r]) gone.push_back(r);

  const Matrix f = p.L.W(k).gram() * up_laplacian(p.L, k).op;
  const Index nk = static_cast<Index>(kept.size());
  const Index nr = static_cast<Index>(gone.size());
  Matrix fii(nk, nk), fir(nk, nr), frr(nr, nr);
  for (Index a = 0; a < nk; ++a) {
    for (Index b = 0; b < nk; ++b) fii(a, b) = f(kept[a], kept[b]);
    for (Index b = 0; b < nr; ++b) fir(a, b) = f(kept[a], gone[b]);
  }
  for (Index a = 0; a < nr; ++a)
    for (Index b = 0; b < nr; ++b) frr(a, b) = f(gone[a], gone[b]);

  Matrix s = fii;
  if (nr > 0) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (frr + frr.transpose()));
    if (es.info() != Eigen::Success)
      throw numeric_error("schur_persistent_up: eigensolver failed");
    const Vector ev = es.eigenvalues();
    const double cut =
        tol.rank_tol * std::max(1e-300, ev.cwiseAbs().maxCoeff());
    Vector inv = Vector::Zero(nr);
    for (Index i = 0; i < nr; ++i)
      if (std::abs(ev[i]) > cut) inv[i] = 1.0 / ev[i];
    const Matrix pinv =
        es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
    s -= fir * pinv * fir.transpose();
  }
  return LaplacianRep{p.K.W(k).solve(s), p.K.W(k), Kind::up, k};
}

// Persistent Betti number: dim ker d^K_k minus the dimension of the part of
// ι(ker d^K_k) that already bounds in L. Independent of any Laplacian.
inline Index persistent_betti(const PersistentPair& p, int k,
                              const Tolerance& tol = {}) {
  if (p.K.dim(k) == 0) return 0;
  const Matrix n = nullspace_basis(p.K.d(k), p.K.W(k), tol);
  const Matrix jn = p.incl.j(k, p.K, p.L) * n;
  const Matrix im = p.L.d(k + 1);
  return n.cols() - subspace_intersection_dim(jn, im, tol);
}

struct HodgeReport {
  Index kernel_dim = 0;
  Index betti = 0;
  Index cap_dim = 0;  // dim(ker d^K_k ∩ ker (d^{K,L}_{k+1})^*)
  bool ok = false;
};

// Persistent Hodge theorem: the kernel of the full persistent Laplacian has
// dimension equal to the persistent Betti number, and equals
// ker d^K_k ∩ ker (d^{K,L}_{k+1})^*.
inline HodgeReport hodge_check(const PersistentPair& p, int k,
                               const Tolerance& tol = {}) {
  HodgeReport r;
  const auto lap = persistent_laplacians(p, k, tol);
  r.kernel_dim = spectrum(lap.full, tol).kernel_dim;
  r.betti = persistent_betti(p, k, tol);
  // (d^{K,L})^* = B^T W on the Z basis; stack with d^K_k
  const Matrix bstar = lap.boundary.transpose() * p.K.W(k).gram();
  const Matrix dk = p.K.d(k);
  Matrix stack(dk.rows() + bstar.rows(), p.K.dim(k));
  stack.topRows(dk.rows()) = dk;
  stack.bottomRows(bstar.rows()) = bstar;
  r.cap_dim = p.K.dim(k) - matrix_rank(stack, tol);
  r.ok = (r.kernel_dim == r.betti) && (r.kernel_dim == r.cap_dim);
  return r;
}

// Multiset equality of the nonzero spectra: eigenvalues of the full
// operator above the zero cut must match the union of the up and down
// nonzero spectra, greedily within the scaled tolerance.
struct SplittingReport {
  bool ok = false;
  double max_mismatch = 0.0;
};

inline SplittingReport splitting_check(const Spectrum& up,
                                       const Spectrum& down,
                                       const Spectrum& full,
                                       const Tolerance& tol = {}) {
  double lam_max = 1.0;
  for (const auto* s : {&up, &down, &full})
    for (double v : s->eigenvalues) lam_max = std::max(lam_max, v);
  const double cut = tol.eig_tol * lam_max;

  std::vector<double> lhs, rhs;
  for (double v : full.eigenvalues)
    if (v > cut) lhs.push_back(v);
  for (double v : up.eigenvalues)
    if (v > cut) rhs.push_back(v);
  for (double v : down.eigenvalues)
    if (v > cut) rhs.push_back(v);
  std::sort(rhs.begin(), rhs.end());

  SplittingReport r;
  if (lhs.size() != rhs.size()) {
    r.ok = false;
    r.max_mismatch = kInf;
    return r;
  }
  for (std::size_t i = 0; i < lhs.size(); ++i)
    r.max_mismatch = std::max(r.max_mismatch, std::abs(lhs[i] - rhs[i]));
  r.ok = r.max_mismatch <= cut;
  return r;
}

inline SplittingReport splitting_check(const PersistentPair& p, int k,
                                       const Tolerance& tol = {}) {
  const auto lap = persistent_laplacians(p, k, tol);
  return splitting_check(spectrum(lap.up, tol), spectrum(lap.down, tol),
                         spectrum(lap.full, tol), tol);
}

struct HodgeDecomposition {
  Matrix coexact;   // W-orthonormal basis of im d_k^*
  Matrix harmonic;  // of ker Δ_k = ker d_k ∩ ker d_{k+1}^*
  Matrix exact;     // of im d_{k+1}
  double max_cross = 0.0;
  bool ok = false;

  Index dim_coexact() const { return coexact.cols(); }
  Index dim_harmonic() const { return harmonic.cols(); }
  Index dim_exact() const { return exact.cols(); }
};

// C_k = im(d_k^*) ⊕ ker Δ_k ⊕ im(d_{k+1}): three W-orthonormal bases,
// pairwise W-orthogonal, dimensions summing to dim C_k.
inline HodgeDecomposition hodge_decomposition_check(const ChainComplexRep& c,
                                                    int k,
                                                    const Tolerance& tol = {}) {
  HodgeDecomposition h;
  const InnerProduct& w = c.W(k);
  const Matrix dk = c.d(k);
  const Matrix dk1 = c.d(k + 1);
  const Matrix adj_dk =
      dk.rows() ? weighted_adjoint(dk, w, c.W(k - 1)) : Matrix(c.dim(k), 0);
  const Matrix adj_dk1 =
      dk1.cols() ? weighted_adjoint(dk1, c.W(k + 1), w) : Matrix(0, c.dim(k));
  h.coexact = orthonormal_basis(adj_dk, w, tol);
  h.exact = orthonormal_basis(dk1, w, tol);
  Matrix stack(dk.rows() + adj_dk1.rows(), c.dim(k));
  stack.topRows(dk.rows()) = dk;
  stack.bottomRows(adj_dk1.rows()) = adj_dk1;
  h.harmonic = nullspace_basis(stack, w, tol);

  const Matrix g = w.gram();
  auto cross = [&](const Matrix& a, const Matrix& b) {
    if (a.cols() == 0 || b.cols() == 0) return 0.0;
    return max_abs(a.transpose() * g * b);
  };
  h.max_cross = std::max({cross(h.coexact, h.harmonic),
                          cross(h.coexact, h.exact),
                          cross(h.harmonic, h.exact)});
  h.ok = (h.dim_coexact() + h.dim_harmonic() + h.dim_exact() == c.dim(k)) &&
         h.max_cross <= 1e-9;
  return h;
}

}  // namespace perla
