#pragma once

#include <map>
#include <optional>
#include <vector>

#include "perla/complex.hpp"
#include "perla/linalg.hpp"

namespace perla {

// A cellular cosheaf on a simplicial base: a finite-dimensional stalk F(σ)
// for every simplex and a restriction map F(σ) -> F(τ) for every facet
// incidence τ ⊂ σ. Stalks carry SPD grams (identity unless given).
class Cosheaf {
 public:
  Cosheaf() = default;

  Cosheaf(WeightedComplex base, std::map<Simplex, Index> stalk_dims,
          std::map<Simplex, Matrix> stalk_grams,
          std::map<std::pair<Simplex, Simplex>, Matrix> restrictions)
      : base_(std::move(base)) {
    for (int k = 0; k <= base_.max_dim(); ++k) {
      dims_.emplace_back();
      grams_.emplace_back();
      for (Index i = 0; i < base_.count(k); ++i) {
        const Simplex& s = base_.simplex(k, i);
        auto it = stalk_dims.find(s);
        if (it == stalk_dims.end())
          throw invariant_error("cosheaf: missing stalk dimension");
        if (it->second < 0)
          throw invariant_error("cosheaf: negative stalk dimension");
        dims_[k].push_back(it->second);
        auto g = stalk_grams.find(s);
        if (g == stalk_grams.end()) {
          grams_[k].push_back(InnerProduct::identity(it->second));
        } else {
          if (g->second.rows() != it->second)
            throw invariant_error("cosheaf: stalk gram dimension mismatch");
          grams_[k].emplace_back(g->second);
        }
      }
    }
    for (int k = 1; k <= base_.max_dim(); ++k) {
      maps_.emplace_back();
      for (Index j = 0; j < base_.count(k); ++j) {
        const Simplex& s = base_.simplex(k, j);
        std::vector<Matrix> per_facet;
        for (int ell = 0; ell <= k; ++ell) {
          const Simplex f = s.facet(ell);
          auto it = restrictions.find({f, s});
          if (it == restrictions.end())
            throw invariant_error("cosheaf: missing restriction map");
          if (it->second.rows() != stalk_dim(f) ||
              it->second.cols() != stalk_dim(s))
            throw invariant_error("cosheaf: restriction shape mismatch");
          per_facet.push_back(it->second);
        }
        maps_.back().push_back(std::move(per_facet));
      }
    }
    check_functorial();
  }

  const WeightedComplex& base() const { return base_; }

  Index stalk_dim(const Simplex& s) const {
    const auto i = base_.index_of(s);
    if (!i) throw invariant_error("cosheaf: simplex not in base");
    return dims_[s.dim()][*i];
  }
  Index stalk_dim(int k, Index i) const { return dims_[k][i]; }
  const InnerProduct& stalk_gram(int k, Index i) const { return grams_[k][i]; }

  // restriction along the ell-th facet of the i-th k-simplex
  const Matrix& restriction(int k, Index i, int ell) const {
    return maps_[k - 1][i][ell];
  }

  // offset of the i-th k-simplex block inside C_k
  Index block_offset(int k, Index i) const {
    Index off = 0;
    for (Index a = 0; a < i; ++a) off += dims_[k][a];
    return off;
  }

  Index chain_dim(int k) const {
    if (k < 0 || k > base_.max_dim()) return 0;
    Index n = 0;
    for (Index d : dims_[k]) n += d;
    return n;
  }

 private:
  // For every codim-2 incidence ρ ⊂ σ the two facet-paths must agree
  // (functoriality over the face poset); this is equivalent to d∘d = 0.
  void check_functorial(double tol = 1e-12) const {
    for (int k = 2; k <= base_.max_dim(); ++k) {
      for (Index j = 0; j < base_.count(k); ++j) {
        const Simplex& s = base_.simplex(k, j);
        for (int a = 0; a < static_cast<int>(s.v.size()); ++a) {
          for (int b = a + 1; b < static_cast<int>(s.v.size()); ++b) {
            // remove vertex a first, then b (shifted), and vice versa
            const Simplex t1 = s.facet(a);
            const Simplex t2 = s.facet(b);
            const Simplex rho = t1.facet(b - 1);
            const Matrix p1 =
                facet_map(t1, rho) * restriction(k, j, a);
            const Matrix p2 =
                facet_map(t2, rho) * restriction(k, j, b);
            if (max_abs(p1 - p2) > tol)
              throw invariant_error("cosheaf restrictions are not functorial");
          }
        }
      }
    }
  }

  const Matrix& facet_map(const Simplex& s, const Simplex& f) const {
    const auto i = base_.index_of(s);
    for (int ell = 0; ell <= s.dim(); ++ell)
      if (s.facet(ell) == f) return restriction(s.dim(), *i, ell);
    throw invariant_error("cosheaf: not a facet");
  }

  WeightedComplex base_;
  std::vector<std::vector<Index>> dims_;
  std::vector<std::vector<InnerProduct>> grams_;
  // maps_[k-1][i][ell] : F(facet_ell(σ)) <- F(σ) for the i-th k-simplex
  std::vector<std::vector<std::vector<Matrix>>> maps_;
};

// Chain complex of a cosheaf: C_k = ⊕ F(σ) over k-simplices in base order,
// d_k assembled blockwise with the boundary sign rule, W_k block-diagonal
// from the stalk grams.
inline ChainComplexRep cosheaf_assemble(const Cosheaf& f) {
  ChainComplexRep rep;
  const auto& base = f.base();
  for (int k = 0; k <= base.max_dim(); ++k) {
    const Index rows = k >= 1 ? f.chain_dim(k - 1) : 0;
    const Index cols = f.chain_dim(k);
    Matrix d = Matrix::Zero(rows, cols);
    if (k >= 1) {
      for (Index j = 0; j < base.count(k); ++j) {
        const Simplex& s = base.simplex(k, j);
        const Index coff = f.block_offset(k, j);
        for (int ell = 0; ell <= k; ++ell) {
          const auto fi = base.index_of(s.facet(ell));
          const Index roff = f.block_offset(k - 1, *fi);
          d.block(roff, coff, f.stalk_dim(k - 1, *fi), f.stalk_dim(k, j)) +=
              boundary_sign(s, ell) * f.restriction(k, j, ell);
        }
      }
    }
    Matrix w = Matrix::Zero(cols, cols);
    for (Index j = 0; j < base.count(k); ++j) {
      const Index off = f.block_offset(k, j);
      const Index n = f.stalk_dim(k, j);
      w.block(off, off, n, n) = f.stalk_gram(k, j).gram();
    }
    rep.dims.push_back(cols);
    rep.boundary.push_back(std::move(d));
    rep.gram.emplace_back(std::move(w));
  }
  rep.validate();
  return rep;
}

// The constant cosheaf with stalk R^n, identity restrictions and grams.
inline Cosheaf constant_cosheaf(const WeightedComplex& base, Index n = 1) {
  std::map<Simplex, Index> dims;
  std::map<std::pair<Simplex, Simplex>, Matrix> maps;
  for (int k = 0; k <= base.max_dim(); ++k)
    for (Index i = 0; i < base.count(k); ++i) {
      const Simplex& s = base.simplex(k, i);
      dims[s] = n;
      if (k >= 1)
        for (int ell = 0; ell <= k; ++ell)
          maps[{s.facet(ell), s}] = Matrix::Identity(n, n);
    }
  return Cosheaf(base, dims, {}, maps);
}

// Realize a PSD matrix A as the degree-1 Laplacian of a cosheaf on a single
// edge: stalks F(b) = F(ab) = R^n, F(a) = 0, restriction F(ab) -> F(b) is
// the PSD square root of A. Returns the cosheaf; cosheaf_assemble of it has
// full Laplacian A at degree 1.
inline Cosheaf psd_realization(const Matrix& a, const Tolerance& tol = {}) {
  if (a.rows() != a.cols())
    throw invariant_error("psd_realization: matrix must be square");
  const Index n = a.rows();
  const Vector eigs = symmetric_eigenvalues(a);
  const double scale =
      std::max(1.0, eigs.size() ? eigs.cwiseAbs().maxCoeff() : 0.0);
  if (eigs.size() && eigs.minCoeff() < -tol.eig_tol * scale)
    throw invariant_error("psd_realization: matrix is not PSD");
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (a + a.transpose()));
  Vector d = es.eigenvalues().cwiseMax(0.0);
  const Matrix root = es.eigenvectors() *
                      d.cwiseSqrt().asDiagonal() *
                      es.eigenvectors().transpose();

  auto base = WeightedComplex::from_entries(
      {{Simplex{0}, 1.0, 0.0}, {Simplex{1}, 1.0, 0.0}, {Simplex{0, 1}, 1.0, 0.0}});
  std::map<Simplex, Index> dims{
      {Simplex{0}, 0}, {Simplex{1}, n}, {Simplex{0, 1}, n}};
  std::map<std::pair<Simplex, Simplex>, Matrix> maps;
  maps[{Simplex{0}, Simplex{0, 1}}] = Matrix::Zero(0, n);
  maps[{Simplex{1}, Simplex{0, 1}}] = root;
  return Cosheaf(base, dims, {}, maps);
}

}  // namespace perla
