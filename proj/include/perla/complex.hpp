#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "perla/linalg.hpp"
#include "perla/simplex.hpp"
#include "perla/types.hpp"

namespace perla {

// A finite weighted simplicial complex. Simplices are stored per degree in
// lexicographic order — that order is the chain basis everywhere. Each
// simplex carries a positive weight and a birth time (0 unless the complex
// is used as a filtration).
class WeightedComplex {
 public:
  struct Entry {
    Simplex s;
    double weight = 1.0;
    double birth = 0.0;
  };

  WeightedComplex() = default;

  static WeightedComplex from_entries(std::vector<Entry> entries) {
    WeightedComplex c;
    for (auto& e : entries) {
      e.s.validate();
      const int k = e.s.dim();
      if (k >= static_cast<int>(c.levels_.size())) c.levels_.resize(k + 1);
      c.levels_[k].push_back(std::move(e));
    }
    for (auto& level : c.levels_) {
      std::sort(level.begin(), level.end(),
                [](const Entry& a, const Entry& b) { return a.s < b.s; });
      for (std::size_t i = 1; i < level.size(); ++i)
        if (level[i - 1].s == level[i].s)
          throw invariant_error("duplicate simplex in complex");
    }
    c.validate();
    return c;
  }

  int max_dim() const { return static_cast<int>(levels_.size()) - 1; }

  Index count(int k) const {
    if (k < 0 || k > max_dim()) return 0;
    return static_cast<Index>(levels_[k].size());
  }

  Index total_count() const {
    Index n = 0;
    for (int k = 0; k <= max_dim(); ++k) n += count(k);
    return n;
  }

  bool empty() const { return total_count() == 0; }

  const Entry& entry(int k, Index i) const { return levels_[k][i]; }
  const Simplex& simplex(int k, Index i) const { return levels_[k][i].s; }
  double weight(int k, Index i) const { return levels_[k][i].weight; }
  double birth(int k, Index i) const { return levels_[k][i].birth; }

  std::optional<Index> index_of(const Simplex& s) const {
    const int k = s.dim();
    if (k < 0 || k > max_dim()) return std::nullopt;
    const auto& level = levels_[k];
    auto it = std::lower_bound(
        level.begin(), level.end(), s,
        [](const Entry& e, const Simplex& q) { return e.s < q; });
    if (it == level.end() || !(it->s == s)) return std::nullopt;
    return static_cast<Index>(it - level.begin());
  }

  std::vector<Entry> all_entries() const {
    std::vector<Entry> out;
    for (const auto& level : levels_)
      out.insert(out.end(), level.begin(), level.end());
    return out;
  }

  // face closure, sortedness (by construction), positive weights
  void validate() const {
    for (int k = 0; k <= max_dim(); ++k) {
      for (const auto& e : levels_[k]) {
        if (!(e.weight > 0.0))
          throw invariant_error("simplex weights must be positive");
        if (k > 0)
          for (int ell = 0; ell <= k; ++ell)
            if (!index_of(e.s.facet(ell)))
              throw invariant_error("complex is not face-closed");
      }
    }
    if (max_dim() >= 0 && levels_.back().empty())
      throw invariant_error("top degree of complex is empty");
  }

 private:
  std::vector<std::vector<Entry>> levels_;
};

// Boundary matrix d_k of a complex: rows are (k-1)-simplices, columns are
// k-simplices, both in lex order. k = 0 gives the 0 x n_0 map to the zero
// space; a degree with no k-simplices gives an n_{k-1} x 0 matrix.
inline Matrix boundary_matrix(const WeightedComplex& c, int k) {
  if (k < 0) throw invariant_error("boundary_matrix: negative degree");
  const Index rows = k >= 1 ? c.count(k - 1) : 0;
  const Index cols = c.count(k);
  Matrix d = Matrix::Zero(rows, cols);
  if (k == 0) return d;
  for (Index j = 0; j < cols; ++j) {
    const Simplex& s = c.simplex(k, j);
    for (int ell = 0; ell <= k; ++ell) {
      const auto i = c.index_of(s.facet(ell));
      if (!i) throw invariant_error("boundary_matrix: missing facet");
      d(*i, j) += boundary_sign(s, ell);
    }
  }
  return d;
}

// A chain complex in matrix form: per-degree dimensions, boundary maps
// d_k : C_k -> C_{k-1} and gram matrices. Degenerate degrees are 0-dim
// spaces with empty matrices, never skipped.
struct ChainComplexRep {
  std::vector<Index> dims;        // dims[k] = dim C_k
  std::vector<Matrix> boundary;   // boundary[k] : dims[k-1] x dims[k]
  std::vector<InnerProduct> gram; // gram[k] on C_k

  int max_degree() const { return static_cast<int>(dims.size()) - 1; }

  Index dim(int k) const {
    return (k >= 0 && k <= max_degree()) ? dims[k] : 0;
  }

  Matrix d(int k) const {
    if (k >= 0 && k <= max_degree()) return boundary[k];
    return Matrix::Zero(dim(k - 1), dim(k));
  }

  const InnerProduct& W(int k) const {
    if (k >= 0 && k <= max_degree()) return gram[k];
    static const InnerProduct empty;
    return empty;
  }

  void validate(double tol = 1e-12) const {
    if (boundary.size() != dims.size() || gram.size() != dims.size())
      throw invariant_error("chain complex: ragged representation");
    for (int k = 0; k <= max_degree(); ++k) {
      const Index rows = k >= 1 ? dims[k - 1] : 0;
      if (boundary[k].rows() != rows || boundary[k].cols() != dims[k])
        throw invariant_error("chain complex: boundary shape mismatch");
      if (boundary[k].size() && !boundary[k].allFinite())
        throw invariant_error("chain complex: non-finite boundary");
      if (gram[k].dim() != dims[k])
        throw invariant_error("chain complex: gram dimension mismatch");
      if (k >= 2) {
        const Matrix dd = boundary[k - 1] * boundary[k];
        if (max_abs(dd) > tol)
          throw invariant_error("chain complex: d∘d is not zero");
      }
    }
  }
};

// Assemble the chain complex of a weighted complex: lex bases, boundary
// matrices with the (-1)^ell sign rule, W_k = diag(weights) unless a full
// SPD gram is supplied for that degree.
inline ChainComplexRep assemble(
    const WeightedComplex& c,
    const std::map<int, Matrix>& gram_override = {}) {
  ChainComplexRep rep;
  const int top = c.max_dim();
  for (int k = 0; k <= top; ++k) {
    rep.dims.push_back(c.count(k));
    rep.boundary.push_back(boundary_matrix(c, k));
    auto it = gram_override.find(k);
    if (it != gram_override.end()) {
      if (it->second.rows() != c.count(k))
        throw invariant_error("assemble: gram override dimension mismatch");
      rep.gram.emplace_back(it->second);
    } else {
      Vector w(c.count(k));
      for (Index i = 0; i < c.count(k); ++i) w[i] = c.weight(k, i);
      rep.gram.push_back(InnerProduct::diagonal(w));
    }
  }
  rep.validate();
  return rep;
}

// A filtration: a final complex whose births are monotone under the face
// relation. Sublevel complexes are taken at birth <= t.
struct Filtration {
  WeightedComplex complex;

  void validate() const {
    complex.validate();
    for (int k = 1; k <= complex.max_dim(); ++k)
      for (Index i = 0; i < complex.count(k); ++i) {
        const auto& e = complex.entry(k, i);
        for (int ell = 0; ell <= k; ++ell) {
          const auto f = complex.index_of(e.s.facet(ell));
          if (complex.birth(k - 1, *f) > e.birth)
            throw invariant_error("filtration births are not monotone");
        }
      }
  }

  // sorted distinct birth values
  std::vector<double> breakpoints() const {
    std::set<double> b;
    for (int k = 0; k <= complex.max_dim(); ++k)
      for (Index i = 0; i < complex.count(k); ++i)
        b.insert(complex.birth(k, i));
    return {b.begin(), b.end()};
  }

  double min_birth() const {
    auto b = breakpoints();
    if (b.empty()) throw invariant_error("empty filtration has no births");
    return b.front();
  }
};

// Sublevel complex at time t: all simplices with birth <= t. For t below
// the earliest birth this is the empty complex.
inline WeightedComplex sublevel(const Filtration& f, double t) {
  std::vector<WeightedComplex::Entry> kept;
  for (int k = 0; k <= f.complex.max_dim(); ++k)
    for (Index i = 0; i < f.complex.count(k); ++i)
      if (f.complex.birth(k, i) <= t) kept.push_back(f.complex.entry(k, i));
  return WeightedComplex::from_entries(std::move(kept));
}

// The inclusion of a subcomplex K ⊆ L as per-degree 0/1 column-selection
// matrices J_k : C_k^K -> C_k^L. Requires every K-simplex to appear in L
// with exactly equal weight.
struct InclusionRep {
  std::vector<Matrix> maps;  // maps[k] : dim_L(k) x dim_K(k)

  Matrix j(int k, const ChainComplexRep& K, const ChainComplexRep& L) const {
    if (k >= 0 && k < static_cast<int>(maps.size())) return maps[k];
    return Matrix::Zero(L.dim(k), K.dim(k));
  }

  // chain map, isometry and injectivity checks
  void validate(const ChainComplexRep& K, const ChainComplexRep& L,
                double tol = 1e-12) const {
    for (int k = 0; k <= K.max_degree(); ++k) {
      const Matrix jk = j(k, K, L);
      if (jk.rows() != L.dim(k) || jk.cols() != K.dim(k))
        throw invariant_error("inclusion: map shape mismatch");
      if (k >= 1) {
        const Matrix lhs = j(k - 1, K, L) * K.d(k);
        const Matrix rhs = L.d(k) * jk;
        if (max_abs(lhs - rhs) > tol)
          throw invariant_error("inclusion is not a chain map");
      }
      const Matrix iso =
          jk.transpose() * L.W(k).gram() * jk - K.W(k).gram();
      if (max_abs(iso) > tol)
        throw invariant_error("inclusion is not an isometry");
      if (matrix_rank(jk) != K.dim(k))
        throw invariant_error("inclusion is not injective");
    }
  }
};

inline InclusionRep inclusion(const WeightedComplex& K,
                              const WeightedComplex& L) {
  InclusionRep rep;
  for (int k = 0; k <= K.max_dim(); ++k) {
    Matrix jk = Matrix::Zero(L.count(k), K.count(k));
    for (Index i = 0; i < K.count(k); ++i) {
      const auto pos = L.index_of(K.simplex(k, i));
      if (!pos) throw invariant_error("inclusion: K is not a subcomplex of L");
      if (L.weight(k, *pos) != K.weight(k, i))
        throw invariant_error("inclusion: weights differ on a shared simplex");
      jk(*pos, i) = 1.0;
    }
    rep.maps.push_back(std::move(jk));
  }
  return rep;
}

}  // namespace perla
