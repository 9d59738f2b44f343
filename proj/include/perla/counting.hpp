#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <vector>

#include "perla/laplacian.hpp"

namespace perla {

// A strictly increasing list of breakpoints. Piecewise-constant data over it
// lives on cells [b_i, b_{i+1}) with the last cell extended to +inf (the
// sublevel family stops changing past the largest birth). Below the first
// breakpoint the sublevel complex is empty; that region is handled by the
// evaluators, not by the cell lookup, which clamps.
struct IntervalGrid {
  std::vector<double> b;

  void validate() const {
    for (std::size_t i = 1; i < b.size(); ++i)
      if (!(b[i - 1] < b[i]))
        throw invariant_error("grid breakpoints must be strictly increasing");
  }

  Index size() const { return static_cast<Index>(b.size()); }

  // max{i : b_i <= x}, clamped into [0, size-1]
  Index cell(double x) const {
    const auto it = std::upper_bound(b.begin(), b.end(), x);
    const Index i = static_cast<Index>(it - b.begin()) - 1;
    return std::max<Index>(0, std::min<Index>(i, size() - 1));
  }

  // max{i : b_i < x}, clamped into [0, size-1]
  Index cell_open(double x) const {
    const auto it = std::lower_bound(b.begin(), b.end(), x);
    const Index i = static_cast<Index>(it - b.begin()) - 1;
    return std::max<Index>(0, std::min<Index>(i, size() - 1));
  }
};

// λ^{kind}_{k,q} as a function of the interval [s, t], tabulated on the
// grid cells: table(i, j) is the value on [b_i, b_{i+1}) x [b_j, b_{j+1}).
// Entries may be +inf (q beyond the dimension of the chain space). Below
// the first breakpoint the sublevel complex is empty and every value is
// +inf; a filtration with no simplices yields an empty grid and the
// constant +inf function.
struct CountingFunction {
  Kind kind = Kind::full;
  int k = 0;
  int q = 1;
  IntervalGrid grid;
  Matrix table;  // size x size; only i <= j is meaningful

  double eval(double s, double t) const {
    if (s > t) throw invariant_error("counting function: s > t");
    if (grid.size() == 0 || s < grid.b.front()) return kInf;
    return table(grid.cell(s), grid.cell(t));
  }

  void validate(const Tolerance& tol = {}) const {
    grid.validate();
    if (table.rows() != grid.size() || table.cols() != grid.size())
      throw invariant_error("counting function: table shape mismatch");
    // up/down kinds are monotone under interval inclusion
    if (kind == Kind::full) return;
    double lam_max = 1.0;
    for (Index i = 0; i < table.rows(); ++i)
      for (Index j = i; j < table.cols(); ++j)
        if (std::isfinite(table(i, j)))
          lam_max = std::max(lam_max, table(i, j));
    const double slack = tol.eig_tol * lam_max;
    for (Index i = 0; i < table.rows(); ++i)
      for (Index j = i; j < table.cols(); ++j) {
        if (i > 0 && table(i, j) > table(i - 1, j) + slack)
          throw invariant_error("counting function not monotone in s");
        if (j + 1 < table.cols() && table(i, j) > table(i, j + 1) + slack)
          throw invariant_error("counting function not monotone in t");
        if (kind == Kind::down && j > i &&
            std::abs(table(i, j) - table(i, i)) > slack &&
            !(std::isinf(table(i, j)) && std::isinf(table(i, i))))
          throw invariant_error("down counting function depends on t");
      }
  }
};

// Persistent spectral counting function of a filtration: for every grid
// cell pair (i, j), λ_q of the chosen persistent Laplacian of
// sublevel(b_i) ⊆ sublevel(b_j).
inline CountingFunction counting_function(const Filtration& f, Kind kind,
                                          int k, int q,
                                          const Tolerance& tol = {}) {
  if (q < 1) throw invariant_error("counting_function: q must be >= 1");
  f.validate();
  CountingFunction out;
  out.kind = kind;
  out.k = k;
  out.q = q;
  out.grid.b = f.breakpoints();
  const Index m = out.grid.size();
  out.table = Matrix::Constant(m, m, kInf);
  if (m == 0) return out;

  std::vector<WeightedComplex> levels(m);
  for (Index i = 0; i < m; ++i) levels[i] = sublevel(f, out.grid.b[i]);

  for (Index i = 0; i < m; ++i) {
    for (Index j = i; j < m; ++j) {
      const PersistentPair pair{assemble(levels[i]), assemble(levels[j]),
                                inclusion(levels[i], levels[j])};
      double value;
      if (kind == Kind::down) {
        value = lambda_q(spectrum(down_laplacian(pair.K, k), tol), q);
      } else {
        const auto lap = persistent_laplacians(pair, k, tol);
        value = lambda_q(
            spectrum(kind == Kind::up ? lap.up : lap.full, tol), q);
      }
      out.table(i, j) = value;
      if (kind == Kind::down) {
        for (Index jj = i; jj < m; ++jj) out.table(i, jj) = value;
        break;
      }
    }
  }
  return out;
}

// Interleaving distance of two sublevel filtrations of the same simplex
// set: the maximum over simplices of the birth difference. Filtrations on
// different simplex sets are not interleaved at any finite epsilon.
inline double filtration_interleaving_distance(const Filtration& f,
                                               const Filtration& g) {
  double d = 0.0;
  Index matched = 0;
  for (int k = 0; k <= f.complex.max_dim(); ++k)
    for (Index i = 0; i < f.complex.count(k); ++i) {
      const auto j = g.complex.index_of(f.complex.simplex(k, i));
      if (!j) return kInf;
      d = std::max(d, std::abs(f.complex.birth(k, i) - g.complex.birth(k, *j)));
      ++matched;
    }
  if (matched != g.complex.total_count()) return kInf;
  return d;
}

namespace detail {

// Evaluation of a counting function on a merged grid: idx[i] is the index
// of the owning cell of merged breakpoint i in the function's own grid.
// Merged cells before the function's first breakpoint evaluate the empty
// sublevel complex, i.e. +inf.
struct MergedView {
  const Matrix* table;
  std::vector<Index> idx;
  Index first_valid = 0;

  double at(Index i, Index j) const {
    if (i < first_valid) return kInf;
    return (*table)(idx[i], idx[j]);
  }
};

}  // namespace detail

// Exact interleaving distance of two piecewise-constant counting functions:
// the inf of the eps for which f(I^eps) >= g(I) and g(I^eps) >= f(I) for
// every closed interval I, where I^eps thickens I by eps on both sides.
// Candidates are 0 and all pairwise breakpoint differences and
// half-differences; feasibility is constant between consecutive candidates,
// so scanning candidates plus one interior representative per gap is exact.
class FunctionInterleaving {
 public:
  // slack relaxes every dominance comparison to F >= G - slack, absorbing
  // the numerical fuzz of computed eigenvalues; the exact distance is
  // slack = 0
  FunctionInterleaving(const CountingFunction& f, const CountingFunction& g,
                       double slack = 0.0)
      : slack_(slack) {
    if (f.kind != g.kind || f.k != g.k || f.q != g.q)
      throw invariant_error(
          "function interleaving: incompatible counting functions");
    // the binary search below is valid only when feasibility is monotone in
    // eps, which requires the tables to actually grow under inclusion; a
    // fuzz-level violation would otherwise be amplified into a wrong answer
    monotone_ = f.kind != Kind::full && table_monotone(f.table) &&
                table_monotone(g.table);
    std::set<double> merged(f.grid.b.begin(), f.grid.b.end());
    merged.insert(g.grid.b.begin(), g.grid.b.end());
    // a sentinel cell ahead of every real breakpoint carries the region
    // where both sublevel complexes are empty and both functions are +inf
    if (!merged.empty()) merged.insert(*merged.begin() - 1.0);
    grid_.b.assign(merged.begin(), merged.end());
    m_ = grid_.size();
    fv_ = view(f);
    gv_ = view(g);
  }

  double distance() const {
    // two empty-grid functions are identically +inf
    if (m_ == 0) return 0.0;
    // Critical values of eps: every cell index used by the feasibility
    // check is of the form cell(b_a ± eps) or cell(b_a ± 2 eps), so the
    // outcome can only change when eps crosses a breakpoint difference or
    // half-difference. Feasibility is constant on the open intervals in
    // between.
    std::vector<double> cand{0.0};
    for (Index a = 0; a < m_; ++a)
      for (Index b = a + 1; b < m_; ++b) {
        const double d = grid_.b[b] - grid_.b[a];
        cand.push_back(d);
        cand.push_back(0.5 * d);
      }
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

    if (monotone_) {
      // feasibility is monotone: binary search the first feasible
      // candidate, then check the open gap just before it
      Index lo = 0, hi = static_cast<Index>(cand.size());
      while (lo < hi) {
        const Index mid = (lo + hi) / 2;
        if (feasible(cand[mid]))
          hi = mid;
        else
          lo = mid + 1;
      }
      if (lo == static_cast<Index>(cand.size())) {
        // maybe feasible only beyond the last candidate
        return feasible(cand.back() + 1.0) ? cand.back() : kInf;
      }
      if (lo > 0 && feasible(0.5 * (cand[lo - 1] + cand[lo])))
        return cand[lo - 1];
      return cand[lo];
    }
    for (std::size_t i = 0; i < cand.size(); ++i) {
      if (feasible(cand[i])) return cand[i];
      const double next =
          (i + 1 < cand.size()) ? 0.5 * (cand[i] + cand[i + 1])
                                : cand[i] + 1.0;
      if (feasible(next)) return cand[i];  // inf over an open interval
    }
    return kInf;
  }

  bool feasible(double eps) const {
    return dominates(fv_, gv_, eps) && dominates(gv_, fv_, eps);
  }

 private:
  // value grows (weakly) as the interval grows: smaller i or larger j
  static bool table_monotone(const Matrix& t) {
    const Index m = t.rows();
    for (Index i = 0; i < m; ++i)
      for (Index j = i; j < m; ++j) {
        if (i > 0 && !(t(i - 1, j) >= t(i, j))) return false;
        if (j + 1 < m && !(t(i, j + 1) >= t(i, j))) return false;
      }
    return true;
  }

  detail::MergedView view(const CountingFunction& c) const {
    detail::MergedView v;
    v.table = &c.table;
    v.idx.assign(m_, 0);
    if (c.grid.size() == 0) {
      v.first_valid = m_;  // the whole function is +inf
      return v;
    }
    for (Index i = 0; i < m_; ++i) {
      if (grid_.b[i] < c.grid.b.front())
        v.first_valid = i + 1;
      else
        v.idx[i] = c.grid.cell(grid_.b[i]);
    }
    return v;
  }

  // true iff F(I^eps) >= G(I) for every closed interval I
  bool dominates(const detail::MergedView& fv, const detail::MergedView& gv,
                 double eps) const {
    const auto& b = grid_.b;
    // row suffix minima of fv for box queries: minf(l, r) = min over
    // [r..m) of fv.at(l, .)
    std::vector<double> minf(m_ * m_, kInf);
    for (Index l = 0; l < m_; ++l) {
      double acc = kInf;
      for (Index r = m_ - 1; r >= l; --r) {
        acc = std::min(acc, fv.at(l, r));
        minf[l * m_ + r] = acc;
      }
    }
    auto box_min = [&](Index l0, Index l1, Index r0, Index r1) {
      // min of fv over l in [l0,l1], r in [max(l,r0), r1]; attainable
      // pairs always satisfy l <= r
      double best = kInf;
      for (Index l = l0; l <= l1; ++l) {
        const Index rlo = std::max(l, r0);
        if (rlo > r1) continue;
        const double with_tail = minf[l * m_ + rlo];
        if (r1 == m_ - 1) {
          best = std::min(best, with_tail);
        } else {
          // subtract the tail beyond r1 by direct scan (rows are short)
          double acc = kInf;
          for (Index r = rlo; r <= r1; ++r)
            acc = std::min(acc, fv.at(l, r));
          best = std::min(best, acc);
        }
      }
      return best;
    };

    for (Index i = 0; i < m_; ++i) {
      for (Index j = i; j < m_; ++j) {
        const double gij = gv.at(i, j) - slack_;
        if (gij <= 0.0) continue;  // PSD spectra: always dominated
        if (i < j) {
          const Index l0 = grid_.cell(b[i] - eps);
          const Index l1 =
              (i + 1 < m_) ? grid_.cell_open(b[i + 1] - eps) : m_ - 1;
          const Index r0 = grid_.cell(b[j] + eps);
          const Index r1 =
              (j + 1 < m_) ? grid_.cell_open(b[j + 1] + eps) : m_ - 1;
          if (box_min(l0, l1, r0, r1) < gij) return false;
        } else {
          // s and t share the cell: subdivide s at the shift images of
          // breakpoints; on each piece the index pair is constant. The first
          // cell extends to -inf under clamped evaluation, so its
          // subdivision starts below every breakline b_a - eps.
          const double lo = (i == 0) ? b[0] - eps - 1.0 : b[i];
          const double hi = (i + 1 < m_) ? b[i + 1] : kInf;
          std::set<double> cuts{lo};
          for (Index a = 0; a < m_; ++a) {
            for (const double x : {b[a] + eps, b[a] - eps})
              if (x > lo && x < hi) cuts.insert(x);
          }
          const Index r1 =
              (i + 1 < m_) ? grid_.cell_open(b[i + 1] + eps) : m_ - 1;
          for (const double u : cuts) {
            const Index l = grid_.cell(u - eps);
            const Index r0 = grid_.cell(u + eps);
            if (box_min(l, l, r0, r1) < gij) return false;
          }
        }
      }
    }
    return true;
  }

  double slack_ = 0.0;
  bool monotone_ = false;
  IntervalGrid grid_;
  Index m_ = 0;
  detail::MergedView fv_, gv_;
};

inline double function_interleaving_distance(const CountingFunction& f,
                                             const CountingFunction& g,
                                             double slack = 0.0) {
  return FunctionInterleaving(f, g, slack).distance();
}

// Three nested chain complexes with the two step inclusions; the composite
// inclusion may be supplied directly (it is checked against the
// composition) or derived.
struct FiltrationTriple {
  ChainComplexRep c1, c2, c3;
  InclusionRep j12, j23;
  std::optional<InclusionRep> j13_direct;

  InclusionRep j13() const {
    if (j13_direct) return *j13_direct;
    InclusionRep out;
    const int degs = static_cast<int>(
        std::max(j12.maps.size(), j23.maps.size()));
    for (int k = 0; k < degs; ++k)
      out.maps.push_back(j23.j(k, c2, c3) * j12.j(k, c1, c2));
    return out;
  }

  void validate(double tol = 1e-12) const {
    c1.validate(tol);
    c2.validate(tol);
    c3.validate(tol);
    j12.validate(c1, c2, tol);
    j23.validate(c2, c3, tol);
    if (j13_direct) {
      j13_direct->validate(c1, c3, tol);
      for (int k = 0; k <= c1.max_degree(); ++k) {
        const Matrix composed = j23.j(k, c2, c3) * j12.j(k, c1, c2);
        if (max_abs(composed - j13_direct->j(k, c1, c3)) > tol)
          throw invariant_error("triple: direct 1->3 inclusion does not "
                                "match the composition");
      }
    }
  }

  PersistentPair pair12() const { return {c1, c2, j12}; }
  PersistentPair pair23() const { return {c2, c3, j23}; }
  PersistentPair pair13() const { return {c1, c3, j13()}; }
};

// Triple of nested weighted complexes, assembled with derived inclusions.
inline FiltrationTriple nested_triple(const WeightedComplex& p1,
                                      const WeightedComplex& p2,
                                      const WeightedComplex& p3) {
  FiltrationTriple t;
  t.c1 = assemble(p1);
  t.c2 = assemble(p2);
  t.c3 = assemble(p3);
  t.j12 = inclusion(p1, p2);
  t.j23 = inclusion(p2, p3);
  return t;
}

// Triple of sublevel complexes of a filtration at thresholds t1<=t2<=t3.
inline FiltrationTriple sublevel_triple(const Filtration& f, double t1,
                                        double t2, double t3) {
  if (!(t1 <= t2 && t2 <= t3))
    throw invariant_error("sublevel_triple: thresholds must be ordered");
  const WeightedComplex k1 = sublevel(f, t1);
  const WeightedComplex k2 = sublevel(f, t2);
  const WeightedComplex k3 = sublevel(f, t3);
  FiltrationTriple t;
  t.c1 = assemble(k1);
  t.c2 = assemble(k2);
  t.c3 = assemble(k3);
  t.j12 = inclusion(k1, k2);
  t.j23 = inclusion(k2, k3);
  return t;
}

}  // namespace perla
