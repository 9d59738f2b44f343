#pragma once

#include <array>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "perla/random_gen.hpp"

namespace perla {

namespace detail {

// a <= b with +inf maximal and a symmetric slack for finite comparisons
inline bool leq_with_slack(double a, double b, double slack) {
  if (std::isinf(b)) return true;
  if (std::isinf(a)) return false;
  return a <= b + slack;
}

inline bool eq_with_slack(double a, double b, double slack) {
  if (std::isinf(a) || std::isinf(b)) return std::isinf(a) && std::isinf(b);
  return std::abs(a - b) <= slack;
}

inline std::string describe(const char* rel, int q, double a, double b) {
  std::ostringstream os;
  os << rel << " at q=" << q << ": " << a << " vs " << b;
  return os.str();
}

}  // namespace detail

// Spectra of the three persistent Laplacian kinds over all three pairs of
// a nested triple.
struct TripleSpectra {
  Spectrum up12, up13, up23;
  Spectrum down12, down13, down23;
  Spectrum full12, full13, full23;
};

inline TripleSpectra triple_spectra(const FiltrationTriple& t, int k,
                                    const Tolerance& tol = {}) {
  TripleSpectra s;
  const auto fill = [&](const PersistentPair& p, Spectrum& up, Spectrum& down,
                        Spectrum& full) {
    const PersistentLaplacians lap = persistent_laplacians(p, k, tol);
    up = spectrum(lap.up, tol);
    down = spectrum(lap.down, tol);
    full = spectrum(lap.full, tol);
  };
  fill(t.pair12(), s.up12, s.down12, s.full12);
  fill(t.pair13(), s.up13, s.down13, s.full13);
  fill(t.pair23(), s.up23, s.down23, s.full23);
  return s;
}

// Result of checking the five guaranteed monotonicity relations on a
// nested triple, plus the observational full-monotonicity flag.
//
// Guaranteed for every q (with +inf maximal):
//   down:  λ^{1,2} = λ^{1,3}   and   λ^{2,3} <= λ^{1,3}
//   up:    λ^{1,2} <= λ^{1,3}  and   λ^{2,3} <= λ^{1,3}
//   full:  λ^{1,2} <= λ^{1,3}
// Not guaranteed (flagged, never failed): full λ^{2,3} <= λ^{1,3}.
struct MonotonicityReport {
  int k = 0;
  int qmax = 0;
  bool ok = true;          // the five guaranteed relations all hold
  bool full_flag = false;  // full monotonicity violated somewhere
  std::vector<int> full_violation_qs;
  std::vector<std::string> violations;  // guaranteed-relation failures
  TripleSpectra spectra;
};

inline MonotonicityReport monotonicity_audit(const FiltrationTriple& t, int k,
                                             int qmax,
                                             const Tolerance& tol = {}) {
  if (qmax < 1) throw invariant_error("monotonicity_audit: qmax must be >= 1");
  MonotonicityReport r;
  r.k = k;
  r.qmax = qmax;
  r.spectra = triple_spectra(t, k, tol);
  const auto& s = r.spectra;

  double lam_max = 1.0;
  for (const Spectrum* sp :
       {&s.up12, &s.up13, &s.up23, &s.down12, &s.down13, &s.down23, &s.full12,
        &s.full13, &s.full23})
    for (double v : sp->eigenvalues) lam_max = std::max(lam_max, v);
  const double slack = tol.eig_tol * lam_max;

  for (int q = 1; q <= qmax; ++q) {
    const double d12 = lambda_q(s.down12, q), d13 = lambda_q(s.down13, q),
                 d23 = lambda_q(s.down23, q);
    const double u12 = lambda_q(s.up12, q), u13 = lambda_q(s.up13, q),
                 u23 = lambda_q(s.up23, q);
    const double f12 = lambda_q(s.full12, q), f13 = lambda_q(s.full13, q),
                 f23 = lambda_q(s.full23, q);
    if (!detail::eq_with_slack(d12, d13, slack)) {
      r.ok = false;
      r.violations.push_back(detail::describe("down 1,2 = 1,3", q, d12, d13));
    }
    if (!detail::leq_with_slack(d23, d13, slack)) {
      r.ok = false;
      r.violations.push_back(detail::describe("down 2,3 <= 1,3", q, d23, d13));
    }
    if (!detail::leq_with_slack(u12, u13, slack)) {
      r.ok = false;
      r.violations.push_back(detail::describe("up 1,2 <= 1,3", q, u12, u13));
    }
    if (!detail::leq_with_slack(u23, u13, slack)) {
      r.ok = false;
      r.violations.push_back(detail::describe("up 2,3 <= 1,3", q, u23, u13));
    }
    if (!detail::leq_with_slack(f12, f13, slack)) {
      r.ok = false;
      r.violations.push_back(detail::describe("full 1,2 <= 1,3", q, f12, f13));
    }
    if (!detail::leq_with_slack(f23, f13, slack)) {
      r.full_flag = true;
      r.full_violation_qs.push_back(q);
    }
  }
  return r;
}

// Sufficient condition for full monotonicity of the triple at degree k:
// the W-orthogonal projection of im d^{2,3}_{k+1} onto C^1_k lies in
// ker d^1_k. The projection is the adjoint of the isometric inclusion,
// p = (W^1)^{-1} J12^T W^2. True implies no full-monotonicity flag; false
// decides nothing.
inline bool full_monotonicity_condition(const FiltrationTriple& t, int k,
                                        const Tolerance& tol = {}) {
  const PersistentPair p23 = t.pair23();
  const Matrix z = persistent_subspace(p23, k, tol);
  if (z.cols() == 0) return true;  // image is zero
  const Matrix b = persistent_boundary(p23, k, z);  // into C^2_k coordinates
  if (t.c1.dim(k) == 0)
    return max_abs(b) <= tol.eig_tol;  // projection is zero map
  const Matrix j12 = t.j12.j(k, t.c1, t.c2);
  const Matrix proj =
      t.c1.W(k).solve(j12.transpose() * (t.c2.W(k).gram() * b));
  const Matrix d1 = t.c1.d(k);
  if (d1.rows() == 0) return true;  // ker d^1_k is everything
  const double residual = max_abs(d1 * proj);
  const double scale = std::max(1.0, max_abs(d1) * std::max(1.0, max_abs(proj)));
  return residual <= tol.eig_tol * scale;
}

// Stability audit of two filtrations: the up/down persistent spectral
// counting functions must be interleaved at the filtration interleaving
// distance; the full kind carries no such guarantee and is only reported.
struct StabilityReport {
  int k = 0;
  int qmax = 0;
  double filtration_distance = 0.0;
  struct Entry {
    Kind kind = Kind::full;
    int q = 1;
    double function_distance = 0.0;
    bool bounded = true;  // function_distance <= filtration_distance + slack
  };
  std::vector<Entry> entries;
  bool ok = true;           // all up/down entries bounded (guaranteed)
  bool full_within = true;  // all full entries bounded (informative)
};

inline StabilityReport stability_audit(const Filtration& f,
                                       const Filtration& g, int k, int qmax,
                                       const Tolerance& tol = {}) {
  if (qmax < 1) throw invariant_error("stability_audit: qmax must be >= 1");
  StabilityReport r;
  r.k = k;
  r.qmax = qmax;
  r.filtration_distance = filtration_interleaving_distance(f, g);
  const double slack = tol.eig_tol * std::max(1.0, r.filtration_distance);
  const auto table_scale = [](const CountingFunction& c, double acc) {
    for (Index i = 0; i < c.table.rows(); ++i)
      for (Index j = i; j < c.table.cols(); ++j)
        if (std::isfinite(c.table(i, j))) acc = std::max(acc, c.table(i, j));
    return acc;
  };
  for (Kind kind : {Kind::up, Kind::down, Kind::full}) {
    for (int q = 1; q <= qmax; ++q) {
      StabilityReport::Entry e;
      e.kind = kind;
      e.q = q;
      const CountingFunction cf = counting_function(f, kind, k, q, tol);
      const CountingFunction cg = counting_function(g, kind, k, q, tol);
      // compare eigenvalue tables up to their numerical resolution: the
      // interleaving bound holds for the exact spectra
      const double value_slack =
          tol.eig_tol * table_scale(cg, table_scale(cf, 1.0));
      e.function_distance = function_interleaving_distance(cf, cg, value_slack);
      e.bounded =
          detail::leq_with_slack(e.function_distance, r.filtration_distance,
                                 slack);
      if (!e.bounded) {
        if (kind == Kind::full)
          r.full_within = false;
        else
          r.ok = false;
      }
      r.entries.push_back(e);
    }
  }
  return r;
}

// One-parameter family probing the boundary of full monotonicity: three
// abstract chain complexes with degree dimensions (1,1,0), (1,2,0), and
// (1,2,1), boundaries d1 = [1], d1 = [1 1], and d2 = [r, -r]^T, identity
// inner products. The persistent Laplacians at degree 1 are [1] for the
// (1,3) pair and a 2x2 matrix with eigenvalues {2r^2, 2} for the (2,3)
// pair, so full monotonicity holds exactly when 2r^2 <= 1, i.e.
// |r| <= 1/sqrt(2); the sufficient condition is false for every r != 0.
struct ParametricRReport {
  double r = 0.0;
  bool condition = false;
  bool monotone = true;  // full-monotonicity flag absent
  Spectrum s13, s23;
  FiltrationTriple triple;
};

inline FiltrationTriple parametric_r_triple(double r) {
  FiltrationTriple t;
  t.c1.dims = {1, 1};
  t.c1.boundary = {Matrix::Zero(0, 1), Matrix::Ones(1, 1)};
  t.c1.gram = {InnerProduct::identity(1), InnerProduct::identity(1)};
  t.c2.dims = {1, 2};
  t.c2.boundary = {Matrix::Zero(0, 1), Matrix::Ones(1, 2)};
  t.c2.gram = {InnerProduct::identity(1), InnerProduct::identity(2)};
  t.c3.dims = {1, 2, 1};
  Matrix d2(2, 1);
  d2 << r, -r;
  t.c3.boundary = {Matrix::Zero(0, 1), Matrix::Ones(1, 2), d2};
  t.c3.gram = {InnerProduct::identity(1), InnerProduct::identity(2),
               InnerProduct::identity(1)};
  Matrix j1(2, 1);
  j1 << 1, 0;
  t.j12.maps = {Matrix::Identity(1, 1), j1};
  t.j23.maps = {Matrix::Identity(1, 1), Matrix::Identity(2, 2),
                Matrix::Zero(1, 0)};
  t.validate();
  return t;
}

inline ParametricRReport parametric_r_example(double r,
                                              const Tolerance& tol = {}) {
  ParametricRReport rep;
  rep.r = r;
  rep.triple = parametric_r_triple(r);
  rep.condition = full_monotonicity_condition(rep.triple, 1, tol);
  const MonotonicityReport mono = monotonicity_audit(rep.triple, 1, 3, tol);
  if (!mono.ok)
    throw invariant_error("parametric family: guaranteed relation failed");
  rep.monotone = !mono.full_flag;
  rep.s13 = mono.spectra.full13;
  rep.s23 = mono.spectra.full23;
  return rep;
}

// Randomized search for full-monotonicity violations. Generates random
// filtrations, audits sublevel triples at random threshold cuts, and
// collects the flagged instances. A violation of one of the guaranteed
// relations is never collected: it is reported as fatal, since it can only
// mean an implementation bug.
struct SearchInstance {
  Filtration filtration;
  double t1 = 0, t2 = 0, t3 = 0;
  int k = 0;
  std::vector<int> violation_qs;
};

struct SearchParams {
  std::uint64_t seed = 0;
  int budget = 100;
  int k = 1;
  int qmax = 4;
  RandomComplexParams complex_params;
};

struct SearchResult {
  std::vector<SearchInstance> flagged;
  int trials = 0;
  bool fatal = false;
  std::string fatal_message;
};

// Audit the sublevel triple of one filtration at the given thresholds and
// fold the outcome into a search result.
inline void search_audit_instance(const Filtration& f, double t1, double t2,
                                  double t3, const SearchParams& p,
                                  SearchResult& out, const Tolerance& tol) {
  const FiltrationTriple triple = sublevel_triple(f, t1, t2, t3);
  const MonotonicityReport rep = monotonicity_audit(triple, p.k, p.qmax, tol);
  ++out.trials;
  if (!rep.ok) {
    out.fatal = true;
    out.fatal_message = rep.violations.front();
    return;
  }
  if (rep.full_flag)
    out.flagged.push_back({f, t1, t2, t3, p.k, rep.full_violation_qs});
}

inline SearchResult counterexample_search(
    const SearchParams& p, const std::vector<SearchInstance>& planted = {},
    const Tolerance& tol = {}) {
  SearchResult out;
  for (const SearchInstance& inst : planted) {
    search_audit_instance(inst.filtration, inst.t1, inst.t2, inst.t3, p, out,
                          tol);
    if (out.fatal) return out;
  }
  std::mt19937_64 rng(p.seed);
  for (int trial = 0; trial < p.budget; ++trial) {
    const Filtration f = random_filtration(rng, p.complex_params);
    const std::vector<double> bp = f.breakpoints();
    if (bp.empty()) continue;
    std::uniform_int_distribution<std::size_t> pick(0, bp.size() - 1);
    std::array<double, 3> ts{bp[pick(rng)], bp[pick(rng)], bp[pick(rng)]};
    std::sort(ts.begin(), ts.end());
    search_audit_instance(f, ts[0], ts[1], ts[2], p, out, tol);
    if (out.fatal) return out;
  }
  return out;
}

}  // namespace perla
