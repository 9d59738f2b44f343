#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "perla/counting.hpp"

namespace perla {

// Random weighted complexes and filtrations for property tests and
// counterexample search: Erdős–Rényi flag complexes up to dimension 2,
// log-uniform weights, uniform births monotonized along the face relation.
struct RandomComplexParams {
  int n_vertices = 6;
  double edge_prob = 0.5;
  double triangle_prob = 0.7;  // kept fraction of flag triangles
  bool random_weights = true;  // log-uniform in [1/4, 4]; else all 1
  double birth_min = 0.0;
  double birth_max = 1.0;

  void validate() const {
    if (n_vertices < 1)
      throw invariant_error("random complex: need at least one vertex");
    if (edge_prob < 0 || edge_prob > 1 || triangle_prob < 0 ||
        triangle_prob > 1)
      throw invariant_error("random complex: probabilities must be in [0,1]");
    if (!(birth_min <= birth_max))
      throw invariant_error("random complex: birth range is empty");
  }
};

namespace detail {

inline double random_weight(std::mt19937_64& rng, bool random) {
  if (!random) return 1.0;
  std::uniform_real_distribution<double> u(std::log(0.25), std::log(4.0));
  return std::exp(u(rng));
}

}  // namespace detail

// Flag complex of an Erdős–Rényi graph, truncated to dimension 2, with a
// random fraction of the flag triangles kept. Births are uniform in the
// given range and then face-monotonized by propagating maxima upward, so
// the result is always a valid filtration.
inline Filtration random_filtration(std::mt19937_64& rng,
                                    const RandomComplexParams& p = {}) {
  p.validate();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> birth(p.birth_min, p.birth_max);
  const int n = p.n_vertices;

  std::vector<WeightedComplex::Entry> entries;
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (int a = 0; a < n; ++a)
    entries.push_back({Simplex{{a}}, detail::random_weight(rng, p.random_weights),
                       birth(rng)});
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (unit(rng) < p.edge_prob) {
        adj[a][b] = true;
        entries.push_back({Simplex{{a, b}},
                           detail::random_weight(rng, p.random_weights),
                           birth(rng)});
      }
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c)
        if (adj[a][b] && adj[a][c] && adj[b][c] &&
            unit(rng) < p.triangle_prob)
          entries.push_back({Simplex{{a, b, c}},
                             detail::random_weight(rng, p.random_weights),
                             birth(rng)});

  WeightedComplex c = WeightedComplex::from_entries(entries);
  // monotonize births upward degree by degree
  std::vector<WeightedComplex::Entry> fixed = c.all_entries();
  std::map<Simplex, double> final_birth;
  for (auto& e : fixed) {
    double b = e.birth;
    if (e.s.dim() > 0)
      for (Index ell = 0; ell <= e.s.dim(); ++ell)
        b = std::max(b, final_birth.at(e.s.facet(ell)));
    e.birth = b;
    final_birth[e.s] = b;
  }
  Filtration f{WeightedComplex::from_entries(fixed)};
  f.validate();
  return f;
}

inline WeightedComplex random_complex(std::mt19937_64& rng,
                                      const RandomComplexParams& p = {}) {
  return random_filtration(rng, p).complex;
}

// Downward-closed random subcomplex: a simplex is kept iff all its facets
// are kept and an independent coin lands heads. Weights and births carry
// over; the result is never empty (one vertex is forced if needed).
inline WeightedComplex random_subcomplex(const WeightedComplex& c,
                                         std::mt19937_64& rng,
                                         double keep_prob = 0.6) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::map<Simplex, bool> kept;
  std::vector<WeightedComplex::Entry> out;
  for (const auto& e : c.all_entries()) {
    bool keep = unit(rng) < keep_prob;
    if (e.s.dim() > 0)
      for (Index ell = 0; keep && ell <= e.s.dim(); ++ell)
        keep = kept.at(e.s.facet(ell));
    kept[e.s] = keep;
    if (keep) out.push_back(e);
  }
  if (out.empty() && c.total_count() > 0) {
    std::uniform_int_distribution<Index> pick(0, c.count(0) - 1);
    out.push_back(c.entry(0, pick(rng)));
  }
  return WeightedComplex::from_entries(out);
}

// A random pair K ⊆ L with the inclusion, assembled.
inline PersistentPair random_pair(std::mt19937_64& rng,
                                  const RandomComplexParams& p = {},
                                  double keep_prob = 0.6) {
  const WeightedComplex l = random_complex(rng, p);
  const WeightedComplex k = random_subcomplex(l, rng, keep_prob);
  return make_pair_rep(k, l);
}

// A random nested triple P1 ⊆ P2 ⊆ P3.
inline FiltrationTriple random_triple(std::mt19937_64& rng,
                                      const RandomComplexParams& p = {},
                                      double keep_prob = 0.7) {
  const WeightedComplex p3 = random_complex(rng, p);
  const WeightedComplex p2 = random_subcomplex(p3, rng, keep_prob);
  const WeightedComplex p1 = random_subcomplex(p2, rng, keep_prob);
  return nested_triple(p1, p2, p3);
}

// A random triple engineered to satisfy the full-monotonicity sufficient
// condition at degree k: P2 extends P1 only by (k+1)-simplices of P3 whose
// facets all lie in P1. Then the degree-k chain spaces of P1 and P2 agree,
// so boundaries of the auxiliary space land in ker d_k of P1 by the chain
// identity.
inline FiltrationTriple random_condition_triple(std::mt19937_64& rng,
                                                int k,
                                                const RandomComplexParams& p =
                                                    {},
                                                double keep_prob = 0.6,
                                                double add_prob = 0.7) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const WeightedComplex p3 = random_complex(rng, p);
  const WeightedComplex p1 = random_subcomplex(p3, rng, keep_prob);
  std::vector<WeightedComplex::Entry> mid = p1.all_entries();
  for (Index i = 0; i < p3.count(k + 1); ++i) {
    const auto& e = p3.entry(k + 1, i);
    if (p1.index_of(e.s)) continue;
    bool facets_in = true;
    for (Index ell = 0; ell <= e.s.dim() && facets_in; ++ell)
      facets_in = p1.index_of(e.s.facet(ell)).has_value();
    if (facets_in && unit(rng) < add_prob) mid.push_back(e);
  }
  const WeightedComplex p2 = WeightedComplex::from_entries(mid);
  return nested_triple(p1, p2, p3);
}

// Perturb every birth by an independent uniform offset in [-delta, delta],
// then restore monotonicity by propagating maxima upward in degree. The
// result stays within delta of the original birth function, so the
// interleaving distance of the two filtrations is at most delta.
inline Filtration perturb_births(const Filtration& f, double delta,
                                 std::mt19937_64& rng) {
  if (delta < 0) throw invariant_error("perturb_births: delta must be >= 0");
  std::uniform_real_distribution<double> u(-delta, delta);
  std::vector<WeightedComplex::Entry> entries = f.complex.all_entries();
  std::map<Simplex, double> final_birth;
  for (auto& e : entries) {
    double b = e.birth + u(rng);
    if (e.s.dim() > 0)
      for (Index ell = 0; ell <= e.s.dim(); ++ell)
        b = std::max(b, final_birth.at(e.s.facet(ell)));
    e.birth = b;
    final_birth[e.s] = b;
  }
  Filtration out{WeightedComplex::from_entries(entries)};
  out.validate();
  return out;
}

}  // namespace perla
