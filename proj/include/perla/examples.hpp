#pragma once

#include <array>
#include <utility>

#include "perla/counting.hpp"

namespace perla {

// Worked examples small enough to solve by hand, used by the test suite
// and shipped as sample inputs.

namespace detail {

inline std::vector<WeightedComplex::Entry> with_birth(
    std::initializer_list<Simplex> simplices, double birth) {
  std::vector<WeightedComplex::Entry> out;
  for (const Simplex& s : simplices) out.push_back({s, 1.0, birth});
  return out;
}

}  // namespace detail

// K: the boundary of a square (a 4-cycle on vertices 0..3). L: the square
// with the diagonal {0,2} added and both resulting triangles filled. At
// degree 1 the persistent Laplacian of K ⊆ L is
//   (1/2) [[5,-1,1,1],[-1,5,-1,-1],[1,-1,5,1],[1,-1,1,5]]
// in the edge order ({0,1}, {1,2}, {0,3}, {2,3}) — note this is NOT the
// lexicographic order the library uses, which swaps rows/columns 2 and 3.
// The spectrum is (2, 2, 2, 4) either way.
inline std::pair<WeightedComplex, WeightedComplex> filled_square_pair() {
  std::vector<WeightedComplex::Entry> k_entries = detail::with_birth(
      {Simplex{{0}}, Simplex{{1}}, Simplex{{2}}, Simplex{{3}},
       Simplex{{0, 1}}, Simplex{{1, 2}}, Simplex{{0, 3}}, Simplex{{2, 3}}},
      0.0);
  std::vector<WeightedComplex::Entry> l_entries = k_entries;
  for (const auto& e : detail::with_birth(
           {Simplex{{0, 2}}, Simplex{{0, 1, 2}}, Simplex{{0, 2, 3}}}, 1.0))
    l_entries.push_back(e);
  return {WeightedComplex::from_entries(k_entries),
          WeightedComplex::from_entries(l_entries)};
}

// Two triangles glued along an edge, built in three stages on vertices
// 0..3 (0=a, 1=b, 2=c, 3=d):
//   stage 1: edges ab, ac, ad, bc (one hollow cycle abc plus a whisker ad)
//   stage 2: + edge cd and the filled triangle abc
//   stage 3: + the filled triangle acd
// Degree-1 persistent spectra: pair (1,3) has (1,3,3,4); pair (2,3) has
// (2,2,4,4,4); full monotonicity fails at q = 1 and q = 3.
inline std::array<WeightedComplex, 3> glued_triangles_stages() {
  std::vector<WeightedComplex::Entry> s1 = detail::with_birth(
      {Simplex{{0}}, Simplex{{1}}, Simplex{{2}}, Simplex{{3}},
       Simplex{{0, 1}}, Simplex{{0, 2}}, Simplex{{0, 3}}, Simplex{{1, 2}}},
      0.0);
  std::vector<WeightedComplex::Entry> s2 = s1;
  for (const auto& e :
       detail::with_birth({Simplex{{2, 3}}, Simplex{{0, 1, 2}}}, 1.0))
    s2.push_back(e);
  std::vector<WeightedComplex::Entry> s3 = s2;
  for (const auto& e : detail::with_birth({Simplex{{0, 2, 3}}}, 2.0))
    s3.push_back(e);
  return {WeightedComplex::from_entries(s1), WeightedComplex::from_entries(s2),
          WeightedComplex::from_entries(s3)};
}

inline FiltrationTriple glued_triangles_triple() {
  const auto stages = glued_triangles_stages();
  return nested_triple(stages[0], stages[1], stages[2]);
}

// Two filtrations of the glued-triangles complex that are 1-interleaved:
// the first jumps from stage 1 directly to stage 3 at time 0; the second
// passes through stage 2 at time 0 and completes at time 1. Their full
// persistent spectral counting functions at (k,q) = (1,1) are not
// interleaved at any finite epsilon, while the up and down counting
// functions stay 1-interleaved.
inline std::pair<Filtration, Filtration> glued_triangles_filtrations() {
  const auto stages = glued_triangles_stages();
  std::vector<WeightedComplex::Entry> p, q;
  for (const auto& e : stages[2].all_entries()) {
    const bool in1 = stages[0].index_of(e.s).has_value();
    const bool in2 = stages[1].index_of(e.s).has_value();
    WeightedComplex::Entry pe = e, qe = e;
    pe.birth = in1 ? -1.0 : 0.0;
    qe.birth = in1 ? -1.0 : (in2 ? 0.0 : 1.0);
    p.push_back(pe);
    q.push_back(qe);
  }
  return {Filtration{WeightedComplex::from_entries(p)},
          Filtration{WeightedComplex::from_entries(q)}};
}

// The smallest abstract configuration violating full monotonicity: three
// chain complexes with degree dimensions (1,2), (1,3), and (1,3,2),
// boundaries
//   d1 = [1 0],  d1 = [1 0 -1],  d2 = [[0,1],[1,0],[0,1]],
// identity inner products, and coordinate inclusions. The degree-1
// persistent Laplacians are the identity on R^2 for the pair (1,3) and
// diag(2,1,2) for the pair (2,3), so the q = 2 eigenvalues are 1 and 2.
inline FiltrationTriple minimal_violation_triple() {
  FiltrationTriple t;
  t.c1.dims = {1, 2};
  Matrix d1_1(1, 2);
  d1_1 << 1, 0;
  t.c1.boundary = {Matrix::Zero(0, 1), d1_1};
  t.c1.gram = {InnerProduct::identity(1), InnerProduct::identity(2)};

  t.c2.dims = {1, 3};
  Matrix d1_2(1, 3);
  d1_2 << 1, 0, -1;
  t.c2.boundary = {Matrix::Zero(0, 1), d1_2};
  t.c2.gram = {InnerProduct::identity(1), InnerProduct::identity(3)};

  t.c3.dims = {1, 3, 2};
  Matrix d2_3(3, 2);
  d2_3 << 0, 1, 1, 0, 0, 1;
  t.c3.boundary = {Matrix::Zero(0, 1), d1_2, d2_3};
  t.c3.gram = {InnerProduct::identity(1), InnerProduct::identity(3),
               InnerProduct::identity(2)};

  Matrix j1(3, 2);
  j1 << 1, 0, 0, 1, 0, 0;
  t.j12.maps = {Matrix::Identity(1, 1), j1};
  t.j23.maps = {Matrix::Identity(1, 1), Matrix::Identity(3, 3)};
  t.validate();
  return t;
}

}  // namespace perla
