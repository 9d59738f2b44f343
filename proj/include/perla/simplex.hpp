#pragma once

#include <algorithm>
#include <compare>
#include <initializer_list>
#include <vector>

#include "perla/types.hpp"

namespace perla {

// An abstract simplex: a nonempty strictly ascending vertex list.
struct Simplex {
  std::vector<int> v;

  Simplex() = default;
  Simplex(std::initializer_list<int> verts) : v(verts) { validate(); }
  explicit Simplex(std::vector<int> verts) : v(std::move(verts)) {
    validate();
  }

  int dim() const { return static_cast<int>(v.size()) - 1; }

  void validate() const {
    if (v.empty()) throw invariant_error("simplex must be nonempty");
    for (std::size_t i = 1; i < v.size(); ++i)
      if (!(v[i - 1] < v[i]))
        throw invariant_error("simplex vertices must be strictly ascending");
  }

  // The facet omitting the ell-th vertex (0-indexed).
  Simplex facet(int ell) const {
    Simplex f;
    f.v.reserve(v.size() - 1);
    for (int i = 0; i < static_cast<int>(v.size()); ++i)
      if (i != ell) f.v.push_back(v[i]);
    return f;
  }

  friend bool operator==(const Simplex& a, const Simplex& b) {
    return a.v == b.v;
  }
  // lexicographic on the vertex sequence; within a fixed degree this is the
  // basis order used everywhere
  friend std::strong_ordering operator<=>(const Simplex& a, const Simplex& b) {
    return a.v <=> b.v;
  }
};

// Sign (-1)^ell of removing the ell-th vertex (0-indexed) from a sorted
// simplex.
inline int boundary_sign(const Simplex& sigma, int ell) {
  if (ell < 0 || ell > sigma.dim())
    throw invariant_error("boundary_sign: vertex position out of range");
  return (ell % 2 == 0) ? 1 : -1;
}

// Incidence number [sigma : tau]: (-1)^ell if tau is the facet of sigma
// omitting its ell-th vertex, 0 if tau is not a facet.
inline int incidence(const Simplex& sigma, const Simplex& tau) {
  if (tau.dim() + 1 != sigma.dim()) return 0;
  int omitted = -1;
  std::size_t j = 0;
  for (std::size_t i = 0; i < sigma.v.size(); ++i) {
    if (j < tau.v.size() && sigma.v[i] == tau.v[j]) {
      ++j;
    } else if (omitted < 0) {
      omitted = static_cast<int>(i);
    } else {
      return 0;  // two mismatches
    }
  }
  if (j != tau.v.size() || omitted < 0) return 0;
  return boundary_sign(sigma, omitted);
}

}  // namespace perla
