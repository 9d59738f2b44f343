#include <random>

#include "catch2/catch_amalgamated.hpp"
#include "perla/complex.hpp"
#include "perla/cosheaf.hpp"
#include "perla/random_gen.hpp"
#include "perla/simplex.hpp"

using namespace perla;

namespace {

// full triangle on vertices 0,1,2
WeightedComplex full_triangle() {
  return WeightedComplex::from_entries({{Simplex{0}, 1.0, 0.0},
                                        {Simplex{1}, 1.0, 0.0},
                                        {Simplex{2}, 1.0, 0.0},
                                        {Simplex{0, 1}, 1.0, 0.0},
                                        {Simplex{0, 2}, 1.0, 0.0},
                                        {Simplex{1, 2}, 1.0, 0.0},
                                        {Simplex{0, 1, 2}, 1.0, 0.0}});
}

}  // namespace

TEST_CASE("simplex basics") {
  CHECK_THROWS_AS(Simplex({2, 1}), invariant_error);
  CHECK_THROWS_AS(Simplex({1, 1}), invariant_error);
  CHECK_THROWS_AS(Simplex(std::vector<int>{}), invariant_error);
  const Simplex s{1, 4, 7};
  CHECK(s.dim() == 2);
  CHECK(s.facet(0) == Simplex{4, 7});
  CHECK(s.facet(1) == Simplex{1, 7});
  CHECK(s.facet(2) == Simplex{1, 4});
  CHECK(boundary_sign(s, 0) == 1);
  CHECK(boundary_sign(s, 1) == -1);
  CHECK(boundary_sign(s, 2) == 1);
  CHECK_THROWS_AS(boundary_sign(s, 3), invariant_error);

  CHECK(incidence(s, Simplex{1, 7}) == -1);
  CHECK(incidence(s, Simplex{4, 7}) == 1);
  CHECK(incidence(s, Simplex{1, 4}) == 1);
  CHECK(incidence(s, Simplex{1, 5}) == 0);
  CHECK(incidence(s, Simplex{1}) == 0);
  CHECK(Simplex{1, 2} < Simplex{1, 3});
  CHECK(Simplex{1, 2} < Simplex{1, 2, 3});  // lexicographic, prefix first
}

TEST_CASE("weighted complex accessors and validation") {
  const WeightedComplex c = full_triangle();
  CHECK(c.max_dim() == 2);
  CHECK(c.count(0) == 3);
  CHECK(c.count(1) == 3);
  CHECK(c.count(2) == 1);
  CHECK(c.total_count() == 7);
  CHECK_FALSE(c.empty());
  CHECK(c.simplex(1, 0) == Simplex{0, 1});
  CHECK(c.simplex(1, 2) == Simplex{1, 2});
  REQUIRE(c.index_of(Simplex{0, 2}).has_value());
  CHECK(*c.index_of(Simplex{0, 2}) == 1);
  CHECK_FALSE(c.index_of(Simplex{3}).has_value());

  SECTION("all_entries is ascending degree then lexicographic") {
    const auto entries = c.all_entries();
    REQUIRE(entries.size() == 7);
    CHECK(entries[0].s == Simplex{0});
    CHECK(entries[3].s == Simplex{0, 1});
    CHECK(entries[6].s == Simplex{0, 1, 2});
  }
  SECTION("closure is required") {
    CHECK_THROWS_AS(WeightedComplex::from_entries(
                        {{Simplex{0}, 1.0, 0.0}, {Simplex{0, 1}, 1.0, 0.0}}),
                    invariant_error);
  }
  SECTION("weights must be positive") {
    CHECK_THROWS_AS(
        WeightedComplex::from_entries({{Simplex{0}, 0.0, 0.0}}),
        invariant_error);
    CHECK_THROWS_AS(
        WeightedComplex::from_entries({{Simplex{0}, -1.0, 0.0}}),
        invariant_error);
  }
  SECTION("duplicate simplices rejected") {
    CHECK_THROWS_AS(WeightedComplex::from_entries(
                        {{Simplex{0}, 1.0, 0.0}, {Simplex{0}, 2.0, 0.0}}),
                    invariant_error);
  }
}

TEST_CASE("boundary matrices follow the alternating sign rule") {
  const WeightedComplex c = full_triangle();
  // edges in lex order: 01, 02, 12
  Matrix d1(3, 3);
  d1 << -1, -1, 0, 1, 0, -1, 0, 1, 1;
  CHECK(max_abs(boundary_matrix(c, 1) - d1) == 0.0);
  Matrix d2(3, 1);
  d2 << 1, -1, 1;
  CHECK(max_abs(boundary_matrix(c, 2) - d2) == 0.0);
  CHECK(boundary_matrix(c, 0).rows() == 0);
  CHECK(boundary_matrix(c, 0).cols() == 3);
  CHECK(max_abs(d1 * d2) == 0.0);
}

TEST_CASE("assemble produces a valid chain complex") {
  const WeightedComplex c = full_triangle();
  const ChainComplexRep rep = assemble(c);
  rep.validate();
  CHECK(rep.max_degree() == 2);
  CHECK(rep.dim(0) == 3);
  CHECK(rep.dim(5) == 0);
  CHECK(rep.W(1).is_identity());
  CHECK(rep.d(3).rows() == 1);
  CHECK(rep.d(3).cols() == 0);

  SECTION("weights land on the gram diagonals") {
    auto entries = c.all_entries();
    for (auto& e : entries) e.weight = 2.0 + e.s.dim();
    const ChainComplexRep w = assemble(WeightedComplex::from_entries(entries));
    w.validate();
    CHECK(w.W(0).gram()(0, 0) == 2.0);
    CHECK(w.W(1).gram()(2, 2) == 3.0);
    CHECK(w.W(2).gram()(0, 0) == 4.0);
  }
  SECTION("gram overrides replace the diagonal") {
    Matrix g = Matrix::Identity(3, 3);
    g(0, 1) = g(1, 0) = 0.25;
    const ChainComplexRep rep_g = assemble(c, {{1, g}});
    CHECK(max_abs(rep_g.W(1).gram() - g) == 0.0);
    CHECK(rep_g.W(0).is_identity());
    CHECK_THROWS_AS(assemble(c, {{1, Matrix::Identity(2, 2)}}),
                    invariant_error);
  }
  SECTION("d o d = 0 on random complexes") {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 20; ++trial) {
      const ChainComplexRep rep = assemble(random_complex(rng, {}));
      rep.validate();
      for (int k = 1; k <= rep.max_degree(); ++k) {
        const Matrix dd = rep.d(k) * rep.d(k + 1);
        CHECK(max_abs(dd) == 0.0);
      }
    }
  }
}

TEST_CASE("filtrations and sublevel complexes") {
  auto entries = full_triangle().all_entries();
  for (auto& e : entries) e.birth = e.s.dim();  // vertices 0, edges 1, face 2
  const Filtration f{WeightedComplex::from_entries(entries)};
  f.validate();
  CHECK(f.min_birth() == 0.0);
  const auto bp = f.breakpoints();
  REQUIRE(bp.size() == 3);
  CHECK(bp[0] == 0.0);
  CHECK(bp[2] == 2.0);

  CHECK(sublevel(f, -0.5).empty());
  CHECK(sublevel(f, 0.0).total_count() == 3);
  CHECK(sublevel(f, 1.5).total_count() == 6);
  CHECK(sublevel(f, 2.0).total_count() == 7);
  CHECK(sublevel(f, 1e9).total_count() == 7);

  SECTION("birth must be monotone along faces") {
    auto bad = entries;
    for (auto& e : bad)
      if (e.s == Simplex{0, 1}) e.birth = -1.0;  // edge before its vertices
    const Filtration g{WeightedComplex::from_entries(bad)};
    CHECK_THROWS_AS(g.validate(), invariant_error);
  }
}

TEST_CASE("inclusion of a subcomplex") {
  auto entries = full_triangle().all_entries();
  for (auto& e : entries) e.birth = e.s.dim();
  const Filtration f{WeightedComplex::from_entries(entries)};
  const WeightedComplex K = sublevel(f, 1.0);  // 1-skeleton
  const WeightedComplex L = sublevel(f, 2.0);  // everything
  const InclusionRep incl = inclusion(K, L);
  incl.validate(assemble(K), assemble(L));
  CHECK(incl.j(0, assemble(K), assemble(L)).isIdentity(0.0));
  CHECK(incl.j(2, assemble(K), assemble(L)).rows() == 1);
  CHECK(incl.j(2, assemble(K), assemble(L)).cols() == 0);

  SECTION("chain map identity J d^K = d^L J") {
    std::mt19937_64 rng(111);
    for (int trial = 0; trial < 20; ++trial) {
      const auto [cK, cL, j] = [&] {
        const Filtration rf = random_filtration(rng, {});
        const double mid =
            rf.breakpoints().size() > 1 ? rf.breakpoints()[1] : 0.0;
        const WeightedComplex k2 = sublevel(rf, mid);
        const WeightedComplex l2 = rf.complex;
        return std::tuple{assemble(k2), assemble(l2), inclusion(k2, l2)};
      }();
      j.validate(cK, cL);
      for (int k = 1; k <= cK.max_degree(); ++k) {
        const Matrix lhs = j.j(k - 1, cK, cL) * cK.d(k);
        const Matrix rhs = cL.d(k) * j.j(k, cK, cL);
        CHECK(max_abs(lhs - rhs) == 0.0);
      }
    }
  }
  SECTION("weight mismatch is rejected") {
    auto heavier = entries;
    for (auto& e : heavier)
      if (e.s.dim() == 0) e.weight = 5.0;
    const WeightedComplex L2 =
        WeightedComplex::from_entries(heavier);
    CHECK_THROWS_AS(inclusion(K, L2), invariant_error);
  }
  SECTION("non-subcomplex is rejected") {
    CHECK_THROWS_AS(inclusion(L, K), invariant_error);
  }
}

TEST_CASE("cosheaf assembly matches the hand-computed boundary") {
  // 3-cycle a=0, b=1, c=2 with stalks R at vertices, R at 01 and 02,
  // R^2 at 12
  const WeightedComplex base =
      WeightedComplex::from_entries({{Simplex{0}, 1.0, 0.0},
                                     {Simplex{1}, 1.0, 0.0},
                                     {Simplex{2}, 1.0, 0.0},
                                     {Simplex{0, 1}, 1.0, 0.0},
                                     {Simplex{0, 2}, 1.0, 0.0},
                                     {Simplex{1, 2}, 1.0, 0.0}});
  std::map<Simplex, Index> dims{{Simplex{0}, 1}, {Simplex{1}, 1},
                                {Simplex{2}, 1}, {Simplex{0, 1}, 1},
                                {Simplex{0, 2}, 1}, {Simplex{1, 2}, 2}};
  std::map<std::pair<Simplex, Simplex>, Matrix> maps;
  maps[{Simplex{0}, Simplex{0, 1}}] = Matrix::Constant(1, 1, -1.0);
  maps[{Simplex{1}, Simplex{0, 1}}] = Matrix::Constant(1, 1, 3.0);
  maps[{Simplex{0}, Simplex{0, 2}}] = Matrix::Constant(1, 1, 1.0);
  maps[{Simplex{2}, Simplex{0, 2}}] = Matrix::Constant(1, 1, 2.0);
  Matrix to_b(1, 2), to_c(1, 2);
  to_b << 1, 1;
  to_c << 2, 0;
  maps[{Simplex{1}, Simplex{1, 2}}] = to_b;
  maps[{Simplex{2}, Simplex{1, 2}}] = to_c;

  const Cosheaf f(base, dims, {}, maps);
  CHECK(f.chain_dim(0) == 3);
  CHECK(f.chain_dim(1) == 4);
  CHECK(f.stalk_dim(Simplex{1, 2}) == 2);
  CHECK(f.block_offset(1, 2) == 2);

  const ChainComplexRep rep = cosheaf_assemble(f);
  rep.validate();
  Matrix d1(3, 4);
  d1 << 1, -1, 0, 0, 3, 0, -1, -1, 0, 2, 2, 0;
  CHECK(max_abs(rep.d(1) - d1) == 0.0);

  SECTION("missing restriction map throws") {
    auto broken = maps;
    broken.erase({Simplex{1}, Simplex{1, 2}});
    CHECK_THROWS_AS(Cosheaf(base, dims, {}, broken), invariant_error);
  }
  SECTION("restriction shape mismatch throws") {
    auto broken = maps;
    broken[{Simplex{1}, Simplex{1, 2}}] = Matrix::Zero(2, 2);
    CHECK_THROWS_AS(Cosheaf(base, dims, {}, broken), invariant_error);
  }
}

TEST_CASE("functoriality check over a triangle") {
  const WeightedComplex base = full_triangle();
  std::map<Simplex, Index> dims;
  for (const auto& e : base.all_entries()) dims[e.s] = 1;
  std::map<std::pair<Simplex, Simplex>, Matrix> maps;
  // constant maps are functorial
  for (const auto& e : base.all_entries())
    if (e.s.dim() > 0)
      for (int ell = 0; ell <= e.s.dim(); ++ell)
        maps[{e.s.facet(ell), e.s}] = Matrix::Identity(1, 1);
  CHECK_NOTHROW(Cosheaf(base, dims, {}, maps));

  // scaling one edge restriction breaks the two facet paths into 012
  auto broken = maps;
  broken[{Simplex{0}, Simplex{0, 1}}] = Matrix::Constant(1, 1, 2.0);
  CHECK_THROWS_AS(Cosheaf(base, dims, {}, broken), invariant_error);
}

TEST_CASE("zero-dimensional stalks are allowed") {
  const WeightedComplex base = WeightedComplex::from_entries(
      {{Simplex{0}, 1.0, 0.0}, {Simplex{1}, 1.0, 0.0}, {Simplex{0, 1}, 1.0, 0.0}});
  std::map<Simplex, Index> dims{
      {Simplex{0}, 0}, {Simplex{1}, 1}, {Simplex{0, 1}, 1}};
  std::map<std::pair<Simplex, Simplex>, Matrix> maps;
  maps[{Simplex{0}, Simplex{0, 1}}] = Matrix::Zero(0, 1);
  maps[{Simplex{1}, Simplex{0, 1}}] = Matrix::Identity(1, 1);
  const Cosheaf f(base, dims, {}, maps);
  CHECK(f.chain_dim(0) == 1);
  const ChainComplexRep rep = cosheaf_assemble(f);
  rep.validate();
  CHECK(rep.d(1).rows() == 1);
  CHECK(rep.d(1)(0, 0) == 1.0);  // only the sign +1 facet survives
}

TEST_CASE("constant cosheaf reproduces the simplicial complex") {
  std::mt19937_64 rng(121);
  for (int trial = 0; trial < 10; ++trial) {
    const WeightedComplex c = random_complex(rng, {});
    const ChainComplexRep direct = assemble(c);
    const ChainComplexRep via = cosheaf_assemble(constant_cosheaf(c));
    REQUIRE(via.max_degree() == direct.max_degree());
    for (int k = 0; k <= direct.max_degree(); ++k) {
      CHECK(max_abs(via.d(k) - direct.d(k)) == 0.0);
      CHECK(via.dim(k) == direct.dim(k));
    }
  }
}

TEST_CASE("psd realization squares back to the input") {
  std::mt19937_64 rng(131);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 10; ++trial) {
    const Index n = 2 + static_cast<Index>(rng() % 5);
    Matrix b(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) b(i, j) = gauss(rng);
    const Matrix a = b.transpose() * b;  // PSD
    const Cosheaf f = psd_realization(a);
    const ChainComplexRep rep = cosheaf_assemble(f);
    rep.validate();
    // degree 1 is top, so the full Laplacian there is d1^* d1 = A
    const Matrix lap = rep.d(1).transpose() * rep.d(1);
    CHECK(max_abs(lap - a) < 1e-8 * std::max(1.0, max_abs(a)));
  }
  Matrix indef(2, 2);
  indef << 1, 2, 2, 1;
  CHECK_THROWS_AS(psd_realization(indef), invariant_error);
}
