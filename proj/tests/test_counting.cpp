#include <cmath>
#include <random>
#include <set>

#include "catch2/catch_amalgamated.hpp"
#include "perla/counting.hpp"
#include "perla/examples.hpp"
#include "perla/random_gen.hpp"

using namespace perla;

namespace {

CountingFunction constant_function(Kind kind, std::vector<double> b,
                                   const Matrix& table) {
  CountingFunction f;
  f.kind = kind;
  f.grid.b = std::move(b);
  f.table = table;
  return f;
}

// Eval-based dominance oracle: sample s and t densely enough to hit every
// region where the cell indices of (s - eps, t + eps) and (s, t) are
// constant, and check F([s-eps, t+eps]) >= G([s, t]) pointwise.
bool brute_dominates(const CountingFunction& f, const CountingFunction& g,
                     double eps) {
  // one shared sample set for s and t: every breakpoint shifted by 0 and
  // +-eps, a point on each side, and far-out representatives for the two
  // unbounded cells (intervals entirely right of the grid still matter)
  std::set<double> crit;
  auto add_around = [&crit](double x) {
    crit.insert(x);
    crit.insert(x - 1e-7);
    crit.insert(x + 1e-7);
  };
  for (const auto* fn : {&f, &g})
    for (double b : fn->grid.b) {
      add_around(b);
      add_around(b + eps);
      add_around(b - eps);
    }
  if (crit.empty()) return true;
  crit.insert(*crit.begin() - 1.0);
  crit.insert(*crit.rbegin() + 1.0);
  for (double s : crit)
    for (double t : crit) {
      if (s > t) continue;
      const double lhs = f.eval(s - eps, t + eps);
      const double rhs = g.eval(s, t);
      if (std::isinf(rhs)) {
        if (!std::isinf(lhs)) return false;
      } else if (!(lhs >= rhs)) {
        return false;
      }
    }
  return true;
}

bool brute_feasible(const CountingFunction& f, const CountingFunction& g,
                    double eps) {
  return brute_dominates(f, g, eps) && brute_dominates(g, f, eps);
}

}  // namespace

TEST_CASE("interval grid cells") {
  IntervalGrid grid{{0.0, 4.0, 6.0, 10.0}};
  grid.validate();
  CHECK(grid.cell(-5.0) == 0);
  CHECK(grid.cell(0.0) == 0);
  CHECK(grid.cell(3.9) == 0);
  CHECK(grid.cell(4.0) == 1);
  CHECK(grid.cell(9.9) == 2);
  CHECK(grid.cell(10.0) == 3);
  CHECK(grid.cell(100.0) == 3);
  CHECK(grid.cell_open(4.0) == 0);
  CHECK(grid.cell_open(4.1) == 1);
  CHECK(grid.cell_open(-3.0) == 0);
  CHECK(grid.cell_open(11.0) == 3);
  const IntervalGrid degenerate{{1.0, 1.0}};
  CHECK_THROWS_AS(degenerate.validate(), invariant_error);
}

TEST_CASE("counting functions of the glued triangles filtrations") {
  const auto [fp, fq] = glued_triangles_filtrations();
  fp.validate();
  fq.validate();

  const CountingFunction cp = counting_function(fp, Kind::full, 1, 1);
  const CountingFunction cq = counting_function(fq, Kind::full, 1, 1);
  REQUIRE(cp.grid.size() == 2);
  REQUIRE(cq.grid.size() == 3);

  // first filtration: stage 1 at -1, everything else at 0
  CHECK(cp.table(0, 0) == Catch::Approx(0.0).margin(1e-9));
  CHECK(cp.table(0, 1) == Catch::Approx(1.0).margin(1e-9));
  CHECK(cp.table(1, 1) == Catch::Approx(2.0).margin(1e-9));

  // second filtration passes through the intermediate stage at 0
  CHECK(cq.table(0, 0) == Catch::Approx(0.0).margin(1e-9));
  CHECK(cq.table(1, 1) == Catch::Approx(0.0).margin(1e-9));
  CHECK(cq.table(1, 2) == Catch::Approx(2.0).margin(1e-9));
  CHECK(cq.table(2, 2) == Catch::Approx(2.0).margin(1e-9));
  CHECK(cq.eval(0.5, 1.5) == Catch::Approx(2.0).margin(1e-9));

  SECTION("evaluation outside the birth range") {
    // below the first birth the sublevel complex is empty
    CHECK(std::isinf(cp.eval(-100.0, -100.0)));
    CHECK(std::isinf(cp.eval(-100.0, 100.0)));
    // above the last birth the filtration has stopped changing
    CHECK(cp.eval(100.0, 200.0) == Catch::Approx(2.0).margin(1e-9));
    CHECK(cp.eval(-1.0, -1.0) == Catch::Approx(0.0).margin(1e-9));
    CHECK_THROWS_AS(cp.eval(1.0, 0.0), invariant_error);
  }

  SECTION("filtration distance is the max birth difference") {
    CHECK(filtration_interleaving_distance(fp, fq) == 1.0);
    CHECK(filtration_interleaving_distance(fq, fp) == 1.0);
    CHECK(filtration_interleaving_distance(fp, fp) == 0.0);
  }

  SECTION("full counting functions are not interleaved, up and down are") {
    CHECK(std::isinf(function_interleaving_distance(cp, cq)));
    for (Kind kind : {Kind::up, Kind::down}) {
      const CountingFunction a = counting_function(fp, kind, 1, 1);
      const CountingFunction b = counting_function(fq, kind, 1, 1);
      a.validate();
      b.validate();
      const double d = function_interleaving_distance(a, b);
      CHECK(d <= 1.0 + 1e-9);
      CHECK(d == function_interleaving_distance(b, a));
    }
    CHECK(function_interleaving_distance(cp, cp) == 0.0);
    CHECK(function_interleaving_distance(cq, cq) == 0.0);
  }
}

TEST_CASE("distance of hand-built constant functions") {
  const Matrix one = Matrix::Constant(1, 1, 1.0);
  const Matrix two = Matrix::Constant(1, 1, 2.0);
  const Matrix inf1 = Matrix::Constant(1, 1, kInf);
  const CountingFunction f = constant_function(Kind::full, {0.0}, one);
  const CountingFunction g = constant_function(Kind::full, {0.0}, two);
  const CountingFunction h = constant_function(Kind::full, {0.0}, inf1);
  const CountingFunction none = constant_function(Kind::full, {}, Matrix(0, 0));

  CHECK(std::isinf(function_interleaving_distance(f, g)));
  CHECK(function_interleaving_distance(f, f) == 0.0);
  CHECK(function_interleaving_distance(h, h) == 0.0);
  CHECK(std::isinf(function_interleaving_distance(f, h)));
  CHECK(function_interleaving_distance(none, none) == 0.0);
  CHECK(function_interleaving_distance(none, h) == 0.0);
  CHECK(std::isinf(function_interleaving_distance(none, f)));
}

TEST_CASE("distance can be a pure half-difference of breakpoints") {
  // Both grids {0,4,6,10}: differences {2,4,6,10}, so 1 arises only as a
  // half-difference. g is 5 on the diagonal cell [4,6) and 0 elsewhere; f is
  // 1 there and 5 elsewhere. An interval inside [4,6) keeps its thickening
  // inside [4,6) exactly when eps < 1, so domination flips at eps = 1.
  const std::vector<double> b{0.0, 4.0, 6.0, 10.0};
  Matrix ft = Matrix::Constant(4, 4, 5.0);
  ft(1, 1) = 1.0;
  Matrix gt = Matrix::Constant(4, 4, 5.0);
  const CountingFunction f = constant_function(Kind::full, b, ft);
  const CountingFunction g = constant_function(Kind::full, b, gt);

  const FunctionInterleaving fi(f, g);
  CHECK_FALSE(fi.feasible(0.0));
  CHECK_FALSE(fi.feasible(0.99));
  CHECK(fi.feasible(1.0));
  CHECK(brute_feasible(f, g, 1.0));
  CHECK_FALSE(brute_feasible(f, g, 0.99));
  CHECK(fi.distance() == 1.0);
  CHECK(function_interleaving_distance(g, f) == 1.0);
}

TEST_CASE("distance agrees with a brute-force oracle on random tables") {
  std::mt19937_64 rng(301);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double values[] = {0.0, 1.0, 2.0, 3.0, kInf};
  int finite_cases = 0;
  for (int trial = 0; trial < 25; ++trial) {
    const Index mf = 2 + static_cast<Index>(rng() % 3);
    const Index mg = 2 + static_cast<Index>(rng() % 3);
    auto random_grid = [&](Index m) {
      std::set<double> pts;
      while (static_cast<Index>(pts.size()) < m)
        pts.insert(std::round(10.0 * unif(rng)) / 2.0);
      return std::vector<double>(pts.begin(), pts.end());
    };
    // anchored tables are finite with the first row and last column pinned
    // to the maximum value; once the shift exceeds the grid span every
    // lookup lands in a pinned entry or matches the other function's clamped
    // corner, so the distance between two anchored tables is finite
    const bool anchored = trial % 3 != 0;
    auto random_table = [&](Index m) {
      Matrix t = Matrix::Constant(m, m, kInf);
      for (Index i = 0; i < m; ++i)
        for (Index j = i; j < m; ++j)
          t(i, j) = values[rng() % (anchored ? 4 : 5)];
      if (anchored) {
        for (Index j = 0; j < m; ++j) t(0, j) = 3.0;
        for (Index i = 0; i < m; ++i) t(i, m - 1) = 3.0;
      }
      return t;
    };
    const CountingFunction f =
        constant_function(Kind::full, random_grid(mf), random_table(mf));
    const CountingFunction g =
        constant_function(Kind::full, random_grid(mg), random_table(mg));

    const double d = function_interleaving_distance(f, g);
    CHECK(d == function_interleaving_distance(g, f));

    // localize the brute-force infimum on a fine mesh
    const double span =
        std::max(f.grid.b.back(), g.grid.b.back()) -
        std::min(f.grid.b.front(), g.grid.b.front());
    const double h = 0.01;
    double brute = kInf;
    for (double eps = 0.0; eps <= span + 2.0; eps += h)
      if (brute_feasible(f, g, eps)) {
        brute = eps;
        break;
      }
    if (std::isinf(brute)) {
      CHECK(std::isinf(d));
    } else {
      ++finite_cases;
      CHECK(d <= brute + 1e-9);
      CHECK(d >= brute - h - 1e-9);
    }
  }
  REQUIRE(finite_cases > 5);
}

TEST_CASE("diagonal of the counting function is the plain spectrum") {
  std::mt19937_64 rng(311);
  for (int trial = 0; trial < 8; ++trial) {
    const Filtration f = random_filtration(rng, {});
    const auto bp = f.breakpoints();
    if (bp.empty()) continue;
    const double t = bp[rng() % bp.size()];
    const ChainComplexRep level = assemble(sublevel(f, t));
    for (Kind kind : {Kind::up, Kind::down, Kind::full}) {
      for (int k = 0; k <= 1; ++k) {
        const CountingFunction c = counting_function(f, kind, k, 1);
        const LaplacianRep lap = kind == Kind::up ? up_laplacian(level, k)
                                 : kind == Kind::down
                                     ? down_laplacian(level, k)
                                     : full_laplacian(level, k);
        const double expect = lambda_q(spectrum(lap), 1);
        const double got = c.eval(t, t);
        if (std::isinf(expect)) {
          CHECK(std::isinf(got));
        } else {
          CHECK(got == Catch::Approx(expect).margin(1e-9));
        }
      }
    }
  }
}

TEST_CASE("computed counting functions satisfy their invariants") {
  std::mt19937_64 rng(321);
  for (int trial = 0; trial < 6; ++trial) {
    const Filtration f = random_filtration(rng, {});
    for (Kind kind : {Kind::up, Kind::down}) {
      for (int q : {1, 2}) {
        const CountingFunction c = counting_function(f, kind, 1, q);
        CHECK_NOTHROW(c.validate());
      }
    }
  }
}

TEST_CASE("distance properties on perturbed filtrations") {
  std::mt19937_64 rng(331);
  int triangle_checks = 0;
  for (int trial = 0; trial < 6; ++trial) {
    const Filtration base = random_filtration(rng, {});
    if (base.complex.empty()) continue;
    const Filtration fa = perturb_births(base, 0.05, rng);
    const Filtration fb = perturb_births(base, 0.05, rng);
    const Filtration fc = perturb_births(base, 0.05, rng);

    SECTION("shifted filtration distances") {}
    CHECK(filtration_interleaving_distance(fa, fb) <= 0.1 + 1e-12);

    for (Kind kind : {Kind::up, Kind::down}) {
      const CountingFunction ca = counting_function(fa, kind, 1, 1);
      const CountingFunction cb = counting_function(fb, kind, 1, 1);
      const CountingFunction cc = counting_function(fc, kind, 1, 1);
      const double dab = function_interleaving_distance(ca, cb);
      const double dbc = function_interleaving_distance(cb, cc);
      const double dac = function_interleaving_distance(ca, cc);
      // pseudo-metric: triangle inequality with numerical slack
      if (std::isfinite(dab) && std::isfinite(dbc)) {
        CHECK(dac <= dab + dbc + 1e-9);
        ++triangle_checks;
      }
    }
  }
  REQUIRE(triangle_checks > 4);
}

TEST_CASE("uniform birth shift moves the filtration by exactly delta") {
  const auto [fp, fq] = glued_triangles_filtrations();
  auto entries = fp.complex.all_entries();
  for (auto& e : entries) e.birth += 0.25;
  const Filtration shifted{WeightedComplex::from_entries(entries)};
  CHECK(filtration_interleaving_distance(fp, shifted) == 0.25);
  // stability bounds the up and down kinds; the full kind has no such
  // guarantee (it is not monotone in s), and for this complex it degenerates
  for (Kind kind : {Kind::up, Kind::down}) {
    const CountingFunction a = counting_function(fp, kind, 1, 1);
    const CountingFunction b = counting_function(shifted, kind, 1, 1);
    const double d = function_interleaving_distance(a, b);
    CHECK(d <= 0.25 + 1e-9);
  }
}

TEST_CASE("different simplex sets are infinitely far apart") {
  const auto stages = glued_triangles_stages();
  const Filtration f{stages[0]};
  const Filtration g{stages[2]};
  CHECK(std::isinf(filtration_interleaving_distance(f, g)));
  CHECK(std::isinf(filtration_interleaving_distance(g, f)));
}

TEST_CASE("triples from thresholds") {
  const auto [fp, fq] = glued_triangles_filtrations();
  const FiltrationTriple t = sublevel_triple(fq, -1.0, 0.0, 1.0);
  CHECK_NOTHROW(t.validate());
  CHECK(t.c1.dim(1) == 4);
  CHECK(t.c2.dim(1) == 5);
  CHECK(t.c3.dim(2) == 2);
  CHECK_THROWS_AS(sublevel_triple(fq, 1.0, 0.0, -1.0), invariant_error);

  SECTION("composite inclusion consistency is checked") {
    FiltrationTriple bad = t;
    InclusionRep direct;
    for (int k = 0; k <= 2; ++k)
      direct.maps.push_back(bad.j23.j(k, bad.c2, bad.c3) *
                            bad.j12.j(k, bad.c1, bad.c2));
    direct.maps[1](0, 0) = -direct.maps[1](0, 0);  // break the composite
    bad.j13_direct = direct;
    CHECK_THROWS_AS(bad.validate(), invariant_error);
  }
}
