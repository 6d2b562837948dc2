#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "kcfix/conditions.hpp"

using namespace kcfix;

namespace {

SDPairSet pairs(std::initializer_list<std::pair<Rational, Rational>> sd) {
  SDPairSet out;
  for (const auto& [s, d] : sd) out.pairs.push_back(SDPair{s, d, 0, 0});
  return out;
}

// Literal reading of the quantifiers on a quarter grid of eps with a set of
// small deltas. Pair values are assumed to lie on the half grid.
bool dense_scan_holds(const SDPairSet& set) {
  Rational top = 1;
  for (const auto& p : set.pairs) top = std::max({top, Rational(p.s), Rational(p.d)});
  for (Rational eps(1, 4); eps <= top + 1; eps += Rational(1, 4)) {
    bool some_delta = false;
    for (int k = 4; k <= 24 && !some_delta; k += 4) {
      const Rational delta(1, 1L << k);
      bool ok = true;
      for (const auto& p : set.pairs) {
        if (p.s < eps + delta && p.d > eps) ok = false;
      }
      some_delta = ok;
    }
    if (!some_delta) return false;
  }
  return true;
}

FiniteMetricSpace path3() {
  const std::vector<Rational> xs{0, 1, 2};
  return FiniteMetricSpace::on_line(xs);
}

LineMap quarter_grid() {
  LineMap m;
  for (int k = 0; k <= 100; ++k) m.points.emplace_back(k, 100);
  m.rule = [](const Rational& x) { return Rational(x / 4); };
  return m;
}

// Floating-point brute force of the least Kannan / Chatterjea alpha.
double float_alpha(bool chatterjea) {
  double best = 0;
  for (int a = 0; a <= 100; ++a) {
    for (int b = 0; b <= 100; ++b) {
      if (a == b) continue;
      const double x = a / 100.0, y = b / 100.0;
      const double tx = x / 4, ty = y / 4;
      const double num = std::fabs(tx - ty);
      const double den = chatterjea ? std::fabs(x - ty) + std::fabs(y - tx) : std::fabs(x - tx) + std::fabs(y - ty);
      best = std::max(best, num / den);
    }
  }
  return best;
}

}  // namespace

TEST_CASE("uniform_epsdelta_holds on the documented pair sets") {
  CHECK(uniform_epsdelta_holds(pairs({{2, 1}, {3, 3}})).holds);
  const auto v = uniform_epsdelta_holds(pairs({{2, Rational(5, 2)}}));
  CHECK_FALSE(v.holds);
  REQUIRE(v.epsilon);
  CHECK(*v.epsilon == Rational(9, 4));
  CHECK(uniform_epsdelta_holds(SDPairSet{}).holds);
}

TEST_CASE("dense-scan oracle confirms the documented verdicts") {
  CHECK(dense_scan_holds(pairs({{2, 1}, {3, 3}})));
  CHECK_FALSE(dense_scan_holds(pairs({{2, Rational(5, 2)}})));
  CHECK_FALSE(dense_scan_holds(pairs({{0, 1}})));
  CHECK(dense_scan_holds(SDPairSet{}));
}

TEST_CASE("epsgrid_oracle on the documented pair sets") {
  CHECK(epsgrid_oracle(pairs({{2, 1}})).holds);
  CHECK_FALSE(epsgrid_oracle(pairs({{0, 1}})).holds);
  CHECK_FALSE(epsgrid_oracle(pairs({{2, Rational(5, 2)}})).holds);
  CHECK(epsgrid_oracle(pairs({{2, 1}, {3, 3}})).holds);
}

TEST_CASE("reduction, eps-grid oracle and dense scan agree on random pair sets") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> count(0, 6), half_units(0, 8);
  for (int t = 0; t < 1000; ++t) {
    SDPairSet set;
    const int m = count(rng);
    for (int i = 0; i < m; ++i) set.pairs.push_back(SDPair{Rational(half_units(rng), 2), Rational(half_units(rng), 2), 0, 0});
    const bool expected = dense_scan_holds(set);
    CHECK(uniform_epsdelta_holds(set).holds == expected);
    CHECK(epsgrid_oracle(set).holds == expected);
  }
}

TEST_CASE("a failing verdict names an eps in [S, D) for its witness") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> half_units(0, 8);
  for (int t = 0; t < 300; ++t) {
    SDPairSet set;
    for (int i = 0; i < 4; ++i) set.pairs.push_back(SDPair{Rational(half_units(rng), 2), Rational(half_units(rng), 2), 0, 0});
    const auto v = uniform_epsdelta_holds(set);
    if (v.holds) continue;
    REQUIRE(v.witness);
    REQUIRE(v.epsilon);
    CHECK(v.witness->s <= *v.epsilon);
    CHECK(*v.epsilon < v.witness->d);
    CHECK(*v.epsilon > 0);
  }
}

TEST_CASE("least Kannan alpha of x/4 on the 101-point grid is exactly 1/3") {
  const auto r = min_kannan_alpha(quarter_grid());
  REQUIRE(r.alpha);
  CHECK(*r.alpha == Rational(1, 3));
  CHECK(std::fabs(to_double(*r.alpha) - float_alpha(false)) < 1e-12);
  CHECK(r.is_contraction());
}

TEST_CASE("least Chatterjea alpha of x/4 on the 101-point grid matches brute force") {
  const auto r = min_chatterjea_alpha(quarter_grid());
  REQUIRE(r.alpha);
  CHECK(std::fabs(to_double(*r.alpha) - float_alpha(true)) < 1e-12);
  CHECK(*r.alpha == Rational(1, 5));
}

TEST_CASE("alpha of constant, identity and swap maps") {
  const auto unit = FiniteMetricSpace::uniform(2);
  CHECK(*min_kannan_alpha(unit, SelfMap::constant(2, 0)).alpha == 0);
  CHECK(*min_chatterjea_alpha(unit, SelfMap::constant(2, 1)).alpha == 0);
  // identity: zero Kannan denominator with a positive numerator
  const auto id = min_kannan_alpha(unit, SelfMap::identity(2));
  CHECK_FALSE(id.alpha);
  CHECK_FALSE(id.is_contraction());
  CHECK(*min_chatterjea_alpha(unit, SelfMap::identity(2)).alpha == Rational(1, 2));
  const SelfMap swap({1, 0});
  CHECK(*min_kannan_alpha(unit, swap).alpha == Rational(1, 2));
  CHECK_FALSE(min_chatterjea_alpha(unit, swap).alpha);
  CHECK(*min_kannan_alpha(FiniteMetricSpace::uniform(1), SelfMap::identity(1)).alpha == 0);
}

TEST_CASE("CM and CM2 predicates on two points") {
  const auto unit = FiniteMetricSpace::uniform(2);
  const SelfMap swap({1, 0});
  CHECK(satisfies_cm(unit, SelfMap::constant(2, 0)).holds);
  CHECK(satisfies_cm2(unit, SelfMap::constant(2, 1)).holds);
  const auto id = satisfies_cm(unit, SelfMap::identity(2));
  CHECK_FALSE(id.holds);
  REQUIRE(id.witness);
  CHECK(*id.witness == std::pair<Point, Point>{0, 1});
  CHECK_FALSE(satisfies_cm(unit, swap).holds);
  CHECK_FALSE(satisfies_cm2(unit, swap).holds);
  CHECK_FALSE(satisfies_cm2(unit, SelfMap::identity(2)).holds);
}

TEST_CASE("constant maps satisfy CM and CM2 on random spaces") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t n = 1 + seed % 6;
    const auto space = random_space(n, 10, seed);
    const auto T = SelfMap::constant(n, seed % n);
    CHECK(satisfies_cm(space, T).holds);
    CHECK(satisfies_cm2(space, T).holds);
  }
}

TEST_CASE("global and Picard pair sets") {
  const auto one = FiniteMetricSpace::uniform(1);
  const auto g = global_pairs_kannan(one, SelfMap::identity(1));
  REQUIRE(g.pairs.size() == 1);
  CHECK(g.pairs[0].s == 0);
  CHECK(g.pairs[0].d == 0);

  const auto path = path3();
  const auto c = SelfMap::constant(3, 1);
  for (const auto& set : {global_pairs_kannan(path, c), global_pairs_chatterjea(path, c), picard_pairs_kannan(path, c, 0)}) {
    for (const auto& p : set.pairs) CHECK(p.d == 0);
    CHECK(uniform_epsdelta_holds(set).holds);
  }

  const auto fixed = picard_pairs_kannan(path, SelfMap({0, 0, 1}), 0);
  REQUIRE(fixed.pairs.size() == 1);
  CHECK(fixed.pairs[0].s == 0);
  CHECK(fixed.pairs[0].d == 0);

  // swap: Chatterjea pairs contain S = 0 with D = 1, Kannan pairs only D <= S
  const auto unit = FiniteMetricSpace::uniform(2);
  const SelfMap swap({1, 0});
  const auto ch = picard_pairs_chatterjea(unit, swap, 0);
  CHECK(std::any_of(ch.pairs.begin(), ch.pairs.end(), [](const SDPair& p) { return p.s == 0 && p.d == 1; }));
  CHECK_FALSE(uniform_epsdelta_holds(ch).holds);
  const auto kn = picard_pairs_kannan(unit, swap, 0);
  for (const auto& p : kn.pairs) CHECK(p.d <= p.s);
  CHECK(uniform_epsdelta_holds(kn).holds);
  CHECK_FALSE(uniform_epsdelta_holds(global_pairs_chatterjea(unit, swap)).holds);
}

TEST_CASE("detect_fixed_points") {
  CHECK(detect_fixed_points(SelfMap::identity(4)) == std::vector<Point>{0, 1, 2, 3});
  CHECK(detect_fixed_points(SelfMap::constant(4, 3)) == std::vector<Point>{3});
  CHECK(detect_fixed_points(SelfMap({1, 0})).empty());
}

TEST_CASE("implications between predicates hold on random instances") {
  std::mt19937_64 rng(99);
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    const std::size_t n = 2 + seed % 4;
    const auto space = random_space(n, 8, seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::vector<Point> image(n);
    for (auto& y : image) y = pick(rng);
    const SelfMap T(image);
    const auto r = classify(space, T);
    if (r.kannan.is_contraction()) CHECK(r.cm.holds);
    if (r.chatterjea.is_contraction()) CHECK(r.cm2.holds);
    if (r.banach) CHECK(satisfies_banach_contractive(space, T).holds);
    for (Point x0 = 0; x0 < n; ++x0) {
      if (r.global_epsdelta_kannan) CHECK(r.picard_epsdelta_kannan[x0]);
      if (r.global_epsdelta_chatterjea) CHECK(r.picard_epsdelta_chatterjea[x0]);
    }
    if (r.cm.holds || r.cm2.holds) CHECK(r.fixed_points.size() == 1);
  }
}

TEST_CASE("classify CSV row") {
  const auto r = classify(FiniteMetricSpace::uniform(2), SelfMap::constant(2, 0));
  const std::string row = r.csv_row();
  CHECK(row.rfind("[0 0]", 0) == 0);
  const std::string header = ConditionReport::csv_header();
  CHECK(std::count(row.begin(), row.end(), ',') == std::count(header.begin(), header.end(), ','));
}
