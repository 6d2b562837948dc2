#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "kcfix/metric_space.hpp"

using namespace kcfix;

namespace {

DistanceTable table3(const Rational& d01, const Rational& d12, const Rational& d02) {
  return {{0, d01, d02}, {d01, 0, d12}, {d02, d12, 0}};
}

// Shortest path by enumerating every simple path (permutations of the
// intermediate points); independent of the Floyd-Warshall closure.
Rational brute_shortest(const DistanceTable& t, std::size_t from, std::size_t to) {
  const std::size_t n = t.size();
  std::vector<std::size_t> others;
  for (std::size_t k = 0; k < n; ++k) {
    if (k != from && k != to) others.push_back(k);
  }
  Rational best = t[from][to];
  for (std::size_t mask = 0; mask < (1u << others.size()); ++mask) {
    std::vector<std::size_t> mids;
    for (std::size_t b = 0; b < others.size(); ++b) {
      if (mask & (1u << b)) mids.push_back(others[b]);
    }
    std::sort(mids.begin(), mids.end());
    do {
      Rational len = 0;
      std::size_t at = from;
      for (auto m : mids) {
        len += t[at][m];
        at = m;
      }
      len += t[at][to];
      if (len < best) best = len;
    } while (std::next_permutation(mids.begin(), mids.end()));
  }
  return best;
}

}  // namespace

TEST_CASE("validate_metric accepts the equality case of the triangle inequality") {
  CHECK(validate_metric(table3(1, 1, 2)).ok());
}

TEST_CASE("validate_metric names the violated triangle") {
  const auto report = validate_metric(table3(1, 1, 5));
  REQUIRE_FALSE(report.ok());
  const auto& v = report.violations.front();
  CHECK(v.axiom == Axiom::Triangle);
  CHECK(v.witness[0] == 0);
  CHECK(v.witness[1] == 1);
  CHECK(v.witness[2] == 2);
}

TEST_CASE("validate_metric flags distinct points at distance zero") {
  const auto report = validate_metric({{0, 0}, {0, 0}});
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0].axiom == Axiom::Positivity);
  CHECK(report.violations[0].witness[0] == 0);
  CHECK(report.violations[0].witness[1] == 1);
}

TEST_CASE("validate_metric flags asymmetry and a nonzero diagonal") {
  auto report = validate_metric({{0, 1}, {2, 0}});
  REQUIRE_FALSE(report.ok());
  CHECK(report.violations[0].axiom == Axiom::Symmetry);
  report = validate_metric({{1, 1}, {1, 0}});
  CHECK(report.violations[0].axiom == Axiom::ZeroDiagonal);
}

TEST_CASE("validate_metric rejects non-square tables") {
  CHECK_THROWS_AS(validate_metric({{0, 1}, {1}}), ShapeError);
  CHECK_THROWS_AS(validate_metric({}), ShapeError);
}

TEST_CASE("FiniteMetricSpace refuses invalid tables") {
  CHECK_THROWS_AS(FiniteMetricSpace(table3(1, 1, 5)), MetricError);
}

TEST_CASE("metric_repair matches the shortest-path oracle") {
  SUBCASE("1,1,5") {
    const auto t = table3(1, 1, 5);
    const auto s = metric_repair(t);
    CHECK(s(0, 2) == brute_shortest(t, 0, 2));
    CHECK(s(0, 2) == 2);
  }
  SUBCASE("3,4,10") {
    const auto t = table3(3, 4, 10);
    const auto s = metric_repair(t);
    CHECK(s(0, 2) == brute_shortest(t, 0, 2));
    CHECK(s(0, 2) == 7);
  }
  SUBCASE("already a metric") {
    const auto t = table3(1, 1, 2);
    CHECK(metric_repair(t).table() == t);
  }
}

TEST_CASE("metric_repair rejects tables it cannot repair") {
  CHECK_THROWS_AS(metric_repair({{0, 0}, {0, 0}}), MetricError);
  CHECK_THROWS_AS(metric_repair({{0, 1}, {2, 0}}), MetricError);
}

TEST_CASE("metric_repair is idempotent, non-increasing and agrees with the path oracle") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    std::mt19937_64 rng(seed);
    const std::size_t n = 2 + seed % 5;
    std::uniform_int_distribution<int> v(1, 20);
    DistanceTable t(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) t[i][j] = t[j][i] = Rational(v(rng));
    }
    const auto repaired = metric_repair(t);
    CHECK(metric_repair(repaired.table()) == repaired);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        CHECK(repaired(i, j) <= t[i][j]);
        if (i != j) CHECK(repaired(i, j) == brute_shortest(t, i, j));
      }
    }
  }
}

TEST_CASE("random_space is deterministic and always a metric") {
  CHECK(random_space(1, 5, 3).size() == 1);
  CHECK(random_space(5, 10, 7) == random_space(5, 10, 7));
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto s = random_space(1 + seed % 7, 1 + seed % 13, seed);
    REQUIRE(validate_metric(s.table()).ok());
  }
}

TEST_CASE("self-map enumeration covers all n^n maps exactly once") {
  std::set<std::vector<Point>> seen;
  for_each_self_map(3, [&](const SelfMap& m) { seen.insert(m.image()); });
  CHECK(seen.size() == 27);
  CHECK(SelfMap::count(4) == 256);
  CHECK_THROWS(SelfMap(std::vector<Point>{0, 2}));
}

TEST_CASE("orbit classifies constant maps as fixed points within one step") {
  const auto space = FiniteMetricSpace::uniform(4);
  const auto T = SelfMap::constant(4, 2);
  for (Point x0 = 0; x0 < 4; ++x0) {
    const Orbit o = orbit(space, T, x0, 8);
    CHECK(o.terminal.kind == TerminalKind::FixedPoint);
    CHECK(o.terminal.index <= 1);
    CHECK(o.points[o.terminal.index] == 2);
  }
}

TEST_CASE("orbit of the swap map is a 2-cycle entered at 0") {
  const auto space = FiniteMetricSpace::uniform(2);
  const SelfMap swap({1, 0});
  for (Point x0 = 0; x0 < 2; ++x0) {
    const Orbit o = orbit(space, swap, x0, 8);
    CHECK(o.terminal.kind == TerminalKind::Cycle);
    CHECK(o.terminal.index == 0);
    CHECK(o.terminal.period == 2);
    CHECK(gap_sequence(space, o) == std::vector<Rational>{1, 1});
  }
}

TEST_CASE("orbit respects the step budget") {
  const auto space = FiniteMetricSpace::uniform(3);
  const SelfMap shift({1, 2, 2});
  const Orbit o = orbit(space, shift, 0, 1);
  CHECK(o.terminal.kind == TerminalKind::Truncated);
  CHECK(o.points == std::vector<Point>{0, 1});
  CHECK(gap_sequence(space, o).size() == 1);
}

TEST_CASE("orbit property: consecutive states follow the map and 2n steps never truncate") {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const std::size_t n = 1 + seed % 6;
    const auto space = random_space(n, 9, seed);
    std::mt19937_64 rng(seed * 31 + 1);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::vector<Point> image(n);
    for (auto& y : image) y = pick(rng);
    const SelfMap T(image);
    const Point x0 = pick(rng);
    const Orbit o = orbit(space, T, x0, 2 * n);
    REQUIRE(o.terminal.kind != TerminalKind::Truncated);
    for (std::size_t k = 0; k + 1 < 3 * n; ++k) CHECK(o.state_at(k + 1) == T(o.state_at(k)));
    const auto gaps = gap_sequence(space, o);
    for (std::size_t k = 0; k < gaps.size(); ++k) {
      CHECK((gaps[k] == 0) == (T(o.state_at(k)) == o.state_at(k)));
    }
  }
}

TEST_CASE("subspace restriction keeps distances and renumbers the map") {
  const auto space = random_space(5, 10, 11);
  const SelfMap T({1, 1, 1, 0, 3});
  const std::vector<Point> keep{1, 3, 4};
  CHECK_THROWS(T.restrict_to(keep));
  const std::vector<Point> closed{0, 1};
  const auto sub = space.restrict_to(closed);
  CHECK(sub(0, 1) == space(0, 1));
  CHECK(T.restrict_to(closed).image() == std::vector<Point>{1, 1});
}
