#include <doctest.h>

#include "kcfix/instance_io.hpp"
#include "kcfix/verifier.hpp"

using namespace kcfix;

namespace {

// Test-side CM: d(Tx,Ty) < (d(x,Tx) + d(y,Ty)) / 2 over every x != y.
bool oracle_cm(const FiniteMetricSpace& d, const SelfMap& T) {
  for (Point x = 0; x < d.size(); ++x) {
    for (Point y = 0; y < d.size(); ++y) {
      if (x != y && !(2 * d(T(x), T(y)) < d(x, T(x)) + d(y, T(y)))) return false;
    }
  }
  return true;
}

bool oracle_cm2(const FiniteMetricSpace& d, const SelfMap& T) {
  for (Point x = 0; x < d.size(); ++x) {
    for (Point y = 0; y < d.size(); ++y) {
      if (x != y && !(2 * d(T(x), T(y)) < d(x, T(y)) + d(y, T(x)))) return false;
    }
  }
  return true;
}

// Every orbit ends at the same point.
bool oracle_globally_attracting(const SelfMap& T) {
  const std::size_t n = T.size();
  std::optional<Point> target;
  for (Point x = 0; x < n; ++x) {
    Point y = x;
    for (std::size_t k = 0; k < n; ++k) y = T(y);
    if (T(y) != y) return false;
    if (target && *target != y) return false;
    target = y;
  }
  return true;
}

SweepConfig exhaustive(std::vector<std::size_t> sizes, std::size_t pool = 20) {
  SweepConfig c;
  c.sizes = std::move(sizes);
  c.pool = pool;
  return c;
}

}  // namespace

TEST_CASE("theorem ids") {
  CHECK(parse_theorem("3.1") == TheoremId::T3_1);
  CHECK(to_string(TheoremId::T5_2) == "5.2");
  CHECK(all_theorems().size() == 5);
  CHECK_THROWS(parse_theorem("9.9"));
}

TEST_CASE("n = 2 census matches the hand count") {
  const auto report = run_sweep(exhaustive({2}));
  CHECK(report.pass());
  REQUIRE(report.census.size() == 1);
  const auto& c = report.census[0];
  CHECK(c.instances == 4);
  CHECK(c.cm == 2);
  CHECK(c.cm2 == 2);
  CHECK(c.kannan == 2);
  CHECK(c.chatterjea == 2);
}

TEST_CASE("theorem checks on single instances") {
  const std::vector<Rational> xs{0, 1, 2};
  const auto path = FiniteMetricSpace::on_line(xs);
  const auto unit = FiniteMetricSpace::uniform(2);
  const SelfMap swap({1, 0});
  for (TheoremId id : all_theorems()) {
    const auto c = verify_theorem(id, path, SelfMap::constant(3, 1));
    CHECK(c.pass());
    CHECK(c.hypothesis_holders == 1);
    const auto s = verify_theorem(id, unit, swap);
    CHECK(s.pass());
    CHECK(s.vacuous == 1);
    const auto one = verify_theorem(id, FiniteMetricSpace::uniform(1), SelfMap::identity(1));
    CHECK(one.pass());
    CHECK(one.hypothesis_holders == 1);
  }
  CHECK(verify_thm_3_1(unit, SelfMap::identity(2)).vacuous == 1);
}

TEST_CASE("exhaustive sweep agrees with the test-side hypothesis counts") {
  const auto report = run_sweep(exhaustive({1, 2, 3}, 10));
  CHECK(report.pass());
  REQUIRE(report.census.size() == 3);
  std::size_t cm = 0, cm2 = 0;
  for (const auto& outcome : report.outcomes) {
    CHECK(outcome.violations.empty());
    CHECK(outcome.pairsets_cross_checked > 0);
  }
  // n = 2 unit space through the oracle
  const auto unit = FiniteMetricSpace::uniform(2);
  for_each_self_map(2, [&](const SelfMap& T) {
    cm += oracle_cm(unit, T);
    cm2 += oracle_cm2(unit, T);
    if (oracle_cm(unit, T) || oracle_cm2(unit, T)) CHECK(oracle_globally_attracting(T));
  });
  CHECK(cm == report.census[1].cm);
  CHECK(cm2 == report.census[1].cm2);
}

TEST_CASE("CM and CM2 imply a globally attracting fixed point on random pools") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto space = random_space(3, 10, seed);
    for_each_self_map(3, [&](const SelfMap& T) {
      if (oracle_cm(space, T) || oracle_cm2(space, T)) CHECK(oracle_globally_attracting(T));
      CHECK(oracle_cm(space, T) == satisfies_cm(space, T).holds);
      CHECK(oracle_cm2(space, T) == satisfies_cm2(space, T).holds);
    });
  }
}

TEST_CASE("random sweep is deterministic in the seed") {
  SweepConfig c;
  c.mode = SweepConfig::Mode::Random;
  c.sizes = {4, 5};
  c.trials = 100;
  c.seed = 42;
  const auto a = run_sweep(c);
  const auto b = run_sweep(c);
  CHECK(a.pass());
  CHECK(a.to_json().dump() == b.to_json().dump());
  c.seed = 43;
  CHECK(run_sweep(c).to_json().dump() != a.to_json().dump());
}

TEST_CASE("random_trial_map is deterministic") {
  const auto space = random_space(5, 10, 1);
  for (std::size_t t = 0; t < 6; ++t) CHECK(random_trial_map(space, 9, t) == random_trial_map(space, 9, t));
}

TEST_CASE("outcome merge and JSON") {
  VerificationOutcome a, b;
  a.instances_checked = 2;
  b.instances_checked = 3;
  b.vacuous = 1;
  b.violations.push_back({"1\n0\n", "example"});
  a.merge(b);
  CHECK(a.instances_checked == 5);
  CHECK(a.vacuous == 1);
  CHECK_FALSE(a.pass());
  const auto j = a.to_json();
  CHECK(j["violations"][0]["clause"] == "example");
  // violation instances are in the text format
  const auto inst = parse_instance_text(j["violations"][0]["instance"].get<std::string>());
  CHECK(inst.space.size() == 1);
}

TEST_CASE("completeness demo") {
  const auto r = completeness_necessity_demo();
  CHECK(r.consistent);
  REQUIRE(r.cases.size() == 3);
  CHECK(r.cases[0].clause_i);
  CHECK_FALSE(r.cases[0].clause_ii);
  CHECK(r.cases[0].solve.status == SolveStatus::NoFixedPointDetected);
  CHECK(r.cases[1].clause_i);
  CHECK(r.cases[1].clause_ii);
  CHECK(r.cases[1].solve.status == SolveStatus::Converged);
  CHECK(r.cases[2].clause_i);
  CHECK(r.cases[2].clause_ii);
  CHECK(r.verdict.find("necessary") != std::string::npos);
}

TEST_CASE("counterexample search") {
  SweepConfig c;
  c.mode = SweepConfig::Mode::Random;
  c.sizes = {3, 4};
  c.trials = 300;
  c.seed = 5;
  const auto clean = search_counterexample(c);
  CHECK(clean.trials_run == 300);
  CHECK_FALSE(clean.finding);

  c.trials = 0;
  const auto none = search_counterexample(c);
  CHECK(none.trials_run == 0);
  CHECK_FALSE(none.finding);

  // strict D < S in place of D <= S
  c.trials = 300;
  const EpsDeltaDecider strict = [](const SDPairSet& set) {
    EpsDeltaVerdict v;
    for (const auto& p : set.pairs) {
      if (!(p.d < p.s)) {
        v.holds = false;
        v.witness = p;
        return v;
      }
    }
    return v;
  };
  const auto mutated = search_counterexample(c, strict);
  REQUIRE(mutated.finding);
  REQUIRE(mutated.finding->pair);
  CHECK(mutated.finding->pair->s == mutated.finding->pair->d);
}

TEST_CASE("random pair sets are reproducible and use the half grid") {
  const auto a = random_pair_set(3);
  const auto b = random_pair_set(3);
  REQUIRE(a.pairs.size() == b.pairs.size());
  for (std::size_t i = 0; i < a.pairs.size(); ++i) {
    CHECK(a.pairs[i].s == b.pairs[i].s);
    CHECK(Rational(2 * a.pairs[i].d).get_den() == 1);
  }
}
