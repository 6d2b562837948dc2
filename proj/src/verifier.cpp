#include "kcfix/verifier.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "kcfix/instance_io.hpp"
#include "kcfix/sequences.hpp"

namespace kcfix {

std::string to_string(TheoremId id) {
  switch (id) {
    case TheoremId::T2_1: return "2.1";
    case TheoremId::T3_1: return "3.1";
    case TheoremId::T4_1: return "4.1";
    case TheoremId::T4_2: return "4.2";
    case TheoremId::T5_2: return "5.2";
  }
  return "?";
}

TheoremId parse_theorem(const std::string& text) {
  for (TheoremId id : all_theorems()) {
    if (to_string(id) == text) return id;
  }
  throw std::invalid_argument("unknown theorem '" + text + "' (expected 2.1, 3.1, 4.1, 4.2, 5.2 or all)");
}

const std::vector<TheoremId>& all_theorems() {
  static const std::vector<TheoremId> ids{TheoremId::T2_1, TheoremId::T3_1, TheoremId::T4_1, TheoremId::T4_2,
                                          TheoremId::T5_2};
  return ids;
}

void VerificationOutcome::merge(const VerificationOutcome& other) {
  instances_checked += other.instances_checked;
  hypothesis_holders += other.hypothesis_holders;
  vacuous += other.vacuous;
  pairsets_cross_checked += other.pairsets_cross_checked;
  violations.insert(violations.end(), other.violations.begin(), other.violations.end());
}

nlohmann::json VerificationOutcome::to_json() const {
  nlohmann::json v = nlohmann::json::array();
  for (const auto& x : violations) v.push_back({{"instance", x.instance}, {"clause", x.clause}});
  return {{"theorem", to_string(theorem)},
          {"instances", instances_checked},
          {"hypothesis_holders", hypothesis_holders},
          {"vacuous", vacuous},
          {"pairsets_cross_checked", pairsets_cross_checked},
          {"violations", v},
          {"pass", pass()}};
}

namespace {

std::string serialize(const FiniteMetricSpace& space, const SelfMap& map) {
  return format_instance_text(Instance{space, {map}});
}

// Checks one instance of one theorem, collecting failures with context.
class Check {
 public:
  Check(TheoremId id, const FiniteMetricSpace& space, const SelfMap& map) : space_(space), map_(map) {
    out_.theorem = id;
    out_.instances_checked = 1;
  }

  // Reduction verdict, cross-checked against the eps-grid oracle.
  bool epsdelta(const SDPairSet& set) {
    const EpsDeltaVerdict fast = uniform_epsdelta_holds(set);
    const EpsDeltaVerdict slow = epsgrid_oracle(set);
    ++out_.pairsets_cross_checked;
    if (fast.holds != slow.holds) fail("reduction and eps-grid oracle disagree on " + to_string(set.source));
    return fast.holds;
  }

  void fail(const std::string& clause) { out_.violations.push_back(Violation{serialize(space_, map_), clause}); }

  VerificationOutcome vacuous() {
    out_.vacuous = 1;
    return out_;
  }

  VerificationOutcome held() {
    out_.hypothesis_holders = 1;
    return out_;
  }

 private:
  const FiniteMetricSpace& space_;
  const SelfMap& map_;
  VerificationOutcome out_;
};

// Exactly one fixed point and every orbit reaches it.
bool unique_attracting_fixed_point(const FiniteMetricSpace& space, const SelfMap& map, std::string* why = nullptr) {
  const auto fixed = detect_fixed_points(map);
  if (fixed.size() != 1) {
    if (why) *why = std::to_string(fixed.size()) + " fixed points";
    return false;
  }
  for (Point x0 = 0; x0 < space.size(); ++x0) {
    const Orbit orb = orbit(space, map, x0, 2 * space.size());
    if (orb.terminal.kind != TerminalKind::FixedPoint || orb.points[orb.terminal.index] != fixed.front()) {
      if (why) *why = "orbit from " + std::to_string(x0) + " ends in a " + to_string(orb.terminal.kind);
      return false;
    }
  }
  return true;
}

void check_gap_decrease(Check& check, const FiniteMetricSpace& space, const SelfMap& map) {
  for (Point x0 = 0; x0 < space.size(); ++x0) {
    const auto gaps = gap_sequence(space, orbit(space, map, x0, 2 * space.size()));
    if (auto k = verify_strict_decrease(gaps)) {
      check.fail("gap sequence from " + std::to_string(x0) + " not strictly decreasing at " + std::to_string(*k));
    }
  }
}

enum class Family { Kannan, Chatterjea };

VerificationOutcome verify_existence(TheoremId id, Family family, const FiniteMetricSpace& space,
                                     const SelfMap& map) {
  Check check(id, space, map);
  const bool pointwise = family == Family::Kannan ? satisfies_cm(space, map).holds : satisfies_cm2(space, map).holds;
  const bool global = check.epsdelta(family == Family::Kannan ? global_pairs_kannan(space, map)
                                                              : global_pairs_chatterjea(space, map));
  if (!(pointwise && global)) return check.vacuous();
  std::string why;
  if (!unique_attracting_fixed_point(space, map, &why)) check.fail("conclusion: " + why);
  return check.held();
}

VerificationOutcome verify_equivalence(TheoremId id, Family family, const FiniteMetricSpace& space,
                                       const SelfMap& map) {
  Check check(id, space, map);
  const bool pointwise = family == Family::Kannan ? satisfies_cm(space, map).holds : satisfies_cm2(space, map).holds;
  if (!pointwise) return check.vacuous();

  bool clause_i = true;
  for (Point x0 = 0; x0 < space.size(); ++x0) {
    const SDPairSet pairs = family == Family::Kannan ? picard_pairs_kannan(space, map, x0)
                                                     : picard_pairs_chatterjea(space, map, x0);
    clause_i = check.epsdelta(pairs) && clause_i;
  }
  std::string why;
  const bool clause_ii = unique_attracting_fixed_point(space, map, &why);
  if (clause_i != clause_ii) {
    check.fail(std::string("clause (i) is ") + (clause_i ? "true" : "false") + " but clause (ii) is " +
               (clause_ii ? "true" : "false (" + why + ")"));
  }
  check_gap_decrease(check, space, map);
  return check.held();
}

}  // namespace

VerificationOutcome verify_thm_2_1(const FiniteMetricSpace& space, const SelfMap& map) {
  return verify_existence(TheoremId::T2_1, Family::Kannan, space, map);
}

VerificationOutcome verify_thm_3_1(const FiniteMetricSpace& space, const SelfMap& map) {
  return verify_equivalence(TheoremId::T3_1, Family::Kannan, space, map);
}

VerificationOutcome verify_thm_4_1(const FiniteMetricSpace& space, const SelfMap& map) {
  return verify_existence(TheoremId::T4_1, Family::Chatterjea, space, map);
}

VerificationOutcome verify_thm_4_2(const FiniteMetricSpace& space, const SelfMap& map) {
  return verify_equivalence(TheoremId::T4_2, Family::Chatterjea, space, map);
}

VerificationOutcome verify_thm_5_2(const FiniteMetricSpace& space, const SelfMap& map) {
  Check check(TheoremId::T5_2, space, map);
  if (!satisfies_cm(space, map).holds) return check.vacuous();

  bool gaps_vanish = true;
  for (Point x0 = 0; x0 < space.size(); ++x0) {
    const GapConditionVerdicts g = gap_conditions(space, map, x0);
    gaps_vanish = gaps_vanish && g.i;
    if (!g.consistent) check.fail("gap conditions (ii)-(iv) disagree with the limit test from " + std::to_string(x0));
    if (g.v != g.i) check.fail("gap condition (v) differs from (i) from " + std::to_string(x0));
    // (v) is re-decided here so the pair set is also cross-checked.
    check.epsdelta(picard_pairs_kannan(space, map, x0));
  }
  std::string why;
  const bool clause_ii = unique_attracting_fixed_point(space, map, &why);
  if (gaps_vanish != clause_ii) {
    check.fail(std::string("gaps vanish = ") + (gaps_vanish ? "true" : "false") + " but clause (ii) is " +
               (clause_ii ? "true" : "false (" + why + ")"));
  }
  return check.held();
}

VerificationOutcome verify_theorem(TheoremId id, const FiniteMetricSpace& space, const SelfMap& map) {
  switch (id) {
    case TheoremId::T2_1: return verify_thm_2_1(space, map);
    case TheoremId::T3_1: return verify_thm_3_1(space, map);
    case TheoremId::T4_1: return verify_thm_4_1(space, map);
    case TheoremId::T4_2: return verify_thm_4_2(space, map);
    case TheoremId::T5_2: return verify_thm_5_2(space, map);
  }
  throw std::logic_error("unreachable theorem id");
}

bool SweepReport::pass() const {
  return std::all_of(outcomes.begin(), outcomes.end(), [](const auto& o) { return o.pass(); });
}

nlohmann::json SweepReport::to_json() const {
  nlohmann::json j;
  j["mode"] = config.mode == SweepConfig::Mode::Exhaustive ? "exhaustive" : "random";
  j["sizes"] = config.sizes;
  j["seed"] = config.seed;
  j["max_value"] = config.max_value;
  if (config.mode == SweepConfig::Mode::Exhaustive) {
    j["pool"] = config.pool;
  } else {
    j["trials"] = config.trials;
  }
  j["outcomes"] = nlohmann::json::array();
  for (const auto& o : outcomes) j["outcomes"].push_back(o.to_json());
  j["census"] = nlohmann::json::array();
  for (const auto& c : census) {
    j["census"].push_back({{"n", c.n},
                           {"instances", c.instances},
                           {"cm", c.cm},
                           {"cm2", c.cm2},
                           {"kannan", c.kannan},
                           {"chatterjea", c.chatterjea}});
  }
  j["note"] = "finite metric spaces are complete; incompleteness is exercised only by the continuous demo";
  j["pass"] = pass();
  return j;
}

std::string SweepReport::census_csv() const {
  std::ostringstream out;
  out << "n,instances,cm,cm2,kannan,chatterjea\n";
  for (const auto& c : census) {
    out << c.n << "," << c.instances << "," << c.cm << "," << c.cm2 << "," << c.kannan << "," << c.chatterjea << "\n";
  }
  return out.str();
}

std::string SweepReport::table() const {
  std::ostringstream out;
  out << "theorem  instances  holders  vacuous  pairsets  violations\n";
  for (const auto& o : outcomes) {
    out << to_string(o.theorem) << "      " << o.instances_checked << "  " << o.hypothesis_holders << "  "
        << o.vacuous << "  " << o.pairsets_cross_checked << "  " << o.violations.size() << "\n";
  }
  out << "census\n" << census_csv();
  for (const auto& o : outcomes) {
    for (const auto& v : o.violations) out << "VIOLATION " << to_string(o.theorem) << ": " << v.clause << "\n" << v.instance;
  }
  out << (pass() ? "PASS" : "FAIL") << "\n";
  return out.str();
}

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

void run_instance(SweepReport& report, Census& census, const FiniteMetricSpace& space, const SelfMap& map) {
  ++census.instances;
  census.cm += satisfies_cm(space, map).holds;
  census.cm2 += satisfies_cm2(space, map).holds;
  census.kannan += min_kannan_alpha(space, map).is_contraction();
  census.chatterjea += min_chatterjea_alpha(space, map).is_contraction();
  for (std::size_t t = 0; t < report.config.theorems.size(); ++t) {
    report.outcomes[t].merge(verify_theorem(report.config.theorems[t], space, map));
  }
}

}  // namespace

SelfMap random_trial_map(const FiniteMetricSpace& space, std::uint64_t seed, std::size_t trial) {
  const std::size_t n = space.size();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> point(0, n - 1);
  std::vector<Point> image(n);
  switch (trial % 3) {
    case 0:
      for (auto& y : image) y = point(rng);
      break;
    case 1: {
      const Point a = point(rng);
      const Point b = point(rng);
      std::bernoulli_distribution coin(0.5);
      for (auto& y : image) y = coin(rng) ? a : b;
      break;
    }
    default: {
      // Each point moves to a point strictly closer to the root (or the root).
      const Point root = point(rng);
      for (Point x = 0; x < n; ++x) {
        std::vector<Point> closer;
        for (Point y = 0; y < n; ++y) {
          if (space(y, root) < space(x, root)) closer.push_back(y);
        }
        if (closer.empty()) {
          image[x] = root;
        } else {
          std::uniform_int_distribution<std::size_t> pick(0, closer.size() - 1);
          image[x] = closer[pick(rng)];
        }
      }
      break;
    }
  }
  return SelfMap(std::move(image));
}

SweepReport run_sweep(const SweepConfig& config) {
  SweepReport report;
  report.config = config;
  for (TheoremId id : config.theorems) report.outcomes.push_back(VerificationOutcome{id, 0, 0, 0, 0, {}});

  for (std::size_t n : config.sizes) {
    if (n == 0) throw std::invalid_argument("space size must be positive");
    Census census;
    census.n = n;
    if (config.mode == SweepConfig::Mode::Exhaustive) {
      if (n > config.exhaustive_bound) {
        throw std::invalid_argument("exhaustive sweep limited to n <= " + std::to_string(config.exhaustive_bound));
      }
      std::vector<FiniteMetricSpace> pool;
      if (n <= 2) {
        pool.push_back(FiniteMetricSpace::uniform(n));
      } else {
        for (std::size_t i = 0; i < config.pool; ++i) {
          pool.push_back(random_space(n, config.max_value, mix_seed(config.seed, n, i)));
        }
      }
      for (const auto& space : pool) {
        for_each_self_map(n, [&](const SelfMap& map) { run_instance(report, census, space, map); });
      }
    } else {
      for (std::size_t t = 0; t < config.trials; ++t) {
        const std::uint64_t s = mix_seed(config.seed, n, t);
        const FiniteMetricSpace space = random_space(n, config.max_value, s);
        run_instance(report, census, space, random_trial_map(space, s ^ 0x9e3779b97f4a7c15ULL, t));
      }
    }
    report.census.push_back(census);
  }
  return report;
}

nlohmann::json CompletenessReport::to_json() const {
  nlohmann::json j;
  j["cases"] = nlohmann::json::array();
  for (const auto& c : cases) {
    nlohmann::json e{{"fixture", c.fixture},
                     {"domain", c.domain},
                     {"margin", to_string(c.margin.status)},
                     {"solve", to_string(c.solve.status)},
                     {"steps", c.solve.steps},
                     {"clause_i", c.clause_i},
                     {"clause_ii", c.clause_ii}};
    if (c.margin.delta_factor) e["delta_factor"] = to_string(*c.margin.delta_factor);
    if (c.solve.point) e["point"] = *c.solve.point;
    if (c.solve.excluded_limit) e["excluded_limit"] = to_string(*c.solve.excluded_limit);
    j["cases"].push_back(e);
  }
  j["verdict"] = verdict;
  j["consistent"] = consistent;
  return j;
}

std::string CompletenessReport::table() const {
  std::ostringstream out;
  for (const auto& c : cases) {
    out << c.fixture << " on " << c.domain << ": eps-delta " << to_string(c.margin.status);
    if (c.margin.delta_factor) out << " (delta = " << to_string(*c.margin.delta_factor) << " * eps)";
    out << "; iteration " << to_string(c.solve.status) << " after " << c.solve.steps << " steps";
    if (c.solve.point) out << " at " << *c.solve.point;
    if (c.solve.excluded_limit) out << "; orbit accumulates at " << to_string(*c.solve.excluded_limit) << ", outside the domain";
    out << "\n  clause (i) " << (c.clause_i ? "holds" : "fails") << ", clause (ii) "
        << (c.clause_ii ? "holds" : "fails") << "\n";
  }
  out << "verdict: " << verdict << "\n";
  return out.str();
}

CompletenessReport completeness_necessity_demo() {
  const Rational c(2, 3);
  const Rational x0(1);
  CompletenessReport report;
  for (const char* name : {"x-over-4-open", "x-over-4", "constant-half-open"}) {
    const ContinuousFixture& f = find_fixture(name);
    CompletenessCase cc;
    cc.fixture = f.name;
    cc.domain = f.domain.to_string();
    cc.margin = margin_epsdelta(f, x0, c);
    cc.solve = solve(f, to_double(x0));
    cc.clause_i = cc.margin.status == MarginStatus::Certified;
    cc.clause_ii = cc.solve.status == SolveStatus::Converged;
    report.cases.push_back(cc);
  }
  const auto& open = report.cases[0];
  report.consistent = open.clause_i && !open.clause_ii && report.cases[1].clause_i && report.cases[1].clause_ii &&
                      report.cases[2].clause_i && report.cases[2].clause_ii;
  report.verdict = report.consistent ? "completeness hypothesis necessary: (i) holds on (0,1] while (ii) fails"
                                     : "unexpected outcome";
  return report;
}

SDPairSet random_pair_set(std::uint64_t seed, std::size_t max_pairs, unsigned max_half) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> count(0, max_pairs);
  std::uniform_int_distribution<unsigned> value(0, max_half);
  SDPairSet out;
  const std::size_t m = count(rng);
  for (std::size_t i = 0; i < m; ++i) {
    Rational s(value(rng), 2);
    Rational d(value(rng), 2);
    s.canonicalize();
    d.canonicalize();
    out.pairs.push_back(SDPair{s, d, i, i});
  }
  return out;
}

namespace {

// Smallest single pair on which decider and oracle still disagree.
std::optional<SDPair> disagreement(const SDPairSet& set, const EpsDeltaDecider& decider) {
  if (decider(set).holds == epsgrid_oracle(set).holds) return std::nullopt;
  for (const auto& p : set.pairs) {
    SDPairSet single{set.source, {p}};
    if (decider(single).holds != epsgrid_oracle(single).holds) return p;
  }
  return set.pairs.empty() ? std::optional<SDPair>{} : set.pairs.front();
}

using InstanceCheck = std::function<std::optional<std::string>(const FiniteMetricSpace&, const SelfMap&)>;

struct NamedCheck {
  std::string name;
  InstanceCheck check;
  // Points whose orbits carry the violation.
  std::function<std::vector<Point>(const FiniteMetricSpace&, const SelfMap&)> involved;
};

std::vector<Point> orbit_closure(const FiniteMetricSpace& space, const SelfMap& map, const std::vector<Point>& seeds) {
  std::set<Point> keep;
  for (Point s : seeds) {
    for (Point p : orbit(space, map, s, space.size() + 1).points) keep.insert(p);
  }
  return {keep.begin(), keep.end()};
}

std::vector<Point> all_points(const FiniteMetricSpace& space, const SelfMap&) {
  std::vector<Point> v(space.size());
  for (Point i = 0; i < v.size(); ++i) v[i] = i;
  return v;
}

std::vector<Point> fixed_point_seeds(const FiniteMetricSpace& space, const SelfMap& map) {
  auto fixed = detect_fixed_points(map);
  if (fixed.size() >= 2) return {fixed[0], fixed[1]};
  return all_points(space, map);
}

std::vector<NamedCheck> instance_checks(const EpsDeltaDecider& decider) {
  std::vector<NamedCheck> checks;
  checks.push_back({"kannan alpha < 1/2 implies (CM)",
                    [](const FiniteMetricSpace& s, const SelfMap& m) -> std::optional<std::string> {
                      if (min_kannan_alpha(s, m).is_contraction() && !satisfies_cm(s, m).holds) return "CM fails";
                      return std::nullopt;
                    },
                    all_points});
  checks.push_back({"chatterjea alpha < 1/2 implies (CM2)",
                    [](const FiniteMetricSpace& s, const SelfMap& m) -> std::optional<std::string> {
                      if (min_chatterjea_alpha(s, m).is_contraction() && !satisfies_cm2(s, m).holds) return "CM2 fails";
                      return std::nullopt;
                    },
                    all_points});
  checks.push_back({"(CM) implies a unique attracting fixed point",
                    [](const FiniteMetricSpace& s, const SelfMap& m) -> std::optional<std::string> {
                      std::string why;
                      if (satisfies_cm(s, m).holds && !unique_attracting_fixed_point(s, m, &why)) return why;
                      return std::nullopt;
                    },
                    fixed_point_seeds});
  checks.push_back({"(CM2) implies a unique attracting fixed point",
                    [](const FiniteMetricSpace& s, const SelfMap& m) -> std::optional<std::string> {
                      std::string why;
                      if (satisfies_cm2(s, m).holds && !unique_attracting_fixed_point(s, m, &why)) return why;
                      return std::nullopt;
                    },
                    fixed_point_seeds});
  checks.push_back({"global eps-delta implies Picard eps-delta",
                    [decider](const FiniteMetricSpace& s, const SelfMap& m) -> std::optional<std::string> {
                      const bool gk = decider(global_pairs_kannan(s, m)).holds;
                      const bool gc = decider(global_pairs_chatterjea(s, m)).holds;
                      for (Point x0 = 0; x0 < s.size(); ++x0) {
                        if (gk && !decider(picard_pairs_kannan(s, m, x0)).holds) return "kannan from " + std::to_string(x0);
                        if (gc && !decider(picard_pairs_chatterjea(s, m, x0)).holds) {
                          return "chatterjea from " + std::to_string(x0);
                        }
                      }
                      return std::nullopt;
                    },
                    all_points});
  return checks;
}

}  // namespace

SearchReport search_counterexample(const SweepConfig& config, const EpsDeltaDecider& decider) {
  SearchReport report;
  const auto checks = instance_checks(decider);
  for (std::size_t t = 0; t < config.trials; ++t) {
    ++report.trials_run;
    const std::uint64_t s = mix_seed(config.seed, 0x5eed, t);

    const SDPairSet random_set = random_pair_set(s);
    if (auto p = disagreement(random_set, decider)) {
      report.finding = Finding{"decider agrees with the eps-grid oracle", "", p,
                               "random pair set, S = " + to_string(p->s) + ", D = " + to_string(p->d)};
      return report;
    }

    for (std::size_t n : config.sizes) {
      const FiniteMetricSpace space = random_space(n, config.max_value, mix_seed(s, n, 1));
      const SelfMap map = random_trial_map(space, mix_seed(s, n, 2), t);

      std::vector<SDPairSet> sets{global_pairs_kannan(space, map), global_pairs_chatterjea(space, map)};
      for (Point x0 = 0; x0 < n; ++x0) {
        sets.push_back(picard_pairs_kannan(space, map, x0));
        sets.push_back(picard_pairs_chatterjea(space, map, x0));
      }
      for (const auto& set : sets) {
        if (auto p = disagreement(set, decider)) {
          report.finding = Finding{"decider agrees with the eps-grid oracle", serialize(space, map), p,
                                   to_string(set.source) + " pair (" + std::to_string(p->u) + "," +
                                       std::to_string(p->v) + ")"};
          return report;
        }
      }

      for (const auto& c : checks) {
        auto detail = c.check(space, map);
        if (!detail) continue;
        // Shrink to the orbits involved when the violation survives restriction.
        const auto keep = orbit_closure(space, map, c.involved(space, map));
        std::string instance = serialize(space, map);
        if (keep.size() < n) {
          const auto sub_space = space.restrict_to(keep);
          const auto sub_map = map.restrict_to(keep);
          if (auto sub_detail = c.check(sub_space, sub_map)) {
            instance = serialize(sub_space, sub_map);
            detail = sub_detail;
          }
        }
        report.finding = Finding{c.name, instance, std::nullopt, *detail};
        return report;
      }
    }
  }
  return report;
}

}  // namespace kcfix
