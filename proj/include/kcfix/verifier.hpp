#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kcfix/conditions.hpp"
#include "kcfix/metric_space.hpp"
#include "kcfix/picard.hpp"

namespace kcfix {

enum class TheoremId { T2_1, T3_1, T4_1, T4_2, T5_2 };

std::string to_string(TheoremId id);
TheoremId parse_theorem(const std::string& text);  // "2.1", "3.1", ...
const std::vector<TheoremId>& all_theorems();

struct Violation {
  std::string instance;  // text serialization: the space and the offending map
  std::string clause;
};

/// Counts and failures of one theorem over one or many instances. Instances
/// whose hypothesis is false are counted as vacuous, never as failures.
struct VerificationOutcome {
  TheoremId theorem = TheoremId::T2_1;
  std::size_t instances_checked = 0;
  std::size_t hypothesis_holders = 0;
  std::size_t vacuous = 0;
  std::size_t pairsets_cross_checked = 0;  // reduction vs eps-grid oracle
  std::vector<Violation> violations;

  bool pass() const { return violations.empty(); }
  void merge(const VerificationOutcome& other);
  nlohmann::json to_json() const;
};

// Hypothesis: global Kannan eps-delta condition and (CM).
// Conclusion: exactly one fixed point, and every orbit reaches it.
VerificationOutcome verify_thm_2_1(const FiniteMetricSpace& space, const SelfMap& map);
// Under (CM): Picard-restricted Kannan eps-delta condition for every start
// <=> (unique fixed point and every orbit reaches it).
VerificationOutcome verify_thm_3_1(const FiniteMetricSpace& space, const SelfMap& map);
// Chatterjea analogues with (CM2).
VerificationOutcome verify_thm_4_1(const FiniteMetricSpace& space, const SelfMap& map);
VerificationOutcome verify_thm_4_2(const FiniteMetricSpace& space, const SelfMap& map);
// Under (CM): every orbit's gaps reach 0 <=> unique fixed point and convergence.
VerificationOutcome verify_thm_5_2(const FiniteMetricSpace& space, const SelfMap& map);

VerificationOutcome verify_theorem(TheoremId id, const FiniteMetricSpace& space, const SelfMap& map);

struct SweepConfig {
  enum class Mode { Exhaustive, Random };

  Mode mode = Mode::Exhaustive;
  std::vector<std::size_t> sizes{1, 2, 3};
  std::uint64_t max_value = 10;
  std::size_t pool = 50;      // exhaustive: seeded metrics per size >= 3
  std::size_t trials = 1000;  // random: instances per size
  std::uint64_t seed = 1;
  std::size_t exhaustive_bound = 4;
  std::vector<TheoremId> theorems = all_theorems();
};

/// Hypothesis counts for one space size.
struct Census {
  std::size_t n = 0;
  std::size_t instances = 0;
  std::size_t cm = 0;
  std::size_t cm2 = 0;
  std::size_t kannan = 0;      // min alpha < 1/2
  std::size_t chatterjea = 0;  // min alpha < 1/2
};

struct SweepReport {
  SweepConfig config;
  std::vector<VerificationOutcome> outcomes;
  std::vector<Census> census;

  bool pass() const;
  nlohmann::json to_json() const;
  std::string census_csv() const;
  std::string table() const;
};

/// Exhaustive mode: sizes <= 2 use the uniform unit space, larger sizes a pool
/// of `pool` seeded random metrics; every n^n self-map is checked. Random mode:
/// `trials` seeded (space, map) instances per size. Results are deterministic
/// in the configuration.
SweepReport run_sweep(const SweepConfig& config);

/// Self-map for random trial `trial`: uniform, image confined to at most two
/// points, or a funnel toward a random root, in rotation.
SelfMap random_trial_map(const FiniteMetricSpace& space, std::uint64_t seed, std::size_t trial);

struct CompletenessCase {
  std::string fixture;
  std::string domain;
  MarginVerdict margin;
  FixtureSolveResult solve;
  bool clause_i = false;   // Picard-restricted eps-delta condition certified
  bool clause_ii = false;  // fixed point in the domain and the orbit converges to it
};

struct CompletenessReport {
  std::vector<CompletenessCase> cases;  // open x/4, closed x/4, open constant
  std::string verdict;
  bool consistent = false;  // open x/4 has (i) without (ii); the other two have both

  nlohmann::json to_json() const;
  std::string table() const;
};

/// Runs the punctured-interval x/4 fixture against its closed counterpart and
/// an open-domain constant map, with margin c = 2/3 and x0 = 1.
CompletenessReport completeness_necessity_demo();

struct Finding {
  std::string invariant;
  std::string instance;        // minimized, text format; empty for pair-set findings
  std::optional<SDPair> pair;  // minimized pair-set witness
  std::string detail;
};

struct SearchReport {
  std::size_t trials_run = 0;
  std::optional<Finding> finding;
};

/// Randomized falsification over the cross-module implications: alpha < 1/2
/// implies (CM)/(CM2); (CM)/(CM2) imply a unique, globally attracting fixed
/// point; `decider` agrees with the eps-grid oracle on random pair sets and on
/// every instance pair set; global eps-delta implies Picard eps-delta. Stops
/// at the first finding, shrunk to the orbits involved.
SearchReport search_counterexample(const SweepConfig& config, const EpsDeltaDecider& decider = uniform_epsdelta_holds);

/// Random pair set with entries in {0, 1/2, ..., max_half/2}; ties are common.
SDPairSet random_pair_set(std::uint64_t seed, std::size_t max_pairs = 8, unsigned max_half = 8);

}  // namespace kcfix
