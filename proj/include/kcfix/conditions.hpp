#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kcfix/metric_space.hpp"

namespace kcfix {

enum class PairSource {
  Custom,
  GlobalBanach,
  GlobalKannan,
  GlobalChatterjea,
  PicardKannan,
  PicardChatterjea,
  GapSequence,
};

std::string to_string(PairSource source);

/// One instantiation of an epsilon-delta condition: the hypothesis value `s`
/// is compared against eps + delta and the conclusion value `d` against eps.
/// (u, v) records which points (or orbit indices) produced the pair.
struct SDPair {
  Rational s;
  Rational d;
  Point u = 0;
  Point v = 0;
};

struct SDPairSet {
  PairSource source = PairSource::Custom;
  std::vector<SDPair> pairs;
};

struct EpsDeltaVerdict {
  bool holds = true;
  std::optional<Rational> epsilon;  // an eps at which no delta works
  std::optional<SDPair> witness;
};

/// Decides "for every eps > 0 there is delta > 0 with S < eps + delta => D <= eps"
/// over a finite pair set. The condition holds iff D <= S for every pair; a
/// pair with D > S breaks every eps in [S, D), and the midpoint is reported.
EpsDeltaVerdict uniform_epsdelta_holds(const SDPairSet& pairs);

/// Independent check of the same quantifier statement. Evaluates
/// F(eps) = min{S : D > eps} at every critical eps (all S and D values,
/// midpoints between consecutive distinct values, one value above the
/// maximum) and requires F(eps) > eps, i.e. delta = F(eps) - eps exists.
EpsDeltaVerdict epsgrid_oracle(const SDPairSet& pairs);

using EpsDeltaDecider = std::function<EpsDeltaVerdict(const SDPairSet&)>;

/// Least alpha with D(x,y) <= alpha * denominator(x,y) over all pairs.
/// `alpha` is empty when some pair has a zero denominator and a positive
/// numerator; `pair` then names that pair, otherwise a maximizing pair.
struct AlphaResult {
  std::optional<Rational> alpha;
  std::optional<std::pair<Point, Point>> pair;

  /// alpha < 1/2
  bool is_contraction() const;
};

/// Finite sample of points on the real line with an exactly computable rule.
/// The rule's images need not lie in the sample; distances are |a - b|.
struct LineMap {
  std::vector<Rational> points;
  std::function<Rational(const Rational&)> rule;
};

AlphaResult min_kannan_alpha(const FiniteMetricSpace& space, const SelfMap& map);
AlphaResult min_kannan_alpha(const LineMap& sample);
AlphaResult min_chatterjea_alpha(const FiniteMetricSpace& space, const SelfMap& map);
AlphaResult min_chatterjea_alpha(const LineMap& sample);

struct PairCheck {
  bool holds = true;
  std::optional<std::pair<Point, Point>> witness;
};

/// x != y implies d(Tx,Ty) < d(x,y)
PairCheck satisfies_banach_contractive(const FiniteMetricSpace& space, const SelfMap& map);
/// x != y implies d(Tx,Ty) < (d(x,Tx) + d(y,Ty)) / 2
PairCheck satisfies_cm(const FiniteMetricSpace& space, const SelfMap& map);
/// x != y implies d(Tx,Ty) < (d(x,Ty) + d(y,Tx)) / 2
PairCheck satisfies_cm2(const FiniteMetricSpace& space, const SelfMap& map);

// Pair sets over all unordered pairs x <= y (x = y included, with D = 0).
SDPairSet global_pairs_banach(const FiniteMetricSpace& space, const SelfMap& map);
SDPairSet global_pairs_kannan(const FiniteMetricSpace& space, const SelfMap& map);
SDPairSet global_pairs_chatterjea(const FiniteMetricSpace& space, const SelfMap& map);

// Pair sets over every ordered pair of states (T^i x0, T^j x0), i, j >= 0,
// deduplicated by state.
SDPairSet picard_pairs_kannan(const FiniteMetricSpace& space, const SelfMap& map, Point x0);
SDPairSet picard_pairs_chatterjea(const FiniteMetricSpace& space, const SelfMap& map, Point x0);

std::vector<Point> detect_fixed_points(const SelfMap& map);

struct ConditionReport {
  SelfMap map;
  std::vector<Point> fixed_points;
  bool banach = false;  // contractive pairs plus the global Banach eps-delta condition
  AlphaResult kannan;
  AlphaResult chatterjea;
  PairCheck cm;
  PairCheck cm2;
  bool global_epsdelta_kannan = false;
  bool global_epsdelta_chatterjea = false;
  std::vector<bool> picard_epsdelta_kannan;      // per start point
  std::vector<bool> picard_epsdelta_chatterjea;  // per start point

  static std::string csv_header();
  std::string csv_row() const;
};

ConditionReport classify(const FiniteMetricSpace& space, const SelfMap& map);

}  // namespace kcfix
