#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "kcfix/rational.hpp"

namespace kcfix {

using Point = std::size_t;
using DistanceTable = std::vector<std::vector<Rational>>;

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class MetricError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Axiom { ZeroDiagonal, Nonnegativity, Positivity, Symmetry, Triangle };

std::string to_string(Axiom axiom);

/// One failed axiom instance. `witness` holds `arity` meaningful indices:
/// (i) for ZeroDiagonal, (i, j) for pairwise axioms, and (i, j, k) with
/// d(i,k) > d(i,j) + d(j,k) for Triangle.
struct AxiomViolation {
  Axiom axiom;
  std::size_t arity;
  Point witness[3];

  std::string describe() const;
};

struct ValidationReport {
  std::vector<AxiomViolation> violations;

  bool ok() const { return violations.empty(); }
};

/// Checks the three metric axiom families exactly. Throws ShapeError when the
/// table is empty or not square.
ValidationReport validate_metric(const DistanceTable& dist);

/// Finite metric space with an exact distance table. Construction validates
/// every axiom; an invalid table throws MetricError.
class FiniteMetricSpace {
 public:
  explicit FiniteMetricSpace(const DistanceTable& dist);

  /// Points on the real line; distances are |a - b|. Coordinates must be distinct.
  static FiniteMetricSpace on_line(std::span<const Rational> coords);

  /// Every pair of distinct points at distance `value`.
  static FiniteMetricSpace uniform(std::size_t n, const Rational& value = Rational(1));

  std::size_t size() const { return n_; }

  const Rational& operator()(Point i, Point j) const { return dist_[i * n_ + j]; }

  DistanceTable table() const;

  /// Subspace on the listed points, in the listed order.
  FiniteMetricSpace restrict_to(std::span<const Point> points) const;

  friend bool operator==(const FiniteMetricSpace&, const FiniteMetricSpace&) = default;

 private:
  FiniteMetricSpace() = default;

  std::size_t n_ = 0;
  std::vector<Rational> dist_;
};

/// All-pairs shortest-path closure of a symmetric, zero-diagonal table with
/// strictly positive off-diagonal entries. Entries never increase, and a
/// table that is already a metric comes back unchanged.
FiniteMetricSpace metric_repair(const DistanceTable& sym);

/// Off-diagonal entries drawn uniformly from {1..max_value}, then repaired.
/// Deterministic in `seed`.
FiniteMetricSpace random_space(std::size_t n, std::uint64_t max_value, std::uint64_t seed);

/// Total self-map of {0..n-1} stored as an image table.
class SelfMap {
 public:
  explicit SelfMap(std::vector<Point> image);

  static SelfMap constant(std::size_t n, Point p);
  static SelfMap identity(std::size_t n);

  /// Base-n decoding of `code` in [0, n^n); digit i is the image of point i.
  static SelfMap from_code(std::size_t n, std::uint64_t code);

  /// n^n, or throws std::overflow_error when it does not fit.
  static std::uint64_t count(std::size_t n);

  std::size_t size() const { return image_.size(); }
  Point operator()(Point x) const { return image_[x]; }
  const std::vector<Point>& image() const { return image_; }

  /// Restriction to a forward-closed subset, renumbered by position in `points`.
  SelfMap restrict_to(std::span<const Point> points) const;

  std::string to_string() const;

  friend bool operator==(const SelfMap&, const SelfMap&) = default;

 private:
  std::vector<Point> image_;
};

void for_each_self_map(std::size_t n, const std::function<void(const SelfMap&)>& fn);

enum class TerminalKind { FixedPoint, Cycle, Truncated };

std::string to_string(TerminalKind kind);

struct Terminal {
  TerminalKind kind = TerminalKind::Truncated;
  // FixedPoint: first index m with x_m = x_{m+1}. Cycle: entry index.
  // Truncated: the step budget that ran out.
  std::size_t index = 0;
  std::size_t period = 0;  // Cycle only, always >= 2
};

/// Picard sequence x_0, x_1, ... up to the first repeated state. For FixedPoint
/// and Cycle terminals `points` lists every distinct state exactly once.
struct Orbit {
  Point start = 0;
  std::vector<Point> points;
  Terminal terminal;

  /// x_i for any i >= 0, following the fixed point or cycle past the stored
  /// prefix. Throws std::out_of_range past a Truncated orbit.
  Point state_at(std::size_t i) const;

  /// Index bound past which no new (x_i, x_{i+1}) configuration appears.
  std::size_t horizon() const;
};

/// Iterates T from x0 using at most `max_steps` map applications.
Orbit orbit(const FiniteMetricSpace& space, const SelfMap& map, Point x0, std::size_t max_steps);

/// a_k = d(x_k, x_{k+1}) for every computed consecutive pair. A FixedPoint
/// orbit ends with a single zero gap.
std::vector<Rational> gap_sequence(const FiniteMetricSpace& space, const Orbit& orb);

}  // namespace kcfix
