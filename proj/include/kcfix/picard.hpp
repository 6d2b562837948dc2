#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kcfix/conditions.hpp"
#include "kcfix/metric_space.hpp"

namespace kcfix {

class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Interval {
  Rational lo;
  Rational hi;
  bool lo_closed = true;
  bool hi_closed = true;

  bool contains(const Rational& x) const;
  bool contains(double x) const;
  std::string to_string() const;
};

/// x -> slope * x + intercept, evaluated exactly or in binary floating point.
struct AffineRule {
  Rational slope;
  Rational intercept;

  Rational operator()(const Rational& x) const;
  double operator()(double x) const;

  /// The unique real fixed point, or nothing when slope == 1.
  std::optional<Rational> real_fixed_point() const;
};

/// Closed-form self-map of a real interval. `margin` is an analytic bound on
/// D/S over every pair of orbit indices (Kannan form) for any start; when it
/// is present, it covers the orbit tail beyond any finite horizon.
struct ContinuousFixture {
  std::string name;
  std::string description;
  Interval domain;
  AffineRule rule;
  std::optional<Rational> known_fixed_point;
  std::optional<Rational> known_kannan_alpha;
  std::optional<Rational> margin;
};

/// Whitelisted fixtures: constant-half, constant-half-open, x-over-4,
/// x-over-4-open, x-over-2.
const std::vector<ContinuousFixture>& fixture_catalog();

/// Throws std::invalid_argument listing the available names.
const ContinuousFixture& find_fixture(std::string_view name);

/// Affine fixture on `domain`; the tail margin 2|a|/(1-a) is attached when |a| < 1.
ContinuousFixture make_affine_fixture(std::string name, Interval domain, const Rational& slope,
                                      const Rational& intercept);

/// Exact iterates x_0..x_steps.
std::vector<Rational> fixture_orbit(const ContinuousFixture& fixture, const Rational& x0, std::size_t steps);

enum class SolveStatus { Converged, NoFixedPointDetected, Diverged };

std::string to_string(SolveStatus status);

struct FiniteSolveResult {
  SolveStatus status = SolveStatus::NoFixedPointDetected;
  std::optional<Point> point;
  std::size_t steps = 0;
  std::vector<Point> trace;
  std::vector<Rational> gaps;
  Terminal terminal;
  std::vector<std::size_t> decrease_violations;
};

struct FixtureSolveResult {
  SolveStatus status = SolveStatus::NoFixedPointDetected;
  std::optional<double> point;
  std::size_t steps = 0;
  std::vector<double> trace;
  std::vector<double> gaps;
  std::vector<std::size_t> decrease_violations;
  // Where the orbit accumulates when that point lies outside the domain.
  std::optional<Rational> excluded_limit;
};

inline constexpr double kDefaultTolerance = 1e-12;
inline constexpr std::size_t kDefaultFixtureIterations = 10000;

/// Exact iteration; stops at a zero gap, a cycle, or `max_iter` applications
/// (default 10 * n).
FiniteSolveResult solve(const FiniteMetricSpace& space, const SelfMap& map, Point x0,
                        std::optional<std::size_t> max_iter = std::nullopt);

/// Floating-point iteration; stops once a gap is <= tol. The limit is then the
/// rule's fixed point, and the run converges only when it lies in the domain.
/// Throws DomainError when x0 is outside the domain.
FixtureSolveResult solve(const ContinuousFixture& fixture, double x0, double tol = kDefaultTolerance,
                         std::size_t max_iter = kDefaultFixtureIterations);

/// First k with gaps[k+1] >= gaps[k], checked up to the first zero gap.
std::optional<std::size_t> verify_strict_decrease(std::span<const Rational> gaps);
std::optional<std::size_t> verify_strict_decrease(std::span<const double> gaps);

enum class MarginStatus { Certified, Refuted, HorizonLimited };

std::string to_string(MarginStatus status);

struct MarginVerdict {
  MarginStatus status = MarginStatus::HorizonLimited;
  std::optional<std::pair<std::size_t, std::size_t>> witness;  // orbit indices (i, j)
  // For Certified: delta(eps) = delta_factor * eps.
  std::optional<Rational> delta_factor;
};

/// Certifies the Picard-restricted Kannan eps-delta condition on a fixture
/// orbit by checking D <= c*S (and S = 0 => D = 0) exactly for all i, j <=
/// horizon, then extending past the horizon with the fixture's margin. With
/// D <= c*S, S < eps/c forces D < eps, so delta(eps) = eps*(1/c - 1) works.
MarginVerdict margin_epsdelta(const ContinuousFixture& fixture, const Rational& x0, const Rational& c,
                              std::size_t horizon = 64);

}  // namespace kcfix
