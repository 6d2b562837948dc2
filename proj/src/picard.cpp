#include "kcfix/picard.hpp"

#include <cmath>
#include <sstream>

namespace kcfix {

bool Interval::contains(const Rational& x) const {
  const bool above = lo_closed ? x >= lo : x > lo;
  const bool below = hi_closed ? x <= hi : x < hi;
  return above && below;
}

bool Interval::contains(double x) const {
  const double l = to_double(lo);
  const double h = to_double(hi);
  const bool above = lo_closed ? x >= l : x > l;
  const bool below = hi_closed ? x <= h : x < h;
  return above && below;
}

std::string Interval::to_string() const {
  return (lo_closed ? "[" : "(") + kcfix::to_string(lo) + "," + kcfix::to_string(hi) + (hi_closed ? "]" : ")");
}

Rational AffineRule::operator()(const Rational& x) const {
  Rational y = slope * x + intercept;
  return y;
}

double AffineRule::operator()(double x) const { return to_double(slope) * x + to_double(intercept); }

std::optional<Rational> AffineRule::real_fixed_point() const {
  if (slope == 1) return std::nullopt;
  Rational z = intercept / (1 - slope);
  return z;
}

ContinuousFixture make_affine_fixture(std::string name, Interval domain, const Rational& slope,
                                      const Rational& intercept) {
  ContinuousFixture f;
  f.name = std::move(name);
  f.domain = std::move(domain);
  f.rule = AffineRule{slope, intercept};
  if (auto z = f.rule.real_fixed_point(); z && f.domain.contains(*z)) f.known_fixed_point = z;
  Rational mag = abs(slope);
  if (mag < 1) {
    // x_n - z = a^n (x_0 - z), so D <= |e||a|(|a|^i + |a|^j) while
    // S = |e|(1-a)(|a|^i + |a|^j)/2.
    Rational m = 2 * mag / (1 - slope);
    f.margin = m;
  }
  return f;
}

const std::vector<ContinuousFixture>& fixture_catalog() {
  static const std::vector<ContinuousFixture> catalog = [] {
    const Interval closed{0, 1, true, true};
    const Interval half_open{0, 1, false, true};
    std::vector<ContinuousFixture> out;

    auto constant = make_affine_fixture("constant-half", closed, 0, Rational(1, 2));
    constant.description = "T(x) = 1/2 on [0,1]";
    constant.known_kannan_alpha = Rational(0);
    out.push_back(constant);

    auto constant_open = make_affine_fixture("constant-half-open", half_open, 0, Rational(1, 2));
    constant_open.description = "T(x) = 1/2 on (0,1]";
    constant_open.known_kannan_alpha = Rational(0);
    out.push_back(constant_open);

    auto quarter = make_affine_fixture("x-over-4", closed, Rational(1, 4), 0);
    quarter.description = "T(x) = x/4 on [0,1]";
    quarter.known_kannan_alpha = Rational(1, 3);
    out.push_back(quarter);

    auto quarter_open = make_affine_fixture("x-over-4-open", half_open, Rational(1, 4), 0);
    quarter_open.description = "T(x) = x/4 on (0,1]; the limit 0 is not in the space";
    quarter_open.known_kannan_alpha = Rational(1, 3);
    out.push_back(quarter_open);

    auto halving = make_affine_fixture("x-over-2", closed, Rational(1, 2), 0);
    halving.description = "T(x) = x/2 on [0,1]; converges but is not a Kannan contraction";
    halving.known_kannan_alpha = Rational(1);
    out.push_back(halving);
    return out;
  }();
  return catalog;
}

const ContinuousFixture& find_fixture(std::string_view name) {
  std::string names;
  for (const auto& f : fixture_catalog()) {
    if (f.name == name) return f;
    names += (names.empty() ? "" : ", ") + f.name;
  }
  throw std::invalid_argument("unknown fixture '" + std::string(name) + "'; available: " + names);
}

std::vector<Rational> fixture_orbit(const ContinuousFixture& fixture, const Rational& x0, std::size_t steps) {
  if (!fixture.domain.contains(x0)) {
    throw DomainError("start " + to_string(x0) + " outside " + fixture.domain.to_string());
  }
  std::vector<Rational> points{x0};
  points.reserve(steps + 1);
  for (std::size_t k = 0; k < steps; ++k) points.push_back(fixture.rule(points.back()));
  return points;
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::NoFixedPointDetected: return "no-fixed-point-detected";
    case SolveStatus::Diverged: return "diverged";
  }
  return "unknown";
}

namespace {

template <class T>
std::vector<std::size_t> all_decrease_violations(std::span<const T> gaps) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k + 1 < gaps.size(); ++k) {
    if (gaps[k] == 0) break;
    if (gaps[k + 1] >= gaps[k]) out.push_back(k);
  }
  return out;
}

template <class T>
std::optional<std::size_t> first_decrease_violation(std::span<const T> gaps) {
  auto all = all_decrease_violations(gaps);
  if (all.empty()) return std::nullopt;
  return all.front();
}

}  // namespace

std::optional<std::size_t> verify_strict_decrease(std::span<const Rational> gaps) {
  return first_decrease_violation(gaps);
}

std::optional<std::size_t> verify_strict_decrease(std::span<const double> gaps) {
  return first_decrease_violation(gaps);
}

FiniteSolveResult solve(const FiniteMetricSpace& space, const SelfMap& map, Point x0,
                        std::optional<std::size_t> max_iter) {
  if (x0 >= space.size()) throw DomainError("start point " + std::to_string(x0) + " outside the space");
  const std::size_t budget = max_iter.value_or(10 * space.size());
  const Orbit orb = orbit(space, map, x0, budget);

  FiniteSolveResult out;
  out.trace = orb.points;
  out.gaps = gap_sequence(space, orb);
  out.terminal = orb.terminal;
  out.decrease_violations = all_decrease_violations(std::span<const Rational>(out.gaps));
  if (orb.terminal.kind == TerminalKind::FixedPoint) {
    out.status = SolveStatus::Converged;
    out.point = orb.points[orb.terminal.index];
    out.steps = orb.terminal.index;
  } else {
    out.status = SolveStatus::NoFixedPointDetected;
    out.steps = orb.terminal.kind == TerminalKind::Cycle ? orb.points.size() : budget;
  }
  return out;
}

FixtureSolveResult solve(const ContinuousFixture& fixture, double x0, double tol, std::size_t max_iter) {
  if (!(tol > 0)) throw std::invalid_argument("tolerance must be positive");
  if (!std::isfinite(x0) || !fixture.domain.contains(x0)) {
    throw DomainError("start " + std::to_string(x0) + " outside " + fixture.domain.to_string());
  }

  FixtureSolveResult out;
  double x = x0;
  out.trace.push_back(x);
  for (std::size_t step = 0; step < max_iter; ++step) {
    const double next = fixture.rule(x);
    if (!std::isfinite(next) || !fixture.domain.contains(next)) {
      out.status = SolveStatus::Diverged;
      out.steps = step;
      break;
    }
    const double gap = std::fabs(next - x);
    out.gaps.push_back(gap);
    if (gap <= tol) {
      out.steps = step;
      const auto limit = fixture.rule.real_fixed_point();
      if (gap == 0 || (limit && fixture.domain.contains(*limit))) {
        out.status = SolveStatus::Converged;
        out.point = x;
      } else {
        out.status = SolveStatus::NoFixedPointDetected;
        out.excluded_limit = limit;
      }
      break;
    }
    out.trace.push_back(next);
    x = next;
    out.steps = step + 1;
  }
  out.decrease_violations = all_decrease_violations(std::span<const double>(out.gaps));
  return out;
}

std::string to_string(MarginStatus status) {
  switch (status) {
    case MarginStatus::Certified: return "certified";
    case MarginStatus::Refuted: return "refuted";
    case MarginStatus::HorizonLimited: return "horizon-limited";
  }
  return "unknown";
}

MarginVerdict margin_epsdelta(const ContinuousFixture& fixture, const Rational& x0, const Rational& c,
                              std::size_t horizon) {
  if (!(sgn(c) > 0 && c < 1)) throw std::invalid_argument("margin c must lie in (0,1)");
  const std::vector<Rational> xs = fixture_orbit(fixture, x0, horizon + 2);

  std::vector<Rational> gaps;
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) gaps.push_back(abs_diff(xs[k], xs[k + 1]));

  MarginVerdict out;
  for (std::size_t i = 0; i <= horizon; ++i) {
    for (std::size_t j = 0; j <= horizon; ++j) {
      const Rational s = half(gaps[i] + gaps[j]);
      const Rational d = abs_diff(xs[i + 1], xs[j + 1]);
      const bool bad = sgn(s) == 0 ? sgn(d) > 0 : d > c * s;
      if (bad) {
        out.status = MarginStatus::Refuted;
        out.witness = std::pair{i, j};
        return out;
      }
    }
  }
  if (fixture.margin && *fixture.margin <= c) {
    out.status = MarginStatus::Certified;
    out.delta_factor = Rational(1 / c - 1);
  } else {
    out.status = MarginStatus::HorizonLimited;
  }
  return out;
}

}  // namespace kcfix
