#include "kcfix/metric_space.hpp"

#include <limits>
#include <random>
#include <sstream>

namespace kcfix {

std::string to_string(Axiom axiom) {
  switch (axiom) {
    case Axiom::ZeroDiagonal: return "zero-diagonal";
    case Axiom::Nonnegativity: return "nonnegativity";
    case Axiom::Positivity: return "positivity";
    case Axiom::Symmetry: return "symmetry";
    case Axiom::Triangle: return "triangle";
  }
  return "unknown";
}

std::string AxiomViolation::describe() const {
  std::ostringstream out;
  out << to_string(axiom) << " (";
  for (std::size_t i = 0; i < arity; ++i) out << (i ? "," : "") << witness[i];
  out << ")";
  return out.str();
}

ValidationReport validate_metric(const DistanceTable& dist) {
  const std::size_t n = dist.size();
  if (n == 0) throw ShapeError("distance table is empty");
  for (std::size_t i = 0; i < n; ++i) {
    if (dist[i].size() != n) {
      throw ShapeError("distance table is not square: row " + std::to_string(i) + " has " +
                       std::to_string(dist[i].size()) + " entries, expected " + std::to_string(n));
    }
  }

  ValidationReport report;
  auto add = [&](Axiom a, std::size_t arity, Point i, Point j = 0, Point k = 0) {
    report.violations.push_back(AxiomViolation{a, arity, {i, j, k}});
  };

  for (Point i = 0; i < n; ++i) {
    if (dist[i][i] != 0) add(Axiom::ZeroDiagonal, 1, i);
  }
  for (Point i = 0; i < n; ++i) {
    for (Point j = 0; j < n; ++j) {
      if (i == j) continue;
      if (sgn(dist[i][j]) < 0) add(Axiom::Nonnegativity, 2, i, j);
      if (i < j) {
        if (sgn(dist[i][j]) == 0 || sgn(dist[j][i]) == 0) add(Axiom::Positivity, 2, i, j);
        if (dist[i][j] != dist[j][i]) add(Axiom::Symmetry, 2, i, j);
      }
    }
  }
  for (Point i = 0; i < n; ++i) {
    for (Point j = 0; j < n; ++j) {
      for (Point k = 0; k < n; ++k) {
        if (dist[i][k] > dist[i][j] + dist[j][k]) add(Axiom::Triangle, 3, i, j, k);
      }
    }
  }
  return report;
}

FiniteMetricSpace::FiniteMetricSpace(const DistanceTable& dist) {
  ValidationReport report = validate_metric(dist);
  if (!report.ok()) {
    throw MetricError("not a metric: " + report.violations.front().describe());
  }
  n_ = dist.size();
  dist_.reserve(n_ * n_);
  for (const auto& row : dist) dist_.insert(dist_.end(), row.begin(), row.end());
}

FiniteMetricSpace FiniteMetricSpace::on_line(std::span<const Rational> coords) {
  DistanceTable table(coords.size(), std::vector<Rational>(coords.size()));
  for (std::size_t i = 0; i < coords.size(); ++i) {
    for (std::size_t j = 0; j < coords.size(); ++j) table[i][j] = abs_diff(coords[i], coords[j]);
  }
  return FiniteMetricSpace(table);
}

FiniteMetricSpace FiniteMetricSpace::uniform(std::size_t n, const Rational& value) {
  DistanceTable table(n, std::vector<Rational>(n, value));
  for (std::size_t i = 0; i < n; ++i) table[i][i] = 0;
  return FiniteMetricSpace(table);
}

DistanceTable FiniteMetricSpace::table() const {
  DistanceTable out(n_, std::vector<Rational>(n_));
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) out[i][j] = (*this)(i, j);
  }
  return out;
}

FiniteMetricSpace FiniteMetricSpace::restrict_to(std::span<const Point> points) const {
  FiniteMetricSpace sub;
  sub.n_ = points.size();
  sub.dist_.reserve(sub.n_ * sub.n_);
  for (Point a : points) {
    for (Point b : points) sub.dist_.push_back((*this)(a, b));
  }
  return sub;
}

FiniteMetricSpace metric_repair(const DistanceTable& sym) {
  const std::size_t n = sym.size();
  if (n == 0) throw ShapeError("distance table is empty");
  for (const auto& row : sym) {
    if (row.size() != n) throw ShapeError("distance table is not square");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (sym[i][i] != 0) throw MetricError("cannot repair: nonzero diagonal at " + std::to_string(i));
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (sym[i][j] != sym[j][i]) {
        throw MetricError("cannot repair: asymmetric entry (" + std::to_string(i) + "," + std::to_string(j) + ")");
      }
      if (sgn(sym[i][j]) <= 0) {
        throw MetricError("cannot repair: non-positive off-diagonal entry (" + std::to_string(i) + "," +
                          std::to_string(j) + ")");
      }
    }
  }

  // Floyd-Warshall
  DistanceTable dist = sym;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        Rational via = dist[i][k] + dist[k][j];
        if (via < dist[i][j]) dist[i][j] = via;
      }
    }
  }
  return FiniteMetricSpace(dist);
}

FiniteMetricSpace random_space(std::size_t n, std::uint64_t max_value, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("random_space: n must be positive");
  if (max_value == 0) throw std::invalid_argument("random_space: max_value must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> pick(1, max_value);
  DistanceTable table(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      Rational v(static_cast<unsigned long>(pick(rng)));
      table[i][j] = v;
      table[j][i] = v;
    }
  }
  return metric_repair(table);
}

SelfMap::SelfMap(std::vector<Point> image) : image_(std::move(image)) {
  if (image_.empty()) throw std::invalid_argument("self-map on an empty set");
  for (std::size_t i = 0; i < image_.size(); ++i) {
    if (image_[i] >= image_.size()) {
      throw std::invalid_argument("self-map image of " + std::to_string(i) + " is " + std::to_string(image_[i]) +
                                  ", outside 0.." + std::to_string(image_.size() - 1));
    }
  }
}

SelfMap SelfMap::constant(std::size_t n, Point p) { return SelfMap(std::vector<Point>(n, p)); }

SelfMap SelfMap::identity(std::size_t n) {
  std::vector<Point> image(n);
  for (std::size_t i = 0; i < n; ++i) image[i] = i;
  return SelfMap(std::move(image));
}

std::uint64_t SelfMap::count(std::size_t n) {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (total > std::numeric_limits<std::uint64_t>::max() / n) throw std::overflow_error("n^n overflows");
    total *= n;
  }
  return total;
}

SelfMap SelfMap::from_code(std::size_t n, std::uint64_t code) {
  std::vector<Point> image(n);
  for (std::size_t i = 0; i < n; ++i) {
    image[i] = static_cast<Point>(code % n);
    code /= n;
  }
  if (code != 0) throw std::out_of_range("self-map code out of range");
  return SelfMap(std::move(image));
}

SelfMap SelfMap::restrict_to(std::span<const Point> points) const {
  std::vector<Point> image(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    Point target = image_[points[i]];
    bool found = false;
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (points[j] == target) {
        image[i] = j;
        found = true;
        break;
      }
    }
    if (!found) throw std::invalid_argument("restriction target set is not forward-closed");
  }
  return SelfMap(std::move(image));
}

std::string SelfMap::to_string() const {
  std::string out = "[";
  for (std::size_t i = 0; i < image_.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(image_[i]);
  }
  return out + "]";
}

void for_each_self_map(std::size_t n, const std::function<void(const SelfMap&)>& fn) {
  const std::uint64_t total = SelfMap::count(n);
  for (std::uint64_t code = 0; code < total; ++code) fn(SelfMap::from_code(n, code));
}

std::string to_string(TerminalKind kind) {
  switch (kind) {
    case TerminalKind::FixedPoint: return "fixed-point";
    case TerminalKind::Cycle: return "cycle";
    case TerminalKind::Truncated: return "truncated";
  }
  return "unknown";
}

Point Orbit::state_at(std::size_t i) const {
  if (i < points.size()) return points[i];
  switch (terminal.kind) {
    case TerminalKind::FixedPoint: return points[terminal.index];
    case TerminalKind::Cycle: return points[terminal.index + (i - terminal.index) % terminal.period];
    case TerminalKind::Truncated: break;
  }
  throw std::out_of_range("orbit state beyond truncated prefix");
}

std::size_t Orbit::horizon() const {
  switch (terminal.kind) {
    case TerminalKind::FixedPoint: return terminal.index + 1;
    case TerminalKind::Cycle: return terminal.index + terminal.period;
    case TerminalKind::Truncated: break;
  }
  return points.size();
}

Orbit orbit(const FiniteMetricSpace& space, const SelfMap& map, Point x0, std::size_t max_steps) {
  if (map.size() != space.size()) throw std::invalid_argument("map and space sizes differ");
  if (x0 >= space.size()) throw std::out_of_range("start point outside the space");

  Orbit out;
  out.start = x0;
  out.points.push_back(x0);
  std::vector<std::size_t> first_visit(space.size(), std::numeric_limits<std::size_t>::max());
  first_visit[x0] = 0;

  for (std::size_t step = 1; step <= max_steps; ++step) {
    const Point current = out.points.back();
    const Point next = map(current);
    const std::size_t seen = first_visit[next];
    if (seen != std::numeric_limits<std::size_t>::max()) {
      const std::size_t last = out.points.size() - 1;
      if (seen == last) {
        out.terminal = Terminal{TerminalKind::FixedPoint, last, 0};
      } else {
        out.terminal = Terminal{TerminalKind::Cycle, seen, last + 1 - seen};
      }
      return out;
    }
    first_visit[next] = out.points.size();
    out.points.push_back(next);
  }
  out.terminal = Terminal{TerminalKind::Truncated, max_steps, 0};
  return out;
}

std::vector<Rational> gap_sequence(const FiniteMetricSpace& space, const Orbit& orb) {
  std::vector<Rational> gaps;
  const std::size_t count =
      orb.terminal.kind == TerminalKind::Truncated ? orb.points.size() - 1 : orb.points.size();
  gaps.reserve(count);
  for (std::size_t k = 0; k < count; ++k) gaps.push_back(space(orb.state_at(k), orb.state_at(k + 1)));
  return gaps;
}

}  // namespace kcfix
