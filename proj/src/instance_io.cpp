#include "kcfix/instance_io.hpp"

#include <istream>
#include <optional>
#include <sstream>

namespace kcfix {

namespace {

struct Line {
  std::size_t number;
  std::vector<std::string> tokens;
};

std::vector<Line> significant_lines(std::istream& in) {
  std::vector<Line> lines;
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream words(raw);
    Line line{number, {}};
    for (std::string tok; words >> tok;) line.tokens.push_back(tok);
    if (!line.tokens.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

std::size_t parse_index(const std::string& tok, std::size_t line) {
  if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos) {
    throw ParseError(line, "expected a nonnegative integer, got '" + tok + "'");
  }
  try {
    return static_cast<std::size_t>(std::stoull(tok));
  } catch (const std::exception&) {
    throw ParseError(line, "integer out of range: '" + tok + "'");
  }
}

}  // namespace

Instance parse_instance_text(std::istream& in) {
  const std::vector<Line> lines = significant_lines(in);
  if (lines.empty()) throw ParseError(1, "missing point count");

  const Line& header = lines.front();
  if (header.tokens.size() != 1) throw ParseError(header.number, "header must be a single point count");
  const std::size_t n = parse_index(header.tokens[0], header.number);
  if (n == 0) throw ParseError(header.number, "point count must be positive");
  if (lines.size() < n) {
    throw ParseError(lines.back().number, "expected " + std::to_string(n - 1) + " distance rows");
  }

  DistanceTable table(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const Line& row = lines[1 + i];
    if (row.tokens.size() != n - 1 - i) {
      throw ParseError(row.number, "distance row " + std::to_string(i) + " needs " + std::to_string(n - 1 - i) +
                                       " entries, found " + std::to_string(row.tokens.size()));
    }
    for (std::size_t k = 0; k < row.tokens.size(); ++k) {
      Rational v;
      try {
        v = parse_rational(row.tokens[k]);
      } catch (const std::invalid_argument& e) {
        throw ParseError(row.number, e.what());
      }
      table[i][i + 1 + k] = v;
      table[i + 1 + k][i] = v;
    }
  }

  std::optional<FiniteMetricSpace> space;
  try {
    space.emplace(table);
  } catch (const MetricError& e) {
    throw ParseError(header.number, e.what());
  }

  Instance inst{*space, {}};
  for (std::size_t idx = n; idx < lines.size(); ++idx) {
    const Line& row = lines[idx];
    if (row.tokens.size() != n) {
      throw ParseError(row.number, "image line needs " + std::to_string(n) + " entries, found " +
                                       std::to_string(row.tokens.size()));
    }
    std::vector<Point> image;
    for (const auto& tok : row.tokens) {
      Point p = parse_index(tok, row.number);
      if (p >= n) throw ParseError(row.number, "image " + tok + " outside the space");
      image.push_back(p);
    }
    inst.maps.emplace_back(std::move(image));
  }
  return inst;
}

Instance parse_instance_text(const std::string& text) {
  std::istringstream in(text);
  return parse_instance_text(in);
}

std::string format_instance_text(const Instance& inst) {
  std::ostringstream out;
  const std::size_t n = inst.space.size();
  out << n << '\n';
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) out << (j > i + 1 ? " " : "") << to_string(inst.space(i, j));
    out << '\n';
  }
  for (const auto& map : inst.maps) {
    for (std::size_t i = 0; i < n; ++i) out << (i ? " " : "") << map(i);
    out << '\n';
  }
  return out.str();
}

nlohmann::json instance_to_json(const Instance& inst) {
  nlohmann::json j;
  const std::size_t n = inst.space.size();
  j["n"] = n;
  nlohmann::json dist = nlohmann::json::array();
  for (std::size_t a = 0; a < n; ++a) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t b = 0; b < n; ++b) row.push_back(to_string(inst.space(a, b)));
    dist.push_back(row);
  }
  j["dist"] = dist;
  nlohmann::json maps = nlohmann::json::array();
  for (const auto& m : inst.maps) maps.push_back(m.image());
  j["maps"] = maps;
  return j;
}

Instance instance_from_json(const nlohmann::json& j) {
  const auto n = j.at("n").get<std::size_t>();
  const auto& dist = j.at("dist");
  if (dist.size() != n) throw ShapeError("dist has " + std::to_string(dist.size()) + " rows, expected " + std::to_string(n));
  DistanceTable table;
  for (const auto& row : dist) {
    std::vector<Rational> r;
    for (const auto& cell : row) {
      r.push_back(cell.is_string() ? parse_rational(cell.get<std::string>()) : Rational(cell.get<long>()));
    }
    table.push_back(std::move(r));
  }
  Instance inst{FiniteMetricSpace(table), {}};
  if (j.contains("maps")) {
    for (const auto& m : j.at("maps")) inst.maps.emplace_back(m.get<std::vector<Point>>());
  }
  for (const auto& m : inst.maps) {
    if (m.size() != n) throw ShapeError("map size does not match the space");
  }
  return inst;
}

}  // namespace kcfix
