#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "kcfix/metric_space.hpp"

namespace kcfix {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// A space together with zero or more self-maps on it.
struct Instance {
  FiniteMetricSpace space;
  std::vector<SelfMap> maps;
};

// Line-oriented text format. Blank lines and lines starting with '#' are
// ignored. Layout:
//
//   n
//   d(0,1) d(0,2) ... d(0,n-1)      (n-1 rows of the strict upper triangle)
//   ...
//   d(n-2,n-1)
//   T(0) T(1) ... T(n-1)            (zero or more image lines, one per map)
//
// Distances are rationals written as p/q or integers.
Instance parse_instance_text(std::istream& in);
Instance parse_instance_text(const std::string& text);
std::string format_instance_text(const Instance& inst);

// {"n": 3, "dist": [["0","1","2"], ...], "maps": [[0,0,0], ...]}
nlohmann::json instance_to_json(const Instance& inst);
Instance instance_from_json(const nlohmann::json& j);

}  // namespace kcfix
