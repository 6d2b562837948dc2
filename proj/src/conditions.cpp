#include "kcfix/conditions.hpp"

#include <algorithm>
#include <sstream>

namespace kcfix {

std::string to_string(PairSource source) {
  switch (source) {
    case PairSource::Custom: return "custom";
    case PairSource::GlobalBanach: return "global-banach";
    case PairSource::GlobalKannan: return "global-kannan";
    case PairSource::GlobalChatterjea: return "global-chatterjea";
    case PairSource::PicardKannan: return "picard-kannan";
    case PairSource::PicardChatterjea: return "picard-chatterjea";
    case PairSource::GapSequence: return "gap-sequence";
  }
  return "unknown";
}

EpsDeltaVerdict uniform_epsdelta_holds(const SDPairSet& set) {
  for (const SDPair& p : set.pairs) {
    if (p.d > p.s) {
      Rational eps = p.s + p.d;
      eps /= 2;
      return EpsDeltaVerdict{false, eps, p};
    }
  }
  return {};
}

EpsDeltaVerdict epsgrid_oracle(const SDPairSet& set) {
  std::vector<Rational> values;
  values.reserve(2 * set.pairs.size());
  for (const SDPair& p : set.pairs) {
    values.push_back(p.s);
    values.push_back(p.d);
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());

  std::vector<Rational> candidates = values;
  for (std::size_t i = 0; i + 1 < values.size(); ++i) candidates.push_back(half(values[i] + values[i + 1]));
  if (!values.empty()) candidates.push_back(values.back() + 1);

  for (const Rational& eps : candidates) {
    if (sgn(eps) <= 0) continue;
    const SDPair* blocking = nullptr;
    for (const SDPair& p : set.pairs) {
      if (p.d > eps && (blocking == nullptr || p.s < blocking->s)) blocking = &p;
    }
    // delta = F(eps) - eps must be positive
    if (blocking != nullptr && !(blocking->s > eps)) return EpsDeltaVerdict{false, eps, *blocking};
  }
  return {};
}

bool AlphaResult::is_contraction() const { return alpha.has_value() && *alpha < Rational(1, 2); }

namespace {

// Maximizes numer/denom over unordered pairs i <= j. A pair with both sides
// zero imposes nothing; zero denominator with positive numerator has no alpha.
template <class Numer, class Denom>
AlphaResult max_ratio(std::size_t n, Numer numer, Denom denom) {
  AlphaResult out;
  out.alpha = Rational(0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const Rational num = numer(i, j);
      const Rational den = denom(i, j);
      if (sgn(den) == 0) {
        if (sgn(num) > 0) return AlphaResult{std::nullopt, std::pair{i, j}};
        continue;
      }
      Rational ratio = num / den;
      if (!out.pair || ratio > *out.alpha) {
        out.alpha = ratio;
        out.pair = std::pair{i, j};
      }
    }
  }
  return out;
}

template <class Holds>
PairCheck check_distinct_pairs(std::size_t n, Holds holds) {
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!holds(i, j)) return PairCheck{false, std::pair{i, j}};
    }
  }
  return {};
}

template <class Make>
SDPairSet unordered_pairs(std::size_t n, PairSource source, Make make) {
  SDPairSet out{source, {}};
  out.pairs.reserve(n * (n + 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) out.pairs.push_back(make(i, j));
  }
  return out;
}

// Distinct states on the orbit of x0 (every state appears at some index i >= 0).
std::vector<Point> orbit_states(const FiniteMetricSpace& space, const SelfMap& map, Point x0) {
  return orbit(space, map, x0, space.size() + 1).points;
}

}  // namespace

AlphaResult min_kannan_alpha(const FiniteMetricSpace& d, const SelfMap& T) {
  return max_ratio(
      d.size(), [&](Point x, Point y) { return d(T(x), T(y)); },
      [&](Point x, Point y) { return Rational(d(x, T(x)) + d(y, T(y))); });
}

AlphaResult min_kannan_alpha(const LineMap& sample) {
  std::vector<Rational> image;
  for (const auto& x : sample.points) image.push_back(sample.rule(x));
  const auto& xs = sample.points;
  return max_ratio(
      xs.size(), [&](Point i, Point j) { return abs_diff(image[i], image[j]); },
      [&](Point i, Point j) { return Rational(abs_diff(xs[i], image[i]) + abs_diff(xs[j], image[j])); });
}

AlphaResult min_chatterjea_alpha(const FiniteMetricSpace& d, const SelfMap& T) {
  return max_ratio(
      d.size(), [&](Point x, Point y) { return d(T(x), T(y)); },
      [&](Point x, Point y) { return Rational(d(x, T(y)) + d(y, T(x))); });
}

AlphaResult min_chatterjea_alpha(const LineMap& sample) {
  std::vector<Rational> image;
  for (const auto& x : sample.points) image.push_back(sample.rule(x));
  const auto& xs = sample.points;
  return max_ratio(
      xs.size(), [&](Point i, Point j) { return abs_diff(image[i], image[j]); },
      [&](Point i, Point j) { return Rational(abs_diff(xs[i], image[j]) + abs_diff(xs[j], image[i])); });
}

PairCheck satisfies_banach_contractive(const FiniteMetricSpace& d, const SelfMap& T) {
  return check_distinct_pairs(d.size(), [&](Point x, Point y) { return d(T(x), T(y)) < d(x, y); });
}

PairCheck satisfies_cm(const FiniteMetricSpace& d, const SelfMap& T) {
  return check_distinct_pairs(d.size(), [&](Point x, Point y) {
    return d(T(x), T(y)) < half(d(x, T(x)) + d(y, T(y)));
  });
}

PairCheck satisfies_cm2(const FiniteMetricSpace& d, const SelfMap& T) {
  return check_distinct_pairs(d.size(), [&](Point x, Point y) {
    return d(T(x), T(y)) < half(d(x, T(y)) + d(y, T(x)));
  });
}

SDPairSet global_pairs_banach(const FiniteMetricSpace& d, const SelfMap& T) {
  return unordered_pairs(d.size(), PairSource::GlobalBanach,
                         [&](Point x, Point y) { return SDPair{d(x, y), d(T(x), T(y)), x, y}; });
}

SDPairSet global_pairs_kannan(const FiniteMetricSpace& d, const SelfMap& T) {
  return unordered_pairs(d.size(), PairSource::GlobalKannan, [&](Point x, Point y) {
    return SDPair{half(d(x, T(x)) + d(y, T(y))), d(T(x), T(y)), x, y};
  });
}

SDPairSet global_pairs_chatterjea(const FiniteMetricSpace& d, const SelfMap& T) {
  return unordered_pairs(d.size(), PairSource::GlobalChatterjea, [&](Point x, Point y) {
    return SDPair{half(d(x, T(y)) + d(y, T(x))), d(T(x), T(y)), x, y};
  });
}

SDPairSet picard_pairs_kannan(const FiniteMetricSpace& d, const SelfMap& T, Point x0) {
  SDPairSet out{PairSource::PicardKannan, {}};
  const auto states = orbit_states(d, T, x0);
  for (Point u : states) {
    for (Point v : states) out.pairs.push_back(SDPair{half(d(u, T(u)) + d(v, T(v))), d(T(u), T(v)), u, v});
  }
  return out;
}

SDPairSet picard_pairs_chatterjea(const FiniteMetricSpace& d, const SelfMap& T, Point x0) {
  SDPairSet out{PairSource::PicardChatterjea, {}};
  const auto states = orbit_states(d, T, x0);
  for (Point u : states) {
    for (Point v : states) out.pairs.push_back(SDPair{half(d(u, T(v)) + d(v, T(u))), d(T(u), T(v)), u, v});
  }
  return out;
}

std::vector<Point> detect_fixed_points(const SelfMap& map) {
  std::vector<Point> out;
  for (Point x = 0; x < map.size(); ++x) {
    if (map(x) == x) out.push_back(x);
  }
  return out;
}

ConditionReport classify(const FiniteMetricSpace& space, const SelfMap& map) {
  ConditionReport r{map, detect_fixed_points(map), false, {}, {}, {}, {}, false, false, {}, {}};
  r.banach = satisfies_banach_contractive(space, map).holds &&
             uniform_epsdelta_holds(global_pairs_banach(space, map)).holds;
  r.kannan = min_kannan_alpha(space, map);
  r.chatterjea = min_chatterjea_alpha(space, map);
  r.cm = satisfies_cm(space, map);
  r.cm2 = satisfies_cm2(space, map);
  r.global_epsdelta_kannan = uniform_epsdelta_holds(global_pairs_kannan(space, map)).holds;
  r.global_epsdelta_chatterjea = uniform_epsdelta_holds(global_pairs_chatterjea(space, map)).holds;
  for (Point x0 = 0; x0 < space.size(); ++x0) {
    r.picard_epsdelta_kannan.push_back(uniform_epsdelta_holds(picard_pairs_kannan(space, map, x0)).holds);
    r.picard_epsdelta_chatterjea.push_back(uniform_epsdelta_holds(picard_pairs_chatterjea(space, map, x0)).holds);
  }
  return r;
}

namespace {

std::string alpha_cell(const AlphaResult& a) { return a.alpha ? to_string(*a.alpha) : "none"; }

std::string witness_cell(const PairCheck& c) {
  if (c.holds || !c.witness) return "";
  return std::to_string(c.witness->first) + "-" + std::to_string(c.witness->second);
}

std::string flags(const std::vector<bool>& v) {
  std::string s;
  for (bool b : v) s += b ? '1' : '0';
  return s;
}

}  // namespace

std::string ConditionReport::csv_header() {
  return "map,fixed_points,banach,kannan_alpha,kannan,chatterjea_alpha,chatterjea,cm,cm_witness,cm2,cm2_witness,"
         "global_epsdelta_kannan,global_epsdelta_chatterjea,picard_epsdelta_kannan,picard_epsdelta_chatterjea";
}

std::string ConditionReport::csv_row() const {
  std::ostringstream out;
  out << map.to_string() << ",";
  for (std::size_t i = 0; i < fixed_points.size(); ++i) out << (i ? " " : "") << fixed_points[i];
  out << "," << banach << "," << alpha_cell(kannan) << "," << kannan.is_contraction() << ","
      << alpha_cell(chatterjea) << "," << chatterjea.is_contraction() << "," << cm.holds << "," << witness_cell(cm)
      << "," << cm2.holds << "," << witness_cell(cm2) << "," << global_epsdelta_kannan << ","
      << global_epsdelta_chatterjea << "," << flags(picard_epsdelta_kannan) << ","
      << flags(picard_epsdelta_chatterjea);
  return out.str();
}

}  // namespace kcfix
