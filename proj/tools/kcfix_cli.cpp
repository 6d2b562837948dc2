// kcfix: classify self-maps of finite metric spaces, run Picard iteration,
// sweep the fixed-point theorems over finite instances and check the
// sequence conditions.
//
// Exit codes: 0 success, 1 violation found, 2 usage or parse error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "kcfix/conditions.hpp"
#include "kcfix/instance_io.hpp"
#include "kcfix/picard.hpp"
#include "kcfix/sequences.hpp"
#include "kcfix/verifier.hpp"

namespace {

using namespace kcfix;

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<Rational> parse_rational_list(const std::string& text) {
  std::vector<Rational> out;
  for (const auto& item : split_list(text)) out.push_back(parse_rational(item));
  if (out.empty()) throw UsageError("empty list '" + text + "'");
  return out;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
    return instance_from_json(nlohmann::json::parse(in));
  }
  return parse_instance_text(in);
}

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---- classify ---------------------------------------------------------------

struct ClassifyArgs {
  std::string input;
  std::size_t n = 0;
  std::uint64_t max_value = 10;
  std::optional<std::uint64_t> seed;
  std::string format = "table";
};

int run_classify(const ClassifyArgs& a) {
  Instance inst = [&] {
    if (!a.input.empty()) return load_instance(a.input);
    if (a.n == 0) throw UsageError("classify needs --input or --n");
    if (!a.seed) throw UsageError("--seed is required when generating a space");
    return Instance{random_space(a.n, a.max_value, *a.seed), {}};
  }();
  if (inst.maps.empty()) {
    if (inst.space.size() > 6) throw UsageError("enumerating all maps is limited to n <= 6");
    for_each_self_map(inst.space.size(), [&](const SelfMap& m) { inst.maps.push_back(m); });
  }

  std::vector<ConditionReport> reports;
  for (const auto& m : inst.maps) reports.push_back(classify(inst.space, m));

  if (a.format == "csv") {
    std::cout << ConditionReport::csv_header() << "\n";
    for (const auto& r : reports) std::cout << r.csv_row() << "\n";
  } else if (a.format == "json") {
    nlohmann::json rows = nlohmann::json::array();
    const auto header = split_list(ConditionReport::csv_header());
    for (const auto& r : reports) {
      // cells never contain commas; empty cells are kept
      std::vector<std::string> cells;
      std::stringstream raw(r.csv_row());
      for (std::string cell; std::getline(raw, cell, ',');) cells.push_back(cell);
      cells.resize(header.size());
      nlohmann::json row;
      for (std::size_t i = 0; i < header.size(); ++i) row[header[i]] = cells[i];
      rows.push_back(row);
    }
    std::cout << rows.dump(2) << "\n";
  } else {
    std::printf("%-14s %-8s %-6s %-8s %-8s %-4s %-4s %-7s %-7s %-8s %-8s\n", "map", "fixed", "banach", "alpha_K",
                "alpha_C", "CM", "CM2", "glob_K", "glob_C", "picard_K", "picard_C");
    for (const auto& r : reports) {
      std::string fixed;
      for (auto p : r.fixed_points) fixed += (fixed.empty() ? "" : " ") + std::to_string(p);
      auto alpha = [](const AlphaResult& x) { return x.alpha ? to_string(*x.alpha) : std::string("none"); };
      auto flags = [](const std::vector<bool>& v) {
        std::string s;
        for (bool b : v) s += b ? '1' : '0';
        return s;
      };
      auto mark = [](bool b) { return b ? "yes" : "no"; };
      std::printf("%-14s %-8s %-6s %-8s %-8s %-4s %-4s %-7s %-7s %-8s %-8s\n", r.map.to_string().c_str(),
                  fixed.empty() ? "-" : fixed.c_str(), mark(r.banach), alpha(r.kannan).c_str(),
                  alpha(r.chatterjea).c_str(), mark(r.cm.holds), mark(r.cm2.holds), mark(r.global_epsdelta_kannan),
                  mark(r.global_epsdelta_chatterjea), flags(r.picard_epsdelta_kannan).c_str(),
                  flags(r.picard_epsdelta_chatterjea).c_str());
    }
  }
  return kExitOk;
}

// ---- iterate ----------------------------------------------------------------

struct IterateArgs {
  std::string fixture;
  std::string input;
  std::size_t map_index = 0;
  std::string x0;
  double tol = kDefaultTolerance;
  std::optional<std::size_t> max_iter;
};

int run_iterate(const IterateArgs& a) {
  if (a.x0.empty()) throw UsageError("--x0 is required");
  if (!a.fixture.empty()) {
    const ContinuousFixture& f = find_fixture(a.fixture);
    const Rational x0 = parse_rational(a.x0);
    const FixtureSolveResult r = solve(f, to_double(x0), a.tol, a.max_iter.value_or(kDefaultFixtureIterations));
    std::cout << "# " << f.name << " " << f.domain.to_string() << ": " << to_string(r.status) << " after " << r.steps
              << " steps";
    if (r.point) std::cout << " at " << fmt_double(*r.point);
    if (r.excluded_limit) std::cout << "; limit " << to_string(*r.excluded_limit) << " lies outside the domain";
    std::cout << "\nstep,point,gap\n";
    for (std::size_t k = 0; k < r.gaps.size(); ++k) {
      std::cout << k << "," << fmt_double(r.trace[k]) << "," << fmt_double(r.gaps[k]) << "\n";
    }
    return kExitOk;
  }
  if (a.input.empty()) throw UsageError("iterate needs --fixture or --input");
  const Instance inst = load_instance(a.input);
  if (a.map_index >= inst.maps.size()) throw UsageError("map index out of range");
  const auto start = parse_rational(a.x0);
  if (start.get_den() != 1 || sgn(start) < 0) throw UsageError("--x0 must be a point index");
  const Point x0 = start.get_num().get_ui();
  const FiniteSolveResult r = solve(inst.space, inst.maps[a.map_index], x0, a.max_iter);
  std::cout << "# " << to_string(r.status) << " after " << r.steps << " steps";
  if (r.point) std::cout << " at point " << *r.point;
  std::cout << " (" << to_string(r.terminal.kind) << ")\nstep,point,gap\n";
  for (std::size_t k = 0; k < r.gaps.size(); ++k) {
    std::cout << k << "," << r.trace[k] << "," << to_string(r.gaps[k]) << "\n";
  }
  return kExitOk;
}

// ---- verify -----------------------------------------------------------------

struct VerifyArgs {
  std::string thm = "all";
  bool exhaustive = false;
  bool random = false;
  std::string sizes;
  std::size_t n = 0;
  std::size_t pool = 50;
  std::size_t trials = 1000;
  std::optional<std::uint64_t> seed;
  std::uint64_t max_value = 10;
  std::string format = "table";
  std::string demo;
};

int run_verify(const VerifyArgs& a) {
  if (!a.demo.empty()) {
    if (a.demo != "completeness") throw UsageError("unknown demo '" + a.demo + "' (available: completeness)");
    const CompletenessReport r = completeness_necessity_demo();
    std::cout << (a.format == "json" ? r.to_json().dump(2) + "\n" : r.table());
    return r.consistent ? kExitOk : kExitViolation;
  }
  if (a.exhaustive == a.random) throw UsageError("choose exactly one of --exhaustive and --random");

  SweepConfig config;
  config.mode = a.exhaustive ? SweepConfig::Mode::Exhaustive : SweepConfig::Mode::Random;
  if (a.random && !a.seed) throw UsageError("--seed is required for --random");
  config.seed = a.seed.value_or(1);
  config.pool = a.pool;
  config.trials = a.trials;
  config.max_value = a.max_value;
  if (a.thm != "all") config.theorems = {parse_theorem(a.thm)};

  config.sizes.clear();
  if (!a.sizes.empty()) {
    for (const auto& s : split_list(a.sizes)) config.sizes.push_back(std::stoul(s));
  } else if (a.n > 0) {
    if (a.exhaustive) {
      for (std::size_t k = 1; k <= a.n; ++k) config.sizes.push_back(k);
    } else {
      config.sizes.push_back(a.n);
    }
  } else {
    throw UsageError("--n or --sizes is required");
  }

  const SweepReport report = run_sweep(config);
  if (a.format == "json") {
    std::cout << report.to_json().dump(2) << "\n";
  } else if (a.format == "csv") {
    std::cout << report.census_csv();
  } else {
    std::cout << report.table();
  }
  return report.pass() ? kExitOk : kExitViolation;
}

// ---- sequences --------------------------------------------------------------

struct SequencesArgs {
  std::string alpha = "0,1/2";
  std::string c = "1,1/2";
  std::string r = "1/2,1/4";
};

int run_sequences(const SequencesArgs& a) {
  std::vector<TestSequence> family;
  for (const auto& alpha : parse_rational_list(a.alpha)) {
    for (const auto& c : parse_rational_list(a.c)) {
      for (const auto& r : parse_rational_list(a.r)) {
        try {
          family.push_back(TestSequence::closed_form(alpha, c, r));
        } catch (const std::invalid_argument& e) {
          throw UsageError(e.what());
        }
      }
    }
  }
  const Lemma1Report report = verify_lemma1(family);
  std::cout << report.csv();
  std::cout << "# strictness_witnessed=" << (report.strictness_witnessed ? "true" : "false") << "\n";
  if (!report.strictness_witnessed) {
    std::cerr << "warning: no sequence in the family has (i) true and (v) false; strictness unwitnessed\n";
  }
  for (const auto& v : report.violations) std::cerr << "violation: " << v << "\n";
  return report.ok() ? kExitOk : kExitViolation;
}

// ---- search -----------------------------------------------------------------

struct SearchArgs {
  std::size_t trials = 10000;
  std::optional<std::uint64_t> seed;
  std::string sizes = "3,4,5";
  std::uint64_t max_value = 10;
};

int run_search(const SearchArgs& a) {
  if (!a.seed) throw UsageError("--seed is required");
  SweepConfig config;
  config.mode = SweepConfig::Mode::Random;
  config.trials = a.trials;
  config.seed = *a.seed;
  config.max_value = a.max_value;
  config.sizes.clear();
  for (const auto& s : split_list(a.sizes)) config.sizes.push_back(std::stoul(s));
  const SearchReport r = search_counterexample(config);
  if (!r.finding) {
    std::cout << "no findings after " << r.trials_run << " trials\n";
    return kExitOk;
  }
  std::cout << "finding: " << r.finding->invariant << " (" << r.finding->detail << ")\n" << r.finding->instance;
  return kExitViolation;
}

// ---- convert ----------------------------------------------------------------

int run_convert(const std::string& input, const std::string& to) {
  const Instance inst = load_instance(input);
  if (to == "json") {
    std::cout << instance_to_json(inst).dump(2) << "\n";
  } else if (to == "text") {
    std::cout << format_instance_text(inst);
  } else {
    throw UsageError("--to must be json or text");
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kannan/Chatterjea fixed-point toolkit"};
  app.require_subcommand(1);

  ClassifyArgs classify_args;
  auto* classify = app.add_subcommand("classify", "Classify every self-map of a space");
  classify->add_option("--input", classify_args.input, "Instance file (text or .json)");
  classify->add_option("--n", classify_args.n, "Generate a random space with n points");
  classify->add_option("--max-value", classify_args.max_value, "Largest sampled distance");
  classify->add_option("--seed", classify_args.seed, "Generator seed");
  classify->add_option("--format", classify_args.format)->check(CLI::IsMember({"table", "csv", "json"}));

  IterateArgs iterate_args;
  auto* iterate = app.add_subcommand("iterate", "Picard iteration with a gap trace");
  iterate->add_option("--fixture", iterate_args.fixture, "Continuous fixture name");
  iterate->add_option("--input", iterate_args.input, "Instance file for finite iteration");
  iterate->add_option("--map", iterate_args.map_index, "Map index within the instance file");
  iterate->add_option("--x0", iterate_args.x0, "Start point (rational, or point index)");
  iterate->add_option("--tol", iterate_args.tol, "Gap tolerance for fixtures");
  iterate->add_option("--max-iter", iterate_args.max_iter, "Iteration budget");

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "Theorem sweeps and demonstrations");
  verify->add_option("--thm", verify_args.thm, "2.1, 3.1, 4.1, 4.2, 5.2 or all");
  verify->add_flag("--exhaustive", verify_args.exhaustive, "All self-maps on sizes 1..n");
  verify->add_flag("--random", verify_args.random, "Seeded random instances of size n");
  verify->add_option("--n", verify_args.n, "Size bound (exhaustive) or size (random)");
  verify->add_option("--sizes", verify_args.sizes, "Comma-separated sizes");
  verify->add_option("--pool", verify_args.pool, "Seeded metrics per size >= 3 (exhaustive)");
  verify->add_option("--trials", verify_args.trials, "Instances per size (random)");
  verify->add_option("--seed", verify_args.seed, "Seed");
  verify->add_option("--max-value", verify_args.max_value, "Largest sampled distance");
  verify->add_option("--format", verify_args.format)->check(CLI::IsMember({"table", "csv", "json"}));
  verify->add_option("--demo", verify_args.demo, "Named demonstration (completeness)");

  SequencesArgs sequences_args;
  auto* sequences = app.add_subcommand("sequences", "Verdict matrix for a family a_n = alpha + c*r^n");
  sequences->add_option("--alpha", sequences_args.alpha, "Comma-separated limits");
  sequences->add_option("--c", sequences_args.c, "Comma-separated scales");
  sequences->add_option("--r", sequences_args.r, "Comma-separated ratios in (0,1)");

  SearchArgs search_args;
  auto* search = app.add_subcommand("search", "Randomized counterexample search");
  search->add_option("--trials", search_args.trials, "Trials to run");
  search->add_option("--seed", search_args.seed, "Seed");
  search->add_option("--sizes", search_args.sizes, "Comma-separated sizes");
  search->add_option("--max-value", search_args.max_value, "Largest sampled distance");

  std::string convert_input;
  std::string convert_to = "json";
  auto* convert = app.add_subcommand("convert", "Convert an instance between text and JSON");
  convert->add_option("--input", convert_input, "Instance file (text or .json)")->required();
  convert->add_option("--to", convert_to, "json or text");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*classify) return run_classify(classify_args);
    if (*iterate) return run_iterate(iterate_args);
    if (*verify) return run_verify(verify_args);
    if (*sequences) return run_sequences(sequences_args);
    if (*search) return run_search(search_args);
    if (*convert) return run_convert(convert_input, convert_to);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
