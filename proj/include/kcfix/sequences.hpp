#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "kcfix/conditions.hpp"
#include "kcfix/metric_space.hpp"

namespace kcfix {

/// Raised when two independent decision paths disagree.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Raised when an operation's standing hypothesis does not hold.
class HypothesisError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Strictly decreasing positive sequence a_1 > a_2 > ... with limit alpha >= 0.
/// Either the closed form a_n = alpha + c * r^n (alpha >= 0, c > 0, 0 < r < 1),
/// or an explicit finite prefix with a declared limit.
class TestSequence {
 public:
  static TestSequence closed_form(const Rational& alpha, const Rational& c, const Rational& r);
  static TestSequence explicit_list(std::vector<Rational> terms, const Rational& alpha);

  bool is_closed_form() const { return !explicit_; }
  const Rational& limit() const { return alpha_; }
  const Rational& scale() const { return c_; }
  const Rational& ratio() const { return r_; }

  /// a_n for n >= 1. Explicit lists throw std::out_of_range past their prefix.
  Rational term(std::size_t n) const;

  /// Number of known terms; nothing for closed forms.
  std::optional<std::size_t> known_terms() const;

  std::string describe() const;

 private:
  TestSequence() = default;

  bool explicit_ = false;
  Rational alpha_;
  Rational c_;
  Rational r_;
  std::vector<Rational> terms_;
};

// Lemma-style conditions on a strictly decreasing sequence with limit alpha:
//   (i)   alpha = 0
//   (ii)  for k >= 0: a_n < eps + delta  =>  a_{n+k} <= eps
//   (iii) for k >= 1: (a_n + a_{n+1})/2 < eps + delta  =>  a_{n+k} <= eps
//   (iv)  eps outside {a_k}: a_m + a_n < eps + delta  =>  a_m + a_n <= eps
//   (v)   every eps > 0:     a_m + a_n < eps + delta  =>  a_m + a_n <= eps
// each quantified as "for every eps there is delta > 0, for all indices".
enum class LemmaForm { Ii, Iii, Iv, V };

struct ConditionForm {
  LemmaForm form;
  std::size_t k = 0;

  std::string name() const;
};

enum class OracleStatus { Holds, Fails, HorizonLimited };

std::string to_string(OracleStatus status);

struct OracleVerdict {
  OracleStatus status = OracleStatus::HorizonLimited;
  std::optional<Rational> epsilon;  // failing eps
  std::size_t candidates_checked = 0;
};

bool cond_i(const TestSequence& seq);

// (ii)-(iv) are decided through their equivalence with alpha = 0 and, for
// closed forms, re-decided by seq_epsgrid_oracle. Disagreement throws
// ConsistencyError.
bool cond_ii(const TestSequence& seq, std::size_t k);
bool cond_iii(const TestSequence& seq, std::size_t k);
bool cond_iv(const TestSequence& seq);

struct CondVVerdict {
  bool holds = false;
  // A positive eps approached strictly from above by sums a_m + a_n.
  std::optional<Rational> epsilon;
};

/// Right-accumulation analysis of the sum set {a_m + a_n}: its accumulation
/// points from above are a_m + alpha (m fixed) and 2*alpha, and the condition
/// fails exactly when one of them is a positive eps.
CondVVerdict cond_v(const TestSequence& seq);

/// Brute-force check of one condition form on a closed-form sequence. The eps
/// candidates are the first `truncation` terms, alpha, 2*alpha, a_m + alpha,
/// pairwise sums, consecutive half-sums, midpoints between consecutive
/// candidates and one value above the largest. At each candidate the
/// exists-delta clause is evaluated exactly: indices whose conclusion exceeds
/// eps form a finite set once eps is above the limiting value, and below it
/// the infimum of the hypothesis values is the limit itself. Explicit lists
/// yield HorizonLimited.
OracleVerdict seq_epsgrid_oracle(const TestSequence& seq, const ConditionForm& form, std::size_t truncation = 24);

struct Lemma1Row {
  std::string sequence;
  bool i = false;
  std::vector<std::pair<std::size_t, bool>> ii;   // (k, verdict)
  std::vector<std::pair<std::size_t, bool>> iii;  // (k, verdict)
  bool iv = false;
  bool v = false;
  bool oracle_agrees = true;
  std::size_t oracle_checks = 0;
};

struct Lemma1Report {
  std::vector<Lemma1Row> rows;
  std::vector<std::string> violations;
  bool strictness_witnessed = false;  // some row with (i) true and (v) false

  bool ok() const { return violations.empty(); }
  static std::string csv_header();
  std::string csv() const;
};

/// Per sequence: (i) = (ii)_k = (iii)_k = (iv) for k in {0,1,2,5} ((iii) uses
/// k >= 1), (v) => (iv), and decision/oracle agreement on closed forms.
Lemma1Report verify_lemma1(std::span<const TestSequence> family);

/// The eight closed forms alpha in {0, 1/2}, c in {1, 1/2}, r in {1/2, 1/4}.
std::vector<TestSequence> default_lemma1_family();

struct GapConditionVerdicts {
  std::vector<Rational> gaps;  // a_0, a_1, ... up to the first zero
  bool i = false;              // gaps reach 0
  bool ii = false;
  bool iii = false;
  bool iv = false;
  bool v = false;              // uniform eps-delta on the Picard Kannan pairs
  bool lemma_verdict = false;  // what the sequence equivalence predicts for (ii)-(iv)
  bool consistent = true;      // (ii)-(iv) agree with lemma_verdict
};

/// Evaluates the gap-sequence conditions on the orbit of x0 under a map
/// satisfying (CM). Indices i, j range over 1, 2, ...; (ii)-(iv) are decided
/// exactly on the orbit's finitely many distinct pair values.
/// Throws HypothesisError when (CM) fails.
GapConditionVerdicts gap_conditions(const FiniteMetricSpace& space, const SelfMap& map, Point x0);

}  // namespace kcfix
