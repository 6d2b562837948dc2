#include "kcfix/sequences.hpp"

#include <algorithm>
#include <sstream>

namespace kcfix {

TestSequence TestSequence::closed_form(const Rational& alpha, const Rational& c, const Rational& r) {
  if (sgn(alpha) < 0) throw std::invalid_argument("sequence limit alpha must be >= 0");
  if (sgn(c) <= 0) throw std::invalid_argument("sequence scale c must be > 0");
  if (sgn(r) <= 0 || r >= 1) throw std::invalid_argument("sequence ratio r must lie in (0,1), got " + to_string(r));
  TestSequence s;
  s.alpha_ = alpha;
  s.c_ = c;
  s.r_ = r;
  return s;
}

TestSequence TestSequence::explicit_list(std::vector<Rational> terms, const Rational& alpha) {
  if (sgn(alpha) < 0) throw std::invalid_argument("sequence limit alpha must be >= 0");
  if (terms.empty()) throw std::invalid_argument("explicit sequence needs at least one term");
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (!(terms[i] > alpha)) throw std::invalid_argument("term a_" + std::to_string(i + 1) + " is not above the limit");
    if (i + 1 < terms.size() && !(terms[i + 1] < terms[i])) {
      throw std::invalid_argument("terms are not strictly decreasing at a_" + std::to_string(i + 1));
    }
  }
  TestSequence s;
  s.explicit_ = true;
  s.alpha_ = alpha;
  s.terms_ = std::move(terms);
  return s;
}

Rational TestSequence::term(std::size_t n) const {
  if (n == 0) throw std::out_of_range("sequence terms are indexed from 1");
  if (explicit_) {
    if (n > terms_.size()) throw std::out_of_range("term beyond the explicit prefix");
    return terms_[n - 1];
  }
  Rational p = 1;
  for (std::size_t i = 0; i < n; ++i) p *= r_;
  Rational out = alpha_ + c_ * p;
  return out;
}

std::optional<std::size_t> TestSequence::known_terms() const {
  if (explicit_) return terms_.size();
  return std::nullopt;
}

std::string TestSequence::describe() const {
  std::ostringstream out;
  if (explicit_) {
    out << "list[" << terms_.size() << "]->" << to_string(alpha_);
  } else {
    out << to_string(alpha_) << "+" << to_string(c_) << "*(" << to_string(r_) << ")^n";
  }
  return out.str();
}

std::string ConditionForm::name() const {
  switch (form) {
    case LemmaForm::Ii: return "ii_k" + std::to_string(k);
    case LemmaForm::Iii: return "iii_k" + std::to_string(k);
    case LemmaForm::Iv: return "iv";
    case LemmaForm::V: return "v";
  }
  return "?";
}

std::string to_string(OracleStatus status) {
  switch (status) {
    case OracleStatus::Holds: return "holds";
    case OracleStatus::Fails: return "fails";
    case OracleStatus::HorizonLimited: return "horizon-limited";
  }
  return "unknown";
}

namespace {

constexpr std::size_t kEnumerationCap = 1u << 20;

// Lazily extended table of closed-form terms a_1, a_2, ...
class TermCache {
 public:
  explicit TermCache(const TestSequence& seq) : seq_(seq), power_(1) { terms_.emplace_back(0); }

  const Rational& operator()(std::size_t n) {
    if (n >= kEnumerationCap) throw std::runtime_error("oracle enumeration exceeded its cap");
    while (terms_.size() <= n) {
      power_ *= seq_.ratio();
      terms_.push_back(Rational(seq_.limit() + seq_.scale() * power_));
    }
    return terms_[n];
  }

 private:
  const TestSequence& seq_;
  Rational power_;
  std::vector<Rational> terms_;  // index 0 unused
};

bool is_sequence_value(TermCache& a, const TestSequence& seq, const Rational& eps) {
  Rational t = (eps - seq.limit()) / seq.scale();
  if (sgn(t) <= 0) return false;
  std::size_t n = 1;
  while (a(n) > eps) ++n;
  return a(n) == eps;
}

// exists delta > 0 with: hyp(n) < eps + delta  =>  concl(n) <= eps, for all n >= 1,
// where hyp and concl both decrease strictly to alpha.
template <class Hyp, class Concl>
bool single_index_holds(const Rational& alpha, const Rational& eps, Hyp hyp, Concl concl) {
  if (eps < alpha) return true;    // every index is bad, inf of hyp is alpha > eps
  if (eps == alpha) return false;  // hyp values fall to eps from above
  std::optional<Rational> inf;
  for (std::size_t n = 1; concl(n) > eps; ++n) {
    Rational h = hyp(n);
    if (!inf || h < *inf) inf = h;
  }
  return !inf || *inf > eps;
}

// Same clause for hyp = concl = a_m + a_n over all m, n >= 1 (m <= n by symmetry).
bool pair_sum_holds(TermCache& a, const Rational& alpha, const Rational& eps) {
  const Rational two_alpha = 2 * alpha;
  if (eps < two_alpha) return true;
  if (eps == two_alpha) return false;
  for (std::size_t m = 1; 2 * a(m) > eps; ++m) {
    const Rational row_limit = a(m) + alpha;
    if (row_limit == eps) return false;
    if (row_limit > eps) continue;  // every value in the row exceeds row_limit > eps
    std::optional<Rational> inf;
    for (std::size_t n = m; a(m) + a(n) > eps; ++n) {
      Rational v = a(m) + a(n);
      if (!inf || v < *inf) inf = v;
    }
    if (inf && !(*inf > eps)) return false;
  }
  return true;
}

std::vector<Rational> candidate_epsilons(TermCache& a, const TestSequence& seq, std::size_t n_terms) {
  std::vector<Rational> vals{Rational(0), seq.limit(), Rational(2 * seq.limit())};
  for (std::size_t m = 1; m <= n_terms; ++m) {
    vals.push_back(a(m));
    vals.push_back(Rational(a(m) + seq.limit()));
    vals.push_back(half(a(m) + a(m + 1)));
    for (std::size_t n = m; n <= n_terms; ++n) vals.push_back(Rational(a(m) + a(n)));
  }
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  std::vector<Rational> out = vals;
  for (std::size_t i = 0; i + 1 < vals.size(); ++i) out.push_back(half(vals[i] + vals[i + 1]));
  out.push_back(vals.back() + 1);
  std::erase_if(out, [](const Rational& e) { return sgn(e) <= 0; });
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

OracleVerdict seq_epsgrid_oracle(const TestSequence& seq, const ConditionForm& form, std::size_t truncation) {
  if (form.form == LemmaForm::Iii && form.k == 0) throw std::invalid_argument("condition (iii) needs k >= 1");
  OracleVerdict out;
  if (!seq.is_closed_form()) return out;  // no tail control

  TermCache a(seq);
  const Rational& alpha = seq.limit();
  const std::size_t k = form.k;
  for (const Rational& eps : candidate_epsilons(a, seq, std::max<std::size_t>(truncation, 1))) {
    bool holds = true;
    switch (form.form) {
      case LemmaForm::Ii:
        holds = single_index_holds(
            alpha, eps, [&](std::size_t n) { return a(n); }, [&](std::size_t n) { return a(n + k); });
        break;
      case LemmaForm::Iii:
        holds = single_index_holds(
            alpha, eps, [&](std::size_t n) { return half(a(n) + a(n + 1)); },
            [&](std::size_t n) { return a(n + k); });
        break;
      case LemmaForm::Iv:
        if (is_sequence_value(a, seq, eps)) continue;
        holds = pair_sum_holds(a, alpha, eps);
        break;
      case LemmaForm::V:
        holds = pair_sum_holds(a, alpha, eps);
        break;
    }
    ++out.candidates_checked;
    if (!holds) {
      out.status = OracleStatus::Fails;
      out.epsilon = eps;
      return out;
    }
  }
  out.status = OracleStatus::Holds;
  return out;
}

bool cond_i(const TestSequence& seq) { return sgn(seq.limit()) == 0; }

namespace {

bool decide_via_limit(const TestSequence& seq, const ConditionForm& form) {
  const bool primary = cond_i(seq);
  if (seq.is_closed_form()) {
    const OracleVerdict oracle = seq_epsgrid_oracle(seq, form);
    const bool independent = oracle.status == OracleStatus::Holds;
    if (independent != primary) {
      throw ConsistencyError("condition " + form.name() + " on " + seq.describe() + ": limit test says " +
                             (primary ? "true" : "false") + ", oracle says " + to_string(oracle.status));
    }
  }
  return primary;
}

}  // namespace

bool cond_ii(const TestSequence& seq, std::size_t k) { return decide_via_limit(seq, {LemmaForm::Ii, k}); }

bool cond_iii(const TestSequence& seq, std::size_t k) {
  if (k == 0) throw std::invalid_argument("condition (iii) needs k >= 1");
  return decide_via_limit(seq, {LemmaForm::Iii, k});
}

bool cond_iv(const TestSequence& seq) { return decide_via_limit(seq, {LemmaForm::Iv, 0}); }

CondVVerdict cond_v(const TestSequence& seq) {
  std::vector<Rational> accumulation;
  accumulation.push_back(Rational(seq.term(1) + seq.limit()));
  if (sgn(seq.limit()) > 0) accumulation.push_back(Rational(2 * seq.limit()));
  for (const auto& eps : accumulation) {
    if (sgn(eps) > 0) return CondVVerdict{false, eps};
  }
  return CondVVerdict{true, std::nullopt};
}

std::string Lemma1Report::csv_header() {
  return "sequence,i,ii_k0,ii_k1,ii_k2,ii_k5,iii_k1,iii_k2,iii_k5,iv,v,oracle_agrees";
}

std::string Lemma1Report::csv() const {
  std::ostringstream out;
  out << csv_header() << '\n';
  for (const auto& row : rows) {
    out << row.sequence << "," << row.i;
    for (const auto& [k, v] : row.ii) out << "," << v;
    for (const auto& [k, v] : row.iii) out << "," << v;
    out << "," << row.iv << "," << row.v << "," << row.oracle_agrees << '\n';
  }
  return out.str();
}

Lemma1Report verify_lemma1(std::span<const TestSequence> family) {
  static constexpr std::size_t kSampledK[] = {0, 1, 2, 5};
  Lemma1Report report;
  for (const auto& seq : family) {
    Lemma1Row row;
    row.sequence = seq.describe();
    auto note = [&](const std::string& what) { report.violations.push_back(row.sequence + ": " + what); };
    try {
      row.i = cond_i(seq);
      for (std::size_t k : kSampledK) {
        row.ii.emplace_back(k, cond_ii(seq, k));
        if (k >= 1) row.iii.emplace_back(k, cond_iii(seq, k));
      }
      row.iv = cond_iv(seq);
      row.oracle_checks = seq.is_closed_form() ? row.ii.size() + row.iii.size() + 1 : 0;
    } catch (const ConsistencyError& e) {
      row.oracle_agrees = false;
      note(e.what());
    }

    const CondVVerdict v = cond_v(seq);
    row.v = v.holds;
    if (seq.is_closed_form()) {
      const OracleVerdict oracle = seq_epsgrid_oracle(seq, {LemmaForm::V, 0});
      ++row.oracle_checks;
      if ((oracle.status == OracleStatus::Holds) != row.v) {
        row.oracle_agrees = false;
        note("condition v: accumulation analysis and oracle disagree");
      }
    }

    for (const auto& [k, b] : row.ii) {
      if (b != row.i) note("(i) != (ii) at k=" + std::to_string(k));
    }
    for (const auto& [k, b] : row.iii) {
      if (b != row.i) note("(i) != (iii) at k=" + std::to_string(k));
    }
    if (row.iv != row.i) note("(i) != (iv)");
    if (row.v && !row.iv) note("(v) holds but (iv) does not");
    if (row.i && !row.v) report.strictness_witnessed = true;
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::vector<TestSequence> default_lemma1_family() {
  std::vector<TestSequence> out;
  for (const Rational& alpha : {Rational(0), Rational(1, 2)}) {
    for (const Rational& c : {Rational(1), Rational(1, 2)}) {
      for (const Rational& r : {Rational(1, 2), Rational(1, 4)}) out.push_back(TestSequence::closed_form(alpha, c, r));
    }
  }
  return out;
}

GapConditionVerdicts gap_conditions(const FiniteMetricSpace& d, const SelfMap& T, Point x0) {
  if (auto cm = satisfies_cm(d, T); !cm.holds) {
    throw HypothesisError("(CM) fails at pair (" + std::to_string(cm.witness->first) + "," +
                          std::to_string(cm.witness->second) + ")");
  }
  const Orbit orb = orbit(d, T, x0, d.size() + 1);
  const std::size_t horizon = orb.horizon() + 2;
  auto x = [&](std::size_t i) { return orb.state_at(i); };
  auto a = [&](std::size_t i) { return d(x(i), x(i + 1)); };

  GapConditionVerdicts out;
  out.gaps = gap_sequence(d, orb);
  out.i = orb.terminal.kind == TerminalKind::FixedPoint;

  SDPairSet ii{PairSource::GapSequence, {}};
  SDPairSet iii{PairSource::GapSequence, {}};
  SDPairSet iv{PairSource::GapSequence, {}};
  for (std::size_t i = 1; i <= horizon; ++i) {
    ii.pairs.push_back(SDPair{half(a(i) + a(i + 1)), a(i + 1), i, i + 1});
    iii.pairs.push_back(SDPair{half(a(i) + a(i + 1)), a(i + 2), i, i + 2});
    for (std::size_t j = 1; j <= horizon; ++j) iv.pairs.push_back(SDPair{half(a(i) + a(j)), d(x(i + 1), x(j + 1)), i, j});
  }
  out.ii = uniform_epsdelta_holds(ii).holds;
  out.iii = uniform_epsdelta_holds(iii).holds;
  // The excluded eps values of (iv) form a finite set, which cannot cover a
  // failing interval [S, D), so the exclusion never changes the verdict.
  out.iv = uniform_epsdelta_holds(iv).holds;
  out.v = uniform_epsdelta_holds(picard_pairs_kannan(d, T, x0)).holds;
  out.lemma_verdict = out.i;
  out.consistent = out.ii == out.lemma_verdict && out.iii == out.lemma_verdict && out.iv == out.lemma_verdict;
  return out;
}

}  // namespace kcfix
