#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "mpalign/alignment.hpp"
#include "mpalign/corpus_io.hpp"

namespace mpalign {

// Standard word-alignment scores of a hypothesis A against gold sure (S) and
// possible (P) sets:
//   precision = |A cap P| / |A|            (1.0 when A is empty)
//   recall    = |A cap S| / |S|            (1.0 when S is empty)
//   f1        = harmonic mean of the two   (0 when both are 0)
//   aer       = 1 - (|A cap S| + |A cap P|) / (|A| + |S|)   (0 when |A|+|S|=0)
struct EvalResult {
  std::size_t hyp = 0;
  std::size_t sure = 0;
  std::size_t possible = 0;
  std::size_t hyp_and_sure = 0;
  std::size_t hyp_and_possible = 0;
  double precision = 1.0;
  double recall = 1.0;
  double f1 = 0.0;
  double aer = 0.0;

  static EvalResult from_counts(std::size_t a, std::size_t s, std::size_t p,
                                std::size_t a_s, std::size_t a_p) {
    EvalResult r;
    r.hyp = a;
    r.sure = s;
    r.possible = p;
    r.hyp_and_sure = a_s;
    r.hyp_and_possible = a_p;
    r.precision = a == 0 ? 1.0 : static_cast<double>(a_p) / a;
    r.recall = s == 0 ? 1.0 : static_cast<double>(a_s) / s;
    r.f1 = (r.precision + r.recall) == 0.0
               ? 0.0
               : 2.0 * r.precision * r.recall / (r.precision + r.recall);
    r.aer = (a + s) == 0
                ? 0.0
                : 1.0 - static_cast<double>(a_s + a_p) / static_cast<double>(a + s);
    return r;
  }
};

struct Evaluation {
  EvalResult overall;  // micro-average: counts pooled over verses first
  std::map<std::string, EvalResult> per_verse;
};

// Scores a hypothesis against gold, verse by verse. Gold verses missing from
// the hypothesis count with an empty A; hypothesis verses without gold are
// skipped with a warning.
inline Evaluation evaluate(const VerseAlignments& hypothesis,
                           const GoldMap& gold,
                           std::vector<std::string>* warnings = nullptr) {
  if (gold.empty()) fail_config("evaluation set is empty");
  Evaluation eval;
  std::size_t a = 0, s = 0, p = 0, a_s = 0, a_p = 0;
  for (const auto& [verse_id, g] : gold) {
    std::size_t va = 0, va_s = 0, va_p = 0;
    auto hit = hypothesis.find(verse_id);
    if (hit != hypothesis.end()) {
      va = hit->second.edges.size();
      for (const auto& [link, data] : hit->second.edges) {
        (void)data;
        if (g.sure.count(link)) ++va_s;
        if (g.possible.count(link)) ++va_p;
      }
    }
    eval.per_verse.emplace(verse_id,
                           EvalResult::from_counts(va, g.sure.size(),
                                                   g.possible.size(), va_s, va_p));
    a += va;
    s += g.sure.size();
    p += g.possible.size();
    a_s += va_s;
    a_p += va_p;
  }
  for (const auto& [verse_id, set] : hypothesis) {
    (void)set;
    if (!gold.count(verse_id))
      detail::warn(warnings, "verse " + verse_id + " has no gold, skipped");
  }
  eval.overall = EvalResult::from_counts(a, s, p, a_s, a_p);
  return eval;
}

// One baseline-F1 bin of the difficulty stratification. The interval [0,1]
// splits into five equal bins, the first closed, the rest left-open:
// [0,0.2], (0.2,0.4], ..., (0.8,1].
struct Stratum {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
  double baseline_mean_f1 = 0.0;
  double merged_mean_f1 = 0.0;

  double improvement() const { return merged_mean_f1 - baseline_mean_f1; }
};

struct StratumReport {
  std::array<Stratum, 5> strata{};
  std::size_t total = 0;
};

inline std::size_t stratum_index(double baseline_f1) {
  if (baseline_f1 <= 0.2) return 0;
  if (baseline_f1 <= 0.4) return 1;
  if (baseline_f1 <= 0.6) return 2;
  if (baseline_f1 <= 0.8) return 3;
  return 4;
}

// Bins verses by baseline F1 and reports mean baseline/merged F1 per bin.
// Both result maps must cover the same verses.
inline StratumReport stratify(const std::map<std::string, EvalResult>& baseline,
                              const std::map<std::string, EvalResult>& merged) {
  std::string mismatch;
  for (const auto& [verse_id, r] : baseline) {
    (void)r;
    if (!merged.count(verse_id)) mismatch += " -" + verse_id;
  }
  for (const auto& [verse_id, r] : merged) {
    (void)r;
    if (!baseline.count(verse_id)) mismatch += " +" + verse_id;
  }
  if (!mismatch.empty())
    fail_config("stratify verse sets differ:" + mismatch);

  StratumReport report;
  for (std::size_t b = 0; b < 5; ++b) {
    report.strata[b].lo = 0.2 * static_cast<double>(b);
    report.strata[b].hi = 0.2 * static_cast<double>(b + 1);
  }
  for (const auto& [verse_id, base] : baseline) {
    const EvalResult& merge = merged.at(verse_id);
    Stratum& st = report.strata[stratum_index(base.f1)];
    ++st.count;
    st.baseline_mean_f1 += base.f1;
    st.merged_mean_f1 += merge.f1;
    ++report.total;
  }
  for (Stratum& st : report.strata)
    if (st.count > 0) {
      st.baseline_mean_f1 /= static_cast<double>(st.count);
      st.merged_mean_f1 /= static_cast<double>(st.count);
    }
  return report;
}

}  // namespace mpalign
