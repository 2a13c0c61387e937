#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "mpalign/evaluation.hpp"
#include "mpalign/pipeline.hpp"

namespace mpalign {

enum class AblationMode { sizes, leave_one_in };

struct AblationConfig {
  AblationMode mode = AblationMode::sizes;
  std::vector<std::size_t> sizes;      // sizes mode; each <= pool size
  // auxiliary editions must come from languages other than the target's,
  // unless explicitly allowed (extra translations of the target languages
  // are a legitimate but weaker source of evidence)
  bool allow_target_languages = false;
  std::uint64_t seed = 0;
  PipelineConfig pipeline{};
};

struct AblationRow {
  std::string label;  // auxiliary-set size, or edition id
  double value;       // merged F1, or delta F1 over the bilingual baseline
};

// Measures how much auxiliary languages help the target pair. sizes mode
// reports merged F1 per auxiliary-set size, where the sets are nested
// prefixes of one seeded shuffle of the pool (nesting keeps the curve
// comparable across sizes). leave_one_in mode runs one trilingual pipeline
// per pool edition and reports its F1 gain over the bilingual baseline,
// sorted best first.
inline std::vector<AblationRow> language_ablation(
    const Corpus& corpus, const PairAlignments& initial,
    const EditionPair& target, const VerseAlignments& baseline,
    const GoldMap& gold, const std::vector<EditionId>& pool,
    const AblationConfig& cfg) {
  for (const EditionId& e : pool) {
    if (target.contains(e))
      fail_config("pool edition " + e.str() + " is a target edition");
    if (!cfg.allow_target_languages &&
        (e.language == target.first.language ||
         e.language == target.second.language))
      fail_config("pool edition " + e.str() +
                  " shares a language with the target pair "
                  "(pass --allow-target-languages to permit)");
  }
  std::vector<EditionId> unique(pool);
  std::sort(unique.begin(), unique.end());
  if (std::adjacent_find(unique.begin(), unique.end()) != unique.end())
    fail_config("pool contains duplicate editions");

  auto merged_f1 = [&](const std::vector<EditionId>& auxiliaries) {
    std::set<EditionId> filter{target.first, target.second};
    filter.insert(auxiliaries.begin(), auxiliaries.end());
    PipelineResult run =
        run_pipeline(corpus, initial, target, baseline, cfg.pipeline, &filter);
    return evaluate(run.merged, gold).overall.f1;
  };

  std::vector<AblationRow> rows;
  if (cfg.mode == AblationMode::sizes) {
    std::vector<EditionId> order(unique);
    Rng rng(derive_seed(cfg.seed, "ablation-subsets"));
    rng.shuffle(order);
    for (std::size_t size : cfg.sizes) {
      if (size > order.size())
        fail_config("requested auxiliary-set size " + std::to_string(size) +
                    " exceeds pool size " + std::to_string(order.size()));
      std::vector<EditionId> subset(order.begin(), order.begin() + size);
      rows.push_back({std::to_string(size), merged_f1(subset)});
    }
  } else {
    const double base_f1 = evaluate(baseline, gold).overall.f1;
    for (const EditionId& e : unique)
      rows.push_back({e.str(), merged_f1({e}) - base_f1});
    std::stable_sort(rows.begin(), rows.end(),
                     [](const AblationRow& a, const AblationRow& b) {
                       return a.value > b.value;
                     });
  }
  return rows;
}

}  // namespace mpalign
