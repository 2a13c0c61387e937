#pragma once

#include <atomic>
#include <functional>
#include <optional>
#include <set>
#include <thread>
#include <vector>

#include "mpalign/extraction.hpp"
#include "mpalign/link_prediction.hpp"
#include "mpalign/nmf.hpp"
#include "mpalign/sentence_graph.hpp"

namespace mpalign {

enum class Method { adad, wadad, nmf };

inline const char* method_name(Method m) {
  switch (m) {
    case Method::adad: return "adad";
    case Method::wadad: return "wadad";
    case Method::nmf: return "nmf";
  }
  return "?";
}

inline std::optional<Method> parse_method(std::string_view s) {
  if (s == "adad") return Method::adad;
  if (s == "wadad") return Method::wadad;
  if (s == "nmf") return Method::nmf;
  return std::nullopt;
}

struct PipelineConfig {
  Method method = Method::adad;
  RatingScale scale{};
  // unset: on for nmf (the 5/1/0 scheme needs contrastive signal), off for
  // the link-prediction methods
  std::optional<bool> negative_sampling;
  bool same_language_negatives = false;
  NmfConfig nmf{};
  ExtractionConfig extraction{};
  std::uint64_t seed = 0;
  unsigned jobs = 1;
};

struct PipelineResult {
  VerseAlignments merged;
  std::vector<std::string> warnings;
  std::size_t predicted_verses = 0;  // went through graph + extraction
  std::size_t fallback_verses = 0;   // baseline passed through unchanged
};

inline GraphMode graph_mode_for(Method m) {
  switch (m) {
    case Method::adad: return GraphMode::binary;
    case Method::wadad: return GraphMode::weighted;
    case Method::nmf: return GraphMode::rated;
  }
  return GraphMode::binary;
}

namespace detail {

// static work split; verse jobs are small and uniform enough
inline void parallel_for(std::size_t n, unsigned jobs,
                         const std::function<void(std::size_t)>& body) {
  if (jobs <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1))
      body(i);
  };
  std::vector<std::thread> pool;
  const unsigned count = std::min<unsigned>(jobs, static_cast<unsigned>(n));
  pool.reserve(count);
  for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace detail

// Per-verse pipeline: build the multilingual graph from the initial
// alignments, score the target pair (link prediction or factorize+predict),
// extract mutual-argmax edges, and add them to the baseline alignment.
// Verses missing either target edition pass through as baseline-only, as do
// verses whose prediction fails (the failure is logged, never fatal).
//
// `initial` (graph input) and `baseline` (merge target) may come from
// different aligner configurations; feeding a high-precision alignment into
// the graph while merging into a high-recall one is the intended use.
// `edition_filter`, when given, restricts the graph to those editions.
inline PipelineResult run_pipeline(const Corpus& corpus,
                                   const PairAlignments& initial,
                                   const EditionPair& target,
                                   const VerseAlignments& baseline,
                                   const PipelineConfig& cfg,
                                   const std::set<EditionId>* edition_filter =
                                       nullptr) {
  if (target.first == target.second)
    fail_config("target pair must name two distinct editions");
  if (edition_filter && (!edition_filter->count(target.first) ||
                         !edition_filter->count(target.second)))
    fail_config("edition filter must include the target pair");

  const bool sample_negatives =
      cfg.negative_sampling.value_or(cfg.method == Method::nmf);

  std::vector<const MultiSentence*> predictable;
  for (const auto& [verse_id, sentence] : corpus) {
    (void)verse_id;
    if (sentence.has(target.first) && sentence.has(target.second))
      predictable.push_back(&sentence);
  }
  if (predictable.empty())
    fail_config("target pair " + target.str() + " absent from all verses");

  struct Slot {
    std::optional<AlignmentSet> merged;
    std::vector<std::string> warnings;
    bool fell_back = false;
  };
  std::vector<Slot> slots(predictable.size());

  detail::parallel_for(
      predictable.size(), cfg.jobs, [&](std::size_t idx) {
        const MultiSentence& sentence = *predictable[idx];
        Slot& slot = slots[idx];

        AlignmentSet base;
        base.verse_id = sentence.verse_id;
        base.pair = target;
        if (auto it = baseline.find(sentence.verse_id); it != baseline.end())
          base = it->second;

        try {
          MultiSentence filtered;
          const MultiSentence* input = &sentence;
          if (edition_filter) {
            filtered.verse_id = sentence.verse_id;
            for (const auto& [edition, tokens] : sentence.tokens)
              if (edition_filter->count(edition))
                filtered.tokens.emplace(edition, tokens);
            input = &filtered;
          }

          std::vector<const AlignmentSet*> sets;
          for (const auto& [pair, verses] : initial) {
            if (!input->has(pair.first) || !input->has(pair.second)) continue;
            auto it = verses.find(sentence.verse_id);
            if (it != verses.end()) sets.push_back(&it->second);
          }

          GraphOptions gopts;
          gopts.mode = graph_mode_for(cfg.method);
          gopts.scale = cfg.scale;
          gopts.negative_sampling = sample_negatives;
          gopts.same_language_negatives = cfg.same_language_negatives;
          gopts.seed = derive_seed(cfg.seed, "graph-negatives", sentence.verse_id);
          SentenceGraph graph = build_graph(*input, sets, gopts);

          ScoreMatrix scores;
          switch (cfg.method) {
            case Method::adad:
              scores = adamic_adar(graph, target);
              break;
            case Method::wadad:
              scores = weighted_adamic_adar(graph, target);
              break;
            case Method::nmf: {
              NmfConfig nmf_cfg = cfg.nmf;
              nmf_cfg.seed = derive_seed(cfg.seed, "nmf-init", sentence.verse_id);
              FactorPair factors = factorize(graph, nmf_cfg);
              scores = predict(factors, graph, target);
              break;
            }
          }

          AlignmentSet extracted = argmax_extract(scores, cfg.extraction,
                                                  cfg.scale);
          slot.merged = merge(base, extracted);
        } catch (const Error& e) {
          slot.warnings.push_back("verse " + sentence.verse_id + ": " +
                                  e.what() + "; falling back to baseline");
          slot.merged = std::move(base);
          slot.fell_back = true;
        }
      });

  PipelineResult result;
  result.merged = baseline;  // verses outside the corpus pass through
  result.fallback_verses = baseline.size();
  for (const MultiSentence* s : predictable)
    if (baseline.count(s->verse_id)) --result.fallback_verses;
  for (Slot& slot : slots) {
    result.warnings.insert(result.warnings.end(), slot.warnings.begin(),
                           slot.warnings.end());
    if (slot.fell_back)
      ++result.fallback_verses;
    else
      ++result.predicted_verses;
    result.merged[slot.merged->verse_id] = std::move(*slot.merged);
  }
  return result;
}

}  // namespace mpalign
