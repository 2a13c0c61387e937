#pragma once

#include <cstdio>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mpalign/alignment.hpp"
#include "mpalign/corpus_io.hpp"
#include "mpalign/rng.hpp"

namespace mpalign {

// Synthetic multiparallel corpora with known gold alignments. Each verse
// holds K concepts; a concept surfaces in each language with probability q
// as `fertility` fresh tokens, and all cross-language token pairs of one
// concept are gold edges, so every concept forms a clique across the
// languages that realize it. Observed alignments are the gold edges minus
// seeded drops (p_drop on the target pair, p_aux elsewhere) plus
// Poisson-rate spurious cross-concept edges.
struct SynthConfig {
  std::size_t n_languages = 2;        // first two form the target pair
  std::size_t n_verses = 1;
  std::size_t concepts_per_verse = 1;
  double coverage = 1.0;              // q in (0,1]
  double p_drop = 0.0;                // [0,1), target-pair gold edges
  double p_aux = 0.0;                 // [0,1), all other pairs
  double noise_rate = 0.0;            // Poisson rate per verse and pair
  std::size_t fertility = 1;          // tokens per realized concept
  std::uint64_t seed = 0;
  std::string verse_prefix = "v";
};

struct SynthInstance {
  Corpus corpus;
  std::vector<EditionId> editions;
  EditionPair target;
  std::map<EditionPair, GoldMap> gold;
  PairAlignments observed;
  // gold edges removed from `observed`, per pair and verse
  std::map<EditionPair, std::map<std::string, std::set<Link>>> dropped;
};

namespace detail {

inline std::string synth_language(std::size_t index) {
  std::string code = "aaa";
  code[2] = static_cast<char>('a' + index % 26);
  code[1] = static_cast<char>('a' + (index / 26) % 26);
  code[0] = static_cast<char>('a' + (index / 676) % 26);
  return code;
}

}  // namespace detail

inline SynthInstance generate(const SynthConfig& cfg) {
  if (cfg.n_languages < 2) fail_config("need at least two languages");
  if (cfg.concepts_per_verse < 1) fail_config("need at least one concept");
  if (cfg.fertility < 1) fail_config("fertility must be >= 1");
  if (cfg.coverage <= 0.0 || cfg.coverage > 1.0)
    fail_config("coverage must be in (0, 1]");
  if (cfg.p_drop < 0.0 || cfg.p_drop >= 1.0 || cfg.p_aux < 0.0 ||
      cfg.p_aux >= 1.0)
    fail_config("drop rates must be in [0, 1)");
  if (cfg.noise_rate < 0.0) fail_config("noise rate must be >= 0");

  SynthInstance inst;
  for (std::size_t l = 0; l < cfg.n_languages; ++l)
    inst.editions.push_back(EditionId{detail::synth_language(l), "synth"});
  inst.target = EditionPair{inst.editions[0], inst.editions[1]};

  const std::size_t L = cfg.n_languages;
  const std::size_t K = cfg.concepts_per_verse;

  char id_buf[32];
  for (std::size_t v = 0; v < cfg.n_verses; ++v) {
    std::snprintf(id_buf, sizeof id_buf, "%s%05zu", cfg.verse_prefix.c_str(), v);
    const std::string verse_id = id_buf;
    Rng rng(derive_seed(cfg.seed, "synth", verse_id));

    // 1. realization draws, concept-major then language-minor
    std::vector<std::vector<bool>> realized(K, std::vector<bool>(L, false));
    for (std::size_t c = 0; c < K; ++c)
      for (std::size_t l = 0; l < L; ++l)
        realized[c][l] = rng.bernoulli(cfg.coverage);

    // 2. tokens and per-language position shuffles, in language order
    // positions[l][c] lists the verse positions of concept c's tokens
    std::vector<std::vector<std::vector<std::uint32_t>>> positions(
        L, std::vector<std::vector<std::uint32_t>>(K));
    MultiSentence sentence;
    sentence.verse_id = verse_id;
    for (std::size_t l = 0; l < L; ++l) {
      std::vector<std::pair<std::size_t, std::size_t>> slots;  // (concept, copy)
      for (std::size_t c = 0; c < K; ++c)
        if (realized[c][l])
          for (std::size_t t = 0; t < cfg.fertility; ++t) slots.emplace_back(c, t);
      if (slots.empty()) continue;
      rng.shuffle(slots);
      std::vector<std::string> tokens(slots.size());
      for (std::size_t pos = 0; pos < slots.size(); ++pos) {
        auto [c, t] = slots[pos];
        std::string text = "c" + std::to_string(c) + "_l" +
                           detail::synth_language(l);
        if (cfg.fertility > 1) text += "_t" + std::to_string(t);
        tokens[pos] = text;
        positions[l][c].push_back(static_cast<std::uint32_t>(pos));
      }
      sentence.tokens.emplace(inst.editions[l], std::move(tokens));
    }
    if (sentence.tokens.size() < 2) continue;  // verse unusable, skip it
    inst.corpus.emplace(verse_id, std::move(sentence));

    // 3. gold cliques, then drops and spurious edges per pair, in pair order
    for (std::size_t a = 0; a < L; ++a) {
      const EditionId& ea = inst.editions[a];
      if (!inst.corpus.at(verse_id).has(ea)) continue;
      for (std::size_t b = a + 1; b < L; ++b) {
        const EditionId& eb = inst.editions[b];
        if (!inst.corpus.at(verse_id).has(eb)) continue;
        EditionPair pair{ea, eb};
        const bool is_target = a == 0 && b == 1;
        const double drop_rate = is_target ? cfg.p_drop : cfg.p_aux;

        GoldStandard gold;
        gold.verse_id = verse_id;
        gold.pair = pair;
        for (std::size_t c = 0; c < K; ++c)
          for (std::uint32_t i : positions[a][c])
            for (std::uint32_t j : positions[b][c]) gold.sure.insert({i, j});
        if (gold.sure.empty()) continue;
        gold.possible = gold.sure;

        AlignmentSet observed;
        observed.verse_id = verse_id;
        observed.pair = pair;
        std::set<Link> dropped;
        for (Link link : gold.sure) {
          if (drop_rate > 0.0 && rng.bernoulli(drop_rate))
            dropped.insert(link);
          else
            observed.insert_max(link, std::nullopt);
        }

        if (cfg.noise_rate > 0.0) {
          const auto& sent = inst.corpus.at(verse_id);
          const std::size_t na = sent.token_count(ea);
          const std::size_t nb = sent.token_count(eb);
          std::size_t wanted = rng.poisson(cfg.noise_rate);
          for (std::size_t attempts = 0; wanted > 0 && attempts < 20 * wanted;
               ++attempts) {
            Link link{static_cast<std::uint32_t>(rng.uniform_index(na)),
                      static_cast<std::uint32_t>(rng.uniform_index(nb))};
            if (gold.sure.count(link) || observed.contains(link)) continue;
            observed.insert_max(link, std::nullopt);
            --wanted;
          }
        }

        inst.gold[pair].emplace(verse_id, std::move(gold));
        inst.observed[pair].emplace(verse_id, std::move(observed));
        if (!dropped.empty())
          inst.dropped[pair].emplace(verse_id, std::move(dropped));
      }
    }
  }
  return inst;
}

struct RecoveryReport {
  std::size_t dropped = 0;
  std::size_t recovered = 0;       // dropped gold edges present in merged
  std::size_t added = 0;           // merged edges not in the observed baseline
  std::size_t added_correct = 0;   // added edges that are gold
  std::optional<double> recovery;          // absent when nothing was dropped
  std::optional<double> added_precision;   // absent when nothing was added
};

// How much of the corruption did a merged alignment undo on the target pair?
inline RecoveryReport score_recovery(const SynthInstance& inst,
                                     const VerseAlignments& merged) {
  RecoveryReport report;
  if (auto pit = inst.dropped.find(inst.target); pit != inst.dropped.end())
    for (const auto& [verse_id, links] : pit->second) {
      report.dropped += links.size();
      auto mit = merged.find(verse_id);
      if (mit == merged.end()) continue;
      for (Link link : links)
        if (mit->second.contains(link)) ++report.recovered;
    }

  const GoldMap& gold = inst.gold.at(inst.target);
  const VerseAlignments& observed = inst.observed.at(inst.target);
  for (const auto& [verse_id, set] : merged) {
    auto oit = observed.find(verse_id);
    auto git = gold.find(verse_id);
    for (const auto& [link, data] : set.edges) {
      (void)data;
      if (oit != observed.end() && oit->second.contains(link)) continue;
      ++report.added;
      if (git != gold.end() && git->second.possible.count(link))
        ++report.added_correct;
    }
  }

  if (report.dropped > 0)
    report.recovery = static_cast<double>(report.recovered) /
                      static_cast<double>(report.dropped);
  if (report.added > 0)
    report.added_precision = static_cast<double>(report.added_correct) /
                             static_cast<double>(report.added);
  return report;
}

// Writes an instance in the toolkit's file formats: one corpus file per
// edition, <A>__<B>.align and <A>__<B>.gold per pair, plus a
// <A>__<B>.dropped.tsv listing the removed gold edges of corrupted pairs.
inline void write_instance(const SynthInstance& inst,
                           const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const EditionId& e : inst.editions) {
    std::ofstream out(dir / (e.str() + ".txt"));
    if (!out) fail_io("cannot write corpus file for " + e.str());
    for (const auto& [verse_id, sentence] : inst.corpus) {
      auto it = sentence.tokens.find(e);
      if (it == sentence.tokens.end()) continue;
      out << verse_id << '\t';
      for (std::size_t i = 0; i < it->second.size(); ++i) {
        if (i) out << ' ';
        out << it->second[i];
      }
      out << '\n';
    }
  }
  for (const auto& [pair, verses] : inst.observed)
    write_alignments(verses, dir / (pair.str() + ".align"));
  for (const auto& [pair, gold] : inst.gold)
    write_gold(gold, dir / (pair.str() + ".gold"));
  for (const auto& [pair, verses] : inst.dropped) {
    std::ofstream out(dir / (pair.str() + ".dropped.tsv"));
    if (!out) fail_io("cannot write dropped-edge list for " + pair.str());
    out << "verse_id\tlink\n";
    for (const auto& [verse_id, links] : verses)
      for (Link link : links)
        out << verse_id << '\t' << link.first << '-' << link.second << '\n';
  }
}

}  // namespace mpalign
