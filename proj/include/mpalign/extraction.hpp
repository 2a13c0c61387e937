#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mpalign/alignment.hpp"
#include "mpalign/score_matrix.hpp"
#include "mpalign/sentence_graph.hpp"

namespace mpalign {

enum class TieBreak { lowest_index, drop_ties };

struct ExtractionConfig {
  // minimum score; kept edges must score strictly greater. Unset means the
  // method default: 0 for adad/wadad, the rating midpoint for nmf (a mutual
  // argmax below the midpoint sits closer to "not aligned" than "aligned").
  std::optional<double> min_score;
  TieBreak tie_break = TieBreak::lowest_index;
};

inline double default_min_score(Provenance prov, const RatingScale& scale) {
  if (prov == Provenance::nmf) return 0.5 * (scale.r_max + scale.r_min);
  return 0.0;
}

namespace detail {

// argmax per line; ties resolve to the lowest index, or poison the line in
// drop_ties mode
inline std::vector<std::int64_t> line_argmax(const ScoreMatrix& m, bool by_row,
                                             TieBreak tie_break) {
  const std::uint32_t lines = by_row ? m.rows : m.cols;
  const std::uint32_t width = by_row ? m.cols : m.rows;
  std::vector<std::int64_t> best(lines, -1);
  for (std::uint32_t l = 0; l < lines; ++l) {
    if (width == 0) continue;
    std::uint32_t arg = 0;
    bool tied = false;
    double max = by_row ? m.at(l, 0) : m.at(0, l);
    for (std::uint32_t w = 1; w < width; ++w) {
      double v = by_row ? m.at(l, w) : m.at(w, l);
      if (v > max) {
        max = v;
        arg = w;
        tied = false;
      } else if (v == max) {
        tied = true;
      }
    }
    best[l] = (tied && tie_break == TieBreak::drop_ties)
                  ? std::int64_t{-1}
                  : static_cast<std::int64_t>(arg);
  }
  return best;
}

}  // namespace detail

// Keeps exactly the cells that are simultaneously their row's and their
// column's maximum and score above the threshold. With lowest_index ties are
// resolved before the mutuality test, so each row and each column yields at
// most one edge.
inline AlignmentSet argmax_extract(const ScoreMatrix& scores,
                                   const ExtractionConfig& cfg,
                                   const RatingScale& scale = {}) {
  const double tau = cfg.min_score.value_or(
      default_min_score(scores.provenance, scale));
  if (tau < 0.0) fail_config("extraction threshold must be >= 0");

  AlignmentSet out;
  out.verse_id = scores.verse_id;
  out.pair = scores.pair;

  auto row_best = detail::line_argmax(scores, true, cfg.tie_break);
  auto col_best = detail::line_argmax(scores, false, cfg.tie_break);

  for (std::uint32_t i = 0; i < scores.rows; ++i) {
    if (row_best[i] < 0) continue;
    const auto j = static_cast<std::uint32_t>(row_best[i]);
    if (col_best[j] != static_cast<std::int64_t>(i)) continue;
    const double score = scores.at(i, j);
    if (score > tau)
      out.edges.emplace(Link{i, j}, EdgeData{score, true});
  }
  return out;
}

// Set union that only ever adds: baseline edges keep their scores, edges
// known only to the predictor keep their prediction score and the predicted
// flag.
inline AlignmentSet merge(const AlignmentSet& baseline,
                          const AlignmentSet& predicted) {
  if (baseline.pair != predicted.pair)
    fail_logic("merge pair mismatch: " + baseline.pair.str() + " vs " +
               predicted.pair.str());
  if (baseline.verse_id != predicted.verse_id)
    fail_logic("merge verse mismatch: " + baseline.verse_id + " vs " +
               predicted.verse_id);
  AlignmentSet out = baseline;
  for (const auto& [link, data] : predicted.edges)
    out.edges.try_emplace(link, EdgeData{data.score, true});
  return out;
}

}  // namespace mpalign
