#pragma once

#include <cassert>
#include <cmath>
#include <vector>

#include "mpalign/score_matrix.hpp"
#include "mpalign/sentence_graph.hpp"

namespace mpalign {

// Second-order link prediction over the verse graph. Candidate scores are
// accumulated along two-hop paths x -> z -> y with x in pair.first and y in
// pair.second, which visits each common neighbor z of (x, y) exactly once
// and costs O(sum_x sum_{z in G(x)} |G(z)|) per verse instead of scoring all
// n^2 cells. Only positive edges define neighborhoods; negative (r_min)
// cells encode "not aligned" and never count. The direct edge (x, y) itself
// contributes nothing, only common neighbors do.

namespace detail {

template <class Contribution>
ScoreMatrix two_hop_scores(const SentenceGraph& g, const EditionPair& pair,
                           Provenance prov, Contribution contribute) {
  SubmatrixView view = target_submatrix(g, pair);
  ScoreMatrix out(g.verse_id(), pair, view.row_count, view.col_count, prov);

  std::vector<Degree> degrees(g.node_count());
  for (std::uint32_t u = 0; u < g.node_count(); ++u) degrees[u] = g.degree(u);

  const std::uint32_t col_end = view.col_begin + view.col_count;
  for (std::uint32_t i = 0; i < view.row_count; ++i) {
    const std::uint32_t x = view.row_node(i);
    for (const auto& [z, w_xz] : g.neighbors(x)) {
      const Degree& dz = degrees[z];
      for (const auto& [y, w_zy] : g.neighbors(z)) {
        if (y < view.col_begin || y >= col_end || y == x) continue;
        // z is a common neighbor of distinct x and y, hence |G(z)| >= 2 and
        // the log below is never log(1) = 0
        assert(dz.count >= 2);
        out.at(i, y - view.col_begin) += contribute(dz, w_xz, w_zy);
      }
    }
  }
  return out;
}

}  // namespace detail

// AdAd(x,y) = sum over common neighbors z of 1 / log |G(z)|, natural log.
inline ScoreMatrix adamic_adar(const SentenceGraph& g, const EditionPair& pair) {
  return detail::two_hop_scores(
      g, pair, Provenance::adad,
      [](const Degree& dz, double, double) {
        return 1.0 / std::log(static_cast<double>(dz.count));
      });
}

// WAdAd(x,y) = sum over common neighbors z of (w(x,z) + w(z,y)) / log(1 + S(z))
// with S(z) the weighted strength of z; natural log. Meant for graphs in
// weighted mode (aligners without scores fall back to unit weights there).
inline ScoreMatrix weighted_adamic_adar(const SentenceGraph& g,
                                        const EditionPair& pair) {
  return detail::two_hop_scores(
      g, pair, Provenance::wadad,
      [](const Degree& dz, double w_xz, double w_zy) {
        // a positive common neighbor has positive strength; aligner scores
        // are expected to be > 0
        assert(dz.strength > 0.0);
        return (w_xz + w_zy) / std::log1p(dz.strength);
      });
}

}  // namespace mpalign
