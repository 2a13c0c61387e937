#pragma once

#include <algorithm>
#include <cassert>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <vector>

#include "mpalign/alignment.hpp"
#include "mpalign/corpus_io.hpp"
#include "mpalign/rng.hpp"
#include "mpalign/types.hpp"

namespace mpalign {

// How alignment edges are written into the matrix:
//   binary   every edge is 1            (plain link prediction)
//   rated    every edge is r_max        (rating factorization, 5/1/0 scheme)
//   weighted every edge keeps its aligner score, missing scores become 1.0
enum class GraphMode { binary, rated, weighted };

struct RatingScale {
  double r_max = 5.0;
  double r_min = 1.0;
};

enum class CellKind : std::uint8_t { positive, negative, diagonal };

struct Cell {
  double value = 0.0;
  CellKind kind = CellKind::positive;
};

struct GraphOptions {
  GraphMode mode = GraphMode::rated;
  RatingScale scale{};
  // One negative draw per positive edge: a random non-partner token of the
  // partner edition gets r_min. Only useful for rated graphs.
  bool negative_sampling = false;
  // Replication aid: additionally draw one negative from the source token's
  // own edition. Off by default; the sampling rule proper only draws from
  // the partner edition.
  bool same_language_negatives = false;
  std::uint64_t seed = 0;
};

struct Degree {
  std::size_t count = 0;   // off-diagonal positive neighbors
  double strength = 0.0;   // sum of their weights
};

// Symmetric sparse rating matrix over all tokens of one verse. Nodes are
// dense ids laid out edition by edition; absent cells are semantic zeros
// (the mask), r_min cells are observed negatives.
class SentenceGraph {
 public:
  using CellMap = std::map<std::pair<std::uint32_t, std::uint32_t>, Cell>;

  const std::string& verse_id() const { return verse_id_; }
  GraphMode mode() const { return mode_; }
  const RatingScale& scale() const { return scale_; }
  std::size_t node_count() const { return node_count_; }
  const std::vector<EditionId>& editions() const { return editions_; }
  const CellMap& cells() const { return cells_; }

  bool has_edition(const EditionId& e) const {
    return edition_index(e).has_value();
  }

  // [begin, end) node-id range of one edition; spans partition 0..n-1
  std::pair<std::uint32_t, std::uint32_t> edition_span(const EditionId& e) const {
    auto idx = edition_index(e);
    if (!idx)
      fail_logic("edition " + e.str() + " absent from verse " + verse_id_);
    return spans_[*idx];
  }

  std::uint32_t node_of(const TokenRef& ref) const {
    auto [begin, end] = edition_span(ref.edition);
    if (begin + ref.position >= end)
      fail_logic("token position out of range in verse " + verse_id_);
    return begin + ref.position;
  }

  TokenRef token_ref(std::uint32_t node) const {
    check_node(node);
    std::size_t e = edition_of_node(node);
    return TokenRef{editions_[e], node - spans_[e].first};
  }

  const std::string& token_text(std::uint32_t node) const {
    check_node(node);
    std::size_t e = edition_of_node(node);
    return tokens_[e][node - spans_[e].first];
  }

  std::optional<Cell> cell(std::uint32_t u, std::uint32_t v) const {
    auto it = cells_.find({u, v});
    if (it == cells_.end()) return std::nullopt;
    return it->second;
  }

  // positive neighbors of u, sorted by node id, with their edge weights
  const std::vector<std::pair<std::uint32_t, double>>& neighbors(
      std::uint32_t u) const {
    check_node(u);
    return adjacency_[u];
  }

  Degree degree(std::uint32_t u) const {
    check_node(u);
    Degree d;
    for (const auto& [v, w] : adjacency_[u]) {
      (void)v;
      ++d.count;
      d.strength += w;
    }
    return d;
  }

  // "lang:edition:pos:token<TAB>lang:edition:pos:token<TAB>rating" per stored
  // cell (u <= v), for eyeballing graphs
  void dump(std::ostream& os) const {
    for (const auto& [key, cell] : cells_) {
      if (key.first > key.second) continue;
      os << render_node(key.first) << '\t' << render_node(key.second) << '\t'
         << format_score(cell.value) << '\n';
    }
  }

 private:
  friend SentenceGraph build_graph(const MultiSentence&,
                                   const std::vector<const AlignmentSet*>&,
                                   const GraphOptions&);

  void check_node(std::uint32_t u) const {
    if (u >= node_count_)
      fail_logic("unknown node " + std::to_string(u) + " in verse " + verse_id_);
  }

  std::optional<std::size_t> edition_index(const EditionId& e) const {
    auto it = std::lower_bound(editions_.begin(), editions_.end(), e);
    if (it == editions_.end() || *it != e) return std::nullopt;
    return static_cast<std::size_t>(it - editions_.begin());
  }

  std::size_t edition_of_node(std::uint32_t node) const {
    std::size_t e = 0;
    while (node >= spans_[e].second) ++e;
    return e;
  }

  std::string render_node(std::uint32_t node) const {
    TokenRef ref = token_ref(node);
    return ref.edition.language + ":" + ref.edition.edition + ":" +
           std::to_string(ref.position) + ":" + token_text(node);
  }

  void set_symmetric(std::uint32_t u, std::uint32_t v, Cell cell) {
    cells_[{u, v}] = cell;
    cells_[{v, u}] = cell;
  }

  std::string verse_id_;
  GraphMode mode_ = GraphMode::rated;
  RatingScale scale_{};
  std::uint32_t node_count_ = 0;
  std::vector<EditionId> editions_;                          // sorted
  std::vector<std::pair<std::uint32_t, std::uint32_t>> spans_;
  std::vector<std::vector<std::string>> tokens_;             // per edition
  CellMap cells_;
  std::vector<std::vector<std::pair<std::uint32_t, double>>> adjacency_;
};

// Builds the per-verse graph from all pairwise alignment sets of that verse.
// The diagonal carries r_max; every alignment edge (x,y) fills the symmetric
// cell pair with the mode's value; with negative sampling on, each positive
// edge additionally rates one random non-partner token of the partner
// edition r_min.
inline SentenceGraph build_graph(const MultiSentence& sentence,
                                 const std::vector<const AlignmentSet*>& sets,
                                 const GraphOptions& opts) {
  if (opts.scale.r_max <= opts.scale.r_min || opts.scale.r_min <= 0.0)
    fail_config("rating scale requires r_max > r_min > 0");

  SentenceGraph g;
  g.verse_id_ = sentence.verse_id;
  g.mode_ = opts.mode;
  g.scale_ = opts.scale;

  std::uint32_t next = 0;
  for (const auto& [edition, tokens] : sentence.tokens) {
    if (tokens.empty())
      fail_logic("edition " + edition.str() + " has no tokens in verse " +
                 sentence.verse_id);
    g.editions_.push_back(edition);
    g.spans_.emplace_back(next, next + static_cast<std::uint32_t>(tokens.size()));
    g.tokens_.push_back(tokens);
    next += static_cast<std::uint32_t>(tokens.size());
  }
  g.node_count_ = next;

  for (std::uint32_t u = 0; u < g.node_count_; ++u)
    g.cells_[{u, u}] = Cell{opts.scale.r_max, CellKind::diagonal};

  // deterministic order regardless of how the caller collected the sets
  std::vector<const AlignmentSet*> ordered(sets);
  std::sort(ordered.begin(), ordered.end(),
            [](const AlignmentSet* a, const AlignmentSet* b) {
              return a->pair < b->pair;
            });

  // (source node, partner edition) of every positive edge, in insertion
  // order; negative draws replay this list
  std::vector<std::pair<std::uint32_t, std::size_t>> draw_plan;
  std::vector<std::set<std::uint32_t>> partners(g.node_count_);

  for (const AlignmentSet* set : ordered) {
    if (set->verse_id != sentence.verse_id)
      fail_logic("alignment set for verse " + set->verse_id +
                 " passed to graph of verse " + sentence.verse_id);
    if (set->pair.first == set->pair.second)
      fail_logic("pair " + set->pair.str() + " aligns an edition to itself");
    auto a_idx = g.edition_index(set->pair.first);
    auto b_idx = g.edition_index(set->pair.second);
    if (!a_idx || !b_idx)
      fail_logic("pair " + set->pair.str() + " not covered by verse " +
                 sentence.verse_id);
    const auto [a_begin, a_end] = g.spans_[*a_idx];
    const auto [b_begin, b_end] = g.spans_[*b_idx];
    for (const auto& [link, data] : set->edges) {
      if (a_begin + link.first >= a_end || b_begin + link.second >= b_end)
        fail_logic("alignment " + std::to_string(link.first) + "-" +
                   std::to_string(link.second) + " out of range in verse " +
                   sentence.verse_id + " for pair " + set->pair.str());
      std::uint32_t u = a_begin + link.first;
      std::uint32_t v = b_begin + link.second;
      double value = opts.scale.r_max;
      if (opts.mode == GraphMode::binary) value = 1.0;
      if (opts.mode == GraphMode::weighted) value = data.score.value_or(1.0);
      auto existing = g.cells_.find({u, v});
      if (existing != g.cells_.end() &&
          existing->second.kind == CellKind::positive)
        value = std::max(value, existing->second.value);
      g.set_symmetric(u, v, Cell{value, CellKind::positive});
      partners[u].insert(v);
      partners[v].insert(u);
      draw_plan.emplace_back(u, *b_idx);
      if (opts.same_language_negatives) draw_plan.emplace_back(u, *a_idx);
    }
  }

  if (opts.negative_sampling && !draw_plan.empty()) {
    Rng rng(opts.seed);
    for (const auto& [u, edition_idx] : draw_plan) {
      const auto [begin, end] = g.spans_[edition_idx];
      std::vector<std::uint32_t> eligible;
      for (std::uint32_t z = begin; z < end; ++z)
        if (z != u && !partners[u].count(z)) eligible.push_back(z);
      if (eligible.empty()) continue;
      std::uint32_t z = eligible[rng.uniform_index(eligible.size())];
      if (!g.cells_.count({u, z}))
        g.set_symmetric(u, z, Cell{opts.scale.r_min, CellKind::negative});
    }
  }

  g.adjacency_.resize(g.node_count_);
  for (const auto& [key, cell] : g.cells_)
    if (cell.kind == CellKind::positive)
      g.adjacency_[key.first].emplace_back(key.second, cell.value);

  return g;
}

inline Degree degree(const SentenceGraph& g, std::uint32_t node) {
  return g.degree(node);
}

// Rectangular view of the target pair's block: rows are pair.first's tokens,
// columns pair.second's.
struct SubmatrixView {
  const SentenceGraph* graph = nullptr;
  EditionPair pair;
  std::uint32_t row_begin = 0, row_count = 0;
  std::uint32_t col_begin = 0, col_count = 0;

  std::uint32_t row_node(std::uint32_t i) const { return row_begin + i; }
  std::uint32_t col_node(std::uint32_t j) const { return col_begin + j; }
  TokenRef row_token(std::uint32_t i) const {
    return graph->token_ref(row_node(i));
  }
  TokenRef col_token(std::uint32_t j) const {
    return graph->token_ref(col_node(j));
  }
  std::optional<Cell> at(std::uint32_t i, std::uint32_t j) const {
    return graph->cell(row_node(i), col_node(j));
  }
};

inline SubmatrixView target_submatrix(const SentenceGraph& g,
                                      const EditionPair& pair) {
  auto [rb, re] = g.edition_span(pair.first);
  auto [cb, ce] = g.edition_span(pair.second);
  return SubmatrixView{&g, pair, rb, re - rb, cb, ce - cb};
}

}  // namespace mpalign
