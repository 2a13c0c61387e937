#pragma once

#include <map>
#include <optional>
#include <set>
#include <utility>

#include "mpalign/types.hpp"

namespace mpalign {

// (source position, target position) within one verse of one edition pair
using Link = std::pair<std::uint32_t, std::uint32_t>;

struct EdgeData {
  std::optional<double> score;  // absent when the aligner gave none
  bool predicted = false;       // true for edges added by link prediction
};

// Pairwise alignment of one verse: position links, optionally scored.
// Link positions are 0-based throughout; first ~ pair.first, second ~
// pair.second.
struct AlignmentSet {
  std::string verse_id;
  EditionPair pair;
  std::map<Link, EdgeData> edges;

  // Duplicate links collapse keeping the maximum score; an unscored
  // duplicate never displaces a scored one.
  void insert_max(Link link, std::optional<double> score) {
    auto [it, fresh] = edges.try_emplace(link, EdgeData{score, false});
    if (fresh) return;
    if (score && (!it->second.score || *score > *it->second.score))
      it->second.score = *score;
  }

  bool contains(Link link) const { return edges.count(link) != 0; }
  std::size_t size() const { return edges.size(); }
  bool empty() const { return edges.empty(); }
};

// Gold annotation for one verse of one edition pair. The possible set is
// stored inclusive of the sure set, so sure ⊆ possible always holds after
// loading.
struct GoldStandard {
  std::string verse_id;
  EditionPair pair;
  std::set<Link> sure;
  std::set<Link> possible;
};

using VerseAlignments = std::map<std::string, AlignmentSet>;
using GoldMap = std::map<std::string, GoldStandard>;
using PairAlignments = std::map<EditionPair, VerseAlignments>;

}  // namespace mpalign
