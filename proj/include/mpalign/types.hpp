#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "mpalign/error.hpp"

namespace mpalign {

// One concrete translation: an ISO-639-3 language code plus a free-form
// edition name. A language may carry several editions; editions, not
// languages, are the node namespaces of the alignment graph.
struct EditionId {
  std::string language;
  std::string edition;

  auto operator<=>(const EditionId&) const = default;

  std::string str() const { return language + "-" + edition; }
};

// Parses "lang-edition". Language codes never contain '-', edition names may.
inline EditionId parse_edition(std::string_view s) {
  auto dash = s.find('-');
  if (dash == std::string_view::npos || dash == 0 || dash + 1 >= s.size())
    fail_config("bad edition id '" + std::string(s) +
                "', expected <language>-<edition>");
  return EditionId{std::string(s.substr(0, dash)),
                   std::string(s.substr(dash + 1))};
}

struct EditionPair {
  EditionId first;
  EditionId second;

  auto operator<=>(const EditionPair&) const = default;

  bool contains(const EditionId& e) const { return e == first || e == second; }
  EditionPair flipped() const { return {second, first}; }
  std::string str() const { return first.str() + "__" + second.str(); }
};

// Node identity in the per-verse graph: a token of one edition of one verse.
struct TokenRef {
  EditionId edition;
  std::uint32_t position = 0;

  auto operator<=>(const TokenRef&) const = default;
};

// One verse across every edition that carries it.
struct MultiSentence {
  std::string verse_id;
  std::map<EditionId, std::vector<std::string>> tokens;

  bool has(const EditionId& e) const { return tokens.count(e) != 0; }

  std::size_t token_count(const EditionId& e) const {
    auto it = tokens.find(e);
    return it == tokens.end() ? 0 : it->second.size();
  }
};

using Corpus = std::map<std::string, MultiSentence>;

}  // namespace mpalign
