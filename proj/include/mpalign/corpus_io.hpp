#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mpalign/alignment.hpp"
#include "mpalign/types.hpp"

namespace mpalign {

// File formats (all UTF-8, one verse per line, 0-based token indices):
//   corpus    <verse_id>\t<tok> <tok> ...          one file per edition
//   alignment <verse_id>\t<i>-<j>[:<score>] ...
//   gold      <verse_id>\t<i>-<j> | <i>?<j> ...    "-" sure, "?" possible-only

namespace detail {

inline std::string location(const std::filesystem::path& file, std::size_t line) {
  return file.string() + ":" + std::to_string(line);
}

inline void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

inline std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && s[i] == ' ') ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ') ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline bool parse_u32(std::string_view s, std::uint32_t& out) {
  if (s.empty() || s.size() > 9) return false;
  std::uint64_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
  }
  out = static_cast<std::uint32_t>(v);
  return true;
}

inline void warn(std::vector<std::string>* sink, std::string msg) {
  if (sink)
    sink->push_back(std::move(msg));
  else
    std::cerr << "warning: " << msg << "\n";
}

// Bounds check against the corpus where possible. Verses the corpus does not
// carry (or carries without this pair's editions) are left unchecked; they
// never reach graph construction.
inline void check_range(const Corpus* corpus, const std::string& verse_id,
                        const EditionPair& pair, Link link,
                        const std::string& where) {
  if (!corpus) return;
  auto it = corpus->find(verse_id);
  if (it == corpus->end()) return;
  const MultiSentence& ms = it->second;
  if (!ms.has(pair.first) || !ms.has(pair.second)) return;
  if (link.first >= ms.token_count(pair.first) ||
      link.second >= ms.token_count(pair.second))
    fail_parse(where + ": link " + std::to_string(link.first) + "-" +
               std::to_string(link.second) + " out of range for verse " +
               verse_id + " (pair " + pair.str() + ")");
}

}  // namespace detail

// Scores are serialized with up to 6 significant digits; round-trips are
// exact at that precision.
inline std::string format_score(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", s);
  return buf;
}

// Reads one edition file: "verse_id<TAB>tok tok ...". A line whose token
// list is empty marks the verse as absent from this edition.
inline std::map<std::string, std::vector<std::string>> load_edition_file(
    const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) fail_config("corpus file not found: " + file.string());
  std::map<std::string, std::vector<std::string>> verses;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    detail::strip_cr(line);
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0)
      fail_parse(detail::location(file, lineno) +
                 ": expected \"verse_id<TAB>tokens\"");
    std::string verse_id = line.substr(0, tab);
    auto tokens = detail::split_ws(std::string_view(line).substr(tab + 1));
    if (tokens.empty()) continue;
    auto [it, fresh] = verses.emplace(std::move(verse_id), std::move(tokens));
    if (!fresh)
      fail_parse(detail::location(file, lineno) + ": duplicate verse_id " +
                 it->first);
  }
  return verses;
}

// Assembles per-verse multiparallel sentences for the requested editions.
// Only verses present in at least two of them are returned; tokens are taken
// verbatim, no re-tokenization. Edition files live at <dir>/<lang>-<edition>.txt.
inline Corpus load_corpus(const std::filesystem::path& dir,
                          const std::vector<EditionId>& editions) {
  if (editions.size() < 2) fail_config("need at least two editions");
  Corpus corpus;
  for (const EditionId& e : editions) {
    auto verses = load_edition_file(dir / (e.str() + ".txt"));
    for (auto& [verse_id, tokens] : verses) {
      MultiSentence& ms = corpus[verse_id];
      ms.verse_id = verse_id;
      if (!ms.tokens.emplace(e, std::move(tokens)).second)
        fail_config("edition " + e.str() + " requested twice");
    }
  }
  for (auto it = corpus.begin(); it != corpus.end();) {
    if (it->second.tokens.size() < 2)
      it = corpus.erase(it);
    else
      ++it;
  }
  return corpus;
}

// Ingests external aligner output: "verse_id<TAB>i-j[:score] ...".
inline VerseAlignments load_alignments(const std::filesystem::path& file,
                                       const EditionPair& pair,
                                       const Corpus* corpus = nullptr) {
  std::ifstream in(file);
  if (!in) fail_config("alignment file not found: " + file.string());
  VerseAlignments out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    detail::strip_cr(line);
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0)
      fail_parse(detail::location(file, lineno) +
                 ": expected \"verse_id<TAB>edges\"");
    std::string verse_id = line.substr(0, tab);
    auto [vit, fresh] = out.try_emplace(verse_id);
    if (!fresh)
      fail_parse(detail::location(file, lineno) + ": duplicate verse_id " +
                 verse_id);
    AlignmentSet& set = vit->second;
    set.verse_id = verse_id;
    set.pair = pair;
    for (const std::string& item :
         detail::split_ws(std::string_view(line).substr(tab + 1))) {
      auto dash = item.find('-');
      if (dash == std::string::npos)
        fail_parse(detail::location(file, lineno) + ": bad edge '" + item +
                   "', expected i-j or i-j:score");
      auto colon = item.find(':', dash + 1);
      std::uint32_t i = 0, j = 0;
      std::string_view iv(item.data(), dash);
      std::string_view jv(item.data() + dash + 1,
                          (colon == std::string::npos ? item.size() : colon) -
                              dash - 1);
      if (!detail::parse_u32(iv, i) || !detail::parse_u32(jv, j))
        fail_parse(detail::location(file, lineno) + ": bad edge '" + item +
                   "', expected i-j or i-j:score");
      std::optional<double> score;
      if (colon != std::string::npos) {
        std::string s = item.substr(colon + 1);
        char* end = nullptr;
        double v = std::strtod(s.c_str(), &end);
        if (s.empty() || end != s.c_str() + s.size())
          fail_parse(detail::location(file, lineno) + ": bad score in '" +
                     item + "'");
        if (v < 0.0)
          fail_parse(detail::location(file, lineno) + ": negative score in '" +
                     item + "'");
        score = v;
      }
      detail::check_range(corpus, verse_id, pair, {i, j},
                          detail::location(file, lineno));
      set.insert_max({i, j}, score);
    }
  }
  return out;
}

// Loads gold annotations: "i-j" is a sure link, "i?j" a possible-only link.
// Sure links are also inserted into the possible set. index_base handles
// gold files whose indices start at 1.
inline GoldMap load_gold(const std::filesystem::path& file,
                         const EditionPair& pair,
                         const Corpus* corpus = nullptr, int index_base = 0,
                         std::vector<std::string>* warnings = nullptr) {
  if (index_base != 0 && index_base != 1)
    fail_config("index base must be 0 or 1");
  std::ifstream in(file);
  if (!in) fail_config("gold file not found: " + file.string());
  GoldMap out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    detail::strip_cr(line);
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0)
      fail_parse(detail::location(file, lineno) +
                 ": expected \"verse_id<TAB>links\"");
    std::string verse_id = line.substr(0, tab);
    auto [vit, fresh] = out.try_emplace(verse_id);
    if (!fresh)
      fail_parse(detail::location(file, lineno) + ": duplicate verse_id " +
                 verse_id);
    GoldStandard& gold = vit->second;
    gold.verse_id = verse_id;
    gold.pair = pair;
    std::set<Link> possible_only;
    for (const std::string& item :
         detail::split_ws(std::string_view(line).substr(tab + 1))) {
      auto sep = item.find_first_of("-?");
      bool sure = sep != std::string::npos && item[sep] == '-';
      std::uint32_t i = 0, j = 0;
      if (sep == std::string::npos ||
          !detail::parse_u32(std::string_view(item.data(), sep), i) ||
          !detail::parse_u32(std::string_view(item).substr(sep + 1), j))
        fail_parse(detail::location(file, lineno) + ": bad gold link '" +
                   item + "', expected i-j or i?j");
      if (index_base == 1) {
        if (i == 0 || j == 0)
          fail_parse(detail::location(file, lineno) + ": index below base in '" +
                     item + "'");
        --i;
        --j;
      }
      detail::check_range(corpus, verse_id, pair, {i, j},
                          detail::location(file, lineno));
      if (sure)
        gold.sure.insert({i, j});
      else
        possible_only.insert({i, j});
    }
    for (Link l : possible_only)
      if (gold.sure.count(l))
        detail::warn(warnings, file.string() + ": verse " + verse_id +
                                   ": link listed both sure and possible, "
                                   "keeping sure");
    gold.possible = possible_only;
    gold.possible.insert(gold.sure.begin(), gold.sure.end());
  }
  return out;
}

// Serializes alignments so that load_alignments reproduces the same edge
// sets and scores. Verses and edges are emitted sorted for byte-stable
// output.
inline void write_alignments(const VerseAlignments& alignments,
                             const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) fail_io("cannot write " + file.string());
  for (const auto& [verse_id, set] : alignments) {
    out << verse_id << '\t';
    bool first = true;
    for (const auto& [link, data] : set.edges) {
      if (!first) out << ' ';
      first = false;
      out << link.first << '-' << link.second;
      if (data.score) out << ':' << format_score(*data.score);
    }
    out << '\n';
  }
  if (!out) fail_io("write failed: " + file.string());
}

// Writes one gold file in the format load_gold reads.
inline void write_gold(const GoldMap& gold, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) fail_io("cannot write " + file.string());
  for (const auto& [verse_id, g] : gold) {
    out << verse_id << '\t';
    bool first = true;
    for (Link l : g.possible) {
      if (!first) out << ' ';
      first = false;
      out << l.first << (g.sure.count(l) ? '-' : '?') << l.second;
    }
    out << '\n';
  }
  if (!out) fail_io("write failed: " + file.string());
}

// Locates the alignment file for a pair inside a directory, accepting either
// orientation: <A>__<B>.align as-is, or <B>__<A>.align with links flipped.
inline std::optional<VerseAlignments> load_pair_alignments(
    const std::filesystem::path& dir, const EditionPair& pair,
    const Corpus* corpus = nullptr) {
  auto forward = dir / (pair.str() + ".align");
  if (std::filesystem::exists(forward))
    return load_alignments(forward, pair, corpus);
  auto reverse = dir / (pair.flipped().str() + ".align");
  if (!std::filesystem::exists(reverse)) return std::nullopt;
  VerseAlignments flipped;
  for (auto& [verse_id, set] : load_alignments(reverse, pair.flipped(), corpus)) {
    AlignmentSet& dst = flipped[verse_id];
    dst.verse_id = verse_id;
    dst.pair = pair;
    for (const auto& [link, data] : set.edges)
      dst.edges.emplace(Link{link.second, link.first}, data);
  }
  return flipped;
}

}  // namespace mpalign
