#pragma once

// Shared fixtures and independent oracles for the test suites. The oracles
// deliberately recompute scores from token-level sets instead of reusing the
// library's adjacency machinery.

#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mpalign/mpalign.hpp"

namespace test {

namespace fs = std::filesystem;
using namespace mpalign;

inline EditionId ed(const std::string& s) { return parse_edition(s); }

inline MultiSentence make_sentence(
    std::string verse_id,
    const std::vector<std::pair<std::string, std::vector<std::string>>>& eds) {
  MultiSentence ms;
  ms.verse_id = std::move(verse_id);
  for (const auto& [edition, tokens] : eds) ms.tokens.emplace(ed(edition), tokens);
  return ms;
}

struct EdgeSpec {
  std::uint32_t i;
  std::uint32_t j;
  std::optional<double> score{};
};

inline AlignmentSet make_alignment(const std::string& verse_id,
                                   const std::string& a, const std::string& b,
                                   const std::vector<EdgeSpec>& edges) {
  AlignmentSet set;
  set.verse_id = verse_id;
  set.pair = EditionPair{ed(a), ed(b)};
  for (const EdgeSpec& e : edges) set.insert_max({e.i, e.j}, e.score);
  return set;
}

inline std::vector<const AlignmentSet*> ptrs(
    const std::vector<AlignmentSet>& sets) {
  std::vector<const AlignmentSet*> out;
  for (const AlignmentSet& s : sets) out.push_back(&s);
  return out;
}

// ---------------------------------------------------------------------------
// brute-force link-prediction oracle over token-level edge lists

struct OracleGraph {
  std::map<TokenRef, std::set<TokenRef>> neighbors;
  std::map<std::pair<TokenRef, TokenRef>, double> weight;

  void add_edge(TokenRef a, TokenRef b, double w) {
    neighbors[a].insert(b);
    neighbors[b].insert(a);
    auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
    auto it = weight.find(key);
    if (it == weight.end() || w > it->second) weight[key] = w;
  }

  double w(TokenRef a, TokenRef b) const {
    auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
    auto it = weight.find(key);
    return it == weight.end() ? 0.0 : it->second;
  }

  double strength(TokenRef a) const {
    auto it = neighbors.find(a);
    if (it == neighbors.end()) return 0.0;
    double s = 0.0;
    for (const TokenRef& z : it->second) s += w(a, z);
    return s;
  }

  std::set<TokenRef> common(TokenRef x, TokenRef y) const {
    std::set<TokenRef> out;
    auto xi = neighbors.find(x);
    auto yi = neighbors.find(y);
    if (xi == neighbors.end() || yi == neighbors.end()) return out;
    for (const TokenRef& z : xi->second)
      if (yi->second.count(z)) out.insert(z);
    return out;
  }

  double adamic_adar(TokenRef x, TokenRef y) const {
    double score = 0.0;
    for (const TokenRef& z : common(x, y))
      score += 1.0 / std::log(static_cast<double>(neighbors.at(z).size()));
    return score;
  }

  double weighted_adamic_adar(TokenRef x, TokenRef y) const {
    double score = 0.0;
    for (const TokenRef& z : common(x, y))
      score += (w(x, z) + w(z, y)) / std::log(1.0 + strength(z));
    return score;
  }
};

// oracle graph built from the same alignment sets fed to build_graph; in
// unit-weight mode every edge weighs 1.0, otherwise scores (default 1.0)
inline OracleGraph oracle_from_sets(const std::vector<AlignmentSet>& sets,
                                    bool unit_weights) {
  OracleGraph g;
  for (const AlignmentSet& set : sets)
    for (const auto& [link, data] : set.edges) {
      TokenRef a{set.pair.first, link.first};
      TokenRef b{set.pair.second, link.second};
      g.add_edge(a, b, unit_weights ? 1.0 : data.score.value_or(1.0));
    }
  return g;
}

// ---------------------------------------------------------------------------
// random multiparallel verses for property tests

struct RandomVerse {
  MultiSentence sentence;
  std::vector<AlignmentSet> sets;
};

// <= 30 nodes: 2-5 editions with 1-8 tokens each; each cross-edition cell
// becomes an edge with probability ~0.25, scored when `scored`
inline RandomVerse random_verse(Rng& rng, bool scored) {
  RandomVerse rv;
  const std::size_t n_editions = 2 + rng.uniform_index(4);
  std::vector<std::string> names;
  std::vector<std::size_t> counts;
  std::size_t total = 0;
  for (std::size_t e = 0; e < n_editions; ++e) {
    std::size_t count = 1 + rng.uniform_index(8);
    if (total + count > 30) count = 1;
    total += count;
    names.push_back("l" + std::string(1, char('a' + e)) + "a-ed");
    counts.push_back(count);
  }
  std::vector<std::pair<std::string, std::vector<std::string>>> eds;
  for (std::size_t e = 0; e < n_editions; ++e) {
    std::vector<std::string> tokens;
    for (std::size_t t = 0; t < counts[e]; ++t)
      tokens.push_back("t" + std::to_string(t));
    eds.emplace_back(names[e], tokens);
  }
  rv.sentence = make_sentence("v1", eds);
  for (std::size_t a = 0; a < n_editions; ++a)
    for (std::size_t b = a + 1; b < n_editions; ++b) {
      std::vector<EdgeSpec> edges;
      for (std::uint32_t i = 0; i < counts[a]; ++i)
        for (std::uint32_t j = 0; j < counts[b]; ++j)
          if (rng.bernoulli(0.25)) {
            EdgeSpec spec{i, j};
            if (scored) spec.score = 0.05 + 0.95 * rng.uniform01();
            edges.push_back(spec);
          }
      rv.sets.push_back(make_alignment("v1", names[a], names[b], edges));
    }
  return rv;
}

// ---------------------------------------------------------------------------
// dense masked NMF reference: same updates, written against a full matrix
// plus 0/1 mask instead of cell lists

struct DenseMaskedNmf {
  DenseMatrix w;     // full matrix, zeros where unobserved
  DenseMatrix mask;  // 1 observed, 0 masked

  FactorPair run(const NmfConfig& cfg) const {
    const std::size_t m = w.rows, n = w.cols, r = cfg.rank;
    FactorPair f;
    f.T = DenseMatrix(m, r);
    f.V = DenseMatrix(r, n);
    Rng rng(cfg.seed);
    const double spread = cfg.init_hi - cfg.init_lo;
    for (double& x : f.T.data) x = cfg.init_lo + spread * rng.uniform_pos01();
    for (double& x : f.V.data) x = cfg.init_lo + spread * rng.uniform_pos01();

    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
      for (std::size_t u = 0; u < m; ++u) {
        double mu = 0.0;
        for (std::size_t i = 0; i < n; ++i) mu += mask.at(u, i);
        if (mu == 0.0) continue;
        std::vector<double> fresh(r);
        for (std::size_t k = 0; k < r; ++k) {
          double num = 0.0, den = 0.0;
          for (std::size_t i = 0; i < n; ++i) {
            if (mask.at(u, i) == 0.0) continue;
            num += w.at(u, i) * f.V.at(k, i);
            den += f.product_at(u, i) * f.V.at(k, i);
          }
          den += cfg.lambda * mu * f.T.at(u, k);
          fresh[k] = std::max(1e-12, f.T.at(u, k) * num / den);
        }
        for (std::size_t k = 0; k < r; ++k) f.T.at(u, k) = fresh[k];
      }
      for (std::size_t i = 0; i < n; ++i) {
        double ni = 0.0;
        for (std::size_t u = 0; u < m; ++u) ni += mask.at(u, i);
        if (ni == 0.0) continue;
        std::vector<double> fresh(r);
        for (std::size_t k = 0; k < r; ++k) {
          double num = 0.0, den = 0.0;
          for (std::size_t u = 0; u < m; ++u) {
            if (mask.at(u, i) == 0.0) continue;
            num += w.at(u, i) * f.T.at(u, k);
            den += f.product_at(u, i) * f.T.at(u, k);
          }
          den += cfg.lambda * ni * f.V.at(k, i);
          fresh[k] = std::max(1e-12, f.V.at(k, i) * num / den);
        }
        for (std::size_t k = 0; k < r; ++k) f.V.at(k, i) = fresh[k];
      }
    }
    return f;
  }
};

// ---------------------------------------------------------------------------
// filesystem scratch space

struct TempDir {
  fs::path path;

  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() /
           ("mpalign_test_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }

  fs::path file(const std::string& name, const std::string& content) const {
    fs::path p = path / name;
    std::ofstream out(p);
    out << content;
    return p;
  }
};

inline std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::string all((std::istreambuf_iterator<char>(in)),
                  std::istreambuf_iterator<char>());
  return all;
}

}  // namespace test
