#pragma once

#include <vector>

#include "mpalign/types.hpp"

namespace mpalign {

enum class Provenance { adad, wadad, nmf };

inline const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::adad: return "adad";
    case Provenance::wadad: return "wadad";
    case Provenance::nmf: return "nmf";
  }
  return "?";
}

// Dense |A| x |B| block of candidate-edge scores for one verse and one
// edition pair. Row i / column j map back to token positions i of pair.first
// and j of pair.second. All entries are >= 0.
struct ScoreMatrix {
  std::string verse_id;
  EditionPair pair;
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  std::vector<double> values;  // row-major
  Provenance provenance = Provenance::adad;

  ScoreMatrix() = default;
  ScoreMatrix(std::string verse, EditionPair p, std::uint32_t r,
              std::uint32_t c, Provenance prov)
      : verse_id(std::move(verse)),
        pair(std::move(p)),
        rows(r),
        cols(c),
        values(static_cast<std::size_t>(r) * c, 0.0),
        provenance(prov) {}

  double& at(std::uint32_t i, std::uint32_t j) {
    return values[static_cast<std::size_t>(i) * cols + j];
  }
  double at(std::uint32_t i, std::uint32_t j) const {
    return values[static_cast<std::size_t>(i) * cols + j];
  }
};

}  // namespace mpalign
