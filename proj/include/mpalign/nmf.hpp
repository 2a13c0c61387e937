#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "mpalign/rng.hpp"
#include "mpalign/score_matrix.hpp"
#include "mpalign/sentence_graph.hpp"

namespace mpalign {

struct NmfConfig {
  std::size_t rank = 15;
  std::size_t epochs = 50;
  double lambda = 0.06;  // Tikhonov weight in the update denominators
  // factor entries are initialized uniformly in (init_lo, init_hi]; strictly
  // positive so multiplicative updates cannot lock in at zero
  double init_lo = 0.0;
  double init_hi = 1.0;
  std::uint64_t seed = 0;
};

struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  bool operator==(const DenseMatrix&) const = default;
};

// Non-negative factors of one rating matrix: W is approximated by T * V with
// T m-by-r and V r-by-n. Entries stay >= 0 after every epoch.
struct FactorPair {
  DenseMatrix T;
  DenseMatrix V;

  double product_at(std::size_t u, std::size_t i) const {
    double s = 0.0;
    for (std::size_t k = 0; k < T.cols; ++k) s += T.at(u, k) * V.at(k, i);
    return s;
  }
};

// Observed cells of an m-by-n rating matrix. Unobserved cells are the mask,
// not zeros: training never touches them.
struct MaskedMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::vector<std::pair<std::uint32_t, double>>> row_cells;

  MaskedMatrix() = default;
  MaskedMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), row_cells(r) {}

  void add(std::size_t r, std::size_t c, double value) {
    row_cells[r].emplace_back(static_cast<std::uint32_t>(c), value);
  }

  std::size_t observed() const {
    std::size_t n = 0;
    for (const auto& row : row_cells) n += row.size();
    return n;
  }
};

// Squared error over observed cells plus the Tikhonov terms.
inline double masked_loss(const MaskedMatrix& w, const FactorPair& f,
                          double lambda) {
  double loss = 0.0;
  for (std::size_t u = 0; u < w.rows; ++u)
    for (const auto& [i, value] : w.row_cells[u]) {
      double d = value - f.product_at(u, i);
      loss += d * d;
    }
  if (lambda > 0.0) {
    double frob = 0.0;
    for (double x : f.T.data) frob += x * x;
    for (double x : f.V.data) frob += x * x;
    loss += lambda * frob;
  }
  return loss;
}

// Called with epoch 0 right after initialization and then once per epoch;
// lets callers track loss or check invariants without re-running.
using EpochObserver = std::function<void(std::size_t, const FactorPair&)>;

namespace detail {

// entries are floored at eps so a zero can never absorb an entry for good
constexpr double kNmfFloor = 1e-12;

inline void check_finite(const FactorPair& f, std::size_t epoch) {
  for (double x : f.T.data)
    if (!std::isfinite(x))
      fail_numeric("non-finite factor entry at epoch " + std::to_string(epoch));
  for (double x : f.V.data)
    if (!std::isfinite(x))
      fail_numeric("non-finite factor entry at epoch " + std::to_string(epoch));
}

}  // namespace detail

// Multiplicative-update factorization restricted to observed cells:
//
//   t_{u,k} <- t_{u,k} * (W V^T)_{u,k} / ((T V V^T)_{u,k} + lambda m_u t_{u,k})
//   v_{k,i} <- v_{k,i} * (T^T W)_{k,i} / ((T^T T V)_{k,i} + lambda n_i v_{k,i})
//
// where every matrix product runs over observed cells only and m_u / n_i
// count the observed cells of row u / column i. With lambda = 0 these are
// exactly the unregularized updates; the ratio form keeps factors
// non-negative without any learning rate. T is updated first, then V against
// the new T.
inline FactorPair masked_nmf(const MaskedMatrix& w, const NmfConfig& cfg,
                             const EpochObserver& observer = {}) {
  if (cfg.rank < 1) fail_config("nmf rank must be >= 1");
  if (cfg.epochs < 1) fail_config("nmf epochs must be >= 1");
  if (cfg.lambda < 0.0) fail_config("nmf lambda must be >= 0");
  if (cfg.init_lo < 0.0 || cfg.init_hi <= cfg.init_lo)
    fail_config("nmf init bounds must satisfy 0 <= lo < hi");
  if (w.observed() == 0) fail_config("nmf needs at least one observed cell");

  const std::size_t m = w.rows, n = w.cols, r = cfg.rank;

  // column-major access for the V update
  std::vector<std::vector<std::pair<std::uint32_t, double>>> col_cells(n);
  for (std::size_t u = 0; u < m; ++u)
    for (const auto& [i, value] : w.row_cells[u])
      col_cells[i].emplace_back(static_cast<std::uint32_t>(u), value);

  FactorPair f;
  f.T = DenseMatrix(m, r);
  f.V = DenseMatrix(r, n);
  Rng rng(cfg.seed);
  const double spread = cfg.init_hi - cfg.init_lo;
  for (double& x : f.T.data) x = cfg.init_lo + spread * rng.uniform_pos01();
  for (double& x : f.V.data) x = cfg.init_lo + spread * rng.uniform_pos01();

  if (observer) observer(0, f);

  std::vector<double> preds;
  std::vector<double> fresh(r);
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    for (std::size_t u = 0; u < m; ++u) {
      const auto& row = w.row_cells[u];
      if (row.empty()) continue;
      preds.resize(row.size());
      for (std::size_t c = 0; c < row.size(); ++c)
        preds[c] = f.product_at(u, row[c].first);
      const double mu = static_cast<double>(row.size());
      for (std::size_t k = 0; k < r; ++k) {
        double num = 0.0, den = 0.0;
        for (std::size_t c = 0; c < row.size(); ++c) {
          num += row[c].second * f.V.at(k, row[c].first);
          den += preds[c] * f.V.at(k, row[c].first);
        }
        den += cfg.lambda * mu * f.T.at(u, k);
        fresh[k] = std::max(detail::kNmfFloor, f.T.at(u, k) * num / den);
      }
      for (std::size_t k = 0; k < r; ++k) f.T.at(u, k) = fresh[k];
    }

    for (std::size_t i = 0; i < n; ++i) {
      const auto& col = col_cells[i];
      if (col.empty()) continue;
      preds.resize(col.size());
      for (std::size_t c = 0; c < col.size(); ++c)
        preds[c] = f.product_at(col[c].first, i);
      const double ni = static_cast<double>(col.size());
      for (std::size_t k = 0; k < r; ++k) {
        double num = 0.0, den = 0.0;
        for (std::size_t c = 0; c < col.size(); ++c) {
          num += col[c].second * f.T.at(col[c].first, k);
          den += preds[c] * f.T.at(col[c].first, k);
        }
        den += cfg.lambda * ni * f.V.at(k, i);
        fresh[k] = std::max(detail::kNmfFloor, f.V.at(k, i) * num / den);
      }
      for (std::size_t k = 0; k < r; ++k) f.V.at(k, i) = fresh[k];
    }

    detail::check_finite(f, epoch);
    if (observer) observer(epoch, f);
  }
  return f;
}

// Factorizes a rated-mode verse graph. All stored cells (diagonal,
// positives, sampled negatives) are the observed ratings; everything else is
// masked out.
inline FactorPair factorize(const SentenceGraph& g, const NmfConfig& cfg,
                            const EpochObserver& observer = {}) {
  if (g.mode() != GraphMode::rated)
    fail_config("factorize requires a rated-mode graph");
  if (cfg.rank >= g.node_count())
    fail_config("nmf rank " + std::to_string(cfg.rank) +
                " must be below node count " + std::to_string(g.node_count()) +
                " (verse " + g.verse_id() + ")");
  MaskedMatrix w(g.node_count(), g.node_count());
  for (const auto& [key, cell] : g.cells()) w.add(key.first, key.second, cell.value);
  return masked_nmf(w, cfg, observer);
}

// Rating predictions for the target pair, symmetrized as the mean of the two
// mirror cells of T*V (the product itself is not symmetric) and clamped to
// [0, r_max].
inline ScoreMatrix predict(const FactorPair& f, const SentenceGraph& g,
                           const EditionPair& pair) {
  if (f.T.rows != g.node_count() || f.V.cols != g.node_count())
    fail_logic("factor shapes do not match graph of verse " + g.verse_id());
  SubmatrixView view = target_submatrix(g, pair);
  ScoreMatrix out(g.verse_id(), pair, view.row_count, view.col_count,
                  Provenance::nmf);
  const double r_max = g.scale().r_max;
  for (std::uint32_t i = 0; i < view.row_count; ++i) {
    const std::uint32_t u = view.row_node(i);
    for (std::uint32_t j = 0; j < view.col_count; ++j) {
      const std::uint32_t v = view.col_node(j);
      double value = 0.5 * (f.product_at(u, v) + f.product_at(v, u));
      out.at(i, j) = std::clamp(value, 0.0, r_max);
    }
  }
  return out;
}

}  // namespace mpalign
