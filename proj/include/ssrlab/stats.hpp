#pragma once

// Within-sentence word transitions among the W_max most frequent words,
// the skew and cos statistics of the normalized transition matrix, and
// rank-increment distributions with their distances.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <string_view>
#include <vector>

#include "ssrlab/corpus.hpp"
#include "ssrlab/error.hpp"

namespace ssrlab {

inline constexpr std::size_t kDefaultWmax = 500;

// One observed ordered pair: `follower` came right after `predecessor`.
struct TransitionEntry {
  WordId follower;
  WordId predecessor;
  std::uint64_t count;
  bool operator==(const TransitionEntry&) const = default;
};

struct TransitionCounts {
  std::size_t w_max = 0;
  std::vector<WordId> top_set;          // ids, most frequent first
  std::vector<TransitionEntry> entries; // sorted by (predecessor, follower) rank
  std::vector<std::uint64_t> marginal;  // full-text count k_j, index = id
  std::vector<std::int32_t> slot;       // id -> position in top_set, or -1

  // K_ij: how often word i followed word j.
  std::uint64_t count(WordId follower, WordId predecessor) const {
    if (predecessor >= slot.size() || follower >= slot.size()) return 0;
    const auto p = slot[predecessor], f = slot[follower];
    if (p < 0 || f < 0) return 0;
    auto it = std::lower_bound(
        entries.begin(), entries.end(), std::pair{p, f},
        [&](const TransitionEntry& e, std::pair<std::int32_t, std::int32_t> key) {
          return std::pair{slot[e.predecessor], slot[e.follower]} < key;
        });
    if (it != entries.end() && it->follower == follower && it->predecessor == predecessor)
      return it->count;
    return 0;
  }

  std::uint64_t marginal_of(WordId id) const {
    return id < marginal.size() ? marginal[id] : 0;
  }
};

// Dense square matrix indexed by frequency rank (0-based here).
class TransitionMatrix {
 public:
  TransitionMatrix() = default;
  explicit TransitionMatrix(std::size_t side) : side_(side), data_(side * side, 0.0) {}

  static TransitionMatrix from_rows(const std::vector<std::vector<double>>& rows) {
    TransitionMatrix m(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      require(rows[i].size() == rows.size(), ErrorKind::input,
              "transition matrix must be square");
      std::copy(rows[i].begin(), rows[i].end(), m.data_.begin() + i * m.side_);
    }
    return m;
  }

  std::size_t side() const noexcept { return side_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * side_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * side_ + j]; }

  TransitionMatrix transposed() const {
    TransitionMatrix t(side_);
    for (std::size_t i = 0; i < side_; ++i)
      for (std::size_t j = 0; j < side_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

 private:
  std::size_t side_ = 0;
  std::vector<double> data_;
};

// Frequency order of the ids that occur in `corpus`: descending count, ties
// to the earlier first occurrence in token order.
inline std::vector<WordId> frequency_order(const Corpus& corpus,
                                           std::vector<std::uint64_t>* counts_out = nullptr) {
  const std::size_t n_ids = corpus.lexicon.size() + 1;
  std::vector<std::uint64_t> counts(n_ids, 0);
  std::vector<std::size_t> first(n_ids, std::numeric_limits<std::size_t>::max());
  std::vector<WordId> seen;
  std::size_t pos = 0;
  for (const auto& sentence : corpus.sentences) {
    for (WordId id : sentence) {
      require(id >= 1 && id < n_ids, ErrorKind::input, "corpus id outside lexicon");
      if (counts[id]++ == 0) {
        first[id] = pos;
        seen.push_back(id);
      }
      ++pos;
    }
  }
  std::stable_sort(seen.begin(), seen.end(),
                   [&](WordId a, WordId b) { return counts[a] > counts[b]; });
  if (counts_out) *counts_out = std::move(counts);
  return seen;
}

inline TransitionCounts count_transitions(const Corpus& corpus, std::size_t w_max) {
  require(!corpus.sentences.empty(), ErrorKind::empty_corpus,
          "count_transitions: empty corpus");
  require(w_max >= 1, ErrorKind::input, "count_transitions: W_max must be >= 1");

  TransitionCounts tc;
  auto order = frequency_order(corpus, &tc.marginal);
  require(w_max <= order.size(), ErrorKind::input,
          "count_transitions: W_max = " + std::to_string(w_max) +
              " exceeds the vocabulary W = " + std::to_string(order.size()));
  order.resize(w_max);
  tc.w_max = w_max;
  tc.top_set = std::move(order);
  tc.slot.assign(tc.marginal.size(), -1);
  for (std::size_t r = 0; r < tc.top_set.size(); ++r)
    tc.slot[tc.top_set[r]] = static_cast<std::int32_t>(r);

  std::vector<std::uint32_t> dense(w_max * w_max, 0);  // [pred * n + follower]
  for (const auto& sentence : corpus.sentences) {
    for (std::size_t t = 0; t + 1 < sentence.size(); ++t) {
      const auto p = tc.slot[sentence[t]], f = tc.slot[sentence[t + 1]];
      if (p >= 0 && f >= 0) ++dense[static_cast<std::size_t>(p) * w_max + f];
    }
  }
  for (std::size_t p = 0; p < w_max; ++p)
    for (std::size_t f = 0; f < w_max; ++f)
      if (auto c = dense[p * w_max + f])
        tc.entries.push_back({tc.top_set[f], tc.top_set[p], c});
  return tc;
}

// A_ij = K_ij / k_j with rows = follower rank, columns = predecessor rank.
inline TransitionMatrix normalize(const TransitionCounts& tc) {
  TransitionMatrix a(tc.w_max);
  for (WordId j : tc.top_set)
    require(tc.marginal_of(j) > 0, ErrorKind::domain, "normalize: zero marginal");
  for (const auto& e : tc.entries) {
    const auto i = static_cast<std::size_t>(tc.slot[e.follower]);
    const auto j = static_cast<std::size_t>(tc.slot[e.predecessor]);
    a(i, j) = static_cast<double>(e.count) / static_cast<double>(tc.marginal[e.predecessor]);
  }
  return a;
}

// sum_{i=1}^{n} sum_{j=i}^{n-1} (A_ij - A_ji), 1-based, with the inner upper
// bound n-1 exactly as written; pairs touching index n do not contribute.
inline double skew(const TransitionMatrix& a) {
  const std::size_t n = a.side();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j + 1 < n; ++j) s += a(i, j) - a(j, i);
  return s;
}

// Cosine between v = (1, ..., 1) and Av.
inline double cos_measure(const TransitionMatrix& a) {
  const std::size_t n = a.side();
  require(n > 0, ErrorKind::input, "cos: empty matrix");
  double dot = 0.0, norm2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += a(i, j);
    dot += row;
    norm2 += row * row;
  }
  require(norm2 > 0.0, ErrorKind::domain, "cos: Av is the zero vector");
  return dot / (std::sqrt(static_cast<double>(n)) * std::sqrt(norm2));
}

inline TransitionMatrix transition_matrix(const Corpus& corpus,
                                          std::size_t w_max = kDefaultWmax) {
  return normalize(count_transitions(corpus, w_max));
}

struct RankIncrementDist {
  std::map<std::int64_t, double> probability;  // increment -> mass
  std::uint64_t samples = 0;
};

// Increments rank(next) - rank(current) between neighbours inside a
// sentence, with ranks from the corpus's own lexicon.
inline RankIncrementDist rank_increments(const Corpus& corpus) {
  std::map<std::int64_t, std::uint64_t> hist;
  std::uint64_t total = 0;
  for (const auto& sentence : corpus.sentences) {
    for (std::size_t t = 0; t + 1 < sentence.size(); ++t) {
      const auto a = static_cast<std::int64_t>(corpus.lexicon.rank(sentence[t]));
      const auto b = static_cast<std::int64_t>(corpus.lexicon.rank(sentence[t + 1]));
      ++hist[b - a];
      ++total;
    }
  }
  require(total > 0, ErrorKind::domain, "rank_increments: no adjacent word pairs");
  RankIncrementDist d;
  d.samples = total;
  for (auto [k, c] : hist)
    d.probability[k] = static_cast<double>(c) / static_cast<double>(total);
  return d;
}

enum class Distance { ks, l1, kl };

inline std::optional<Distance> parse_distance(std::string_view name) {
  if (name == "ks" || name == "KS") return Distance::ks;
  if (name == "l1" || name == "L1") return Distance::l1;
  if (name == "kl" || name == "KL") return Distance::kl;
  return std::nullopt;
}

// KS: largest CDF gap on the union support. L1: sum |p1 - p2|.
// KL(d1 || d2): d2 is smoothed with eps = 1/(10 * d2.samples) on the union
// support and renormalized.
inline double dist_distance(const RankIncrementDist& d1, const RankIncrementDist& d2,
                            Distance kind) {
  auto mass = [](const RankIncrementDist& d) {
    double s = 0;
    for (auto [k, p] : d.probability) {
      require(p >= 0.0, ErrorKind::input, "distance: negative probability");
      s += p;
    }
    return s;
  };
  require(std::abs(mass(d1) - 1.0) <= 1e-9 && std::abs(mass(d2) - 1.0) <= 1e-9,
          ErrorKind::input, "distance: distributions must be normalized");

  std::vector<std::int64_t> support;
  for (auto [k, p] : d1.probability) support.push_back(k);
  for (auto [k, p] : d2.probability) support.push_back(k);
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());

  auto at = [](const RankIncrementDist& d, std::int64_t k) {
    auto it = d.probability.find(k);
    return it == d.probability.end() ? 0.0 : it->second;
  };

  switch (kind) {
    case Distance::ks: {
      double c1 = 0, c2 = 0, gap = 0;
      for (auto k : support) {
        c1 += at(d1, k);
        c2 += at(d2, k);
        gap = std::max(gap, std::abs(c1 - c2));
      }
      return gap;
    }
    case Distance::l1: {
      double s = 0;
      for (auto k : support) s += std::abs(at(d1, k) - at(d2, k));
      return s;
    }
    case Distance::kl: {
      const double n2 = static_cast<double>(std::max<std::uint64_t>(d2.samples, 1));
      const double eps = 1.0 / (10.0 * n2);
      const double z = 1.0 + eps * static_cast<double>(support.size());
      double s = 0;
      for (auto k : support) {
        const double p = at(d1, k);
        if (p > 0) s += p * std::log(p / ((at(d2, k) + eps) / z));
      }
      return s;
    }
  }
  return 0.0;
}

}  // namespace ssrlab
