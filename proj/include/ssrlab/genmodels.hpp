#pragma once

// Reference text models matched to a template: Bernoulli reshuffle,
// adaptive Simon (preferential attachment) and random typewriting.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "ssrlab/corpus.hpp"
#include "ssrlab/error.hpp"
#include "ssrlab/random.hpp"

namespace ssrlab {

namespace detail {

inline std::size_t total_length(std::span<const std::size_t> lengths) {
  return std::accumulate(lengths.begin(), lengths.end(), std::size_t{0});
}

template <class T>
std::vector<std::vector<T>> cut(const std::vector<T>& stream,
                                std::span<const std::size_t> lengths) {
  std::vector<std::vector<T>> out;
  out.reserve(lengths.size());
  auto it = stream.begin();
  for (std::size_t len : lengths) {
    out.emplace_back(it, it + static_cast<std::ptrdiff_t>(len));
    it += static_cast<std::ptrdiff_t>(len);
  }
  return out;
}

}  // namespace detail

// Uniform permutation of the whole token stream, re-cut at the template's
// sentence boundaries. The lexicon is carried over unchanged.
inline Corpus bernoulli_shuffle(const Corpus& templ, std::uint64_t seed) {
  require(!templ.sentences.empty(), ErrorKind::empty_corpus,
          "bernoulli: template corpus is empty");
  auto stream = templ.flatten();
  Rng rng = make_rng(seed);
  shuffle(std::span<WordId>(stream), rng);
  const auto lengths = templ.sentence_lengths();
  return Corpus{detail::cut(stream, lengths), templ.lexicon};
}

struct SimonConfig {
  std::uint32_t vocabulary;       // W
  std::size_t length;             // N (= T)
  std::uint32_t initial_words;    // W_0
  std::uint32_t initial_weight = 1;  // k_0
  std::uint64_t seed = 0;
};

inline void validate(const SimonConfig& cfg) {
  require(cfg.initial_words >= 1 && cfg.initial_words <= cfg.vocabulary,
          ErrorKind::input, "simon: need 1 <= W_0 <= W");
  require(cfg.initial_weight >= 1, ErrorKind::input, "simon: k_0 must be >= 1");
  require(cfg.vocabulary - cfg.initial_words <= cfg.length, ErrorKind::infeasible,
          "simon: W - W_0 = " + std::to_string(cfg.vocabulary - cfg.initial_words) +
              " new words cannot fit in N = " + std::to_string(cfg.length) + " steps");
}

// Adaptive Simon process. A new word enters with probability
// p+(t) = (W - W_{t-1}) / (T + 1 - t); otherwise an existing word is copied
// with probability proportional to its weight. Every emission adds one to
// the emitted word's weight. The initial W_0 words count as used from t = 1.
class SimonProcess {
 public:
  explicit SimonProcess(const SimonConfig& cfg)
      : cfg_(cfg), rng_(make_rng(cfg.seed)) {
    validate(cfg);
    weights_.assign(cfg.vocabulary + 1, 0);
    urn_.reserve(std::size_t{cfg.initial_words} * cfg.initial_weight + cfg.length);
    for (WordId i = 1; i <= cfg.initial_words; ++i) {
      weights_[i] = cfg.initial_weight;
      urn_.insert(urn_.end(), cfg.initial_weight, i);
    }
    used_ = cfg.initial_words;
  }

  WordId step() {
    require(time_ < cfg_.length, ErrorKind::input, "simon: process already finished");
    ++time_;
    const double remaining = static_cast<double>(cfg_.length + 1 - time_);
    const double p_new = (cfg_.vocabulary - used_) / remaining;
    require(p_new >= 0.0 && p_new <= 1.0, ErrorKind::infeasible,
            "simon: new-word probability left [0, 1]");

    WordId word;
    if (bernoulli(rng_, p_new)) {
      word = ++used_;
    } else {
      // The urn holds each word once per unit of weight.
      word = urn_[uniform_below(rng_, urn_.size())];
    }
    ++weights_[word];
    urn_.push_back(word);
    return word;
  }

  std::size_t time() const noexcept { return time_; }
  std::uint32_t vocabulary_size() const noexcept { return used_; }
  std::uint64_t weight(WordId id) const { return weights_.at(id); }
  std::uint64_t total_weight() const noexcept { return urn_.size(); }

 private:
  SimonConfig cfg_;
  Rng rng_;
  std::vector<std::uint64_t> weights_;  // index = word id
  std::vector<WordId> urn_;
  std::uint32_t used_ = 0;
  std::size_t time_ = 0;
};

inline std::vector<std::vector<WordId>> simon_stream(
    const SimonConfig& cfg, std::span<const std::size_t> sentence_lengths) {
  require(detail::total_length(sentence_lengths) == cfg.length, ErrorKind::input,
          "simon: sentence lengths must sum to N");
  SimonProcess process(cfg);
  std::vector<WordId> stream(cfg.length);
  for (auto& w : stream) w = process.step();
  return detail::cut(stream, sentence_lengths);
}

inline Corpus simon_generate(const SimonConfig& cfg,
                             std::span<const std::size_t> sentence_lengths) {
  return build_corpus_from_states(simon_stream(cfg, sentence_lengths));
}

struct TypewriterConfig {
  std::uint32_t alphabet;   // V
  std::size_t length;       // N
  std::uint32_t vocabulary; // target W
  std::uint64_t seed = 0;
};

inline constexpr std::string_view kTypewriterKeys =
    "abcdefghijklmnopqrstuvwxyz0123456789";

inline void validate(const TypewriterConfig& cfg) {
  require(cfg.alphabet >= 1 && cfg.alphabet <= kTypewriterKeys.size(),
          ErrorKind::input, "typewriter: V must lie in 1..36");
  require(cfg.length >= 1, ErrorKind::input, "typewriter: N must be >= 1");
}

// Space-key probability p_w = 1/(1 + q) with
// q = log((W - W(t) + 1)(V - 1) + 1)/log V - 1. Once the target vocabulary
// is reached q is held at 0, i.e. p_w = 1. For V = 1 the heuristic is
// undefined and p_w = 1/2.
inline double space_probability(std::uint32_t alphabet, std::uint32_t target,
                                std::size_t distinct_so_far) {
  if (alphabet < 2) return 0.5;
  if (distinct_so_far >= target) return 1.0;
  const double deficit = static_cast<double>(target - distinct_so_far) + 1.0;
  const double q =
      std::log(deficit * (alphabet - 1) + 1.0) / std::log(double(alphabet)) - 1.0;
  return 1.0 / (1.0 + q);
}

// Emits exactly N non-empty words. A space hit before any letter is
// resampled, which is the same as drawing the first letter uniformly.
inline std::vector<std::vector<std::string>> typewriter_stream(
    const TypewriterConfig& cfg, std::span<const std::size_t> sentence_lengths) {
  validate(cfg);
  require(detail::total_length(sentence_lengths) == cfg.length, ErrorKind::input,
          "typewriter: sentence lengths must sum to N");
  const std::string_view keys = kTypewriterKeys.substr(0, cfg.alphabet);
  Rng rng = make_rng(cfg.seed);
  std::unordered_set<std::string> lexicon;
  std::vector<std::string> stream;
  stream.reserve(cfg.length);
  for (std::size_t t = 0; t < cfg.length; ++t) {
    const double p_space = space_probability(cfg.alphabet, cfg.vocabulary, lexicon.size());
    require(p_space > 0.0 && p_space <= 1.0, ErrorKind::domain,
            "typewriter: space probability outside (0, 1]");
    std::string word(1, keys[uniform_below(rng, keys.size())]);
    while (!bernoulli(rng, p_space)) word.push_back(keys[uniform_below(rng, keys.size())]);
    lexicon.insert(word);
    stream.push_back(std::move(word));
  }
  return detail::cut(stream, sentence_lengths);
}

inline Corpus typewriter_generate(const TypewriterConfig& cfg,
                                  std::span<const std::size_t> sentence_lengths) {
  return build_corpus(typewriter_stream(cfg, sentence_lengths));
}

}  // namespace ssrlab
