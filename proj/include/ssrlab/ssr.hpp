#pragma once

// Sample-space reducing ("staircase") process. From state j > 1 the next
// state is uniform on {1..j-1}; from state 1 the process restarts uniformly
// on {2..W}.

#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "ssrlab/corpus.hpp"
#include "ssrlab/error.hpp"
#include "ssrlab/random.hpp"

namespace ssrlab {

using State = std::uint32_t;
using StateSequence = std::vector<State>;
using StateText = std::vector<StateSequence>;

struct SsrConfig {
  std::uint32_t states;  // W
  std::uint64_t seed;
};

inline State ssr_next(State current, std::uint32_t states, Rng& rng) {
  require(states >= 2, ErrorKind::input, "ssr: need at least 2 states");
  require(current >= 1 && current <= states, ErrorKind::input,
          "ssr: state " + std::to_string(current) + " outside 1.." +
              std::to_string(states));
  if (current == 1) return static_cast<State>(uniform_between(rng, 2, states));
  return static_cast<State>(uniform_between(rng, 1, current - 1));
}

// One continuous chain, started as a restart, cut into consecutive windows
// of the requested lengths.
inline StateText ssr_text(const SsrConfig& cfg,
                          std::span<const std::size_t> sentence_lengths) {
  require(cfg.states >= 2, ErrorKind::input, "ssr: need at least 2 states");
  for (std::size_t len : sentence_lengths)
    require(len >= 1, ErrorKind::input, "ssr: sentence length must be >= 1");

  Rng rng = make_rng(cfg.seed);
  StateText text;
  text.reserve(sentence_lengths.size());
  State state = 1;  // the first draw is then a restart
  for (std::size_t len : sentence_lengths) {
    StateSequence sentence(len);
    for (auto& s : sentence) {
      state = ssr_next(state, cfg.states, rng);
      s = state;
    }
    text.push_back(std::move(sentence));
  }
  return text;
}

// Visiting distribution p_i = (1/Z)(1/i), Z the harmonic number H_W.
// Index 0 holds p_1.
inline std::vector<double> ssr_theoretical_dist(std::uint32_t states) {
  require(states >= 2, ErrorKind::input, "ssr: need at least 2 states");
  std::vector<double> p(states);
  double z = 0;
  for (std::uint32_t i = states; i >= 1; --i) z += 1.0 / i;
  for (std::uint32_t i = 1; i <= states; ++i) p[i - 1] = 1.0 / (z * i);
  return p;
}

inline Corpus ssr_corpus(const SsrConfig& cfg,
                         std::span<const std::size_t> sentence_lengths) {
  return build_corpus_from_states(ssr_text(cfg, sentence_lengths));
}

}  // namespace ssrlab
