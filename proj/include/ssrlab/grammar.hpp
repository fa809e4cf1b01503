#pragma once

// Toy grammar over SSR sentences. Every word carries a label in 0..N_g
// (0 = neutral). Neutral runs travel with the next labelled word; labelled
// blocks are then emitted in the repeating pattern 1, 2, ..., N_g, 1, 2, ...
// skipping labels that have run out.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ssrlab/corpus.hpp"
#include "ssrlab/error.hpp"
#include "ssrlab/random.hpp"
#include "ssrlab/ssr.hpp"

namespace ssrlab {

using Label = std::uint16_t;
inline constexpr Label kNeutral = 0;

struct GrammarConfig {
  std::uint32_t labels;     // N_g
  double neutral_prob;      // p_n
  std::uint64_t seed;
};

inline void validate(const GrammarConfig& cfg) {
  require(cfg.labels >= 1, ErrorKind::input, "grammar: N_g must be >= 1");
  require(cfg.labels < 0xFFFF, ErrorKind::input, "grammar: N_g too large");
  require(cfg.neutral_prob >= 0.0 && cfg.neutral_prob <= 1.0,
          ErrorKind::input, "grammar: p_n must lie in [0, 1]");
}

class LabelMap {
 public:
  LabelMap() = default;
  LabelMap(std::vector<Label> labels, std::uint32_t label_count)
      : labels_(std::move(labels)), label_count_(label_count) {
    for (Label l : labels_)
      require(l <= label_count_, ErrorKind::input, "label map: label out of range");
  }

  Label operator[](WordId id) const { return labels_.at(id - 1); }
  std::size_t size() const noexcept { return labels_.size(); }
  std::uint32_t label_count() const noexcept { return label_count_; }
  const std::vector<Label>& labels() const noexcept { return labels_; }

 private:
  std::vector<Label> labels_;  // index id-1
  std::uint32_t label_count_ = 0;
};

// i.i.d. labels: P(0) = p_n, P(l) = (1 - p_n)/N_g.
inline LabelMap assign_labels(std::uint32_t words, const GrammarConfig& cfg) {
  validate(cfg);
  require(words >= 1, ErrorKind::input, "assign_labels: W must be >= 1");
  Rng rng = make_rng(cfg.seed);
  std::vector<Label> labels(words);
  for (auto& l : labels) {
    if (bernoulli(rng, cfg.neutral_prob)) {
      l = kNeutral;
    } else {
      l = static_cast<Label>(1 + uniform_below(rng, cfg.labels));
    }
  }
  return LabelMap(std::move(labels), cfg.labels);
}

struct Block {
  StateSequence words;
  Label label;        // label of the host (last) word
  bool trailing;      // all-neutral tail with no host

  bool operator==(const Block&) const = default;
};

inline std::vector<Block> block_neutrals(std::span<const State> sentence,
                                         const LabelMap& labels) {
  require(!sentence.empty(), ErrorKind::input, "block_neutrals: empty sentence");
  std::vector<Block> blocks;
  StateSequence pending;
  for (State s : sentence) {
    pending.push_back(s);
    const Label l = labels[s];
    if (l != kNeutral) {
      blocks.push_back({std::move(pending), l, false});
      pending.clear();
    }
  }
  if (!pending.empty()) blocks.push_back({std::move(pending), kNeutral, true});
  return blocks;
}

// Groups blocks by label and emits them lexicographically in
// (occurrence index, label); a host-less neutral tail goes last.
inline StateSequence reorder_sentence(std::span<const State> sentence,
                                      const LabelMap& labels,
                                      std::uint32_t label_count) {
  const auto blocks = block_neutrals(sentence, labels);
  std::vector<std::vector<const Block*>> groups(label_count + 1);
  const Block* tail = nullptr;
  for (const auto& b : blocks) {
    if (b.trailing) {
      tail = &b;
    } else {
      require(b.label <= label_count, ErrorKind::input,
              "reorder_sentence: label exceeds N_g");
      groups[b.label].push_back(&b);
    }
  }

  std::size_t depth = 0;
  for (const auto& g : groups) depth = std::max(depth, g.size());

  StateSequence out;
  out.reserve(sentence.size());
  for (std::size_t t = 0; t < depth; ++t) {
    for (std::uint32_t l = 1; l <= label_count; ++l) {
      if (t < groups[l].size()) {
        const auto& w = groups[l][t]->words;
        out.insert(out.end(), w.begin(), w.end());
      }
    }
  }
  if (tail) out.insert(out.end(), tail->words.begin(), tail->words.end());
  return out;
}

// The goSSR sample with the pieces it was built from.
struct GossrSample {
  StateText ssr;        // underlying SSR chain, cut into sentences
  StateText reordered;  // grammatically ordered sentences
  LabelMap labels;
};

// The SSR chain is seeded with `cfg.seed` directly (so it matches a plain
// SSR run with the same seed); labels use a derived stream.
inline GossrSample gossr_sample(std::uint32_t words,
                                std::span<const std::size_t> sentence_lengths,
                                const GrammarConfig& cfg) {
  validate(cfg);
  GossrSample sample;
  sample.ssr = ssr_text({words, cfg.seed}, sentence_lengths);
  GrammarConfig label_cfg = cfg;
  label_cfg.seed = derive_seed(cfg.seed, "grammar-labels");
  sample.labels = assign_labels(words, label_cfg);
  sample.reordered.reserve(sample.ssr.size());
  for (const auto& sentence : sample.ssr)
    sample.reordered.push_back(reorder_sentence(sentence, sample.labels, cfg.labels));
  return sample;
}

inline Corpus gossr_text(const Corpus& templ, const GrammarConfig& cfg) {
  require(!templ.sentences.empty(), ErrorKind::empty_corpus,
          "gossr: template corpus is empty");
  const auto lengths = templ.sentence_lengths();
  const auto sample = gossr_sample(static_cast<std::uint32_t>(templ.lexicon.size()),
                                   lengths, cfg);
  return build_corpus_from_states(sample.reordered);
}

}  // namespace ssrlab
