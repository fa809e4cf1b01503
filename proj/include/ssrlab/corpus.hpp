#pragma once

// Text ingestion: boilerplate stripping, tokenization, sentence
// segmentation, lexicon construction and the rank-frequency view.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ssrlab/error.hpp"

namespace ssrlab {

using WordId = std::uint32_t;
using Sentence = std::vector<WordId>;
using TokenSentence = std::vector<std::string>;

struct RawText {
  std::string content;
  std::string source_name;
};

// Word <-> id mapping. Ids run 1..W in order of first appearance; ranks run
// 1..W by descending count, ties going to the earlier first appearance.
class Lexicon {
 public:
  Lexicon() = default;

  // `words` in first-appearance order, `counts` aligned with it.
  Lexicon(std::vector<std::string> words, std::vector<std::uint64_t> counts)
      : words_(std::move(words)), counts_(std::move(counts)) {
    require(words_.size() == counts_.size(), ErrorKind::input,
            "lexicon: words and counts differ in length");
    id_of_.reserve(words_.size());
    for (std::size_t i = 0; i < words_.size(); ++i) {
      require(counts_[i] >= 1, ErrorKind::input, "lexicon: zero count");
      const bool fresh =
          id_of_.emplace(words_[i], static_cast<WordId>(i + 1)).second;
      require(fresh, ErrorKind::input, "lexicon: duplicate word '" + words_[i] + "'");
    }
    by_rank_.resize(words_.size());
    std::iota(by_rank_.begin(), by_rank_.end(), WordId{1});
    std::stable_sort(by_rank_.begin(), by_rank_.end(), [&](WordId a, WordId b) {
      return counts_[a - 1] > counts_[b - 1];
    });
    rank_of_.resize(words_.size());
    for (std::size_t r = 0; r < by_rank_.size(); ++r)
      rank_of_[by_rank_[r] - 1] = static_cast<std::uint32_t>(r + 1);
  }

  std::size_t size() const noexcept { return words_.size(); }
  bool empty() const noexcept { return words_.empty(); }

  std::optional<WordId> id(std::string_view word) const {
    auto it = id_of_.find(std::string(word));
    if (it == id_of_.end()) return std::nullopt;
    return it->second;
  }
  const std::string& word(WordId id) const { return words_.at(id - 1); }
  std::uint64_t count(WordId id) const { return counts_.at(id - 1); }
  std::uint32_t rank(WordId id) const { return rank_of_.at(id - 1); }
  WordId id_at_rank(std::uint32_t rank) const { return by_rank_.at(rank - 1); }

  std::uint64_t total_count() const {
    return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
  }

  bool operator==(const Lexicon& other) const {
    return words_ == other.words_ && counts_ == other.counts_;
  }

 private:
  std::vector<std::string> words_;
  std::vector<std::uint64_t> counts_;
  std::unordered_map<std::string, WordId> id_of_;
  std::vector<std::uint32_t> rank_of_;
  std::vector<WordId> by_rank_;
};

struct Corpus {
  std::vector<Sentence> sentences;
  Lexicon lexicon;

  std::size_t token_count() const {
    std::size_t n = 0;
    for (const auto& s : sentences) n += s.size();
    return n;
  }

  std::vector<std::size_t> sentence_lengths() const {
    std::vector<std::size_t> lengths;
    lengths.reserve(sentences.size());
    for (const auto& s : sentences) lengths.push_back(s.size());
    return lengths;
  }

  std::vector<WordId> flatten() const {
    std::vector<WordId> out;
    out.reserve(token_count());
    for (const auto& s : sentences) out.insert(out.end(), s.begin(), s.end());
    return out;
  }

  std::vector<TokenSentence> tokens() const {
    std::vector<TokenSentence> out;
    out.reserve(sentences.size());
    for (const auto& s : sentences) {
      TokenSentence words;
      words.reserve(s.size());
      for (WordId id : s) words.push_back(lexicon.word(id));
      out.push_back(std::move(words));
    }
    return out;
  }
};

struct RankFrequencyPoint {
  std::uint32_t rank;
  double frequency;
  bool operator==(const RankFrequencyPoint&) const = default;
};

using RankFrequency = std::vector<RankFrequencyPoint>;

struct ZipfFit {
  double alpha;
  std::uint32_t r_min;
  std::uint32_t r_max;
  double residual;  // mean squared residual of log f
};

// Keeps the text strictly between a "START OF" marker line and the next
// "END OF" marker line. Input without both markers is returned unchanged.
inline RawText strip_boilerplate(const RawText& raw) {
  const std::string& text = raw.content;
  std::vector<std::pair<std::size_t, std::size_t>> lines;  // [begin, end)
  for (std::size_t pos = 0; pos <= text.size();) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    lines.emplace_back(pos, nl);
    pos = nl + 1;
  }
  auto line_has = [&](std::size_t i, std::string_view marker) {
    auto [b, e] = lines[i];
    return std::string_view(text).substr(b, e - b).find(marker) !=
           std::string_view::npos;
  };

  std::optional<std::size_t> start, end;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (!start) {
      if (line_has(i, "START OF")) start = i;
    } else if (line_has(i, "END OF")) {
      end = i;
      break;
    }
  }
  if (!start || !end) return raw;

  RawText out{std::string{}, raw.source_name};
  if (*end > *start + 1) {
    const std::size_t b = lines[*start + 1].first;
    std::size_t e = lines[*end - 1].second;
    if (e > b && text[e - 1] == '\r') --e;
    out.content = text.substr(b, e - b);
  }
  return out;
}

namespace detail {

constexpr char32_t kReplacement = 0xFFFD;

// Decodes one UTF-8 sequence at `pos`; malformed input yields U+FFFD.
inline char32_t next_code_point(std::string_view s, std::size_t& pos) {
  const auto lead = static_cast<unsigned char>(s[pos++]);
  if (lead < 0x80) return lead;
  int extra = 0;
  char32_t cp = 0;
  if ((lead & 0xE0) == 0xC0) {
    extra = 1;
    cp = lead & 0x1F;
  } else if ((lead & 0xF0) == 0xE0) {
    extra = 2;
    cp = lead & 0x0F;
  } else if ((lead & 0xF8) == 0xF0) {
    extra = 3;
    cp = lead & 0x07;
  } else {
    return kReplacement;
  }
  for (int i = 0; i < extra; ++i) {
    if (pos >= s.size()) return kReplacement;
    const auto c = static_cast<unsigned char>(s[pos]);
    if ((c & 0xC0) != 0x80) return kReplacement;
    cp = (cp << 6) | (c & 0x3F);
    ++pos;
  }
  return cp;
}

inline void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

// ASCII alphanumerics plus the Latin-1, Latin Extended, Greek and Cyrillic
// letter blocks.
inline bool is_word_char(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') ||
           (cp >= '0' && cp <= '9');
  }
  if (cp >= 0xC0 && cp <= 0x24F) return cp != 0xD7 && cp != 0xF7;
  return cp >= 0x370 && cp <= 0x52F && cp != 0x37E && cp != 0x387;
}

inline char32_t to_lower(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 32;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 32;
  return cp;
}

inline bool is_apostrophe(char32_t cp) { return cp == '\'' || cp == 0x2019; }
inline bool is_hyphen(char32_t cp) {
  return cp == '-' || cp == 0x2010 || cp == 0x2011;
}
inline bool is_sentence_end(char32_t cp) {
  return cp == '.' || cp == '!' || cp == '?';
}

}  // namespace detail

// Lowercases, splits into tokens (runs of letters/digits, keeping an
// apostrophe or hyphen only between two word characters) and cuts sentences
// at '.', '!' and '?'. Empty sentences are dropped.
inline std::vector<TokenSentence> tokenize_and_segment(const RawText& raw) {
  std::vector<char32_t> cps;
  cps.reserve(raw.content.size());
  const std::string_view text = raw.content;
  for (std::size_t pos = 0; pos < text.size();)
    cps.push_back(detail::next_code_point(text, pos));

  std::vector<TokenSentence> sentences;
  TokenSentence current;
  std::string token;
  auto flush_token = [&] {
    if (!token.empty()) current.push_back(std::move(token));
    token.clear();
  };
  auto flush_sentence = [&] {
    flush_token();
    if (!current.empty()) sentences.push_back(std::move(current));
    current.clear();
  };

  for (std::size_t i = 0; i < cps.size(); ++i) {
    const char32_t cp = cps[i];
    if (detail::is_word_char(cp)) {
      detail::append_utf8(token, detail::to_lower(cp));
    } else if ((detail::is_apostrophe(cp) || detail::is_hyphen(cp)) &&
               !token.empty() && i + 1 < cps.size() &&
               detail::is_word_char(cps[i + 1])) {
      token.push_back(detail::is_apostrophe(cp) ? '\'' : '-');
    } else if (detail::is_sentence_end(cp)) {
      flush_sentence();
    } else {
      flush_token();
    }
  }
  flush_sentence();
  return sentences;
}

namespace detail {

// Shared by the string and integer front-ends: ids by first appearance,
// `word_of` renders a token for the lexicon.
template <class Token, class Hash, class WordOf>
Corpus build_corpus_impl(const std::vector<std::vector<Token>>& sentences,
                         WordOf&& word_of) {
  std::unordered_map<Token, WordId, Hash> id_of;
  std::vector<std::string> words;
  std::vector<std::uint64_t> counts;
  Corpus corpus;
  corpus.sentences.reserve(sentences.size());
  for (const auto& sentence : sentences) {
    require(!sentence.empty(), ErrorKind::input, "build_corpus: empty sentence");
    Sentence ids;
    ids.reserve(sentence.size());
    for (const auto& token : sentence) {
      auto [it, fresh] =
          id_of.try_emplace(token, static_cast<WordId>(words.size() + 1));
      if (fresh) {
        words.push_back(word_of(token));
        require(!words.back().empty(), ErrorKind::input,
                "build_corpus: empty token");
        counts.push_back(0);
      }
      ++counts[it->second - 1];
      ids.push_back(it->second);
    }
    corpus.sentences.push_back(std::move(ids));
  }
  require(!words.empty(), ErrorKind::empty_corpus, "corpus is empty");
  corpus.lexicon = Lexicon(std::move(words), std::move(counts));
  return corpus;
}

}  // namespace detail

inline Corpus build_corpus(const std::vector<TokenSentence>& sentences) {
  return detail::build_corpus_impl<std::string, std::hash<std::string>>(
      sentences, [](const std::string& t) { return t; });
}

// Corpus over integer states; words are their decimal spellings.
template <class State>
Corpus build_corpus_from_states(const std::vector<std::vector<State>>& sentences) {
  return detail::build_corpus_impl<State, std::hash<State>>(
      sentences, [](State s) { return std::to_string(s); });
}

inline Corpus ingest_text(const RawText& raw) {
  return build_corpus(tokenize_and_segment(strip_boilerplate(raw)));
}

inline RankFrequency rank_frequency(const Corpus& corpus) {
  const Lexicon& lex = corpus.lexicon;
  require(!lex.empty(), ErrorKind::empty_corpus, "rank_frequency: empty corpus");
  RankFrequency rf;
  rf.reserve(lex.size());
  for (std::uint32_t r = 1; r <= lex.size(); ++r)
    rf.push_back({r, static_cast<double>(lex.count(lex.id_at_rank(r)))});
  return rf;
}

// Least-squares slope of log f(r) against log r over [r_min, r_max].
inline ZipfFit fit_zipf(const RankFrequency& rf, std::uint32_t r_min,
                        std::uint32_t r_max) {
  require(r_min >= 1 && r_max <= rf.size(), ErrorKind::input,
          "fit_zipf: range outside 1..W");
  require(r_min < r_max, ErrorKind::fit,
          "fit_zipf: need at least two distinct ranks");

  const std::size_t n = r_max - r_min + 1;
  std::vector<double> xs, ys;
  xs.reserve(n);
  ys.reserve(n);
  for (std::uint32_t r = r_min; r <= r_max; ++r) {
    const auto& point = rf[r - 1];
    require(point.frequency > 0, ErrorKind::input, "fit_zipf: zero frequency");
    xs.push_back(std::log(static_cast<double>(point.rank)));
    ys.push_back(std::log(point.frequency));
  }
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double sse = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = ys[i] - (intercept + slope * xs[i]);
    sse += e * e;
  }
  return {-slope, r_min, r_max, sse / n};
}

}  // namespace ssrlab
