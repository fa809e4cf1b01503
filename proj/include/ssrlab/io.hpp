#pragma once

// File formats.
//   tokenized corpus  UTF-8, one sentence per line, tokens split by one space
//   lexicon CSV       word,id,count,rank
//   rank-frequency    rank,frequency
//   transition CSVs   i,j,count  and  j,k_j
//   label map CSV     id,label
// Every file written here starts with a '#' provenance line; readers skip
// lines that start with '#'.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ssrlab/corpus.hpp"
#include "ssrlab/error.hpp"
#include "ssrlab/grammar.hpp"
#include "ssrlab/stats.hpp"

namespace ssrlab {

inline constexpr const char* kVersion = "0.1.0";

struct Provenance {
  std::string command;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> params;

  std::string line() const {
    std::string s = std::string("# ssrlab ") + kVersion + " command=" + command +
                    " seed=" + std::to_string(seed);
    for (const auto& [k, v] : params) s += " " + k + "=" + v;
    return s;
  }
};

// Shortest round-trip decimal form, independent of locale and stream state.
inline std::string format_double(double x) {
  char buf[32];
  for (int precision = 6; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::io, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorKind::io, "cannot write " + path.string());
  out << content;
  require(static_cast<bool>(out), ErrorKind::io, "write failed for " + path.string());
}

inline RawText read_raw_text(const std::filesystem::path& path) {
  return {read_file(path), path.filename().string()};
}

inline std::vector<TokenSentence> parse_tokenized(const std::string& content) {
  std::vector<TokenSentence> sentences;
  std::istringstream in(content);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    TokenSentence tokens;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      std::size_t sp = line.find(' ', pos);
      if (sp == std::string::npos) sp = line.size();
      if (sp > pos) tokens.push_back(line.substr(pos, sp - pos));
      pos = sp + 1;
    }
    if (!tokens.empty()) sentences.push_back(std::move(tokens));
  }
  return sentences;
}

inline Corpus read_corpus(const std::filesystem::path& path) {
  return build_corpus(parse_tokenized(read_file(path)));
}

inline std::string format_corpus(const Corpus& corpus, const Provenance& prov) {
  std::string out = prov.line() + "\n";
  for (const auto& sentence : corpus.sentences) {
    for (std::size_t i = 0; i < sentence.size(); ++i) {
      if (i) out.push_back(' ');
      out += corpus.lexicon.word(sentence[i]);
    }
    out.push_back('\n');
  }
  return out;
}

inline std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string q = "\"";
  for (char c : field) {
    if (c == '"') q.push_back('"');
    q.push_back(c);
  }
  return q + "\"";
}

inline std::string format_lexicon(const Lexicon& lex, const Provenance& prov) {
  std::string out = prov.line() + "\nword,id,count,rank\n";
  for (WordId id = 1; id <= lex.size(); ++id) {
    out += csv_quote(lex.word(id)) + "," + std::to_string(id) + "," +
           std::to_string(lex.count(id)) + "," + std::to_string(lex.rank(id)) + "\n";
  }
  return out;
}

inline std::string format_rank_frequency(const RankFrequency& rf, const Provenance& prov) {
  std::string out = prov.line() + "\nrank,frequency\n";
  for (const auto& p : rf)
    out += std::to_string(p.rank) + "," + format_double(p.frequency) + "\n";
  return out;
}

inline std::string format_transition_counts(const TransitionCounts& tc,
                                            const Provenance& prov) {
  std::string out = prov.line() + "\ni,j,count\n";
  for (const auto& e : tc.entries)
    out += std::to_string(e.follower) + "," + std::to_string(e.predecessor) + "," +
           std::to_string(e.count) + "\n";
  return out;
}

inline std::string format_marginals(const TransitionCounts& tc, const Provenance& prov) {
  std::string out = prov.line() + "\nj,k_j\n";
  for (WordId j : tc.top_set)
    out += std::to_string(j) + "," + std::to_string(tc.marginal_of(j)) + "\n";
  return out;
}

inline std::string format_labels(const LabelMap& labels, const Provenance& prov) {
  std::string out = prov.line() + "\nid,label\n";
  for (WordId id = 1; id <= labels.size(); ++id)
    out += std::to_string(id) + "," + std::to_string(labels[id]) + "\n";
  return out;
}

// Body of a file with its provenance line(s) removed; for comparing outputs
// of runs that differ only in their parameters.
inline std::string strip_provenance(const std::string& content) {
  std::string out;
  std::istringstream in(content);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.front() == '#') continue;
    out += line + "\n";
  }
  return out;
}

}  // namespace ssrlab
