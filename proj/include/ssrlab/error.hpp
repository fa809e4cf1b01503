#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ssrlab {

enum class ErrorKind {
  input,         // precondition violated by the caller
  empty_corpus,  // nothing left after tokenization
  fit,           // degenerate regression range
  infeasible,    // generator target cannot be met
  domain,        // statistic undefined for this input
  io,            // file could not be read or written
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::input: return "input";
    case ErrorKind::empty_corpus: return "empty_corpus";
    case ErrorKind::fit: return "fit";
    case ErrorKind::infeasible: return "infeasible";
    case ErrorKind::domain: return "domain";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) throw Error(kind, what);
}

}  // namespace ssrlab
