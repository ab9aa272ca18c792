#pragma once

#include <stdexcept>
#include <string>

namespace bmdim {

enum class ErrorKind {
  Structural,   // malformed input value (bad presentation, length mismatch, ...)
  Range,        // parameter outside its admissible range
  Consistency,  // inputs disagree with each other (split larger than parent, ...)
  Boundary,     // exact boundary hit where a strict decision was required
  Budget,       // the requested precision/depth is beyond the configured budget
  InvalidTest,  // a test level exceeds its declared bound
  Divergent,    // operation refused because the quantity is infinite
  Config,       // unparsable or missing configuration
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace bmdim
