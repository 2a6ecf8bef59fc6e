#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pmvos {

enum class Errc {
  invalid_input,     // non-finite or otherwise malformed numeric data
  invalid_argument,  // shape mismatch, bad dimensions, bad option values
  precondition,      // operation called on a state that does not allow it
  empty_target,      // initial mask contains no foreground
  io,                // file could not be opened / written
  bad_magic,
  truncated_payload,
  non_finite,
  label_range,
  parse,             // malformed config or header text
};

constexpr std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_input: return "invalid input";
    case Errc::invalid_argument: return "invalid argument";
    case Errc::precondition: return "precondition violated";
    case Errc::empty_target: return "empty target";
    case Errc::io: return "i/o error";
    case Errc::bad_magic: return "bad magic";
    case Errc::truncated_payload: return "truncated payload";
    case Errc::non_finite: return "non-finite value";
    case Errc::label_range: return "label out of range";
    case Errc::parse: return "parse error";
  }
  return "unknown error";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, Errc code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace pmvos
