#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fuzzylim {

enum class ErrorCode {
  invalid_parameter,
  unsupported_infinite_target,
  no_admissible_sequence,
  empty_sample,
  point_not_in_domain,
  claim_refuted,
  invalid_widening,
  incompatible_certificates,
  domination_failure,
  point_not_in_range,
  bound_not_implied,
  unknown_model,
  derivation_unverified,
  invalid_word,
  parse_error,
  invariant_violation,
  oracle_scale_exceeded,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_parameter: return "invalid-parameter";
    case ErrorCode::unsupported_infinite_target: return "unsupported-infinite-target";
    case ErrorCode::no_admissible_sequence: return "no-admissible-sequence";
    case ErrorCode::empty_sample: return "empty-sample";
    case ErrorCode::point_not_in_domain: return "point-not-in-domain";
    case ErrorCode::claim_refuted: return "claim-refuted";
    case ErrorCode::invalid_widening: return "invalid-widening";
    case ErrorCode::incompatible_certificates: return "incompatible-certificates";
    case ErrorCode::domination_failure: return "domination-failure";
    case ErrorCode::point_not_in_range: return "point-not-in-range";
    case ErrorCode::bound_not_implied: return "bound-not-implied";
    case ErrorCode::unknown_model: return "unknown-model";
    case ErrorCode::derivation_unverified: return "derivation-unverified";
    case ErrorCode::invalid_word: return "invalid-word";
    case ErrorCode::parse_error: return "parse-error";
    case ErrorCode::invariant_violation: return "invariant-violation";
    case ErrorCode::oracle_scale_exceeded: return "oracle-scale-exceeded";
  }
  return "unknown";
}

// Every failure raised by the library carries one of the codes above; the
// CLI maps codes onto process exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& reason)
      : Error(ErrorCode::parse_error, "line " + std::to_string(line) + ": " + reason), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& detail) { throw Error(code, detail); }

}  // namespace fuzzylim
