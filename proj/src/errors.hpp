#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pa {

enum class ErrorCode {
  invalid_argument = 1,
  parse = 2,
  unsupported = 3,
  not_diagonally_dominant = 4,
  invalid_point = 5,
  lemma_violation = 6,
  hypothesis_not_met = 7,
  internal = 8,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

struct InvalidArgument : Error {
  explicit InvalidArgument(const std::string& what) : Error(ErrorCode::invalid_argument, what) {}
};

struct UnsupportedStencil : Error {
  explicit UnsupportedStencil(const std::string& what) : Error(ErrorCode::unsupported, what) {}
};

struct NotDiagonallyDominant : Error {
  explicit NotDiagonallyDominant(const std::string& what)
      : Error(ErrorCode::not_diagonally_dominant, what) {}
};

struct InvalidPoint : Error {
  explicit InvalidPoint(const std::string& what) : Error(ErrorCode::invalid_point, what) {}
};

/// Raised when a numerical check contradicts a proven statement; always a bug.
struct LemmaViolation : Error {
  explicit LemmaViolation(const std::string& what) : Error(ErrorCode::lemma_violation, what) {}
};

struct HypothesisNotMet : Error {
  explicit HypothesisNotMet(const std::string& what) : Error(ErrorCode::hypothesis_not_met, what) {}
};

class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& message)
      : Error(ErrorCode::parse, "parse error at column " + std::to_string(position + 1) + ": " + message),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace pa
