#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace artseg {

enum class ErrorCode {
  InvalidArgument,
  Io,
  MalformedHeader,
  InvalidLabelCode,
  TruncatedData,
  Config,
  InfeasibleRecipe,
  MissingGroundTruth,
  UnknownStage,
  DivisionByZero,
  DanglingReference,
  Internal,
};

const char* error_code_name(ErrorCode code) noexcept;

/// Base exception for every failure the library reports. The C API maps
/// `code()` onto its status enum.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// A pixel value outside the raw label table. `position` is the row-major
/// pixel index.
class InvalidLabelCodeError : public Error {
 public:
  InvalidLabelCodeError(std::size_t position, int value);

  std::size_t position() const noexcept { return position_; }
  int value() const noexcept { return value_; }

 private:
  std::size_t position_;
  int value_;
};

/// Non-fatal condition recorded while processing a page (the run continues).
struct Diagnostic {
  std::string code;     // e.g. "ComponentTooThick", "OrphanFragment"
  std::string message;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

}  // namespace artseg
