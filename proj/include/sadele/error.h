#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sadele {

enum class ErrorCode {
  EmptyInput,
  TaggerContractViolation,
  InvalidSubstitution,
  ParseError,
  RangeError,
  DimMismatch,
  LabelError,
  UntaggedInput,
  LengthMismatch,
  IndexError,
  BackendUnavailable,
  BackendProtocol,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Error raised by every sadele operation. Loaders attach the 1-based line
/// number of the offending input line.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> line = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> line() const noexcept { return line_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> line_;
};

}  // namespace sadele
