#ifndef WSD_ERROR_HPP
#define WSD_ERROR_HPP

#include <optional>
#include <stdexcept>
#include <string>

namespace wsd {

enum class ErrorKind {
  UnknownField,
  EmptyWord,
  Io,
  Malformed,
  IntegrityViolation,
  EmptySentence,
  NoContentWords,
  NoWinner,
  NotACorrection,
  TargetMismatch,
  Empty,
};

const char* to_string(ErrorKind kind);

/// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::optional<std::size_t> line = std::nullopt)
      : std::runtime_error(message), kind_(kind), line_(line) {}

  ErrorKind kind() const { return kind_; }
  /// 1-based line number for Malformed errors raised by file parsers.
  std::optional<std::size_t> line() const { return line_; }

 private:
  ErrorKind kind_;
  std::optional<std::size_t> line_;
};

}  // namespace wsd

#endif  // WSD_ERROR_HPP
