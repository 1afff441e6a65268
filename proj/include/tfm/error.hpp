#ifndef TFM_ERROR_HPP
#define TFM_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tfm {

// Every contracted failure mode carries a stable kind name; the CLI prints
// the name verbatim and tests match on it.
enum class ErrorKind {
  ParseError,
  ValidationError,
  ZeroOrdinal,
  Underflow,
  ZeroDivisor,
  EmptyList,
  OutOfRange,
  UnsplittableAtom,
  MissingValue,
  LengthMismatch,
  Unalignable,
  LabelValued,
  NotDivisible,
  UnsupportedDivision,
  BlockHasNoMean,
  UnknownLabel,
  NotNull,
  BudgetExceeded,
  InternalError,
};

inline const char* error_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::ZeroOrdinal: return "ZeroOrdinal";
    case ErrorKind::Underflow: return "Underflow";
    case ErrorKind::ZeroDivisor: return "ZeroDivisor";
    case ErrorKind::EmptyList: return "EmptyList";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::UnsplittableAtom: return "UnsplittableAtom";
    case ErrorKind::MissingValue: return "MissingValue";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::Unalignable: return "Unalignable";
    case ErrorKind::LabelValued: return "LabelValued";
    case ErrorKind::NotDivisible: return "NotDivisible";
    case ErrorKind::UnsupportedDivision: return "UnsupportedDivision";
    case ErrorKind::BlockHasNoMean: return "BlockHasNoMean";
    case ErrorKind::UnknownLabel: return "UnknownLabel";
    case ErrorKind::NotNull: return "NotNull";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::InternalError: return "InternalError";
  }
  return "Error";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }
  const char* name() const { return error_name(kind_); }

 private:
  ErrorKind kind_;
};

// Parse errors additionally report the offending input position.
class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& what)
      : Error(ErrorKind::ParseError, what + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

}  // namespace tfm

#endif  // TFM_ERROR_HPP
