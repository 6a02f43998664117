#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

namespace polybasin {

/// Error codes reported by the library. The first eight mirror the classic
/// generator's status constants; the rest are evaluation and I/O outcomes.
enum class ErrorCode {
  DimError,
  NumMinimaError,
  BoundaryError,
  GlobalMinValueError,
  GlobalDistError,
  GlobalRadiusError,
  FuncNumberError,
  DerivEvalError,
  OutOfDomain,
  BadVariableIndex,
  NoFunction,
  SchemaError,
  InvariantError,
  IoError,
  InvalidArgument,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimError: return "DimError";
    case ErrorCode::NumMinimaError: return "NumMinimaError";
    case ErrorCode::BoundaryError: return "BoundaryError";
    case ErrorCode::GlobalMinValueError: return "GlobalMinValueError";
    case ErrorCode::GlobalDistError: return "GlobalDistError";
    case ErrorCode::GlobalRadiusError: return "GlobalRadiusError";
    case ErrorCode::FuncNumberError: return "FuncNumberError";
    case ErrorCode::DerivEvalError: return "DerivEvalError";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::BadVariableIndex: return "BadVariableIndex";
    case ErrorCode::NoFunction: return "NoFunction";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::InvariantError: return "InvariantError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

struct Error {
  ErrorCode code;
  std::string detail;

  std::string message() const {
    return std::string(to_string(code)) + ": " + detail;
  }
};

/// Thrown by Expected::value() when it holds an error.
class BadExpectedAccess : public std::runtime_error {
 public:
  explicit BadExpectedAccess(Error error)
      : std::runtime_error(error.message()), error_(std::move(error)) {}
  const Error& error() const noexcept { return error_; }

 private:
  Error error_;
};

/// Minimal value-or-error holder (std::expected is C++23).
template <class T>
class Expected {
 public:
  Expected(T value) : data_(std::in_place_index<0>, std::move(value)) {}
  Expected(Error error) : data_(std::in_place_index<1>, std::move(error)) {}

  bool has_value() const noexcept { return data_.index() == 0; }
  explicit operator bool() const noexcept { return has_value(); }

  const T& value() const& {
    if (!has_value()) throw BadExpectedAccess(error());
    return std::get<0>(data_);
  }
  // By value, so `for (auto v : make().value())` does not dangle.
  T value() && {
    if (!has_value()) throw BadExpectedAccess(error());
    return std::get<0>(std::move(data_));
  }

  const Error& error() const& { return std::get<1>(data_); }
  ErrorCode code() const { return error().code; }

  const T& operator*() const& { return std::get<0>(data_); }
  const T* operator->() const { return &std::get<0>(data_); }

 private:
  std::variant<T, Error> data_;
};

}  // namespace polybasin
