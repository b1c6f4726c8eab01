#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gencoupon {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands built for different fields, or other broken preconditions.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

class DivisionByZeroError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Vector or buffer length does not match the configuration.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent generation or field parameters.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class NotDecodableError : public Error {
 public:
  using Error::Error;
};

/// Quadrature failed to reach the requested accuracy.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, double partial_value, double partial_error)
      : Error(what), partial_value_(partial_value), partial_error_(partial_error) {}

  double partial_value() const noexcept { return partial_value_; }
  double partial_error() const noexcept { return partial_error_; }

 private:
  double partial_value_;
  double partial_error_;
};

/// A computation would exceed a configured size cap.
class ResourceError : public Error {
 public:
  ResourceError(const std::string& what, std::uint64_t requested, std::uint64_t cap)
      : Error(what), requested_(requested), cap_(cap) {}

  std::uint64_t requested() const noexcept { return requested_; }
  std::uint64_t cap() const noexcept { return cap_; }

 private:
  std::uint64_t requested_;
  std::uint64_t cap_;
};

}  // namespace gencoupon
