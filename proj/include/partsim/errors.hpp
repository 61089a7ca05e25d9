#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace partsim {

/// Malformed clustering file. line is 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, std::size_t line)
      : std::runtime_error(std::move(message)), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Two clusterings do not cover the same element set.
class ElementMismatchError : public std::domain_error {
 public:
  ElementMismatchError(std::string message, std::size_t symmetric_difference)
      : std::domain_error(std::move(message)),
        symmetric_difference_(symmetric_difference) {}
  std::size_t symmetric_difference() const { return symmetric_difference_; }

 private:
  std::size_t symmetric_difference_;
};

/// Raised when a chance-corrected score has a vanishing denominator
/// (max bound equals the expectation) or a normalizer is zero.
class UndefinedAdjustmentError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace partsim
