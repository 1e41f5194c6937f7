#pragma once

#include <stdexcept>
#include <string>

namespace cocircular {

/// Input outside the mathematical domain of an operation (x <= 0, collisions, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical procedure failed to reach its tolerance.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operation called with arguments that violate its contract (wrong variant, non-stationary input).
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Malformed problem or report document; `field()` names the offending entry.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string field, const std::string& what)
      : std::runtime_error("field '" + field + "': " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace cocircular
