#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace psrisk {

// Bad domain values: out-of-range probability, inverted interval, cyclic
// graph, malformed CPT row. Raised at construction/validation time; values
// are never silently clamped.
class ValidationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Unknown node, state, or catalog entry.
class LookupError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// A model element cannot be evaluated as requested, e.g. a fault-tree event
// with a failure rate but no mission time.
class EvaluationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Evidence whose probability is zero under the network.
class InconsistentEvidenceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Monte Carlo rejection sampling left no usable samples.
class InsufficientSamplesError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Malformed document text; carries a 1-based line/column position.
class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string& message, std::size_t line, std::size_t column)
        : std::runtime_error(message), line_(line), column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

  private:
    std::size_t line_;
    std::size_t column_;
};

}  // namespace psrisk
