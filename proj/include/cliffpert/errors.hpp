#pragma once

#include <stdexcept>
#include <string>

namespace cliffpert {

// Error classes are kept distinct so the CLI can map each one to a stable
// machine-readable error code on stderr.

/// Mismatched qubit counts between operands.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Malformed textual input (Pauli strings, observable labels).
struct ParseError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Structurally invalid circuit, program or noise description.
struct SchemaError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Rotation angle outside the range the engine was asked to enforce,
/// or a non-finite angle.
struct AngleError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Channel probabilities or damping rates outside their valid range.
struct NoiseParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Term map exceeded the configured memory cap during propagation.
struct ResourceError : std::runtime_error {
  ResourceError(const std::string& what, std::size_t gate_index)
      : std::runtime_error(what), gate_index(gate_index) {}
  std::size_t gate_index;
};

/// Instance generation could not satisfy its constraints within the
/// bounded number of restarts.
struct GenerationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Phase algebra produced an imaginary coefficient where a real one is
/// guaranteed.  Always a bug, never a data error.
struct PhaseAlgebraError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace cliffpert
