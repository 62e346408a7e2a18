#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "cliffpert/pauli.hpp"

namespace cliffpert {

enum class CliffordKind { H, S, Sdg, X, Y, Z, CX, CZ, Swap };

/// Number of qubit operands for a named Clifford (1 or 2).
int clifford_arity(CliffordKind kind);
std::string clifford_name(CliffordKind kind);

struct NamedClifford {
  CliffordKind kind;
  // qubits[1] is ignored for single-qubit gates; for CX, qubits[0] is the
  // control and qubits[1] the target.
  std::array<std::uint32_t, 2> qubits{0, 0};

  bool operator==(const NamedClifford&) const = default;
};

/// exp(-i theta P / 2) for a non-identity Pauli string P on all n qubits.
struct PauliRotation {
  PauliString axis;
  double theta = 0.0;

  bool operator==(const PauliRotation&) const = default;
};

using Gate = std::variant<NamedClifford, PauliRotation>;

/// Gate list in the order applied to the state (standard circuit order).
struct Circuit {
  std::size_t n = 0;
  std::vector<Gate> gates;

  /// Throws SchemaError if any gate does not fit in n qubits, a rotation
  /// axis is the identity or has the wrong length, a two-qubit gate
  /// repeats a qubit, or an angle is not finite.
  void validate() const;

  std::size_t rotation_count() const;
};

struct SignedPauli {
  PauliString string;
  int sign = 1;  // +1 or -1
};

/// Heisenberg pull-back C^dag p C through one named Clifford gate.
/// Hermitian in, Hermitian out: the phase is always a sign.
SignedPauli conjugate_by_clifford(const PauliString& p, const NamedClifford& g);

/// Pull-back through the Clifford part of a Pauli rotation,
/// C = exp(-i k pi P / 4): commuting strings are unchanged; anticommuting
/// ones map to a single signed string for any integer k.
SignedPauli conjugate_by_pauli_rotation_clifford(const PauliString& p,
                                                 const PauliString& axis,
                                                 int k);

Circuit circuit_from_json(const nlohmann::json& j);
nlohmann::json circuit_to_json(const Circuit& c);

}  // namespace cliffpert
