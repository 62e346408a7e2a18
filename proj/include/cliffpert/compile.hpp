#pragma once

#include <cstddef>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "cliffpert/circuit.hpp"
#include "cliffpert/pauli.hpp"

namespace cliffpert {

struct CompiledRotation {
  PauliString axis;
  double theta = 0.0;
  /// Index of the originating gate in the source circuit.
  std::size_t source_index = 0;
};

/// Circuit in the Clifford interaction picture: only Pauli rotations with
/// |theta| <= pi/4 remain, listed in the order they are applied to the
/// operator (reverse of state order), plus the observable with every
/// Clifford absorbed into it.
struct InteractionPictureProgram {
  std::size_t n = 0;
  std::vector<CompiledRotation> rotations;
  PauliString observable;
  int sign = 1;
};

struct AngleTransform {
  double theta_tilde = 0.0;
  int k = 0;  // in {0,1,2,3}
};

/// Split theta = theta_tilde + k*pi/2 (mod 2*pi) with theta_tilde in
/// (-pi/4, pi/4]; |theta_tilde| <= 1e-12 is snapped to exactly 0 so
/// Clifford angles computed in floating point are absorbed.  Throws
/// AngleError on non-finite input.
AngleTransform angle_transform(double theta);

struct CompileOptions {
  /// When false, named Cliffords are still absorbed but rotation angles
  /// are kept as-is (no pi/2 extraction).  Used to quantify the benefit
  /// of the transformation; the resulting program may carry wide angles.
  bool use_angle_transform = true;
};

/// Absorb all Clifford content of the circuit into the observable and the
/// rotation axes.  Expectation value is preserved exactly.
InteractionPictureProgram compile(const Circuit& circuit,
                                  const PauliString& observable,
                                  const CompileOptions& options = {});

/// Serialized form doubles as a valid Circuit (gates in state order) with
/// "observable" and "sign" attached, so a compiled program can be fed
/// back through any circuit-consuming entry point.
nlohmann::json program_to_json(const InteractionPictureProgram& program);
InteractionPictureProgram program_from_json(const nlohmann::json& j);

/// View the program's rotations as a plain circuit (state order).
Circuit program_to_circuit(const InteractionPictureProgram& program);

}  // namespace cliffpert
