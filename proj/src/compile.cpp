#include "cliffpert/compile.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "cliffpert/errors.hpp"

namespace cliffpert {

namespace {

constexpr double kHalfPi = 1.5707963267948966;
constexpr double kCliffordAngleTol = 1e-12;

}  // namespace

AngleTransform angle_transform(double theta) {
  if (!std::isfinite(theta)) {
    throw AngleError("angle_transform: non-finite angle");
  }
  // k = ceil(theta/(pi/2) - 1/2) puts theta_tilde in (-pi/4, pi/4], so the
  // boundary tie lands on +pi/4.
  double steps = std::ceil(theta / kHalfPi - 0.5);
  long long k = static_cast<long long>(steps);
  AngleTransform out;
  out.theta_tilde = theta - static_cast<double>(k) * kHalfPi;
  out.k = static_cast<int>(((k % 4) + 4) % 4);
  if (std::abs(out.theta_tilde) <= kCliffordAngleTol) {
    out.theta_tilde = 0.0;
  }
  return out;
}

InteractionPictureProgram compile(const Circuit& circuit,
                                  const PauliString& observable,
                                  const CompileOptions& options) {
  circuit.validate();
  if (observable.num_qubits() != circuit.n) {
    throw DimensionError("compile: observable has " +
                         std::to_string(observable.num_qubits()) +
                         " qubits, circuit has " + std::to_string(circuit.n));
  }

  InteractionPictureProgram program;
  program.n = circuit.n;
  program.observable = observable;
  program.sign = 1;

  // Walk from the observable end (reverse of state order).  A Clifford
  // encountered here acts on the observable and on every rotation already
  // collected, i.e. every rotation closer to the observable.
  auto absorb_clifford = [&program](auto&& conjugate) {
    SignedPauli obs = conjugate(program.observable);
    program.observable = std::move(obs.string);
    program.sign *= obs.sign;
    for (auto& rot : program.rotations) {
      SignedPauli axis = conjugate(rot.axis);
      rot.axis = std::move(axis.string);
      if (axis.sign < 0) rot.theta = -rot.theta;
    }
  };

  for (std::size_t idx = circuit.gates.size(); idx-- > 0;) {
    const Gate& gate = circuit.gates[idx];
    if (const auto* named = std::get_if<NamedClifford>(&gate)) {
      absorb_clifford([named](const PauliString& p) {
        return conjugate_by_clifford(p, *named);
      });
      continue;
    }
    const auto& rot = std::get<PauliRotation>(gate);
    if (!options.use_angle_transform) {
      if (rot.theta != 0.0) {
        program.rotations.push_back({rot.axis, rot.theta, idx});
      }
      continue;
    }
    AngleTransform split = angle_transform(rot.theta);
    if (split.k != 0) {
      const PauliString& axis = rot.axis;
      int k = split.k;
      absorb_clifford([&axis, k](const PauliString& p) {
        return conjugate_by_pauli_rotation_clifford(p, axis, k);
      });
    }
    if (split.theta_tilde != 0.0) {
      program.rotations.push_back({rot.axis, split.theta_tilde, idx});
    }
  }
  return program;
}

Circuit program_to_circuit(const InteractionPictureProgram& program) {
  Circuit c;
  c.n = program.n;
  c.gates.reserve(program.rotations.size());
  for (auto it = program.rotations.rbegin(); it != program.rotations.rend();
       ++it) {
    c.gates.emplace_back(PauliRotation{it->axis, it->theta});
  }
  return c;
}

nlohmann::json program_to_json(const InteractionPictureProgram& program) {
  nlohmann::json j = circuit_to_json(program_to_circuit(program));
  j["observable"] = format_pauli(program.observable);
  j["sign"] = program.sign;
  return j;
}

InteractionPictureProgram program_from_json(const nlohmann::json& j) {
  if (!j.contains("observable") || !j["observable"].is_string()) {
    throw SchemaError("program.observable: expected a Pauli string");
  }
  if (!j.contains("sign") || !j["sign"].is_number_integer()) {
    throw SchemaError("program.sign: expected +1 or -1");
  }
  int sign = j["sign"].get<int>();
  if (sign != 1 && sign != -1) {
    throw SchemaError("program.sign: expected +1 or -1");
  }
  Circuit c = circuit_from_json(j);
  InteractionPictureProgram program;
  program.n = c.n;
  program.sign = sign;
  try {
    program.observable = parse_pauli(j["observable"].get<std::string>());
  } catch (const ParseError& e) {
    throw SchemaError(std::string("program.observable: ") + e.what());
  }
  if (program.observable.num_qubits() != c.n) {
    throw SchemaError("program.observable: length does not match n");
  }
  program.rotations.reserve(c.gates.size());
  for (std::size_t idx = c.gates.size(); idx-- > 0;) {
    const auto* rot = std::get_if<PauliRotation>(&c.gates[idx]);
    if (rot == nullptr) {
      throw SchemaError("program.gates[" + std::to_string(idx) +
                        "]: compiled programs may only contain rotations");
    }
    program.rotations.push_back({rot->axis, rot->theta, idx});
  }
  return program;
}

}  // namespace cliffpert
