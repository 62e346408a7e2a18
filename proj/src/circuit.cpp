#include "cliffpert/circuit.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "cliffpert/errors.hpp"

namespace cliffpert {

namespace {

// Local Pauli code: x | z<<1, so 0=I, 1=X, 2=Z, 3=Y.
struct LocalImage {
  std::uint8_t code;
  std::int8_t sign;
};

// C^dag P C images for single-qubit gates, indexed by local code.
constexpr std::array<LocalImage, 4> kTableH = {{{0, 1}, {2, 1}, {1, 1}, {3, -1}}};
constexpr std::array<LocalImage, 4> kTableS = {{{0, 1}, {3, -1}, {2, 1}, {1, 1}}};
constexpr std::array<LocalImage, 4> kTableSdg = {{{0, 1}, {3, 1}, {2, 1}, {1, -1}}};
constexpr std::array<LocalImage, 4> kTableX = {{{0, 1}, {1, 1}, {2, -1}, {3, -1}}};
constexpr std::array<LocalImage, 4> kTableY = {{{0, 1}, {1, -1}, {2, -1}, {3, 1}}};
constexpr std::array<LocalImage, 4> kTableZ = {{{0, 1}, {1, -1}, {2, 1}, {3, 1}}};

PauliString two_qubit_string(bool xa, bool za, bool xb, bool zb) {
  PauliString p(2);
  p.set_x(0, xa);
  p.set_z(0, za);
  p.set_x(1, xb);
  p.set_z(1, zb);
  return p;
}

// Images of the generators X_a, Z_a, X_b, Z_b under C^dag . C, all with
// sign +1 for the gates in this set.
struct GeneratorImages {
  std::array<PauliString, 4> img;
};

GeneratorImages generator_images(CliffordKind kind) {
  switch (kind) {
    case CliffordKind::CX:
      return {{two_qubit_string(1, 0, 1, 0),    // X_a -> X_a X_b
               two_qubit_string(0, 1, 0, 0),    // Z_a -> Z_a
               two_qubit_string(0, 0, 1, 0),    // X_b -> X_b
               two_qubit_string(0, 1, 0, 1)}};  // Z_b -> Z_a Z_b
    case CliffordKind::CZ:
      return {{two_qubit_string(1, 0, 0, 1),    // X_a -> X_a Z_b
               two_qubit_string(0, 1, 0, 0),    // Z_a -> Z_a
               two_qubit_string(0, 1, 1, 0),    // X_b -> Z_a X_b
               two_qubit_string(0, 0, 0, 1)}};  // Z_b -> Z_b
    case CliffordKind::Swap:
      return {{two_qubit_string(0, 0, 1, 0),    // X_a -> X_b
               two_qubit_string(0, 0, 0, 1),    // Z_a -> Z_b
               two_qubit_string(1, 0, 0, 0),    // X_b -> X_a
               two_qubit_string(0, 1, 0, 0)}};  // Z_b -> Z_a
    default:
      throw SchemaError("generator_images: not a two-qubit gate");
  }
}

// Conjugation table over the 16 local Pauli pairs, built once per gate
// kind by multiplying out generator images.
std::array<LocalImage, 16> build_two_qubit_table(CliffordKind kind) {
  GeneratorImages gens = generator_images(kind);
  std::array<LocalImage, 16> table{};
  for (int idx = 0; idx < 16; ++idx) {
    bool xa = idx & 1, za = idx & 2, xb = idx & 4, zb = idx & 8;
    // Input decomposes as i^v X_a^xa Z_a^za X_b^xb Z_b^zb with one factor
    // of i per Y.
    int exponent = (xa && za ? 1 : 0) + (xb && zb ? 1 : 0);
    PauliString acc(2);
    const bool use[4] = {xa, za, xb, zb};
    for (int gi = 0; gi < 4; ++gi) {
      if (!use[gi]) continue;
      auto [prod, phase] = multiply(acc, gens.img[gi]);
      acc = std::move(prod);
      exponent += phase.exponent();
    }
    Phase total(exponent);
    if (!total.is_real()) {
      throw PhaseAlgebraError("clifford table: non-real conjugation phase");
    }
    std::uint8_t code = static_cast<std::uint8_t>(
        (acc.x_bit(0) ? 1 : 0) | (acc.z_bit(0) ? 2 : 0) |
        (acc.x_bit(1) ? 4 : 0) | (acc.z_bit(1) ? 8 : 0));
    table[idx] = {code, static_cast<std::int8_t>(total.real_sign())};
  }
  return table;
}

const std::array<LocalImage, 4>& single_qubit_table(CliffordKind kind) {
  switch (kind) {
    case CliffordKind::H:
      return kTableH;
    case CliffordKind::S:
      return kTableS;
    case CliffordKind::Sdg:
      return kTableSdg;
    case CliffordKind::X:
      return kTableX;
    case CliffordKind::Y:
      return kTableY;
    case CliffordKind::Z:
      return kTableZ;
    default:
      throw SchemaError("single_qubit_table: not a single-qubit gate");
  }
}

const std::array<LocalImage, 16>& two_qubit_table(CliffordKind kind) {
  static const std::array<LocalImage, 16> cx = build_two_qubit_table(CliffordKind::CX);
  static const std::array<LocalImage, 16> cz = build_two_qubit_table(CliffordKind::CZ);
  static const std::array<LocalImage, 16> swap =
      build_two_qubit_table(CliffordKind::Swap);
  switch (kind) {
    case CliffordKind::CX:
      return cx;
    case CliffordKind::CZ:
      return cz;
    case CliffordKind::Swap:
      return swap;
    default:
      throw SchemaError("two_qubit_table: not a two-qubit gate");
  }
}

}  // namespace

int clifford_arity(CliffordKind kind) {
  switch (kind) {
    case CliffordKind::CX:
    case CliffordKind::CZ:
    case CliffordKind::Swap:
      return 2;
    default:
      return 1;
  }
}

std::string clifford_name(CliffordKind kind) {
  switch (kind) {
    case CliffordKind::H:
      return "h";
    case CliffordKind::S:
      return "s";
    case CliffordKind::Sdg:
      return "sdg";
    case CliffordKind::X:
      return "x";
    case CliffordKind::Y:
      return "y";
    case CliffordKind::Z:
      return "z";
    case CliffordKind::CX:
      return "cx";
    case CliffordKind::CZ:
      return "cz";
    case CliffordKind::Swap:
      return "swap";
  }
  throw SchemaError("clifford_name: unknown kind");
}

void Circuit::validate() const {
  for (std::size_t i = 0; i < gates.size(); ++i) {
    const std::string where = "gates[" + std::to_string(i) + "]";
    if (const auto* c = std::get_if<NamedClifford>(&gates[i])) {
      int arity = clifford_arity(c->kind);
      for (int a = 0; a < arity; ++a) {
        if (c->qubits[a] >= n) {
          throw SchemaError(where + ": qubit index " +
                            std::to_string(c->qubits[a]) + " out of range for n=" +
                            std::to_string(n));
        }
      }
      if (arity == 2 && c->qubits[0] == c->qubits[1]) {
        throw SchemaError(where + ": two-qubit gate with repeated qubit " +
                          std::to_string(c->qubits[0]));
      }
    } else {
      const auto& r = std::get<PauliRotation>(gates[i]);
      if (r.axis.num_qubits() != n) {
        throw SchemaError(where + ": rotation axis length " +
                          std::to_string(r.axis.num_qubits()) +
                          " does not match n=" + std::to_string(n));
      }
      if (r.axis.is_identity()) {
        throw SchemaError(where + ": rotation axis is the identity");
      }
      if (!std::isfinite(r.theta)) {
        throw SchemaError(where + ": rotation angle is not finite");
      }
    }
  }
}

std::size_t Circuit::rotation_count() const {
  std::size_t count = 0;
  for (const auto& g : gates) {
    if (std::holds_alternative<PauliRotation>(g)) ++count;
  }
  return count;
}

SignedPauli conjugate_by_clifford(const PauliString& p, const NamedClifford& g) {
  std::size_t n = p.num_qubits();
  int arity = clifford_arity(g.kind);
  for (int a = 0; a < arity; ++a) {
    if (g.qubits[a] >= n) {
      throw DimensionError("conjugate_by_clifford: gate qubit " +
                           std::to_string(g.qubits[a]) + " out of range for n=" +
                           std::to_string(n));
    }
  }
  SignedPauli out{p, 1};
  if (arity == 1) {
    std::size_t q = g.qubits[0];
    std::uint8_t code = static_cast<std::uint8_t>((p.x_bit(q) ? 1 : 0) |
                                                  (p.z_bit(q) ? 2 : 0));
    LocalImage img = single_qubit_table(g.kind)[code];
    out.string.set_x(q, img.code & 1);
    out.string.set_z(q, img.code & 2);
    out.sign = img.sign;
  } else {
    std::size_t qa = g.qubits[0], qb = g.qubits[1];
    std::uint8_t code = static_cast<std::uint8_t>(
        (p.x_bit(qa) ? 1 : 0) | (p.z_bit(qa) ? 2 : 0) | (p.x_bit(qb) ? 4 : 0) |
        (p.z_bit(qb) ? 8 : 0));
    LocalImage img = two_qubit_table(g.kind)[code];
    out.string.set_x(qa, img.code & 1);
    out.string.set_z(qa, img.code & 2);
    out.string.set_x(qb, img.code & 4);
    out.string.set_z(qb, img.code & 8);
    out.sign = img.sign;
  }
  return out;
}

SignedPauli conjugate_by_pauli_rotation_clifford(const PauliString& p,
                                                 const PauliString& axis,
                                                 int k) {
  if (axis.is_identity()) {
    throw SchemaError("conjugate_by_pauli_rotation_clifford: identity axis");
  }
  k = ((k % 4) + 4) % 4;
  if (k == 0 || commutes(axis, p)) {
    return {p, 1};
  }
  if (k == 2) {
    return {p, -1};
  }
  // k = 1: i * P p;  k = 3: -i * P p.  Both are real for anticommuting
  // Hermitian inputs.
  auto [prod, phase] = multiply(axis, p);
  Phase total = Phase(k == 1 ? 1 : 3) * phase;
  if (!total.is_real()) {
    throw PhaseAlgebraError(
        "conjugate_by_pauli_rotation_clifford: non-real phase");
  }
  return {std::move(prod), total.real_sign()};
}

namespace {

CliffordKind clifford_kind_from_name(const std::string& name,
                                     const std::string& where) {
  if (name == "h") return CliffordKind::H;
  if (name == "s") return CliffordKind::S;
  if (name == "sdg") return CliffordKind::Sdg;
  if (name == "x") return CliffordKind::X;
  if (name == "y") return CliffordKind::Y;
  if (name == "z") return CliffordKind::Z;
  if (name == "cx") return CliffordKind::CX;
  if (name == "cz") return CliffordKind::CZ;
  if (name == "swap") return CliffordKind::Swap;
  throw SchemaError(where + ": unknown gate kind \"" + name + "\"");
}

}  // namespace

Circuit circuit_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("gates")) {
    throw SchemaError("circuit: expected object with \"n\" and \"gates\"");
  }
  if (!j["n"].is_number_unsigned()) {
    throw SchemaError("circuit.n: expected a non-negative integer");
  }
  Circuit c;
  c.n = j["n"].get<std::size_t>();
  if (!j["gates"].is_array()) {
    throw SchemaError("circuit.gates: expected an array");
  }
  for (std::size_t i = 0; i < j["gates"].size(); ++i) {
    const auto& gj = j["gates"][i];
    const std::string where = "circuit.gates[" + std::to_string(i) + "]";
    if (!gj.is_object() || !gj.contains("kind") || !gj["kind"].is_string()) {
      throw SchemaError(where + ": expected object with string \"kind\"");
    }
    std::string kind = gj["kind"].get<std::string>();
    if (kind == "rot") {
      if (!gj.contains("axis") || !gj["axis"].is_string()) {
        throw SchemaError(where + ".axis: expected a Pauli string");
      }
      if (!gj.contains("theta") || !gj["theta"].is_number()) {
        throw SchemaError(where + ".theta: expected a number");
      }
      PauliRotation r;
      try {
        r.axis = parse_pauli(gj["axis"].get<std::string>());
      } catch (const ParseError& e) {
        throw SchemaError(where + ".axis: " + e.what());
      }
      r.theta = gj["theta"].get<double>();
      c.gates.emplace_back(std::move(r));
    } else {
      NamedClifford g;
      g.kind = clifford_kind_from_name(kind, where + ".kind");
      if (!gj.contains("qubits") || !gj["qubits"].is_array() ||
          gj["qubits"].size() != static_cast<std::size_t>(clifford_arity(g.kind))) {
        throw SchemaError(where + ".qubits: expected an array of " +
                          std::to_string(clifford_arity(g.kind)) + " indices");
      }
      for (std::size_t a = 0; a < gj["qubits"].size(); ++a) {
        if (!gj["qubits"][a].is_number_unsigned()) {
          throw SchemaError(where + ".qubits[" + std::to_string(a) +
                            "]: expected a non-negative integer");
        }
        g.qubits[a] = gj["qubits"][a].get<std::uint32_t>();
      }
      c.gates.emplace_back(g);
    }
  }
  c.validate();
  return c;
}

nlohmann::json circuit_to_json(const Circuit& c) {
  nlohmann::json gates = nlohmann::json::array();
  for (const auto& g : c.gates) {
    if (const auto* nc = std::get_if<NamedClifford>(&g)) {
      nlohmann::json qubits = nlohmann::json::array();
      for (int a = 0; a < clifford_arity(nc->kind); ++a) {
        qubits.push_back(nc->qubits[a]);
      }
      gates.push_back({{"kind", clifford_name(nc->kind)}, {"qubits", qubits}});
    } else {
      const auto& r = std::get<PauliRotation>(g);
      gates.push_back(
          {{"kind", "rot"}, {"axis", format_pauli(r.axis)}, {"theta", r.theta}});
    }
  }
  return {{"n", c.n}, {"gates", gates}};
}

}  // namespace cliffpert
