#pragma once

#include <cstdint>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>

#include <boost/container/small_vector.hpp>

namespace cliffpert {

/// Power of i modulo 4: exponent 0..3 represents 1, i, -1, -i.
class Phase {
 public:
  constexpr Phase() = default;
  constexpr explicit Phase(int exponent) : exponent_(((exponent % 4) + 4) % 4) {}

  constexpr int exponent() const { return exponent_; }
  constexpr bool is_real() const { return (exponent_ & 1) == 0; }
  constexpr bool is_imaginary() const { return (exponent_ & 1) == 1; }

  /// +1 or -1; only meaningful when is_real().
  constexpr int real_sign() const { return exponent_ == 0 ? 1 : -1; }

  constexpr Phase operator*(Phase other) const {
    return Phase(exponent_ + other.exponent_);
  }
  constexpr bool operator==(const Phase&) const = default;

 private:
  int exponent_ = 0;
};

/// n-qubit Pauli string in symplectic form.  Qubit q carries I/X/Z/Y
/// according to (x_q, z_q) = (0,0)/(1,0)/(0,1)/(1,1).  Canonical strings
/// are phase-free; products report their phase separately so hash-map
/// accumulation can key on the masks alone.
///
/// Word packing: qubit q lives in word q/64, bit q%64.
class PauliString {
 public:
  // Two inline words cover n <= 128 without heap traffic; larger strings
  // spill transparently.
  using Mask = boost::container::small_vector<std::uint64_t, 2>;

  PauliString() = default;
  explicit PauliString(std::size_t n) : n_(n), x_(words(n), 0), z_(words(n), 0) {}

  static std::size_t words(std::size_t n) { return (n + 63) / 64; }

  std::size_t num_qubits() const { return n_; }

  bool x_bit(std::size_t q) const { return (x_[q >> 6] >> (q & 63)) & 1u; }
  bool z_bit(std::size_t q) const { return (z_[q >> 6] >> (q & 63)) & 1u; }
  void set_x(std::size_t q, bool v);
  void set_z(std::size_t q, bool v);

  const Mask& x_mask() const { return x_; }
  const Mask& z_mask() const { return z_; }

  bool is_identity() const;
  /// Number of non-identity single-qubit factors.
  std::size_t weight() const;
  /// True iff the string contains only I and Z factors (x mask clear).
  bool is_diagonal() const;

  bool operator==(const PauliString&) const = default;

  friend struct PauliStringHash;
  friend std::pair<PauliString, Phase> multiply(const PauliString& a,
                                                const PauliString& b);
  friend bool commutes(const PauliString& a, const PauliString& b);
  friend bool support_overlaps(const PauliString& a, const PauliString& b);
  /// Total order on (n, z, x); used wherever reports need a canonical
  /// term ordering.
  friend bool lexicographic_less(const PauliString& a, const PauliString& b);

 private:
  std::size_t n_ = 0;
  Mask x_;
  Mask z_;
};

struct PauliStringHash {
  std::size_t operator()(const PauliString& p) const noexcept;
};

/// Canonical product a*b = i^phase * result.  Throws DimensionError on
/// mismatched qubit counts.
std::pair<PauliString, Phase> multiply(const PauliString& a,
                                       const PauliString& b);

/// Symplectic commutation test: true iff [a, b] = 0.
bool commutes(const PauliString& a, const PauliString& b);

/// True iff the supports of a and b share at least one qubit.
bool support_overlaps(const PauliString& a, const PauliString& b);

bool lexicographic_less(const PauliString& a, const PauliString& b);

/// <0...0| p |0...0> without the caller's phase: 1 if p is diagonal
/// (only I/Z factors), else 0.
int vacuum_expectation(const PauliString& p);

/// Parse "IZX..." with qubit 0 leftmost.  Throws ParseError on empty
/// input or characters outside {I,X,Y,Z}.
PauliString parse_pauli(const std::string& text);
std::string format_pauli(const PauliString& p);

}  // namespace cliffpert
