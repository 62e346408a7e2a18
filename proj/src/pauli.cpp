#include "cliffpert/pauli.hpp"

#include <bit>

#include "cliffpert/errors.hpp"

namespace cliffpert {

void PauliString::set_x(std::size_t q, bool v) {
  std::uint64_t bit = 1ull << (q & 63);
  x_[q >> 6] = (x_[q >> 6] & ~bit) | (v ? bit : 0);
}

void PauliString::set_z(std::size_t q, bool v) {
  std::uint64_t bit = 1ull << (q & 63);
  z_[q >> 6] = (z_[q >> 6] & ~bit) | (v ? bit : 0);
}

bool PauliString::is_identity() const {
  for (std::size_t w = 0; w < x_.size(); ++w) {
    if (x_[w] | z_[w]) return false;
  }
  return true;
}

std::size_t PauliString::weight() const {
  std::size_t w = 0;
  for (std::size_t i = 0; i < x_.size(); ++i) {
    w += std::popcount(x_[i] | z_[i]);
  }
  return w;
}

bool PauliString::is_diagonal() const {
  for (std::uint64_t word : x_) {
    if (word) return false;
  }
  return true;
}

std::size_t PauliStringHash::operator()(const PauliString& p) const noexcept {
  // FNV-1a over both masks; strings of equal n have equal word counts.
  std::uint64_t h = 14695981039346656037ull;
  auto mix = [&h](std::uint64_t v) {
    h ^= v;
    h *= 1099511628211ull;
  };
  for (std::uint64_t w : p.x_) mix(w);
  for (std::uint64_t w : p.z_) mix(w);
  return static_cast<std::size_t>(h);
}

std::pair<PauliString, Phase> multiply(const PauliString& a,
                                       const PauliString& b) {
  if (a.n_ != b.n_) {
    throw DimensionError("pauli multiply: operand qubit counts differ");
  }
  PauliString r(a.n_);
  // Writing each factor as i^(x.z) X^x Z^z, the product phase exponent per
  // qubit is  x1 z1 + x2 z2 + 2 z1 x2 - (x1^x2)(z1^z2),  summed mod 4.
  int exponent = 0;
  for (std::size_t w = 0; w < r.x_.size(); ++w) {
    std::uint64_t x1 = a.x_[w], z1 = a.z_[w];
    std::uint64_t x2 = b.x_[w], z2 = b.z_[w];
    exponent += std::popcount(x1 & z1);
    exponent += std::popcount(x2 & z2);
    exponent += 2 * std::popcount(z1 & x2);
    exponent -= std::popcount((x1 ^ x2) & (z1 ^ z2));
    r.x_[w] = x1 ^ x2;
    r.z_[w] = z1 ^ z2;
  }
  return {std::move(r), Phase(exponent)};
}

bool commutes(const PauliString& a, const PauliString& b) {
  if (a.n_ != b.n_) {
    throw DimensionError("pauli commutes: operand qubit counts differ");
  }
  int parity = 0;
  for (std::size_t w = 0; w < a.x_.size(); ++w) {
    parity ^= std::popcount(a.x_[w] & b.z_[w]) & 1;
    parity ^= std::popcount(a.z_[w] & b.x_[w]) & 1;
  }
  return parity == 0;
}

bool support_overlaps(const PauliString& a, const PauliString& b) {
  if (a.n_ != b.n_) {
    throw DimensionError("pauli support_overlaps: operand qubit counts differ");
  }
  for (std::size_t w = 0; w < a.x_.size(); ++w) {
    if ((a.x_[w] | a.z_[w]) & (b.x_[w] | b.z_[w])) return true;
  }
  return false;
}

bool lexicographic_less(const PauliString& a, const PauliString& b) {
  if (a.n_ != b.n_) return a.n_ < b.n_;
  for (std::size_t w = a.x_.size(); w-- > 0;) {
    if (a.z_[w] != b.z_[w]) return a.z_[w] < b.z_[w];
    if (a.x_[w] != b.x_[w]) return a.x_[w] < b.x_[w];
  }
  return false;
}

int vacuum_expectation(const PauliString& p) {
  return p.is_diagonal() ? 1 : 0;
}

PauliString parse_pauli(const std::string& text) {
  if (text.empty()) {
    throw ParseError("pauli parse: empty string");
  }
  PauliString p(text.size());
  for (std::size_t q = 0; q < text.size(); ++q) {
    switch (text[q]) {
      case 'I':
        break;
      case 'X':
        p.set_x(q, true);
        break;
      case 'Y':
        p.set_x(q, true);
        p.set_z(q, true);
        break;
      case 'Z':
        p.set_z(q, true);
        break;
      default:
        throw ParseError(std::string("pauli parse: invalid character '") +
                         text[q] + "' at position " + std::to_string(q));
    }
  }
  return p;
}

std::string format_pauli(const PauliString& p) {
  std::string s(p.num_qubits(), 'I');
  for (std::size_t q = 0; q < p.num_qubits(); ++q) {
    bool x = p.x_bit(q), z = p.z_bit(q);
    if (x && z) {
      s[q] = 'Y';
    } else if (x) {
      s[q] = 'X';
    } else if (z) {
      s[q] = 'Z';
    }
  }
  return s;
}

}  // namespace cliffpert
