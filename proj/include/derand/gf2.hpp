#pragma once

#include <cstdint>

namespace derand {

// Carry-less polynomial arithmetic over GF(2), polynomials packed into words.
std::uint64_t clmul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t modulus, unsigned degree);
bool is_irreducible(std::uint64_t poly);
unsigned poly_degree(std::uint64_t poly);

// Smallest irreducible polynomial of the given degree (bit i = coefficient of x^i).
std::uint64_t smallest_irreducible(unsigned degree);

// GF(2^degree) with a fixed modulus.
class BinaryField {
 public:
  BinaryField() = default;
  explicit BinaryField(unsigned degree);
  BinaryField(unsigned degree, std::uint64_t modulus);

  unsigned degree() const { return degree_; }
  std::uint64_t modulus() const { return modulus_; }
  std::uint64_t size() const { return std::uint64_t{1} << degree_; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const { return clmul_mod(a, b, modulus_, degree_); }
  std::uint64_t pow(std::uint64_t a, std::uint64_t e) const;

 private:
  unsigned degree_ = 1;
  std::uint64_t modulus_ = 0x3;
};

}  // namespace derand
