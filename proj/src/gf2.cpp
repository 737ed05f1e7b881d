#include "derand/gf2.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace derand {

unsigned poly_degree(std::uint64_t poly) {
  if (poly == 0) return 0;
  return 63u - static_cast<unsigned>(std::countl_zero(poly));
}

std::uint64_t clmul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t modulus, unsigned degree) {
  const std::uint64_t top = std::uint64_t{1} << degree;
  std::uint64_t r = 0;
  while (b) {
    if (b & 1u) r ^= a;
    b >>= 1;
    a <<= 1;
    if (a & top) a ^= modulus;
  }
  return r;
}

namespace {

// Remainder of a modulo b for arbitrary polynomials (b != 0).
std::uint64_t poly_mod(std::uint64_t a, std::uint64_t b) {
  const unsigned db = poly_degree(b);
  while (a && poly_degree(a) >= db) a ^= b << (poly_degree(a) - db);
  return a;
}

std::uint64_t poly_gcd(std::uint64_t a, std::uint64_t b) {
  while (b) {
    a = poly_mod(a, b);
    std::swap(a, b);
  }
  return a;
}

}  // namespace

// Ben-Or: f of degree d is irreducible iff gcd(f, x^(2^i) - x mod f) = 1 for i <= d/2.
bool is_irreducible(std::uint64_t poly) {
  const unsigned d = poly_degree(poly);
  if (d == 0) return false;
  if (d == 1) return true;
  if (!(poly & 1u)) return false;
  std::uint64_t xp = 0x2;  // x
  for (unsigned i = 1; i <= d / 2; ++i) {
    xp = clmul_mod(xp, xp, poly, d);
    if (poly_gcd(poly, xp ^ 0x2) != 1) return false;
  }
  return true;
}

std::uint64_t smallest_irreducible(unsigned degree) {
  if (degree == 0 || degree > 62) throw std::invalid_argument("field degree out of range: " + std::to_string(degree));
  const std::uint64_t base = std::uint64_t{1} << degree;
  for (std::uint64_t low = 0; low < base; ++low) {
    std::uint64_t p = base | low;
    if (is_irreducible(p)) return p;
  }
  throw std::logic_error("no irreducible polynomial found");
}

BinaryField::BinaryField(unsigned degree) : degree_(degree), modulus_(smallest_irreducible(degree)) {}

BinaryField::BinaryField(unsigned degree, std::uint64_t modulus) : degree_(degree), modulus_(modulus) {
  if (poly_degree(modulus) != degree || !is_irreducible(modulus))
    throw std::invalid_argument("modulus is not an irreducible polynomial of degree " + std::to_string(degree));
}

std::uint64_t BinaryField::pow(std::uint64_t a, std::uint64_t e) const {
  std::uint64_t r = 1;
  while (e) {
    if (e & 1u) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

}  // namespace derand
