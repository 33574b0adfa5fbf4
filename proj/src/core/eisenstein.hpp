#ifndef CUBESUM_EISENSTEIN_HPP
#define CUBESUM_EISENSTEIN_HPP

#include "core/defs.hpp"
#include <vector>
#include <utility>

namespace cubesum {

// Element a + b*omega of Z[omega], omega = (-1+sqrt(-3))/2, omega^2+omega+1=0.
struct Eis {
  Int a, b;

  Eis() : a(0), b(0) {}
  Eis(Int a_, Int b_) : a(std::move(a_)), b(std::move(b_)) {}
  explicit Eis(long n) : a(n), b(0) {}

  bool operator==(const Eis& o) const { return a == o.a && b == o.b; }
  bool is_zero() const { return a == 0 && b == 0; }
};

inline Eis operator+(const Eis& x, const Eis& y) { return {x.a + y.a, x.b + y.b}; }
inline Eis operator-(const Eis& x, const Eis& y) { return {x.a - y.a, x.b - y.b}; }
inline Eis operator-(const Eis& x) { return {-x.a, -x.b}; }
inline Eis operator*(const Eis& x, const Eis& y) {
  // (a+bw)(c+dw) = ac - bd + (ad+bc-bd) w
  return {x.a * y.a - x.b * y.b, x.a * y.b + x.b * y.a - x.b * y.b};
}

inline Int norm(const Eis& x) { return x.a * x.a - x.a * x.b + x.b * x.b; }
inline Eis conj(const Eis& x) { return {x.a - x.b, -x.b}; } // complex conjugation

inline Eis eis_omega() { return {Int(0), Int(1)}; }
inline Eis eis_sqrtm3() { return {Int(1), Int(2)}; } // 1+2w = sqrt(-3)
inline Eis eis_one() { return {Int(1), Int(0)}; }

// The six units, indexed so that unit(k) = (-w^2)^k = zeta_6^k.
Eis eis_unit(int k);
bool eis_is_unit(const Eis& x);

// Euclidean division: q = round(x/y) in the hexagonal lattice, r = x - q y
// with norm(r) < norm(y).
std::pair<Eis, Eis> eis_divrem(const Eis& x, const Eis& y);
bool eis_divides(const Eis& d, const Eis& x);
Eis eis_div_exact(const Eis& x, const Eis& d);

// Valuation of x at the prime w (number of times w divides x).
long eis_valuation(const Eis& x, const Eis& w);

// A prime of Z[omega] above the rational prime ell = 1 mod 3 (norm ell),
// found by direct search; its conjugate is the other prime above ell.
Eis eis_prime_above(const Int& ell);

// Prime factorisation z = unit * prod w_i^{e_i}. Primes are: associates of
// sqrt(-3), rational primes q = 2 mod 3, and degree-one primes of norm
// ell = 1 mod 3. Trial division over the norm; refuses norms >= 2^64.
struct EisFactorization {
  Eis unit;
  std::vector<std::pair<Eis, long>> primes;
};
EisFactorization eis_factor(const Eis& z);

// True if w is prime in Z[omega].
bool eis_is_prime(const Eis& w);

std::string eis_to_string(const Eis& x);

} // namespace cubesum

#endif
