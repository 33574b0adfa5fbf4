#ifndef CUBESUM_CYCLOTOMIC_HPP
#define CUBESUM_CYCLOTOMIC_HPP

#include "core/defs.hpp"
#include "core/eisenstein.hpp"
#include <optional>
#include <vector>

namespace cubesum {

// Exact element of Z[zeta_m] = Z[x]/Phi_m(x). Supported orders: m = 3 and
// m = 12 * 3^i (i >= 0). These cover every character value in the project:
// mu_12 for the multiplicative tables (powers of i and omega), mu_{3^k} for
// additive-character values. For m = 12t, t = 3^i, reduction uses
// Phi_m(x) = x^{4t} - x^{2t} + 1.
class Cyc {
public:
  Cyc() : m_(12), c_(4, Int(0)) {} // zero of order 12
  explicit Cyc(long order);        // zero of the given order

  static long phi(long order);
  static bool order_ok(long order);

  static Cyc zero(long order = 12) { return Cyc(order); }
  static Cyc one(long order = 12);
  static Cyc integer(const Int& n, long order = 12);
  static Cyc zeta(long order, long k = 1); // zeta_order^k

  long order() const { return m_; }
  const std::vector<Int>& coeffs() const { return c_; }

  bool is_zero() const;
  bool operator==(const Cyc& o) const;
  bool operator!=(const Cyc& o) const { return !(*this == o); }

  Cyc operator+(const Cyc& o) const;
  Cyc operator-(const Cyc& o) const;
  Cyc operator-() const;
  Cyc operator*(const Cyc& o) const;
  Cyc pow(long e) const; // e >= 0

  // Re-express in Z[zeta_m2]; requires m | m2 (both supported orders).
  Cyc to_order(long m2) const;

  // Galois map zeta -> zeta^t, gcd(t, m) = 1.
  Cyc galois(long t) const;
  Cyc conj() const { return galois(m_ - 1); }

  // If this equals zeta_m^k for some k, return k (in [0, m)).
  std::optional<long> as_root_of_unity() const;

  std::string str() const;

  // Handy constants inside Z[zeta_12...]: omega, i, sqrt(-3) = 2*omega + 1.
  static Cyc omega(long order = 12);
  static Cyc imag_i(long order = 12);
  static Cyc sqrtm3(long order = 12);
  static Cyc from_eis(const Eis& z, long order = 12); // a + b*omega

private:
  long m_;
  std::vector<Int> c_;
  void reduce(std::vector<Int>& raw) const; // raw has degree < 2*phi(m)
  static Cyc mul_raw(const Cyc& a, const Cyc& b);
};

// Exact rational multiple of a cyclotomic integer: scale * value. Used for
// period sums (weights 1/q^k) and lambda-factor algebra (divisions by sqrt 3).
struct ScaledCyc {
  Rat scale;
  Cyc value;

  ScaledCyc() : scale(0), value(Cyc::zero()) {}
  ScaledCyc(Rat s, Cyc v) : scale(std::move(s)), value(std::move(v)) {}
  static ScaledCyc zero(long order = 12) { return {Rat(0), Cyc::zero(order)}; }

  bool is_zero() const { return scale == 0 || value.is_zero(); }
  ScaledCyc operator+(const ScaledCyc& o) const;
  ScaledCyc operator*(const ScaledCyc& o) const;
  ScaledCyc operator*(const Rat& r) const { return {scale * r, value}; }
  bool operator==(const ScaledCyc& o) const;
  std::string str() const;
};

} // namespace cubesum

#endif
