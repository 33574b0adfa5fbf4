#ifndef CUBESUM_LOCAL3_HPP
#define CUBESUM_LOCAL3_HPP

#include "core/defs.hpp"
#include "core/eisenstein.hpp"

namespace cubesum {

// Truncated elements of Q_3 and of its ramified quadratic extension
// K_3 = Q_3(sqrt(-3)). Valuations are counted in the field's own uniformizer:
// 3 for Q_3, sqrt(-3) for K_3 (so an element of Q_3 viewed in K_3 doubles its
// valuation). The unit part is stored modulo 3^prec where prec counts
// surviving 3-adic digits; operations propagate the minimum precision and
// refuse to continue below one digit.
enum class LField { Q3, K3 };

class Local {
public:
  static constexpr long default_prec = 12;

  Local() : f_(LField::Q3), zero_(true), v_(0), prec_(default_prec), u0_(0), u1_(0) {}

  // value = uniformizer^v * (u0 + u1*sqrt(-3)); u1 ignored for Q3.
  static Local make(LField f, long v, const Int& u0, const Int& u1 = 0,
                    long prec = default_prec);
  static Local zero(LField f, long prec = default_prec);
  static Local one(LField f, long prec = default_prec);
  static Local from_int(LField f, const Int& n, long prec = default_prec);
  static Local from_rat(LField f, const Rat& x, long prec = default_prec);
  static Local from_eis(const Eis& z, long prec = default_prec); // into K3
  static Local sqrtm3(long prec = default_prec);                 // uniformizer of K3

  LField field() const { return f_; }
  bool is_zero() const { return zero_; }
  long valuation() const;
  long prec() const { return prec_; }
  // Unit-part coordinates modulo 3^prec (canonical representatives in [0, 3^prec)).
  Int unit0() const { return u0_; }
  Int unit1() const { return u1_; }

  Local operator+(const Local& o) const;
  Local operator-(const Local& o) const;
  Local operator-() const;
  Local operator*(const Local& o) const;
  Local inv() const;
  Local operator/(const Local& o) const { return *this * o.inv(); }
  Local pow(long e) const;

  // Equality of the overlapping known digits (to the coarser precision).
  bool eq(const Local& o) const;

  Local to_K3() const;              // embed Q3 into K3
  bool in_Q3() const;               // lies in Q3 (u1 part vanishes to precision)
  Local galois_conj() const;        // sqrt(-3) -> -sqrt(-3)
  Local norm_to_Q3() const;         // x * conj(x), lands in Q3
  Local trace_to_Q3() const;        // x + conj(x), lands in Q3

  // For K3 units: residue data for character evaluation.
  std::string str() const;

private:
  LField f_;
  bool zero_;
  long v_;
  long prec_;
  Int u0_, u1_;
  void normalize();
};

} // namespace cubesum

#endif
