#ifndef CUBESUM_FP_HPP
#define CUBESUM_FP_HPP

#include "core/defs.hpp"

namespace cubesum {

// Element of the prime field F_p; carries its modulus.
struct FpElem {
  Int v, p;

  FpElem() : v(0), p(0) {}
  FpElem(Int v_, Int p_) : v(mod_floor(v_, p_)), p(std::move(p_)) {}

  bool operator==(const FpElem& o) const { return p == o.p && v == o.v; }
  bool operator!=(const FpElem& o) const { return !(*this == o); }
  bool is_zero() const { return v == 0; }
};

inline void fp_check(const FpElem& x, const FpElem& y) {
  if (x.p != y.p) fail_domain("FpElem: modulus mismatch");
}
inline FpElem operator+(const FpElem& x, const FpElem& y) {
  fp_check(x, y);
  return {x.v + y.v, x.p};
}
inline FpElem operator-(const FpElem& x, const FpElem& y) {
  fp_check(x, y);
  return {x.v - y.v, x.p};
}
inline FpElem operator-(const FpElem& x) { return {-x.v, x.p}; }
inline FpElem operator*(const FpElem& x, const FpElem& y) {
  fp_check(x, y);
  return {x.v * y.v, x.p};
}
inline FpElem fp_inv(const FpElem& x) { return {invmod(x.v, x.p), x.p}; }
inline FpElem operator/(const FpElem& x, const FpElem& y) { return x * fp_inv(y); }

} // namespace cubesum

#endif
