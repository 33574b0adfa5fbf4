#ifndef CUBESUM_KFIELD_HPP
#define CUBESUM_KFIELD_HPP

#include "core/defs.hpp"
#include "core/eisenstein.hpp"

#include <string>

namespace cubesum {

// Element a + b*sqrt(-3) of K = Q(sqrt(-3)), exact rational coordinates.
struct KElem {
  Rat a, b;

  KElem() : a(0), b(0) {}
  KElem(Rat a_, Rat b_) : a(std::move(a_)), b(std::move(b_)) {
    a.canonicalize();
    b.canonicalize();
  }
  explicit KElem(long n) : a(n), b(0) {}

  bool operator==(const KElem& o) const { return a == o.a && b == o.b; }
  bool operator!=(const KElem& o) const { return !(*this == o); }
  bool is_zero() const { return a == 0 && b == 0; }
  bool is_rational() const { return b == 0; }
};

inline KElem operator+(const KElem& x, const KElem& y) { return {x.a + y.a, x.b + y.b}; }
inline KElem operator-(const KElem& x, const KElem& y) { return {x.a - y.a, x.b - y.b}; }
inline KElem operator-(const KElem& x) { return {-x.a, -x.b}; }
inline KElem operator*(const KElem& x, const KElem& y) {
  return {x.a * y.a - 3 * x.b * y.b, x.a * y.b + x.b * y.a};
}
inline KElem kconj(const KElem& x) { return {x.a, -x.b}; }
inline Rat knorm(const KElem& x) { return x.a * x.a + 3 * x.b * x.b; }

inline KElem kinv(const KElem& x) {
  if (x.is_zero()) fail_domain("KElem: division by zero");
  Rat n = knorm(x);
  return {x.a / n, -x.b / n};
}
inline KElem operator/(const KElem& x, const KElem& y) { return x * kinv(y); }

inline KElem k_sqrtm3() { return {Rat(0), Rat(1)}; }
inline KElem k_omega() { return {Rat(-1, 2), Rat(1, 2)}; }
inline KElem k_from_eis(const Eis& z) {
  // a + b*omega = (a - b/2) + (b/2) sqrt(-3)
  return {Rat(z.a) - Rat(z.b) / 2, Rat(z.b) / 2};
}

std::string k_to_string(const KElem& x);

} // namespace cubesum

#endif
