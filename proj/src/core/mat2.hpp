#ifndef CUBESUM_MAT2_HPP
#define CUBESUM_MAT2_HPP

#include "core/defs.hpp"
#include <string>

namespace cubesum {

// 2x2 matrix over the rationals, exact.
struct Mat2 {
  Rat a, b, c, d; // [[a, b], [c, d]]

  Mat2() : a(1), b(0), c(0), d(1) {}
  Mat2(Rat a_, Rat b_, Rat c_, Rat d_)
      : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {}

  static Mat2 identity() { return Mat2(); }
  static Mat2 diag(const Rat& x, const Rat& y) { return {x, Rat(0), Rat(0), y}; }

  Rat det() const { return a * d - b * c; }
  Rat trace() const { return a + d; }

  Mat2 operator*(const Mat2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
  Mat2 operator+(const Mat2& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
  Mat2 operator-(const Mat2& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }
  Mat2 operator*(const Rat& s) const { return {a * s, b * s, c * s, d * s}; }
  bool operator==(const Mat2& o) const { return a == o.a && b == o.b && c == o.c && d == o.d; }

  Mat2 inverse() const {
    Rat dt = det();
    if (dt == 0) fail_domain("Mat2::inverse: singular");
    Rat i = 1 / dt;
    return {d * i, -b * i, -c * i, a * i};
  }

  Mat2 pow(long e) const {
    Mat2 base = e < 0 ? inverse() : *this;
    if (e < 0) e = -e;
    Mat2 r;
    while (e) {
      if (e & 1) r = r * base;
      base = base * base;
      e >>= 1;
    }
    return r;
  }

  std::string str() const {
    return "[[" + a.get_str() + ", " + b.get_str() + "], [" + c.get_str() + ", " +
           d.get_str() + "]]";
  }
};

} // namespace cubesum

#endif
