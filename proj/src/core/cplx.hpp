#ifndef CUBESUM_CPLX_HPP
#define CUBESUM_CPLX_HPP

#include "core/real.hpp"

namespace cubesum {

// Arbitrary-precision complex number on top of Real.
struct Cplx {
  Real re, im;

  explicit Cplx(mpfr_prec_t prec = 128) : re(prec), im(prec) {}
  Cplx(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
  Cplx(long r, mpfr_prec_t prec) : re(r, prec), im(prec) {}

  mpfr_prec_t prec() const { return re.prec() > im.prec() ? re.prec() : im.prec(); }
  std::string to_string(size_t digits = 30) const {
    return re.to_string(digits) + " + " + im.to_string(digits) + "*I";
  }
};

inline Cplx operator+(const Cplx& a, const Cplx& b) { return {a.re + b.re, a.im + b.im}; }
inline Cplx operator-(const Cplx& a, const Cplx& b) { return {a.re - b.re, a.im - b.im}; }
inline Cplx operator-(const Cplx& a) { return {-a.re, -a.im}; }
inline Cplx operator*(const Cplx& a, const Cplx& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline Cplx operator*(const Cplx& a, const Real& s) { return {a.re * s, a.im * s}; }
inline Cplx operator*(const Real& s, const Cplx& a) { return a * s; }
inline Cplx operator*(const Cplx& a, long s) { return {a.re * s, a.im * s}; }
inline Cplx cconj(const Cplx& a) { return {a.re, -a.im}; }
inline Real cnorm2(const Cplx& a) { return a.re * a.re + a.im * a.im; }
inline Real cabs(const Cplx& a) {
  Real r(a.prec());
  mpfr_hypot(r.get(), a.re.get(), a.im.get(), MPFR_RNDN);
  return r;
}
inline Cplx operator/(const Cplx& a, const Real& s) { return {a.re / s, a.im / s}; }
inline Cplx operator/(const Cplx& a, const Cplx& b) {
  Real n = cnorm2(b);
  if (n.is_zero()) fail_domain("Cplx: division by zero");
  return (a * cconj(b)) / n;
}
inline Cplx operator/(const Cplx& a, long s) { return {a.re / s, a.im / s}; }

// principal square root (branch cut on the negative real axis)
inline Cplx csqrt(const Cplx& a) {
  Real r = cabs(a);
  mpfr_prec_t p = a.prec();
  if (r.is_zero()) return Cplx(p);
  Real u = sqrt((r + a.re) / 2);
  if (u.is_zero()) {  // negative real axis
    return {Real(p), sqrt(r)};
  }
  Real v = a.im / (2 * u);
  return {u, v};
}

// exp(2 pi i z), the workhorse for all q-series
inline Cplx exp2pii(const Cplx& z, mpfr_prec_t prec) {
  Real two_pi = const_pi(prec) * 2;
  Real mod = exp(-(two_pi * z.im));
  Real ang = two_pi * z.re;
  Real c(prec), s(prec);
  mpfr_sin_cos(s.get(), c.get(), ang.get(), MPFR_RNDN);
  return {mod * c, mod * s};
}

}  // namespace cubesum

#endif
