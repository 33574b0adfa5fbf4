#ifndef CUBESUM_ECGROUP_HPP
#define CUBESUM_ECGROUP_HPP

#include "core/defs.hpp"
#include "core/eisenstein.hpp"
#include "core/fp.hpp"
#include "core/kfield.hpp"

namespace cubesum {

// Chord-tangent group law on y^2 = x^3 + B over any exact field F.
// F needs +, -, *, /, ==, is_zero(); small integers are built with ec_scal
// so that F_p elements inherit the right modulus.

inline Rat ec_scal(const Rat& model, long n) {
  (void)model;
  return Rat(n);
}
inline KElem ec_scal(const KElem& model, long n) {
  (void)model;
  return KElem(n);
}
inline FpElem ec_scal(const FpElem& model, long n) { return {Int(n), model.p}; }

inline bool ec_is_zero(const Rat& x) { return x == 0; }
inline bool ec_is_zero(const KElem& x) { return x.is_zero(); }
inline bool ec_is_zero(const FpElem& x) { return x.is_zero(); }

template <class F>
struct EPt {
  F x, y;
  bool inf;

  EPt() : inf(true) {}
  EPt(F x_, F y_) : x(std::move(x_)), y(std::move(y_)), inf(false) {}
  static EPt infinity() { return EPt(); }

  bool operator==(const EPt& o) const {
    if (inf || o.inf) return inf == o.inf;
    return x == o.x && y == o.y;
  }
  bool operator!=(const EPt& o) const { return !(*this == o); }
};

template <class F>
bool ec_on_curve(const F& B, const EPt<F>& P) {
  if (P.inf) return true;
  return P.y * P.y == P.x * P.x * P.x + B;
}

template <class F>
EPt<F> ec_neg(const EPt<F>& P) {
  if (P.inf) return P;
  return {P.x, -P.y};
}

template <class F>
EPt<F> ec_add(const F& B, const EPt<F>& P, const EPt<F>& Q) {
  if (P.inf) return Q;
  if (Q.inf) return P;
  F lam;
  if (P.x == Q.x) {
    if (ec_is_zero(P.y + Q.y)) return EPt<F>::infinity();
    // tangent; a4 = 0 for this family
    lam = (ec_scal(B, 3) * P.x * P.x) / (ec_scal(B, 2) * P.y);
  } else {
    lam = (Q.y - P.y) / (Q.x - P.x);
  }
  F x3 = lam * lam - P.x - Q.x;
  F y3 = lam * (P.x - x3) - P.y;
  return {x3, y3};
}

template <class F>
EPt<F> ec_mul(const F& B, const Int& n, const EPt<F>& P) {
  Int m = n;
  EPt<F> base = P;
  if (m < 0) {
    m = -m;
    base = ec_neg(P);
  }
  EPt<F> r = EPt<F>::infinity();
  while (m > 0) {
    if (mpz_odd_p(m.get_mpz_t())) r = ec_add(B, r, base);
    base = ec_add(B, base, base);
    m >>= 1;
  }
  return r;
}

// CM action [u] for u = a + b*omega: [omega](x,y) = (omega*x, y). The caller
// supplies the image of omega in F (a primitive cube root of unity).
template <class F>
EPt<F> ec_cm(const F& B, const Eis& u, const EPt<F>& P, const F& omega) {
  if (!ec_is_zero(omega * omega + omega + ec_scal(B, 1)))
    fail_domain("ec_cm: omega image is not a primitive cube root of unity");
  EPt<F> wP = P.inf ? P : EPt<F>{omega * P.x, P.y};
  return ec_add(B, ec_mul(B, u.a, P), ec_mul(B, u.b, wP));
}

} // namespace cubesum

#endif
