#ifndef CUBESUM_REAL_HPP
#define CUBESUM_REAL_HPP

#include "core/defs.hpp"

#include <mpfr.h>
#include <string>
#include <utility>

namespace cubesum {

// Arbitrary-precision real number (RAII wrapper over mpfr_t). Binary
// operations carry the larger precision of the two operands; round to
// nearest throughout.
class Real {
 public:
  explicit Real(mpfr_prec_t prec = 128) {
    mpfr_init2(v_, prec);
    mpfr_set_zero(v_, 1);
  }
  Real(long x, mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_si(v_, x, MPFR_RNDN);
  }
  Real(const Int& x, mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_z(v_, x.get_mpz_t(), MPFR_RNDN);
  }
  Real(const Rat& x, mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_q(v_, x.get_mpq_t(), MPFR_RNDN);
  }
  Real(const Real& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  Real(Real&& o) noexcept {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_swap(v_, o.v_);
  }
  Real& operator=(const Real& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  mpfr_prec_t prec() const { return mpfr_get_prec(v_); }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  std::string to_string(size_t digits = 30) const {
    char* s = nullptr;
    // mpfr_asprintf handles rounding and exponent formatting
    mpfr_asprintf(&s, "%.*Rg", (int)digits, v_);
    std::string out(s);
    mpfr_free_str(s);
    return out;
  }

  int sign() const { return mpfr_sgn(v_); }
  bool is_zero() const { return mpfr_zero_p(v_); }

  friend bool operator<(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) < 0; }
  friend bool operator>(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) > 0; }
  friend bool operator<=(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) <= 0; }
  friend bool operator>=(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) >= 0; }

 private:
  mpfr_t v_;
};

namespace real_detail {
inline mpfr_prec_t join(const Real& a, const Real& b) {
  return a.prec() > b.prec() ? a.prec() : b.prec();
}
}  // namespace real_detail

#define CUBESUM_REAL_BINOP(op, fn)                                    \
  inline Real operator op(const Real& a, const Real& b) {             \
    Real r(real_detail::join(a, b));                                  \
    fn(r.get(), a.get(), b.get(), MPFR_RNDN);                         \
    return r;                                                         \
  }
CUBESUM_REAL_BINOP(+, mpfr_add)
CUBESUM_REAL_BINOP(-, mpfr_sub)
CUBESUM_REAL_BINOP(*, mpfr_mul)
CUBESUM_REAL_BINOP(/, mpfr_div)
#undef CUBESUM_REAL_BINOP

inline Real operator-(const Real& a) {
  Real r(a.prec());
  mpfr_neg(r.get(), a.get(), MPFR_RNDN);
  return r;
}
inline Real operator*(const Real& a, long b) {
  Real r(a.prec());
  mpfr_mul_si(r.get(), a.get(), b, MPFR_RNDN);
  return r;
}
inline Real operator*(long a, const Real& b) { return b * a; }
inline Real operator/(const Real& a, long b) {
  Real r(a.prec());
  mpfr_div_si(r.get(), a.get(), b, MPFR_RNDN);
  return r;
}
inline Real operator+(const Real& a, long b) {
  Real r(a.prec());
  mpfr_add_si(r.get(), a.get(), b, MPFR_RNDN);
  return r;
}
inline Real operator-(const Real& a, long b) {
  Real r(a.prec());
  mpfr_sub_si(r.get(), a.get(), b, MPFR_RNDN);
  return r;
}

#define CUBESUM_REAL_UNFN(name, fn)     \
  inline Real name(const Real& a) {     \
    Real r(a.prec());                   \
    fn(r.get(), a.get(), MPFR_RNDN);    \
    return r;                           \
  }
CUBESUM_REAL_UNFN(abs, mpfr_abs)
CUBESUM_REAL_UNFN(sqrt, mpfr_sqrt)
CUBESUM_REAL_UNFN(log, mpfr_log)
CUBESUM_REAL_UNFN(exp, mpfr_exp)
CUBESUM_REAL_UNFN(sin, mpfr_sin)
CUBESUM_REAL_UNFN(cos, mpfr_cos)
CUBESUM_REAL_UNFN(gamma, mpfr_gamma)
#undef CUBESUM_REAL_UNFN

inline Real const_pi(mpfr_prec_t prec) {
  Real r(prec);
  mpfr_const_pi(r.get(), MPFR_RNDN);
  return r;
}
inline Real pow(const Real& a, const Real& b) {
  Real r(real_detail::join(a, b));
  mpfr_pow(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}
// cube root of a positive value via mpfr_rootn_ui
inline Real cbrt(const Real& a) {
  Real r(a.prec());
  mpfr_cbrt(r.get(), a.get(), MPFR_RNDN);
  return r;
}

}  // namespace cubesum

#endif
