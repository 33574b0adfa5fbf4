#ifndef CUBESUM_DEFS_HPP
#define CUBESUM_DEFS_HPP

#include <gmpxx.h>
#include <stdexcept>
#include <string>

namespace cubesum {

using Int = mpz_class;
using Rat = mpq_class;

// Error kinds mirror the contract language used throughout the library:
// domain errors are caller mistakes, capacity errors are size-limit refusals,
// precision errors mean a computation ran out of working digits, and internal
// errors signal a broken invariant (a bug, not bad input).
enum class errkind { domain, capacity, precision, internal };

class error : public std::runtime_error {
public:
  error(errkind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
  errkind kind;
};

[[noreturn]] inline void fail_domain(const std::string& msg) { throw error(errkind::domain, msg); }
[[noreturn]] inline void fail_capacity(const std::string& msg) { throw error(errkind::capacity, msg); }
[[noreturn]] inline void fail_precision(const std::string& msg) { throw error(errkind::precision, msg); }
[[noreturn]] inline void fail_internal(const std::string& msg) { throw error(errkind::internal, msg); }

inline Int pow_int(const Int& b, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

inline Int powmod(const Int& b, const Int& e, const Int& m) {
  Int r;
  mpz_powm(r.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
  return r;
}

inline Int mod_floor(const Int& a, const Int& m) {
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

inline Int invmod(const Int& a, const Int& m) {
  Int r;
  if (!mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()))
    fail_domain("invmod: not invertible");
  return r;
}

inline bool is_prime(const Int& n) { return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0; }

// 3-adic valuation of a nonzero rational (negative for denominators).
inline long val3(const Rat& x) {
  if (x == 0) fail_domain("val3: zero");
  Int num = x.get_num(), den = x.get_den();
  long v = 0;
  while (mpz_divisible_ui_p(num.get_mpz_t(), 3)) { num /= 3; ++v; }
  while (mpz_divisible_ui_p(den.get_mpz_t(), 3)) { den /= 3; --v; }
  return v;
}

inline long valp(const Int& n, const Int& p) {
  if (n == 0) fail_domain("valp: zero");
  Int m = n;
  long v = 0;
  while (mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t())) { m /= p; ++v; }
  return v;
}

} // namespace cubesum

#endif
