#include "core/eisenstein.hpp"

#include <sstream>

namespace cubesum {

Eis eis_unit(int k) {
  // zeta_6 = -omega^2 = 1 + omega
  k = ((k % 6) + 6) % 6;
  Eis z = eis_one();
  Eis z6{Int(1), Int(1)};
  for (int i = 0; i < k; ++i) z = z * z6;
  return z;
}

bool eis_is_unit(const Eis& x) { return norm(x) == 1; }

std::pair<Eis, Eis> eis_divrem(const Eis& x, const Eis& y) {
  if (y.is_zero()) fail_domain("eis_divrem: division by zero");
  // x/y = x*conj(y)/N(y); round both coordinates to nearest integer.
  Eis t = x * conj(y);
  Int n = norm(y);
  auto rnd = [&](const Int& u) {
    Int q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), u.get_mpz_t(), n.get_mpz_t());
    if (2 * r > n) q += 1;
    return q;
  };
  Eis q{rnd(t.a), rnd(t.b)};
  Eis r = x - q * y;
  // Hexagonal rounding: componentwise rounding can leave norm(r) slightly
  // above norm(y); nudge by a unit step if needed.
  if (norm(r) >= n) {
    static const long dx[] = {1, -1, 0, 0, 1, -1};
    static const long dy[] = {0, 0, 1, -1, 1, -1};
    for (int i = 0; i < 6; ++i) {
      Eis q2{q.a + dx[i], q.b + dy[i]};
      Eis r2 = x - q2 * y;
      if (norm(r2) < norm(r)) { q = q2; r = r2; }
    }
  }
  if (norm(r) >= n) fail_internal("eis_divrem: remainder not reduced");
  return {q, r};
}

bool eis_divides(const Eis& d, const Eis& x) {
  if (d.is_zero()) return x.is_zero();
  return eis_divrem(x, d).second.is_zero();
}

Eis eis_div_exact(const Eis& x, const Eis& d) {
  auto [q, r] = eis_divrem(x, d);
  if (!r.is_zero()) fail_domain("eis_div_exact: not divisible");
  return q;
}

long eis_valuation(const Eis& x, const Eis& w) {
  if (x.is_zero()) fail_domain("eis_valuation: zero");
  long v = 0;
  Eis z = x;
  while (true) {
    auto [q, r] = eis_divrem(z, w);
    if (!r.is_zero()) return v;
    z = q;
    ++v;
  }
}

Eis eis_prime_above(const Int& ell) {
  if (mod_floor(ell, 3) != 1 || !is_prime(ell))
    fail_domain("eis_prime_above: need a prime = 1 mod 3");
  // Search a + b*omega with a^2 - ab + b^2 = ell. b ranges over
  // 1..sqrt(4*ell/3).
  Int bmax;
  mpz_sqrt(bmax.get_mpz_t(), Int(4 * ell / 3).get_mpz_t());
  for (Int b = 1; b <= bmax; ++b) {
    // a^2 - ab + (b^2 - ell) = 0 -> a = (b +- sqrt(4 ell - 3 b^2)) / 2
    Int disc = 4 * ell - 3 * b * b;
    if (disc < 0) break;
    Int s;
    mpz_sqrt(s.get_mpz_t(), disc.get_mpz_t());
    if (s * s != disc) continue;
    if (mod_floor(b + s, 2) == 0) return {(b + s) / 2, b};
    if (mod_floor(b - s, 2) == 0) return {(b - s) / 2, b};
  }
  fail_internal("eis_prime_above: no representation found");
}

bool eis_is_prime(const Eis& w) {
  Int n = norm(w);
  if (n <= 1) return false;
  if (is_prime(n)) return true; // norm a rational prime: degree one (or 3)
  // Inert case: associate of a rational prime q = 2 mod 3.
  Int q;
  mpz_sqrt(q.get_mpz_t(), n.get_mpz_t());
  if (q * q != n || !is_prime(q) || mod_floor(q, 3) != 2) return false;
  return eis_divides(Eis{q, Int(0)}, w);
}

EisFactorization eis_factor(const Eis& z) {
  if (z.is_zero()) fail_domain("eis_factor: zero");
  Int n = norm(z);
  if (mpz_sizeinbase(n.get_mpz_t(), 2) > 64)
    fail_capacity("eis_factor: norm exceeds the trial-division regime");
  EisFactorization out;
  Eis rem = z;
  // Factor the norm by trial division; peel matching Eisenstein primes.
  Int m = n;
  for (Int ell = 2; ell * ell <= m; ++ell) {
    if (!mpz_divisible_p(m.get_mpz_t(), ell.get_mpz_t())) continue;
    while (mpz_divisible_p(m.get_mpz_t(), ell.get_mpz_t())) m /= ell;
    long r3 = mpz_fdiv_ui(ell.get_mpz_t(), 3);
    if (ell == 3) {
      long v = eis_valuation(rem, eis_sqrtm3());
      if (v > 0) {
        out.primes.push_back({eis_sqrtm3(), v});
        for (long i = 0; i < v; ++i) rem = eis_div_exact(rem, eis_sqrtm3());
      }
    } else if (r3 == 2) {
      Eis q{ell, Int(0)};
      long v = eis_valuation(rem, q);
      if (v > 0) {
        out.primes.push_back({q, v});
        for (long i = 0; i < v; ++i) rem = eis_div_exact(rem, q);
      }
    } else {
      Eis w = eis_prime_above(ell);
      for (Eis pr : {w, conj(w)}) {
        long v = eis_valuation(rem, pr);
        if (v > 0) {
          out.primes.push_back({pr, v});
          for (long i = 0; i < v; ++i) rem = eis_div_exact(rem, pr);
        }
      }
    }
  }
  if (m > 1) {
    // Leftover prime norm factor.
    long r3 = mpz_fdiv_ui(m.get_mpz_t(), 3);
    if (r3 == 1) {
      Eis w = eis_prime_above(m);
      for (Eis pr : {w, conj(w)}) {
        long v = eis_valuation(rem, pr);
        if (v > 0) {
          out.primes.push_back({pr, v});
          for (long i = 0; i < v; ++i) rem = eis_div_exact(rem, pr);
        }
      }
    } else {
      // m = q or q^2 with q inert, or 3 (sqrt(-3) part).
      Int q = m;
      Int s;
      mpz_sqrt(s.get_mpz_t(), m.get_mpz_t());
      if (s * s == m) q = s;
      if (q == 3) {
        long v = eis_valuation(rem, eis_sqrtm3());
        out.primes.push_back({eis_sqrtm3(), v});
        for (long i = 0; i < v; ++i) rem = eis_div_exact(rem, eis_sqrtm3());
      } else {
        Eis pr{q, Int(0)};
        long v = eis_valuation(rem, pr);
        if (v > 0) {
          out.primes.push_back({pr, v});
          for (long i = 0; i < v; ++i) rem = eis_div_exact(rem, pr);
        }
      }
    }
  }
  if (!eis_is_unit(rem)) fail_internal("eis_factor: non-unit cofactor survived");
  out.unit = rem;
  return out;
}

std::string eis_to_string(const Eis& x) {
  std::ostringstream os;
  os << x.a.get_str();
  if (x.b != 0) {
    os << (x.b > 0 ? "+" : "-");
    Int ab = abs(x.b);
    if (ab != 1) os << ab.get_str() << "*";
    os << "w";
  }
  return os.str();
}

} // namespace cubesum
