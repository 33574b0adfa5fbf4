#include "core/curve.hpp"

#include "core/residue.hpp"

#include <algorithm>
#include <optional>

namespace cubesum {

std::string k_to_string(const KElem& x) {
  if (x.b == 0) return x.a.get_str();
  Rat ab = abs(x.b);
  std::string tail = (ab == 1 ? std::string("sqrt(-3)") : ab.get_str() + "*sqrt(-3)");
  if (x.a == 0) return (x.b > 0 ? "" : "-") + tail;
  return x.a.get_str() + (x.b > 0 ? " + " : " - ") + tail;
}

// ---- point counts ---------------------------------------------------------

long count_points_ap(const Int& B, const Int& ell) {
  if (!is_prime(ell)) fail_domain("count_points_ap: ell must be prime");
  if (mod_floor(6 * B, ell) == 0) fail_domain("count_points_ap: bad reduction at ell");
  if (!ell.fits_slong_p() || ell >= (Int(1) << 31))
    fail_capacity("count_points_ap: ell too large for exhaustive count");
  long p = ell.get_si();
  long b = mod_floor(B, ell).get_si();
  // naive: a = -sum_x legendre(x^3 + B)
  std::vector<signed char> leg(p, -1);
  leg[0] = 0;
  for (long i = 1; i < p; ++i) {
    long s = (long)(((__int128)i * i) % p);
    leg[s] = 1;
  }
  long a_naive = 0;
  for (long x = 0; x < p; ++x) {
    long c = (long)((((__int128)x * x % p) * x + b) % p);
    a_naive -= leg[c];
  }
  if (p % 3 == 2) {
    if (a_naive != 0) fail_internal("count_points_ap: supersingular count nonzero");
    return 0;
  }
  // CM route: a = -Tr( conj((4B/pi)_6) * pi ) with pi primary above ell
  Eis pi = eis_prime_above(ell);
  Eis pp;
  bool found = false;
  for (int u = 0; u < 6 && !found; ++u) {
    Eis c = eis_unit(u) * pi;
    if (mod_floor(c.a - 2, 3) == 0 && mod_floor(c.b, 3) == 0) {
      pp = c;
      found = true;
    }
  }
  if (!found) fail_internal("count_points_ap: no primary generator");
  Cyc chi = sextic_residue(Eis(Int(4 * B), Int(0)), pp);
  auto k = chi.as_root_of_unity();
  if (!k || *k % 2 != 0) fail_internal("count_points_ap: bad sextic symbol");
  Eis z = eis_unit((int)((*k / 2 * 5) % 6)) * pp; // conj of the symbol
  Int tr = 2 * z.a - z.b;
  long a_cm = -tr.get_si();
  if (a_cm != a_naive) fail_internal("count_points_ap: naive and CM counts disagree");
  Int bound = a_naive >= 0 ? Int(a_naive) : Int(-a_naive);
  if (bound * bound > 4 * ell) fail_internal("count_points_ap: Hasse bound violated");
  return a_naive;
}

// ---- Tate's algorithm (odd primes) ----------------------------------------

namespace {

struct WModel {
  Int a1, a2, a3, a4, a6;
};

// valuation with v(0) treated as +infinity
long vp(const Int& x, const Int& p) {
  if (x == 0) return 1000000000L;
  return valp(x, p);
}

struct BInv {
  Int b2, b4, b6, b8, disc;
};

BInv binv(const WModel& m) {
  BInv b;
  b.b2 = m.a1 * m.a1 + 4 * m.a2;
  b.b4 = 2 * m.a4 + m.a1 * m.a3;
  b.b6 = m.a3 * m.a3 + 4 * m.a6;
  b.b8 = m.a1 * m.a1 * m.a6 + 4 * m.a2 * m.a6 - m.a1 * m.a3 * m.a4 + m.a2 * m.a3 * m.a3 -
         m.a4 * m.a4;
  b.disc = -b.b2 * b.b2 * b.b8 - 8 * b.b4 * b.b4 * b.b4 - 27 * b.b6 * b.b6 +
           9 * b.b2 * b.b4 * b.b6;
  return b;
}

// x -> x + r, y -> y + s x + t
WModel translate(const WModel& m, const Int& r, const Int& s, const Int& t) {
  WModel n;
  n.a1 = m.a1 + 2 * s;
  n.a2 = m.a2 - s * m.a1 + 3 * r - s * s;
  n.a3 = m.a3 + r * m.a1 + 2 * t;
  n.a4 = m.a4 - s * m.a3 + 2 * r * m.a2 - (t + r * s) * m.a1 + 3 * r * r - 2 * s * t;
  n.a6 = m.a6 + r * m.a4 + r * r * m.a2 + r * r * r - t * m.a3 - t * t - r * t * m.a1;
  return n;
}

// polynomials over F_p, little-endian coefficients, normalized (no leading 0)
using Poly = std::vector<Int>;

Poly pnorm(Poly f, const Int& p) {
  for (auto& c : f) c = mod_floor(c, p);
  while (!f.empty() && f.back() == 0) f.pop_back();
  return f;
}
Poly pmul(const Poly& f, const Poly& g, const Int& p) {
  if (f.empty() || g.empty()) return {};
  Poly h(f.size() + g.size() - 1, Int(0));
  for (size_t i = 0; i < f.size(); ++i)
    for (size_t j = 0; j < g.size(); ++j) h[i + j] += f[i] * g[j];
  return pnorm(h, p);
}
Poly pmod(Poly f, const Poly& g, const Int& p) {
  f = pnorm(f, p);
  if (g.empty()) fail_internal("pmod: zero divisor");
  Int lead_inv = invmod(g.back(), p);
  while (f.size() >= g.size()) {
    Int c = mod_floor(f.back() * lead_inv, p);
    size_t off = f.size() - g.size();
    for (size_t i = 0; i < g.size(); ++i) f[off + i] -= c * g[i];
    f = pnorm(f, p);
    if (f.empty()) break;
  }
  return f;
}
Poly pgcd(Poly f, Poly g, const Int& p) {
  f = pnorm(f, p);
  g = pnorm(g, p);
  while (!g.empty()) {
    Poly r = pmod(f, g, p);
    f = g;
    g = r;
  }
  if (!f.empty()) { // make monic
    Int inv = invmod(f.back(), p);
    for (auto& c : f) c = mod_floor(c * inv, p);
  }
  return f;
}
Poly pderiv(const Poly& f, const Int& p) {
  Poly d;
  for (size_t i = 1; i < f.size(); ++i) d.push_back(i * f[i]);
  return pnorm(d, p);
}

// number of distinct roots of f in F_p: deg gcd(X^p - X, f)
long proots_count(const Poly& f, const Int& p) {
  Poly r = {Int(1)};
  Int e = p;
  Poly base = pmod({Int(0), Int(1)}, f, p);
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) r = pmod(pmul(r, base, p), f, p);
    base = pmod(pmul(base, base, p), f, p);
    e >>= 1;
  }
  // r = X^p mod f; gcd(r - X, f)
  Poly diff = r;
  if (diff.size() < 2) diff.resize(2, Int(0));
  diff[1] -= 1;
  Poly g = pgcd(diff, f, p);
  return g.empty() ? 0 : (long)g.size() - 1;
}

int legendre(const Int& a, const Int& p) {
  Int am = mod_floor(a, p);
  return mpz_legendre(am.get_mpz_t(), p.get_mpz_t());
}

// the multiple root of a cubic with p | disc (p odd); nullopt if none
std::optional<Int> multiple_root(const Poly& f3, const Int& p) {
  Poly f = pnorm(f3, p);
  if (f.size() != 4) fail_internal("multiple_root: expected a cubic");
  Poly d = pderiv(f, p);
  if (d.empty()) {
    // only p = 3 with x^3 + c: triple root -c (cube root is identity on F_3)
    return mod_floor(-f[0], p);
  }
  Poly g = pgcd(f, d, p);
  if (g.size() <= 1) return std::nullopt;
  if (g.size() == 2) return mod_floor(-g[0], p); // monic linear
  if (g.size() == 3) {
    // (x - x0)^2: root of its derivative
    return mod_floor(-g[1] * invmod(Int(2) * g[2], p), p);
  }
  fail_internal("multiple_root: cubic divides its derivative");
}

LocalData tate_odd(WModel m, const Int& p) {
  if (p == 2) fail_internal("tate_odd: p must be odd");
  Int inv2 = invmod(Int(2), p);
  for (;;) {
    BInv b = binv(m);
    long n = b.disc == 0 ? -1 : vp(b.disc, p);
    if (b.disc == 0) fail_domain("tate: singular curve");
    if (n == 0) return {p, 0, "I0", 1, 0};
    // move the singular point of the reduction to the origin
    {
      Int inv4 = invmod(Int(4), p);
      Poly f = {mod_floor(b.b6 * inv4, p), mod_floor(b.b4 * inv2, p), mod_floor(b.b2 * inv4, p),
                Int(1)};
      auto x0 = multiple_root(f, p);
      if (!x0) fail_internal("tate: no singular point despite p | disc");
      Int t0 = mod_floor(-(m.a1 * *x0 + m.a3) * inv2, p);
      m = translate(m, *x0, Int(0), t0);
      b = binv(m);
    }
    if (mod_floor(b.b2, p) != 0) {
      // multiplicative: I_n
      bool split = legendre(b.b2, p) == 1;
      long c = split ? n : (n % 2 == 0 ? 2 : 1);
      return {p, 1, "I" + std::to_string(n), c, n};
    }
    if (vp(m.a6, p) < 2) return {p, n, "II", 1, n};
    if (vp(b.b8, p) < 3) return {p, n - 1, "III", 2, n};
    if (vp(b.b6, p) < 3) {
      // IV: roots of T^2 + (a3/p) T - a6/p^2, disc = b6/p^2
      long c = legendre(b.b6 / (p * p), p) == 1 ? 3 : 1;
      return {p, n - 2, "IV", c, n};
    }
    // arrange p | a1, a2; p^2 | a3, a4; p^3 | a6
    m = translate(m, Int(0), mod_floor(-m.a1 * inv2, p), Int(0));
    m = translate(m, Int(0), Int(0), mod_floor(-m.a3 * invmod(Int(2), p * p), p * p));
    if (vp(m.a1, p) < 1 || vp(m.a2, p) < 1 || vp(m.a3, p) < 2 || vp(m.a4, p) < 2 ||
        vp(m.a6, p) < 3)
      fail_internal("tate: normalization before step 7 failed");
    Poly P = {mod_floor(m.a6 / (p * p * p), p), mod_floor(m.a4 / (p * p), p),
              mod_floor(m.a2 / p, p), Int(1)};
    auto x0 = multiple_root(P, p);
    if (!x0) {
      long c = 1 + proots_count(P, p);
      return {p, n - 4, "I0*", c, n};
    }
    // shift the multiple root of P to 0
    m = translate(m, p * *x0, Int(0), Int(0));
    bool triple = vp(m.a2, p) >= 2; // P now = T^3 or T^2(T - c)
    if (!triple) {
      // I_m* subprocedure
      if (vp(m.a4, p) < 3 || vp(m.a6, p) < 4)
        fail_internal("tate: bad valuations entering I_m*");
      long idx = 1, yq = 2;
      for (;;) {
        Int A3 = m.a3 / pow_int(p, yq), A6 = m.a6 / pow_int(p, 2 * yq);
        Int disc = A3 * A3 + 4 * A6;
        if (mod_floor(disc, p) != 0) {
          long c = legendre(disc, p) == 1 ? 4 : 2;
          return {p, n - 4 - idx, "I" + std::to_string(idx) + "*", c, n};
        }
        m = translate(m, Int(0), Int(0), pow_int(p, yq) * mod_floor(-A3 * inv2, p));
        ++idx;
        Int A2 = m.a2 / p, A4 = m.a4 / pow_int(p, yq + 1), A62 = m.a6 / pow_int(p, 2 * yq + 1);
        Int disc2 = A4 * A4 - 4 * A2 * A62;
        if (mod_floor(disc2, p) != 0) {
          long c = legendre(disc2, p) == 1 ? 4 : 2;
          return {p, n - 4 - idx, "I" + std::to_string(idx) + "*", c, n};
        }
        m = translate(m, pow_int(p, yq) * mod_floor(-A4 * invmod(2 * A2, p), p), Int(0), Int(0));
        ++idx;
        ++yq;
      }
    }
    // triple root
    if (vp(m.a4, p) < 3 || vp(m.a6, p) < 4)
      fail_internal("tate: bad valuations in triple-root branch");
    {
      Int A3 = m.a3 / (p * p), A6 = m.a6 / pow_int(p, 4);
      Int disc = A3 * A3 + 4 * A6;
      if (mod_floor(disc, p) != 0) {
        long c = legendre(disc, p) == 1 ? 3 : 1;
        return {p, n - 6, "IV*", c, n};
      }
      m = translate(m, Int(0), Int(0), p * p * mod_floor(-A3 * inv2, p));
    }
    if (vp(m.a4, p) == 3) return {p, n - 7, "III*", 2, n};
    if (vp(m.a6, p) == 5) return {p, n - 8, "II*", 1, n};
    // non-minimal: rescale and restart
    if (vp(m.a1, p) < 1 || vp(m.a2, p) < 2 || vp(m.a3, p) < 3 || vp(m.a4, p) < 4 ||
        vp(m.a6, p) < 6)
      fail_internal("tate: non-minimal model with bad valuations");
    m.a1 /= p;
    m.a2 /= p * p;
    m.a3 /= p * p * p;
    m.a4 /= pow_int(p, 4);
    m.a6 /= pow_int(p, 6);
  }
}

void check_cube_free(const Int& n) {
  Int a = abs(n);
  for (Int q = 2; q * q * q <= a && q < 100000; ++q)
    if (mpz_divisible_p(a.get_mpz_t(), Int(q * q * q).get_mpz_t()))
      fail_domain("local_data: label must be cube-free");
  // any remaining cube factor would need a prime > 1e5, i.e. n > 1e15
  if (a > Int("1000000000000000")) fail_capacity("local_data: label too large to certify");
}

} // namespace

LocalData local_data(const Int& n, const Int& ell) {
  if (n == 0) fail_domain("local_data: label must be nonzero");
  if (!is_prime(ell)) fail_domain("local_data: ell must be prime");
  check_cube_free(n);
  Int B = -432 * n * n;
  if (ell == 2) {
    if (mpz_odd_p(n.get_mpz_t())) {
      // B = 16*(-27 n^2), -27 n^2 = 1 mod 4: shift to y^2 + y = x^3 + (B-16)/64,
      // whose discriminant is odd
      return {Int(2), 0, "I0", 1, 0};
    }
    fail_capacity("local_data: even labels at ell = 2 are not supported");
  }
  return tate_odd({Int(0), Int(0), Int(0), Int(0), B}, ell);
}

GlobalData global_data(const Int& n) {
  if (n == 0) fail_domain("global_data: label must be nonzero");
  check_cube_free(n);
  std::vector<Int> primes = {Int(2), Int(3)};
  Int a = abs(n);
  for (Int q = 2; q * q <= a; ++q)
    if (mpz_divisible_p(a.get_mpz_t(), q.get_mpz_t())) {
      while (mpz_divisible_p(a.get_mpz_t(), q.get_mpz_t())) a /= q;
      if (q != 2 && q != 3) primes.push_back(q);
    }
  if (a > 1 && a != 2 && a != 3) primes.push_back(a);
  std::sort(primes.begin(), primes.end());
  GlobalData g;
  g.conductor = 1;
  for (const Int& q : primes) {
    LocalData d = local_data(n, q);
    if (d.cond_exp > 0) {
      g.conductor *= pow_int(q, d.cond_exp);
      g.bad.push_back(d);
    }
  }
  return g;
}

// ---- torsion --------------------------------------------------------------

static std::optional<Int> int_cbrt(const Int& x) {
  Int r;
  mpz_root(r.get_mpz_t(), x.get_mpz_t(), 3);
  if (r * r * r == x) return r;
  if (x < 0) {
    // mpz_root truncates toward zero; recheck the neighbour
    Int r2 = r - 1;
    if (r2 * r2 * r2 == x) return r2;
  }
  return std::nullopt;
}

static std::optional<Int> int_sqrt(const Int& x) {
  if (x < 0) return std::nullopt;
  Int r;
  mpz_sqrt(r.get_mpz_t(), x.get_mpz_t());
  if (r * r == x) return r;
  return std::nullopt;
}

TorsionInfo torsion_subgroup(const Int& B) {
  if (B == 0) fail_domain("torsion_subgroup: B must be nonzero");
  Rat Bq(B);
  std::vector<EPt<Rat>> gens;
  if (auto x2 = int_cbrt(-B)) gens.push_back({Rat(*x2), Rat(0)});
  if (auto s = int_sqrt(B)) {
    if (*s != 0) gens.push_back({Rat(0), Rat(*s)});
  }
  if (auto x3 = int_cbrt(-4 * B)) {
    if (auto s = int_sqrt(-3 * B)) {
      if (*s != 0) gens.push_back({Rat(*x3), Rat(*s)});
    }
  }
  // close under the group law
  std::vector<EPt<Rat>> pts = {EPt<Rat>::infinity()};
  bool grew = true;
  while (grew) {
    grew = false;
    for (size_t i = 0; i < pts.size() && !grew; ++i)
      for (const auto& g : gens) {
        EPt<Rat> s = ec_add(Bq, pts[i], g);
        if (std::find(pts.begin(), pts.end(), s) == pts.end()) {
          pts.push_back(s);
          grew = true;
          break;
        }
      }
  }
  TorsionInfo t;
  t.order = (long)pts.size();
  for (const auto& q : pts)
    if (!q.inf) t.points.push_back(q);
  switch (t.order) {
    case 1: t.structure = "trivial"; break;
    case 2: t.structure = "Z/2"; break;
    case 3: t.structure = "Z/3"; break;
    case 6: t.structure = "Z/6"; break;
    default: fail_internal("torsion_subgroup: unexpected order for j=0");
  }
  return t;
}

// ---- reduction at a normalized prime of K ---------------------------------

SplitPrime normalized_prime(const Int& p) {
  if (!is_prime(p) || mod_floor(p, 3) != 1) fail_domain("normalized_prime: p must split in K");
  Int t = powmod(Int(3), (p - 1) / 3, p);
  if (t == 1) fail_domain("normalized_prime: 3 is a cube mod p, no normalization");
  Eis pi = eis_prime_above(p);
  Int m = residue_deg1(eis_omega(), pi);
  SplitPrime sp;
  sp.p = p;
  if (m == t) {
    sp.frak_p = pi;
  } else {
    sp.frak_p = conj(pi);
    Int m2 = residue_deg1(eis_omega(), sp.frak_p);
    if (m2 != t) fail_internal("normalized_prime: neither prime matches the cube normalization");
  }
  sp.omega_img = t;
  sp.sqrtm3_img = mod_floor(1 + 2 * t, p);
  return sp;
}

static FpElem reduce_rat(const Rat& x, const Int& p) {
  if (mod_floor(x.get_den(), p) == 0)
    fail_domain("reduce_at_prime_of_K: coordinate not p-integral");
  return {mod_floor(x.get_num(), p) * invmod(mod_floor(x.get_den(), p), p), p};
}

EPt<FpElem> reduce_at_prime_of_K(const Int& B, const EPt<KElem>& P, const SplitPrime& sp,
                                 WhichPrime which) {
  const Int& p = sp.p;
  Int s_img = which == WhichPrime::frak_p ? sp.sqrtm3_img : mod_floor(-sp.sqrtm3_img, p);
  if (P.inf) return EPt<FpElem>::infinity();
  FpElem s{s_img, p};
  FpElem x = reduce_rat(P.x.a, p) + reduce_rat(P.x.b, p) * s;
  FpElem y = reduce_rat(P.y.a, p) + reduce_rat(P.y.b, p) * s;
  EPt<FpElem> R{x, y};
  if (!ec_on_curve(FpElem{mod_floor(B, p), p}, R))
    fail_internal("reduce_at_prime_of_K: reduction left the curve");
  return R;
}

} // namespace cubesum
