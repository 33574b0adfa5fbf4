#include "core/height.hpp"

#include <numeric>

namespace cubesum {

namespace {

// q = -exp(-pi*sqrt(3)), the nome of the hexagonal lattice
Real hex_nome(mpfr_prec_t prec) {
  Real pi = const_pi(prec);
  return -exp(-(pi * sqrt(Real(3L, prec))));
}

// terms below 2^-(prec+16) are dropped; |q| ~ 0.0043 so ~prec/8 terms
bool negligible(const Real& w, mpfr_prec_t prec) {
  Real bound(1L, 32);
  mpfr_mul_2si(bound.get(), bound.get(), -(long)(prec + 16), MPFR_RNDN);
  return abs(w) < bound;
}

void check_family_B(const Int& B) {
  if (B >= 0) fail_capacity("height: only negative B (the cube-sum family) is supported");
}

}  // namespace

Real real_period(const Int& B, mpfr_prec_t prec) {
  check_family_B(B);
  // (1/3) Gamma(1/6) Gamma(1/2) / Gamma(2/3) * |B|^(-1/6)
  Real six_inv = Real(1L, prec) / 6;
  Real g16 = gamma(six_inv);
  Real g12 = gamma(Real(Rat(1, 2), prec));
  Real g23 = gamma(Real(Rat(2, 3), prec));
  Real beta = g16 * g12 / g23;
  Real scale = pow(Real(Int(-B), prec), -six_inv);
  return beta / 3 * scale;
}

Real wp_real(const Int& B, const Real& t, mpfr_prec_t prec) {
  check_family_B(B);
  Real pi = const_pi(prec);
  Real q = hex_nome(prec);
  Real c = cos(2 * pi * t);
  Real s = sin(pi * t);
  Real one(1L, prec);
  Real S(prec), E(prec);
  Real w = q;
  for (long n = 1;; ++n) {
    Real w2 = w * w;
    Real den = one - 2 * w * c + w2;
    S = S + 2 * w * (c * (one + w2) - 2 * w) / (den * den);
    E = E + Real(n, prec) * w / (one - w);
    if (negligible(w, prec)) break;
    w = w * q;
  }
  Real om = real_period(B, prec);
  Real u = 2 * pi / om;
  Real inner = Real(Rat(1, 12), prec) - one / (4 * s * s) + S - 2 * E;
  return -(u * u) * inner;
}

Real elliptic_log_t(const Int& B, const Rat& x, mpfr_prec_t prec) {
  check_family_B(B);
  Real xv(x, prec);
  Real e1 = cbrt(Real(Int(-B), prec));
  if (!(xv > e1)) fail_domain("elliptic_log_t: x must exceed the real root");
  Real lo(1L, prec), hi(Rat(1, 2), prec);
  mpfr_mul_2si(lo.get(), lo.get(), -(long)prec - 8, MPFR_RNDN);
  for (mpfr_prec_t i = 0; i < prec + 8; ++i) {
    Real mid = (lo + hi) / 2;
    if (wp_real(B, mid, prec) > xv)
      lo = mid;
    else
      hi = mid;
  }
  return (lo + hi) / 2;
}

Real sigma_star_neglog(const Int& B, const Real& t, mpfr_prec_t prec) {
  check_family_B(B);
  Real pi = const_pi(prec);
  Real q = hex_nome(prec);
  Real c = cos(2 * pi * t);
  Real one(1L, prec);
  Real S(prec);
  Real w = q;
  for (;;) {
    Real w2 = w * w;
    S = S + log(one - 2 * w * c + w2) - 2 * log(one - w);
    if (negligible(w, prec)) break;
    w = w * q;
  }
  Real om = real_period(B, prec);
  return -log(om / (2 * pi)) - log(2 * sin(pi * t)) - S;
}

Real naive_height_limit(const Int& B, const EPt<Rat>& P, int k, mpfr_prec_t prec) {
  if (P.inf) fail_domain("naive_height_limit: infinite point");
  Rat Bq(B);
  EPt<Rat> R = P;
  for (int i = 0; i < k; ++i) {
    R = ec_add(Bq, R, R);
    if (R.inf) fail_domain("naive_height_limit: point is torsion");
  }
  Int num = R.x.get_num(), den = R.x.get_den();
  Int m = abs(num) > den ? abs(num) : den;
  Real h = log(Real(m, prec));
  mpfr_div_2si(h.get(), h.get(), 2 * k, MPFR_RNDN);
  return h;
}

long height_multiplier(const Int& n) {
  GlobalData g = global_data(n);
  long m = 1;
  for (const auto& d : g.bad) m = std::lcm(m, d.tamagawa);
  return m;
}

Real canonical_height(const Int& n, const EPt<Rat>& P, mpfr_prec_t prec, long multiplier) {
  if (mpz_even_p(n.get_mpz_t())) fail_capacity("canonical_height: even labels not supported");
  Int B = -432 * n * n;
  Rat Bq(B);
  if (!ec_on_curve(Bq, P)) fail_domain("canonical_height: point not on the curve");
  if (P.inf || ec_mul(Bq, Int(6), P).inf) return Real(0L, prec);

  long m0 = height_multiplier(n);
  long m = multiplier == 0 ? m0 : multiplier;
  if (m % m0 != 0 || m <= 0) fail_domain("canonical_height: multiplier must be a multiple of the Tamagawa lcm");

  mpfr_prec_t wp = prec + 64;
  EPt<Rat> Q = ec_mul(Bq, Int(m), P);
  if (Q.inf) fail_internal("canonical_height: non-torsion point killed by multiplier");

  // archimedean part: -log|sigma*| at the elliptic log of Q
  Real t = elliptic_log_t(B, Q.x, wp);
  Real arch = sigma_star_neglog(B, t, wp);

  // finite part: log of the square root of the denominator of x(Q), plus
  // corrections at the primes where the family model is non-minimal
  // (2 always for odd labels; 3 when 9 | n). At such a prime with scale
  // s = (v(disc_model) - v(disc_min))/12, the local term differs from the
  // plain denominator count by (1/2)max(0, -v+2s) - (1/2)max(0, -v) - s.
  Int den = Q.x.get_den();
  Real fin = log(Real(den, wp)) / 2;
  Int disc_model = -432 * B * B;
  for (long ell : {2L, 3L}) {
    LocalData d = local_data(n, Int(ell));
    long vmodel = valp(disc_model, Int(ell));
    long s = (vmodel - d.vdisc_min) / 12;
    if ((vmodel - d.vdisc_min) % 12 != 0) fail_internal("canonical_height: scale not integral");
    if (s == 0) continue;
    Int num = Q.x.get_num();
    long v = mod_floor(den, Int(ell)) == 0 ? -valp(den, Int(ell)) : valp(num == 0 ? Int(1) : num, Int(ell));
    Rat corr = Rat(std::max(0L, -v + 2 * s), 2) - Rat(std::max(0L, -v), 2) - s;
    fin = fin + Real(corr, wp) * log(Real(ell, wp));
  }

  Real total = (arch + fin) * 2 / (m * m);
  Real out(prec);
  mpfr_set(out.get(), total.get(), MPFR_RNDN);
  return out;
}

}  // namespace cubesum
