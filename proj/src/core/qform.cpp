#include "core/qform.hpp"

#include <numeric>

namespace cubesum {

QForm::QForm(Int a_, Int b_, Int c_) : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)) {
  if (disc() >= 0) fail_domain("QForm: discriminant must be negative");
  if (a <= 0) fail_domain("QForm: not positive definite");
  Int g = gcd(gcd(a, b), c);
  if (g != 1) fail_domain("QForm: not primitive");
}

bool QForm::operator<(const QForm& o) const {
  if (a != o.a) return a < o.a;
  if (b != o.b) return b < o.b;
  return c < o.c;
}

QForm qf_reduce(Int a, Int b, Int c) {
  if (b * b - 4 * a * c >= 0 || a <= 0) fail_domain("qf_reduce: not positive definite");
  while (true) {
    // Normalize b into (-a, a].
    Int r = mod_floor(b, 2 * a);
    if (r > a) r -= 2 * a; // now in (-a, a]
    if (r != b) {
      Int k = (b - r) / (2 * a);
      c = c - k * b + k * k * a;
      b = r;
    }
    if (a > c) {
      Int na = c, nb = -b, nc = a;
      a = na; b = nb; c = nc;
      continue;
    }
    break;
  }
  if (a == c && b < 0) b = -b;
  return QForm(a, b, c);
}

QForm qf_identity(const Int& D) {
  if (mod_floor(D, 4) == 0) return QForm(Int(1), Int(0), -D / 4);
  if (mod_floor(D, 4) == 1) return QForm(Int(1), Int(1), (1 - D) / 4);
  fail_domain("qf_identity: D must be 0 or 1 mod 4");
}

QForm qf_inverse(const QForm& f) { return qf_reduce(f.a, -f.b, f.c); }

bool qf_is_principal(const QForm& f) { return f == qf_identity(f.disc()); }

Int qf_eval(const QForm& f, const Int& x, const Int& y) {
  return f.a * x * x + f.b * x * y + f.c * y * y;
}

// Equivalent form of g whose leading coefficient is coprime to m.
static QForm qf_coprime_rep(const QForm& g, const Int& m) {
  for (long y = 0; y < 200; ++y) {
    for (long x = 0; x < 200; ++x) {
      if (std::gcd(x, y) != 1) continue;
      for (long sx : {1, -1}) {
        Int xv = sx * x, yv = Int(y);
        Int val = qf_eval(g, xv, yv);
        if (gcd(val, m) != 1) continue;
        // Complete (x, y) to an SL2(Z) matrix [[x, u], [y, v]].
        Int u, v, gg;
        mpz_gcdext(gg.get_mpz_t(), v.get_mpz_t(), u.get_mpz_t(), xv.get_mpz_t(), yv.get_mpz_t());
        u = -u; // x*v - y*u = 1
        Int a2 = val;
        Int b2 = 2 * (g.a * xv * u + g.c * yv * v) + g.b * (xv * v + yv * u);
        Int c2 = qf_eval(g, u, v);
        return QForm(a2, b2, c2);
      }
    }
  }
  fail_internal("qf_coprime_rep: no coprime representation found");
}

QForm qf_compose(const QForm& f, const QForm& g) {
  if (f.disc() != g.disc()) fail_domain("qf_compose: discriminant mismatch");
  Int D = f.disc();
  QForm g2 = qf_coprime_rep(g, f.a);
  // B = b_f mod 2 a_f, B = b_g mod 2 a_g (a's coprime, b's share parity of D).
  Int t = mod_floor((g2.b - f.b) / 2 * invmod(f.a, g2.a), g2.a);
  Int B = f.b + 2 * f.a * t;
  Int A = f.a * g2.a;
  Int C = (B * B - D) / (4 * A);
  return qf_reduce(A, B, C);
}

QForm qf_pow(const QForm& f, long e) {
  QForm base = e < 0 ? qf_inverse(f) : f;
  if (e < 0) e = -e;
  QForm r = qf_identity(f.disc());
  while (e) {
    if (e & 1) r = qf_compose(r, base);
    base = qf_compose(base, base);
    e >>= 1;
  }
  return r;
}

std::vector<QForm> qf_class_group(const Int& D) {
  if (D >= 0) fail_domain("qf_class_group: D must be negative");
  long r4 = mpz_fdiv_ui(D.get_mpz_t(), 4);
  if (r4 != 0 && r4 != 1) fail_domain("qf_class_group: D must be 0 or 1 mod 4");
  std::vector<QForm> out;
  Int amax;
  mpz_sqrt(amax.get_mpz_t(), Int(-D / 3).get_mpz_t());
  for (Int a = 1; a <= amax; ++a) {
    for (Int b = -a + 1; b <= a; ++b) {
      Int num = b * b - D;
      if (!mpz_divisible_p(num.get_mpz_t(), Int(4 * a).get_mpz_t())) continue;
      Int c = num / (4 * a);
      if (c < a) continue;
      if (a == c && b < 0) continue;
      if (gcd(gcd(a, b), c) != 1) continue;
      out.push_back(QForm(a, b, c));
    }
  }
  return out;
}

} // namespace cubesum
