#include "core/heegner.hpp"

#include "core/classfield.hpp"
#include "core/height.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

namespace cubesum {

// ---- q-expansion -----------------------------------------------------------

namespace {

long coeff_at_prime(const Int& B, long ell) {
  if (ell % 3 != 1) return 0; // ell = 3 or supersingular ell = 2 mod 3
  if (mod_floor(6 * B, Int(ell)) == 0) return 0; // additive reduction
  return count_points_ap(B, Int(ell));
}

std::string cache_path(const std::string& dir, const Int& label) {
  return dir + "/" + label.get_str() + ".csv";
}

bool load_cache(const std::string& path, long N, std::vector<long>& a) {
  std::ifstream in(path);
  if (!in) return false;
  std::vector<long> got(1, 0);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    long n = 0, an = 0;
    if (std::sscanf(line.c_str(), "%ld,%ld", &n, &an) != 2) return false;
    if (n != (long)got.size()) return false;
    got.push_back(an);
  }
  if ((long)got.size() <= N) return false;
  if (got.size() < 2 || got[1] != 1) return false;
  a = std::move(got);
  return true;
}

void store_cache(const std::string& path, const std::vector<long>& a) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) return; // cache is best-effort
  for (size_t n = 1; n < a.size(); ++n) out << n << "," << a[n] << "\n";
}

} // namespace

QExpansion qexp(const Int& label, long N, const std::string& cache_dir) {
  if (label == 0) fail_domain("qexp: label must be nonzero");
  if (N < 1 || N > 1000000) fail_domain("qexp: N out of range (1..10^6)");
  QExpansion out;
  out.label = label;
  out.N = N;

  std::string path;
  if (!cache_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(cache_dir, ec);
    path = cache_path(cache_dir, label);
    std::vector<long> cached;
    if (load_cache(path, N, cached)) {
      cached.resize(N + 1);
      out.a = std::move(cached);
      return out;
    }
  }

  Int B = -432 * label * label;
  std::vector<long> a(N + 1, 0);
  a[1] = 1;
  // smallest prime factor sieve
  std::vector<int32_t> spf(N + 1, 0);
  for (long i = 2; i <= N; ++i) {
    if (spf[i] == 0)
      for (long j = i; j <= N; j += i)
        if (spf[j] == 0) spf[j] = (int32_t)i;
  }
  for (long n = 2; n <= N; ++n) {
    long ell = spf[n];
    long pe = ell, e = 1;
    long m = n / ell;
    while (m % ell == 0) {
      m /= ell;
      pe *= ell;
      ++e;
    }
    if (m > 1) {
      a[n] = a[pe] * a[m]; // multiplicativity; both factors already done
      continue;
    }
    if (e == 1) {
      a[n] = coeff_at_prime(B, ell);
    } else {
      // Hecke recursion at good primes; additive primes have a_ell = 0 and
      // the whole prime-power column vanishes. The minimal model of this
      // family has additive reduction exactly at 3 and at primes dividing
      // the label (the short model y^2 = x^3 - 432 n^2 is non-minimal at 2,
      // where the reduction is in fact good).
      bool good = (mod_floor(label, Int(ell)) != 0) && ell != 3;
      long prev = a[pe / ell];
      long prev2 = (e >= 2) ? a[pe / ell / ell] : 0;
      a[n] = good ? a[ell] * prev - ell * prev2 : 0;
    }
  }
  out.a = std::move(a);
  if (!path.empty()) store_cache(path, out.a);
  return out;
}

// ---- period lattice --------------------------------------------------------

PeriodLattice compute_periods(const Int& B, mpfr_prec_t prec) {
  if (prec < 128) fail_domain("compute_periods: prec must be >= 128");
  PeriodLattice lat;
  lat.B = B;
  lat.omega = real_period(B, prec);
  Real half = lat.omega / 2;
  Real s3 = sqrt(Real(3L, prec));
  lat.w1 = Cplx(lat.omega, Real(prec));
  lat.w2 = Cplx(half, half * s3); // omega * (1 + sqrt(-3)) / 2
  return lat;
}

namespace {

// complex AGM with the "good" square-root choice Re(b/a) >= 0
Cplx agm(Cplx a, Cplx b, mpfr_prec_t prec) {
  Real eps = pow(Real(2L, prec), Real(-(long)prec + 8, prec));
  for (int i = 0; i < (int)prec; ++i) {
    Cplx am = (a + b) / 2;
    Cplx gm = csqrt(a * b);
    // pick the root closer to the arithmetic mean (equivalently |a-b|<=|a+b|)
    if (cabs(am - gm) > cabs(am + gm)) gm = -gm;
    a = am;
    b = gm;
    if (cabs(a - b) < eps * cabs(a)) return a;
  }
  fail_precision("period_agm: AGM did not converge");
}

} // namespace

Real period_agm(const Int& B, mpfr_prec_t prec) {
  if (B >= 0) fail_domain("period_agm: B must be negative");
  // Roots of x^3 + B = 0: e1 = |B|^(1/3) real, e2 = e1*w, e3 = e1*conj(w).
  // In the Y^2 = 4(x-e1)(x-e2)(x-e3) normalization (Y = 2y, z = int dx/2y),
  // the full real period is pi / M(sqrt(e1-e3), sqrt(e1-e2)).
  mpfr_prec_t wp = prec + 32;
  Real e1 = cbrt(Real(Int(-B), wp));
  Real s3 = sqrt(Real(3L, wp));
  Cplx r2 = Cplx(-(e1 / 2), e1 * s3 / 2);        // e1 * omega
  Cplx d2 = Cplx(e1, Real(wp)) - r2;             // e1 - e2
  Cplx d3 = cconj(d2);                           // e1 - e3
  Cplx m = agm(csqrt(d3), csqrt(d2), wp);
  Cplx per = Cplx(const_pi(wp), Real(wp)) / m;
  // the result must be real up to rounding
  if (!(abs(per.im) < abs(per.re) * pow(Real(2L, wp), Real(-(long)prec, wp))))
    fail_internal("period_agm: period came out non-real");
  return abs(per.re);
}

Cplx reduce_mod_lattice(const PeriodLattice& lat, const Cplx& z) {
  // coordinates: z = s*w1 + t*w2 with w1 real; t = Im z / Im w2
  mpfr_prec_t prec = lat.omega.prec();
  Cplx r = z;
  Real t = r.im / lat.w2.im;
  Real tr(prec);
  mpfr_round(tr.get(), t.get());
  r = r - lat.w2 * tr;
  Real s = r.re / lat.w1.re;
  Real sr(prec);
  mpfr_round(sr.get(), s.get());
  r = r - lat.w1 * sr;
  return r;
}

Real lattice_distance(const PeriodLattice& lat, const Cplx& z) {
  Cplx r = reduce_mod_lattice(lat, z);
  Real best = cabs(r);
  // the fundamental parallelogram corner may not be the nearest lattice point
  for (int i = -1; i <= 1; ++i)
    for (int j = -1; j <= 1; ++j) {
      Cplx c = r - lat.w1 * (long)i - lat.w2 * (long)j;
      Real d = cabs(c);
      if (d < best) best = d;
    }
  return best;
}

namespace {

Real hex_nome_abs(mpfr_prec_t prec) { // |q| = exp(-pi sqrt 3)
  return exp(-(const_pi(prec) * sqrt(Real(3L, prec))));
}

// e^{2 pi i z / w1} with the lattice's real period w1
Cplx lattice_u(const PeriodLattice& lat, const Cplx& z) {
  return exp2pii(z / lat.w1.re, lat.omega.prec());
}

long wp_terms(mpfr_prec_t prec) {
  // terms shrink like |q|^n, |q| ~ 0.0043
  return (long)(0.1274 * (double)prec) + 4;
}

} // namespace

Cplx wp_complex(const PeriodLattice& lat, const Cplx& z) {
  mpfr_prec_t prec = lat.omega.prec();
  Cplx zr = reduce_mod_lattice(lat, z);
  Real qa = hex_nome_abs(prec);
  Cplx q = Cplx(-qa, Real(prec)); // nome of the hexagonal lattice
  Cplx u = lattice_u(lat, zr);
  Cplx one(1, prec);
  // P(z) = (2 pi i/w1)^2 [1/12 + u/(1-u)^2
  //        + sum_n q^n u/(1-q^n u)^2 + (q^n/u)/(1-q^n/u)^2 - 2 q^n/(1-q^n)^2]
  Cplx d = one - u;
  Cplx S = Cplx(Real(Rat(1, 12), prec), Real(prec)) + u / (d * d);
  Cplx qn = q;
  long T = wp_terms(prec);
  for (long n = 1; n <= T; ++n) {
    Cplx a = qn * u;
    Cplx b = qn / u;
    Cplx da = one - a, db = one - b, dq = one - qn;
    S = S + a / (da * da) + b / (db * db) - (qn / (dq * dq)) * 2;
    qn = qn * q;
  }
  Real f = 2 * const_pi(prec) / lat.w1.re;
  return S * (-(f * f)); // (2 pi i / w1)^2 = -(2 pi / w1)^2
}

Cplx wp_prime_complex(const PeriodLattice& lat, const Cplx& z) {
  mpfr_prec_t prec = lat.omega.prec();
  Cplx zr = reduce_mod_lattice(lat, z);
  Real qa = hex_nome_abs(prec);
  Cplx q = Cplx(-qa, Real(prec));
  Cplx u = lattice_u(lat, zr);
  Cplx one(1, prec);
  // P'(z) = (2 pi i/w1)^3 [u(1+u)/(1-u)^3
  //         + sum_n q^n u (1+q^n u)/(1-q^n u)^3 - (q^n/u)(1+q^n/u)/(1-q^n/u)^3]
  Cplx d = one - u;
  Cplx S = u * (one + u) / (d * d * d);
  Cplx qn = q;
  long T = wp_terms(prec);
  for (long n = 1; n <= T; ++n) {
    Cplx a = qn * u;
    Cplx b = qn / u;
    Cplx da = one - a, db = one - b;
    S = S + a * (one + a) / (da * da * da) - b * (one + b) / (db * db * db);
    qn = qn * q;
  }
  Real f = 2 * const_pi(prec) / lat.w1.re;
  Cplx cube = Cplx(Real(prec), -(f * f * f)); // (2 pi i / w1)^3 = -i (2 pi/w1)^3
  return S * cube;
}

std::pair<Cplx, Cplx> lattice_invariants(const PeriodLattice& lat) {
  mpfr_prec_t prec = lat.omega.prec();
  Cplx q = Cplx(-hex_nome_abs(prec), Real(prec));
  Cplx one(1, prec);
  // g2 = (2pi/w1)^4 * (1/12) E4, g3 = (2pi/w1)^6 * (1/216) E6 at tau = zeta_6
  Cplx e4 = one, e6 = one;
  Cplx qn = q;
  long T = wp_terms(prec) + 8;
  for (long n = 1; n <= T; ++n) {
    Cplx frac = qn / (one - qn);
    long n2 = n * n;
    e4 = e4 + frac * (240 * n * n2);
    e6 = e6 - frac * (504 * n2 * n2 * n);
    qn = qn * q;
  }
  Real f = 2 * const_pi(prec) / lat.w1.re;
  Real f2 = f * f;
  Real f4 = f2 * f2;
  Cplx g2 = e4 * (f4 / 12);
  Cplx g3 = e6 * (f4 * f2 / 216);
  return {g2, g3};
}

Cplx elliptic_log_complex(const PeriodLattice& lat, const Cplx& x, const Cplx& y) {
  mpfr_prec_t prec = lat.omega.prec();
  Real tol = pow(Real(2L, prec), Real(-(long)prec + 16, prec));
  // coarse grid search for a starting point, then Newton on P(z) - x
  const int G = 36;
  Cplx best(prec);
  Real bestd(prec);
  bool have = false;
  for (int i = 0; i < G; ++i)
    for (int j = 0; j < G; ++j) {
      // avoid the lattice point (pole) at the origin
      if (i == 0 && j == 0) continue;
      Cplx z = lat.w1 * Real(Rat(i, G), prec) + lat.w2 * Real(Rat(j, G), prec);
      Cplx d = wp_complex(lat, z) - x;
      Real dd = cabs(d);
      if (!have || dd < bestd) {
        best = z;
        bestd = dd;
        have = true;
      }
    }
  for (int attempt = 0; attempt < 2; ++attempt) {
    Cplx z = attempt == 0 ? best : -best;
    bool converged = false;
    for (int it = 0; it < 200; ++it) {
      Cplx fx = wp_complex(lat, z) - x;
      Cplx fp = wp_prime_complex(lat, z);
      if (cabs(fp).is_zero()) break;
      Cplx step = fx / fp;
      z = reduce_mod_lattice(lat, z - step);
      if (cabs(step) < tol * lat.omega) {
        converged = true;
        break;
      }
    }
    if (!converged) continue;
    Cplx yz = wp_prime_complex(lat, z) / 2;
    Real scale = Real(1L, prec) + cabs(y);
    if (cabs(yz - y) < tol * scale * 65536) return z;
    z = reduce_mod_lattice(lat, -z);
    yz = wp_prime_complex(lat, z) / 2;
    if (cabs(yz - y) < tol * scale * 65536) return z;
  }
  fail_internal("elliptic_log_complex: Newton refinement failed");
}

// ---- CM points and the class-group action ----------------------------------

Cplx cm_tau(const CMPoint& pt, mpfr_prec_t prec) {
  Int D = -pt.form.disc();
  Real sq = sqrt(Real(D, prec));
  Real a2 = Real(Int(2 * pt.form.a), prec);
  return Cplx(Real(Int(-pt.form.b), prec) / a2, sq / a2);
}

QForm tau_form(const Int& p) {
  if (mod_floor(p, 9) != 4 && mod_floor(p, 9) != 7)
    fail_domain("tau_form: p must be 4 or 7 mod 9");
  // tau = u/v with u = 2pw - 9, v = 9pw - 36; the form (A,B,C) satisfies
  // A u^2 + B uv + C v^2 = 0 in Z[w]: the integer kernel of a 2x3 system.
  Eis u(Int(-9), 2 * p), v(Int(-36), 9 * p);
  Eis e1 = u * u, e2 = u * v, e3 = v * v;
  Int A = e2.a * e3.b - e3.a * e2.b;
  Int B = e3.a * e1.b - e1.a * e3.b;
  Int C = e1.a * e2.b - e2.a * e1.b;
  Int g = gcd(gcd(A, B), C);
  if (g == 0) fail_internal("tau_form: degenerate kernel");
  A /= g;
  B /= g;
  C /= g;
  if (A < 0) {
    A = -A;
    B = -B;
    C = -C;
  }
  QForm f;
  f.a = A;
  f.b = B;
  f.c = C;
  if (f.disc() != -243 * p * p) fail_internal("tau_form: wrong discriminant");
  if (mod_floor(A, 243) != 0) fail_internal("tau_form: level condition failed");
  return f;
}

long HeegnerOrbit::class_index(const QForm& f) const {
  QForm r = qf_reduce(f.a, f.b, f.c);
  for (size_t i = 0; i < classes.size(); ++i)
    if (classes[i] == r) return (long)i;
  fail_internal("HeegnerOrbit: class not in the enumerated group");
}

namespace {

Int round_div(const Int& num, const Int& den) { // den > 0, round to nearest
  Int q;
  Int shifted = 2 * num + den;
  mpz_fdiv_q(q.get_mpz_t(), shifted.get_mpz_t(), Int(2 * den).get_mpz_t());
  return q;
}

// Minimize the leading coefficient over the Gamma_0(243)-class of f (which
// keeps 243 | a and b mod 486): Gauss-reduce the sublattice form
// g(x, t) = f(x, 243 t) while tracking the basis, then pick the smallest
// value attained on a vector (x, 243 t) usable as a Gamma_0(243) column.
QForm gamma0_reduce(const QForm& f) {
  const Int N(243);
  Int D = f.disc();
  Int ga = f.a, gb = f.b * N, gc = f.c * N * N;
  Int v11(1), v12(0), v21(0), v22(1); // basis columns (v11,v21), (v12,v22)
  for (int it = 0; it < 20000; ++it) {
    Int n = round_div(-gb, 2 * ga);
    if (n != 0) {
      gc = ga * n * n + gb * n + gc;
      gb = gb + 2 * ga * n;
      v12 += n * v11;
      v22 += n * v21;
    }
    if (gc < ga) {
      std::swap(ga, gc);
      gb = -gb;
      Int t1 = v11, t2 = v21;
      v11 = v12;
      v21 = v22;
      v12 = -t1;
      v22 = -t2;
    } else {
      break;
    }
  }
  // candidate short vectors in reduced coordinates
  struct Cand {
    Int val, x, t;
  };
  std::vector<Cand> cands;
  for (long xi = -12; xi <= 12; ++xi)
    for (long ti = -12; ti <= 12; ++ti) {
      if (xi == 0 && ti == 0) continue;
      Int x = v11 * xi + v12 * ti;
      Int t = v21 * xi + v22 * ti;
      if (gcd(x, N * t) != 1) continue; // must be a Gamma_0 column
      Int g = N * t;
      Int val = f.a * x * x + f.b * x * g + f.c * g * g;
      cands.push_back({val, x, t});
    }
  if (cands.empty()) fail_internal("gamma0_reduce: no usable short vector");
  std::sort(cands.begin(), cands.end(),
            [](const Cand& a, const Cand& b) { return a.val < b.val; });
  Int x0 = cands[0].x, g0 = N * cands[0].t;
  // complete (x0, g0) to a determinant-1 matrix [[x0, bm], [g0, dm]]
  Int bm, dm, g;
  mpz_gcdext(g.get_mpz_t(), dm.get_mpz_t(), bm.get_mpz_t(), x0.get_mpz_t(),
             g0.get_mpz_t());
  bm = -bm; // x0*dm - g0*bm = 1
  if (x0 * dm - g0 * bm != 1) fail_internal("gamma0_reduce: bad completion");
  QForm out;
  out.a = cands[0].val;
  out.b = 2 * f.a * x0 * bm + f.b * (x0 * dm + bm * g0) + 2 * f.c * g0 * dm;
  out.c = f.a * bm * bm + f.b * bm * dm + f.c * dm * dm;
  // translate b into (-a, a] (steps of 2a preserve b mod 486)
  Int shift = round_div(out.b, 2 * out.a);
  out.b = out.b - 2 * out.a * shift;
  out.c = (out.b * out.b - D) / (4 * out.a);
  if (out.disc() != D || mod_floor(out.a, N) != 0 ||
      mod_floor(out.b - f.b, 2 * N) != 0)
    fail_internal("gamma0_reduce: level structure lost");
  return out;
}

// Transform a class representative so its leading coefficient is coprime to
// "avoid": scan small primitive vectors for the smallest such value.
QForm coprime_rep(const QForm& f, const Int& avoid) {
  Int best_m(0), bx, by;
  for (long x = -21; x <= 21; ++x)
    for (long y = -21; y <= 21; ++y) {
      if (std::gcd(x, y) != 1) continue;
      Int m = qf_eval(f, Int(x), Int(y));
      if (gcd(m, avoid) != 1) continue;
      if (best_m == 0 || m < best_m) {
        best_m = m;
        bx = x;
        by = y;
      }
    }
  if (best_m == 0) fail_internal("coprime_rep: no coprime value in range");
  Int bm, dm, g;
  mpz_gcdext(g.get_mpz_t(), dm.get_mpz_t(), bm.get_mpz_t(), bx.get_mpz_t(),
             by.get_mpz_t());
  bm = -bm; // bx*dm - by*bm = 1
  QForm out;
  out.a = best_m;
  out.b = 2 * f.a * bx * bm + f.b * (bx * dm + bm * by) + 2 * f.c * by * dm;
  out.c = f.a * bm * bm + f.b * bm * dm + f.c * dm * dm;
  if (out.disc() != f.disc()) fail_internal("coprime_rep: bad transform");
  return out;
}

// Dirichlet composition of the level-structure form F (243 | F.a) with a
// coprime form g (gcd(g.a, F.a) = 1): align the middle coefficients by CRT
// and multiply the leading ones. The result again carries the level
// structure and lies in the product class.
QForm concordant_compose(const QForm& F, const QForm& g) {
  Int D = F.disc();
  if (g.disc() != D) fail_internal("concordant_compose: discriminant mismatch");
  if (gcd(F.a, g.a) != 1) fail_internal("concordant_compose: not coprime");
  // B = F.b + 2 F.a s with F.a s = (g.b - F.b)/2 mod g.a
  Int d = (g.b - F.b) / 2;
  Int s = mod_floor(d * invmod(mod_floor(F.a, g.a), g.a), g.a);
  Int B = F.b + 2 * F.a * s;
  Int A = F.a * g.a;
  Int num = B * B - D;
  if (mod_floor(num, 4 * A) != 0) fail_internal("concordant_compose: not concordant");
  QForm out;
  out.a = A;
  out.b = B;
  out.c = num / (4 * A);
  return out;
}

} // namespace

HeegnerOrbit heegner_orbit(const Int& p) {
  QForm tf = tau_form(p); // also validates p mod 9
  HeegnerOrbit orb;
  orb.p = p;
  orb.Delta = -243 * p * p;
  orb.beta = mod_floor(tf.b, 486);

  std::vector<QForm> grp = qf_class_group(orb.Delta);
  // put the principal class first
  std::stable_sort(grp.begin(), grp.end(), [](const QForm& x, const QForm& y) {
    bool px = qf_is_principal(x), py = qf_is_principal(y);
    if (px != py) return px;
    return x < y;
  });
  orb.classes = grp;
  long h = (long)grp.size();
  orb.points.assign(h, CMPoint{});

  QForm base = gamma0_reduce(tf);
  QForm cls0 = qf_reduce(base.a, base.b, base.c);
  QForm cls0_inv = qf_inverse(cls0);
  Int avoid = 6 * base.a * p;
  for (long i = 0; i < h; ++i) {
    // move the base point into class i by composing with a coprime
    // representative of classes[i] * cls0^{-1}
    QForm shiftc = qf_compose(orb.classes[i], cls0_inv);
    if (qf_is_principal(shiftc)) {
      orb.points[i].form = base;
    } else {
      QForm g = coprime_rep(shiftc, avoid);
      orb.points[i].form = gamma0_reduce(concordant_compose(base, g));
    }
    QForm got = qf_reduce(orb.points[i].form.a, orb.points[i].form.b,
                          orb.points[i].form.c);
    if (!(got == orb.classes[i]))
      fail_internal("heegner_orbit: translate landed in the wrong class");
    if (mod_floor(orb.points[i].form.b, 486) != orb.beta)
      fail_internal("heegner_orbit: translate lost the b-class");
  }
  return orb;
}

// Direction pin for the idele/class-action conventions (see the galois
// report): the composed convention is fixed so that the sigma_omega relation
// lands on [w^2] (not [w]) at p = 4 mod 9.
namespace {
constexpr int kActDir = -1; // sigma_[a] sends [tau_b] to [tau_{b a^-1}]
}

CMPoint galois_act(const HeegnerOrbit& orb, const QForm& cls, const CMPoint& pt) {
  long i = orb.class_index(pt.form);
  QForm c = kActDir == 1 ? cls : qf_inverse(cls);
  QForm target = qf_compose(orb.classes[i], c);
  return orb.points[orb.class_index(target)];
}

namespace {

Eis eis_gcd(Eis x, Eis y) {
  while (!y.is_zero()) {
    auto qr = eis_divrem(x, y);
    x = y;
    y = qr.second;
  }
  return x;
}

} // namespace

QForm idele_class(const Int& p, const Eis& u) {
  if (mod_floor(norm(u), 3) == 0) fail_domain("idele_class: u must be a unit at 3");
  Eis lam = idele_unit_lift(u, p);
  Int c = 9 * p;
  // I = lam*O_K intersect O_c, O_c = Z + Z*c*w. In (1, w) coordinates the
  // second condition is just c | (w-coefficient).
  Eis g1 = lam, g2 = lam * eis_omega();
  // solution lattice of s*g1.b + t*g2.b = 0 mod c, spanned by (c,0), (0,c)
  // and (g2.b, -g1.b)/gcd  -- Hermite-reduce the three generators
  Int gb = gcd(g1.b, g2.b);
  std::vector<std::pair<Int, Int>> gens = {{c, Int(0)}, {Int(0), c}};
  if (gb != 0) gens.push_back({g2.b / gb, -g1.b / gb});
  // 2D HNF by repeated gcd elimination on the first coordinate
  // (small, so a simple pass is enough)
  auto reduce2 = [&]() {
    // bring to two vectors (a, b), (0, d)
    while (true) {
      std::sort(gens.begin(), gens.end(), [](const auto& x, const auto& y) {
        Int ax = abs(x.first), ay = abs(y.first);
        if (ax != ay) return ax > ay;
        return abs(x.second) > abs(y.second);
      });
      // eliminate first coordinates until at most one nonzero remains
      bool changed = false;
      for (size_t i = 0; i + 1 < gens.size(); ++i) {
        if (gens[i].first == 0) continue;
        for (size_t j = i + 1; j < gens.size(); ++j) {
          if (gens[j].first == 0) continue;
          Int q = gens[i].first / gens[j].first;
          gens[i].first -= q * gens[j].first;
          gens[i].second -= q * gens[j].second;
          changed = true;
        }
      }
      if (!changed) break;
    }
  };
  reduce2();
  // collect: one vector with nonzero first coord (if any) + gcd of seconds
  Int a1(0), b1(0), d(0);
  for (auto& g : gens) {
    if (g.first != 0 && a1 == 0) {
      a1 = g.first;
      b1 = g.second;
    } else {
      d = gcd(d, g.second);
    }
  }
  if (a1 == 0 || d == 0) fail_internal("idele_class: degenerate solution lattice");
  // basis of I: alpha = a1*g1 + b1*g2, beta = d*g2
  Eis alpha = Eis(a1 * g1.a, a1 * g1.b) + Eis(b1 * g2.a, b1 * g2.b);
  Eis beta = Eis(d * g2.a, d * g2.b);
  // orientation: Im(beta/alpha) > 0, i.e. the w-part of beta*conj(alpha) > 0
  Eis cross = beta * conj(alpha);
  if (cross.b == 0) fail_internal("idele_class: degenerate basis");
  if (cross.b < 0) beta = -beta;
  Int nI = abs(alpha.a * beta.b - alpha.b * beta.a); // = [O_K : I]
  if (mod_floor(nI, c) != 0) fail_internal("idele_class: index not divisible by c");
  nI /= c; // norm as a proper O_c-ideal
  Eis t = alpha * conj(beta);
  Int fa = norm(alpha), fb = 2 * t.a - t.b, fc = norm(beta);
  if (mod_floor(fa, nI) != 0 || mod_floor(fb, nI) != 0 || mod_floor(fc, nI) != 0)
    fail_internal("idele_class: norm form not integral");
  fa /= nI;
  fb /= nI;
  fc /= nI;
  QForm f = qf_reduce(fa, fb, fc);
  if (f.disc() != -3 * c * c) fail_internal("idele_class: wrong form discriminant");
  return f;
}

// ---- modular parametrization ----------------------------------------------

ComplexPoint modular_param(const Cplx& tau, mpfr_prec_t prec,
                           const std::string& cache_dir) {
  if (prec > 512) fail_domain("modular_param: prec must be <= 512");
  double y = tau.im.to_double();
  if (!(y > 2e-4))
    fail_domain("modular_param: Im tau too small (need > 2e-4; use a smaller-a "
                "representative)");
  // |a_n / n| <= 1, so the tail is bounded by |q|^{N+1}/(1-|q|)
  long N = (long)std::ceil((double)(prec + 12) * 0.6931 / (2 * M_PI * y)) + 4;
  QExpansion qe = qexp(Int(9), N, cache_dir);
  Cplx q = exp2pii(tau, prec);
  Cplx z(prec);
  Cplx qn(1, prec);
  for (long n = 1; n <= N; ++n) {
    qn = qn * q;
    if (qe.a[n] != 0) z = z + qn * Real(Rat(qe.a[n], n), prec);
  }
  PeriodLattice lat = compute_periods(Int(-48), prec);
  ComplexPoint out;
  out.z = reduce_mod_lattice(lat, z);
  Real tiny = pow(Real(2L, prec), Real(-(long)prec / 2, prec));
  if (lattice_distance(lat, out.z) < tiny * lat.omega) {
    out.inf = true;
    out.x = Cplx(prec);
    out.y = Cplx(prec);
    return out;
  }
  out.inf = false;
  out.x = wp_complex(lat, out.z);
  out.y = wp_prime_complex(lat, out.z) / 2;
  return out;
}

// ---- cubic class characters ------------------------------------------------

namespace {

// exponent k with val = omega^k, for a cube root of unity in Z[zeta_12]
int omega_exponent(const Cyc& val) {
  for (int k = 0; k < 3; ++k)
    if (val == Cyc::omega().pow(k)) return k;
  fail_internal("class_character: symbol is not a cube root of unity");
}

// (d / (alpha))_3 as an omega-exponent; requires gcd(N(alpha), 3d) = 1
int cubic_symbol_exponent(const Int& d, const Eis& alpha) {
  EisFactorization fac = eis_factor(alpha);
  long total = 0;
  for (auto& [w, e] : fac.primes) {
    int k = omega_exponent(tame_symbol(Eis(d, Int(0)), w, w));
    total += e * k;
  }
  return (int)(((total % 3) + 3) % 3);
}

} // namespace

std::vector<int> class_character(const HeegnerOrbit& orb, const Int& d) {
  Int c = 9 * orb.p;
  long h = (long)orb.classes.size();
  std::vector<int> chi(h, -1);
  Int bad = 3 * orb.p * d;
  auto try_direct = [&](const QForm& f, int& out) -> bool {
    // O_K-principalization of the ideal Z a + Z (-b + 9p sqrt(-3))/2
    Int e = (c - f.b) / 2;
    Eis alpha = eis_gcd(Eis(f.a, Int(0)), Eis(e, c));
    if (gcd(norm(alpha), bad) != 1) return false;
    out = cubic_symbol_exponent(d, alpha);
    return true;
  };
  long remaining = h;
  for (long i = 0; i < h; ++i)
    if (try_direct(orb.classes[i], chi[i])) --remaining;
  // fill the rest by multiplicativity against evaluable classes
  for (int pass = 0; pass < 4 && remaining > 0; ++pass) {
    for (long i = 0; i < h; ++i) {
      if (chi[i] >= 0) continue;
      for (long j = 0; j < h && chi[i] < 0; ++j) {
        if (chi[j] < 0) continue;
        QForm prod = qf_compose(orb.classes[i], orb.classes[j]);
        int v;
        if (try_direct(qf_reduce(prod.a, prod.b, prod.c), v)) {
          chi[i] = ((v - chi[j]) % 3 + 3) % 3;
          --remaining;
        }
      }
    }
  }
  if (remaining > 0) fail_internal("class_character: could not evaluate all classes");
  return chi;
}

// ---- Galois relation battery -----------------------------------------------

namespace {

Cplx omega_numeric(mpfr_prec_t prec) {
  Real half(Rat(-1, 2), prec);
  return Cplx(half, sqrt(Real(3L, prec)) / 2);
}

double dist_of(const PeriodLattice& lat, const Cplx& z) {
  return lattice_distance(lat, z).to_double();
}

} // namespace

std::vector<CheckItem> verify_galois_relations(const Int& p, mpfr_prec_t prec,
                                               const std::string& cache_dir) {
  std::vector<CheckItem> out;
  long pm9 = mod_floor(p, 9).get_si();
  HeegnerOrbit orb = heegner_orbit(p);
  PeriodLattice lat = compute_periods(Int(-48), prec);
  double tol = std::pow(2.0, -0.35 * (double)prec);

  // exact: the cusp (0, 4 sqrt(-3)) is 3-torsion on y^2 = x^3 - 48 over K
  {
    KElem B(-48);
    EPt<KElem> cusp{KElem(0), KElem(Rat(0), Rat(4))};
    bool on = ec_on_curve(B, cusp);
    EPt<KElem> three = ec_mul(B, Int(3), cusp);
    EPt<KElem> one = ec_mul(B, Int(1), cusp);
    bool ok = on && three.inf && !one.inf;
    out.push_back({"cusp-3-torsion-exact", ok, 0.0,
                   "3 * (0, 4 sqrt(-3)) = O by the exact group law"});
  }
  // exact: principal class fixes every point
  {
    bool ok = true;
    QForm id = qf_identity(orb.Delta);
    for (auto& pt : orb.points)
      if (!(galois_act(orb, id, pt).form == pt.form)) ok = false;
    out.push_back({"principal-class-fixes", ok, 0.0, "identity action"});
  }

  QForm tf = tau_form(p);
  long i0 = orb.class_index(tf);
  auto z_of = [&](long idx) {
    return modular_param(cm_tau(orb.points[idx], prec), prec, cache_dir).z;
  };
  Cplx z0 = z_of(i0);
  Cplx w = omega_numeric(prec);
  Cplx w2 = w * w;
  // Cusp image (0, 4 sqrt(-3)): the fixed-point normalization selects the
  // embedding with sqrt(-3) -> -i sqrt(3), so its log is the negative of
  // the log of (0, +4 i sqrt(3)).
  Real y4 = 4 * sqrt(Real(3L, prec));
  Cplx zc = -elliptic_log_complex(lat, Cplx(prec), Cplx(Real(prec), y4));

  {
    // consistency: the cusp log is a 3-division point of the lattice
    double r = dist_of(lat, zc * 3);
    out.push_back({"cusp-log-third-lattice", r < tol, r,
                   "3 * z(0, 4 sqrt(-3)) in the lattice"});
  }

  auto acted_z = [&](const Eis& u) {
    QForm cls = idele_class(p, u);
    CMPoint moved = galois_act(orb, cls, orb.points[i0]);
    return z_of(orb.class_index(moved.form));
  };

  {
    Cplx zs = acted_z(Eis(Int(1), Int(3))); // sigma_{1+3w}
    double r = dist_of(lat, zs - w2 * z0);
    out.push_back({"sigma-1+3w-acts-by-w2", r < tol, r,
                   "f(tau)^{sigma_{1+3w}} = [w^2] f(tau)"});
  }
  {
    Cplx zs = acted_z(eis_omega()); // sigma_w
    Cplx twist = (pm9 == 4) ? w2 * z0 : w * z0;
    double r = dist_of(lat, zs - (twist + zc));
    std::string which = pm9 == 4 ? "[w^2]" : "[w]";
    out.push_back({"sigma-w-acts-by-" + std::string(pm9 == 4 ? "w2" : "w") + "-plus-cusp",
                   r < tol, r,
                   "f(tau)^{sigma_w} = " + which + " f(tau) + (0, 4 sqrt(-3))"});
  }
  if (pm9 == 7) {
    long k = mod_floor((p - 7) / 9, 3).get_si();
    Cplx wk(1, prec);
    for (long i = 0; i < k; ++i) wk = wk * w;
    Cplx target = wk * z0 - zc;
    double r = dist_of(lat, cconj(z0) - target);
    out.push_back({"complex-conjugation", r < tol, r,
                   "conj(f(tau)) = [w^{(p-7)/9}] f(tau) - (0, 4 sqrt(-3))"});
  }
  return out;
}

// ---- L-values --------------------------------------------------------------

namespace {

struct LSeriesData {
  Int conductor;
  Real sqrtN;
  std::vector<long> a;
  long M;
};

LSeriesData lseries_setup(const Int& n, mpfr_prec_t prec, const std::string& cache_dir) {
  LSeriesData d;
  d.conductor = global_data(n).conductor;
  d.sqrtN = sqrt(Real(d.conductor, prec));
  double sN = d.sqrtN.to_double();
  // tail of sum |a_m/m| e^{-2 pi m t / sqrt N} with |a_m|/m <= d(m)/sqrt(m):
  // crude bound |a_m/m| <= 3 for the range involved; geometric tail
  double target = ((double)prec + 16) * 0.6931;
  long M = (long)std::ceil(sN * target / (2 * M_PI)) + 32;
  d.M = M;
  d.a = qexp(n, M, cache_dir).a;
  return d;
}

// g(t) = sum a_m / m * exp(-2 pi m t / sqrt N)
Real lseries_g(const LSeriesData& d, const Rat& t, mpfr_prec_t prec) {
  Real x = -(2 * const_pi(prec) * Real(t, prec) / d.sqrtN);
  Real r = exp(x); // common ratio
  Real rm(1L, prec);
  Real S(prec);
  for (long m = 1; m <= d.M; ++m) {
    rm = rm * r;
    if (d.a[m] != 0) S = S + Real(Rat(d.a[m], m), prec) * rm;
  }
  return S;
}

} // namespace

int functional_sign(const Int& n, mpfr_prec_t prec) {
  LSeriesData d = lseries_setup(n, prec, "");
  // L(1) = g(t) + eps g(1/t) for every t > 0; eliminate L(1) with two t's
  Rat t1(9, 8), t2(4, 3);
  Real num = lseries_g(d, t1, prec) - lseries_g(d, t2, prec);
  Real den = lseries_g(d, Rat(t2.get_den(), t2.get_num()), prec) -
             lseries_g(d, Rat(t1.get_den(), t1.get_num()), prec);
  Real eps = num / den;
  double e = eps.to_double();
  if (std::abs(e - 1.0) < 1e-10) return 1;
  if (std::abs(e + 1.0) < 1e-10) return -1;
  fail_internal("functional_sign: sign did not converge to +-1");
}

Real lvalue(const Int& n, int order, mpfr_prec_t prec, const std::string& cache_dir) {
  if (order != 0 && order != 1) fail_domain("lvalue: order must be 0 or 1");
  int eps = functional_sign(n, prec);
  if ((order == 0 && eps != 1) || (order == 1 && eps != -1))
    fail_domain("lvalue: functional-equation sign does not match the order");
  LSeriesData d = lseries_setup(n, prec, cache_dir);
  if (order == 0) {
    return 2 * lseries_g(d, Rat(1), prec);
  }
  // L'(1) = 2 sum a_m/m E1(2 pi m / sqrt N), E1(x) = -Ei(-x)
  Real c = 2 * const_pi(prec) / d.sqrtN;
  Real S(prec);
  for (long m = 1; m <= d.M; ++m) {
    if (d.a[m] == 0) continue;
    Real x = -(c * m);
    Real e1(prec);
    mpfr_eint(e1.get(), x.get(), MPFR_RNDN);
    S = S - Real(Rat(d.a[m], m), prec) * e1; // E1 = -Ei(-x)
  }
  return 2 * S;
}

// ---- generators of the free part ------------------------------------------

EPt<Rat> cube_sum_generator(const Int& p) {
  // bounded search for integral points on y^2 = x^3 - 432 p^2; the smallest
  // x need not be the generator (on the p = 7 curve (28, 28) = 2 (84, 756)),
  // so collect all hits and keep the one of minimal canonical height
  Int B = -432 * p * p;
  std::vector<EPt<Rat>> hits;
  for (Int x = 1; x <= 20000; ++x) {
    Int y2 = x * x * x + B;
    if (y2 <= 0) continue;
    Int y = sqrt(y2);
    if (y * y == y2) hits.push_back({Rat(x), Rat(y)});
  }
  if (hits.empty())
    fail_capacity("cube_sum_generator: no integral generator found in range");
  size_t best = 0;
  double hbest = 1e300;
  for (size_t i = 0; i < hits.size(); ++i) {
    double hv = canonical_height(p, hits[i], 128).to_double();
    if (hv < hbest) {
      hbest = hv;
      best = i;
    }
  }
  return hits[best];
}

// ---- the Gross-Zagier check ------------------------------------------------

namespace {

struct DoubleLattice {
  double w1r, w2r, w2i;
};

double dreduce_dist(const DoubleLattice& L, double re, double im) {
  double t = im / L.w2i;
  double tr = std::round(t);
  re -= tr * L.w2r;
  im -= tr * L.w2i;
  double s = std::round(re / L.w1r);
  re -= s * L.w1r;
  double best = 1e300;
  for (int i = -1; i <= 1; ++i)
    for (int j = -1; j <= 1; ++j) {
      double rr = re - i * L.w1r - j * L.w2r;
      double ii = im - j * L.w2i;
      double d = std::hypot(rr, ii);
      if (d < best) best = d;
    }
  return best;
}

struct Recognition {
  bool ok = false;
  long num = 0, den = 1;
  int unit = 0;      // zeta_6 exponent
  int tor_i = 0, tor_j = 0; // torsion offset (tor_i w1 + tor_j w2)/6
  double residual = 0;
};

// find b*z = a * zeta_6^j * zP + (i w1 + j w2)/6  mod lattice
Recognition recognize_log(const PeriodLattice& lat, const Cplx& z, const Cplx& zP,
                          long bmax, long amax) {
  DoubleLattice L{lat.w1.re.to_double(), lat.w2.re.to_double(), lat.w2.im.to_double()};
  double zr = z.re.to_double(), zi = z.im.to_double();
  double pr = zP.re.to_double(), pi_ = zP.im.to_double();
  Recognition best;
  double bestd = 1e9;
  for (int u = 0; u < 6; ++u) {
    double c = std::cos(M_PI * u / 3.0), s = std::sin(M_PI * u / 3.0);
    double qr = c * pr - s * pi_, qi = s * pr + c * pi_;
    for (long b = 1; b <= bmax; ++b)
      for (long a = -amax; a <= amax; ++a)
        for (int ti = 0; ti < 6; ++ti)
          for (int tj = 0; tj < 6; ++tj) {
            double rr = b * zr - a * qr - (ti * L.w1r + tj * L.w2r) / 6.0;
            double ii = b * zi - a * qi - tj * L.w2i / 6.0;
            double d = dreduce_dist(L, rr, ii);
            // prefer small (b, |a|) among comparable fits
            if (d < 1e-12 && (bestd > 1e-12 || b < best.den ||
                              (b == best.den && std::abs(a) < std::abs(best.num)))) {
              best = {true, a, b, u, ti, tj, d};
              bestd = d;
            } else if (d < bestd && bestd > 1e-12) {
              bestd = d;
            }
          }
    if (best.ok && best.den == 1) break; // cannot do better than denominator 1
  }
  if (best.ok) {
    // confirm at full precision
    mpfr_prec_t prec = lat.omega.prec();
    Cplx w6 = Cplx(Real(Rat(1, 2), prec), sqrt(Real(3L, prec)) / 2);
    Cplx rot = zP;
    for (int i = 0; i < best.unit; ++i) rot = rot * w6;
    Cplx res = z * best.den - rot * best.num -
               (lat.w1 * best.tor_i + lat.w2 * best.tor_j) / 6;
    best.residual = lattice_distance(lat, res).to_double();
    double tol = std::pow(2.0, -0.35 * (double)prec);
    best.ok = best.residual < tol;
  }
  return best;
}

} // namespace

GZReport gz_check(const Int& p, mpfr_prec_t prec, const std::string& cache_dir) {
  long pm9 = mod_floor(p, 9).get_si();
  if (pm9 != 4 && pm9 != 7) fail_domain("gz_check: p must be 4 or 7 mod 9");
  GZReport rep;
  rep.p = p;
  rep.alpha = (pm9 == 4) ? 0 : -1;
  double tol = std::pow(2.0, -0.35 * (double)prec);

  rep.omega_p = real_period(-432 * p * p, prec);
  rep.omega_3p2 = real_period(Int(-3888) * p * p * p * p, prec);
  rep.omega_9 = real_period(Int(-48), prec);
  Real lp = lvalue(p, 1, prec, cache_dir);
  Real l3 = lvalue(3 * p * p, 0, prec, cache_dir);
  rep.lhs = lp * l3 / (rep.omega_p * rep.omega_3p2);

  HeegnerOrbit orb = heegner_orbit(p);
  rep.orbit_size = (long)orb.classes.size();
  PeriodLattice lat = compute_periods(Int(-48), prec);
  Cplx w = omega_numeric(prec);

  std::vector<int> chi3 = class_character(orb, Int(3));
  std::vector<int> chip = class_character(orb, p);
  long h = rep.orbit_size;

  QForm tf = tau_form(p);
  long i0 = orb.class_index(tf);
  // elliptic logs of the whole orbit, computed once
  std::vector<Cplx> zs;
  zs.reserve(h);
  for (long i = 0; i < h; ++i)
    zs.push_back(modular_param(cm_tau(orb.points[i], prec), prec, cache_dir).z);
  auto z_acted = [&](long cls_idx) {
    CMPoint moved = galois_act(orb, orb.classes[cls_idx], orb.points[i0]);
    return zs[orb.class_index(moved.form)];
  };

  // R_1 = trace over S = ker(chi_3) \cap ker(chi_p) = Gal(H_{9p}/L_{(3,p)})
  std::vector<long> S;
  for (long i = 0; i < h; ++i)
    if (chi3[i] == 0 && chip[i] == 0) S.push_back(i);
  if ((long)S.size() * 9 != h)
    fail_internal("gz_check: joint character kernel has the wrong index");
  Cplx z1(prec);
  for (long i : S) z1 = z1 + z_acted(i);
  z1 = reduce_mod_lattice(lat, z1);
  rep.z1 = z1;

  // R_2 = chi-weighted trace over ker(chi_3 chi_p) = Gal(H_{9p}/L_{(3p)});
  // the character is the restriction of chi_3 (or its conjugate -- the
  // orientation is decided by which one satisfies R_2 = 3 R_1)
  // ker(chi_{3p}) computed from d = 3p directly: building it as the product
  // chi_3 * chi_p would inherit the two independent orientation ambiguities
  // and could select the wrong index-3 subgroup (the one fixing L_{(3p^2)}).
  std::vector<int> chi3p = class_character(orb, 3 * p);
  std::vector<long> ker3p;
  for (long i = 0; i < h; ++i)
    if (chi3p[i] == 0) ker3p.push_back(i);
  if ((long)ker3p.size() * 3 != h)
    fail_internal("gz_check: ker(chi_{3p}) has the wrong index");
  // The cubic character (cbrt(3p))^{sigma-1} is trivial on this subgroup,
  // so R_2 is the plain trace of P_0 over ker(chi_{3p}).
  Cplx z2(prec);
  for (long i : ker3p) z2 = z2 + z_acted(i);
  z2 = reduce_mod_lattice(lat, z2);
  double r2_res = lattice_distance(lat, z2 - z1 * 3).to_double();
  rep.z2 = z2;
  rep.r2_residual = r2_res;
  rep.checks.push_back({"r2-equals-3r1", r2_res < tol, r2_res,
                        "z(R_2) = 3 z(R_1) mod lattice"});

  // generator of E_p(Q) and its image on the y^2 = x^3 - 48 model:
  // (x, y) -> (x / (3p)^{2/3}, y / (3p))
  EPt<Rat> gen = cube_sum_generator(p);
  Real tp = Real(Int(3 * p), prec);
  Real xg = Real(gen.x, prec) / pow(tp, Real(Rat(2, 3), prec));
  Real yg = Real(gen.y, prec) / tp;
  Cplx zP = elliptic_log_complex(lat, Cplx(xg, Real(prec)), Cplx(yg, Real(prec)));

  Recognition rec = recognize_log(lat, z1, zP, 24, 240);
  rep.recognized = rec.ok;
  rep.rec_num = rec.num;
  rep.rec_den = rec.den;
  rep.rec_unit = rec.unit;

  // x-normalized canonical height of the generator (twice the Neron-Tate
  // quadratic form; this is the normalization the height identity uses)
  Real hP = canonical_height(p, gen, prec);

  if (rec.ok) {
    Rat scale2(rec.num * rec.num, rec.den * rec.den);
    rep.hhat_r1 = Real(scale2, prec) * hP;
    Real denom = pow(Real(2L, prec), Real((long)rep.alpha, prec)) * 9 * rep.hhat_r1;
    rep.ratio = rep.lhs / denom;
    double rr = std::abs(rep.ratio.to_double() - 1.0);
    rep.checks.push_back(
        {"gz-ratio", rr < 1e-8, rr,
         "LHS / (2^alpha * 9 * hhat(R_1)) with R_1 = zeta_6^" +
             std::to_string(rec.unit) + " * (" + std::to_string(rec.num) + "/" +
             std::to_string(rec.den) + ") P + torsion"});
    // independent recognition of R_2 gives the quadraticity check
    Recognition rec2 = recognize_log(lat, z2, zP, 24, 240);
    if (rec2.ok) {
      Rat s2(rec2.num * rec2.num, rec2.den * rec2.den);
      Real h2 = Real(s2, prec) * hP;
      double q9 = std::abs((h2 / rep.hhat_r1).to_double() - 9.0);
      rep.checks.push_back({"hhat-r2-is-9-hhat-r1", q9 < 1e-10, q9,
                            "hhat(R_2)/hhat(R_1) from separate recognitions"});
    } else {
      rep.checks.push_back({"hhat-r2-is-9-hhat-r1", false, 1.0,
                            "R_2 recognition failed"});
    }
  } else {
    rep.hhat_r1 = Real(prec);
    rep.ratio = Real(prec);
    rep.checks.push_back({"gz-ratio", false, 1.0,
                          "algebraic recognition failed; partial report "
                          "(analytic LHS and elliptic logs only)"});
  }

  // conjugate-pairing structure: a generator sigma' of Gal(L_{(3p)}/K) should
  // move R_2 to a CM twist [w^{+-1}] R_2; the height pairing identity
  // <R_2, R_2^{sigma'}> = -1/2 hhat_K(R_2) then follows from N(1+w) = 1.
  {
    long gidx = -1;
    for (long i = 0; i < h && gidx < 0; ++i)
      if (chi3p[i] != 0) gidx = i;
    if (gidx >= 0) {
      Cplx zsig(prec);
      for (long i : ker3p) {
        QForm moved = qf_compose(orb.classes[gidx], orb.classes[i]);
        CMPoint img = galois_act(orb, qf_reduce(moved.a, moved.b, moved.c),
                                 orb.points[i0]);
        zsig = zsig + zs[orb.class_index(img.form)];
      }
      double r1 = lattice_distance(lat, zsig - w * z2).to_double();
      double r2 = lattice_distance(lat, zsig - w * w * z2).to_double();
      double r = std::min(r1, r2);
      rep.checks.push_back({"sigma-prime-cm-twist", r < tol, r,
                            "R_2^{sigma'} = [w^{+-1}] R_2, so <R_2, R_2^{sigma'}> "
                            "= -1/2 hhat_K(R_2)"});
    }
  }
  return rep;
}

} // namespace cubesum
