#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "core/classfield.hpp"
#include "core/residue.hpp"

#include <random>

using namespace cubesum;

static Cyc W(int k) { return Cyc::omega().pow(((k % 3) + 3) % 3); }

static Eis rand_eis(std::mt19937& rng, long lim) {
  std::uniform_int_distribution<long> d(-lim, lim);
  while (true) {
    Eis z{Int(d(rng)), Int(d(rng))};
    if (!z.is_zero()) return z;
  }
}

TEST_CASE("tame symbol: units and the worked example") {
  Eis w(1, Int(3)); // norm 7
  CHECK(tame_symbol(Eis(5), Eis(2), w) == Cyc::one(12));
  // (1+3w, 3) at (1+3w): the class of 3^{-2} in the residue field F_7
  Cyc v = tame_symbol(Eis(1, Int(3)), Eis(3), w);
  CHECK(v == W(2));
  // and the oracle: the symbol is the class of 3^{-2} = 4 mod 7
  Int img = invmod(Int(9), Int(7));
  Int om = residue_deg1(eis_omega(), w);
  auto k = v.as_root_of_unity();
  REQUIRE(k.has_value());
  CHECK(*k % 4 == 0); // cube root of unity inside mu_12
  CHECK(powmod(om, Int(*k / 4), Int(7)) == img);
}

TEST_CASE("tame symbol against residue-field exponentiation, random data") {
  std::mt19937 rng(77);
  for (Int ell : {Int(7), Int(13), Int(31)}) {
    Eis w = eis_prime_above(ell);
    Int om = residue_deg1(eis_omega(), w);
    for (int trial = 0; trial < 25; ++trial) {
      Eis a = rand_eis(rng, 40), b = rand_eis(rng, 40);
      long va = eis_valuation(a, w), vb = eis_valuation(b, w);
      Eis a2 = a, b2 = b;
      for (long i = 0; i < va; ++i) a2 = eis_div_exact(a2, w);
      for (long i = 0; i < vb; ++i) b2 = eis_div_exact(b2, w);
      Int t = 1;
      if ((va * vb) % 2 != 0) t = ell - 1;
      t = mod_floor(t * powmod(residue_deg1(a2, w), Int(vb), ell), ell);
      t = mod_floor(t * invmod(powmod(residue_deg1(b2, w), Int(va), ell), ell), ell);
      Int want = powmod(t, (ell - 1) / 3, ell);
      auto k = tame_symbol(a, b, w).as_root_of_unity();
      REQUIRE(k.has_value());
      REQUIRE(*k % 4 == 0);
      CHECK(powmod(om, Int(*k / 4), ell) == want);
    }
  }
}

TEST_CASE("tame symbol domain errors") {
  CHECK_THROWS_AS(tame_symbol(Eis(5), Eis(2), eis_sqrtm3()), error);
  CHECK_THROWS_AS(tame_symbol(Eis(5), Eis(2), Eis(4)), error);
  CHECK_THROWS_AS(tame_symbol(Eis(0), Eis(2), Eis(2)), error);
}

TEST_CASE("hilbert symbol at 3: worked values") {
  CHECK(hilbert_cubic_at_3(Eis(5, Int(2)), Eis(1)) == Cyc::one(12));
  CHECK(hilbert_cubic_at_3(Eis(1, Int(3)), Eis(3)) == W(2));
  for (long p : {7, 13, 31, 43, 61, 79}) {
    Eis lam = idele_unit_lift(eis_omega(), Int(p));
    Cyc got = hilbert_cubic_at_3(lam, Eis(p));
    CHECK(got == W(int(-((p - 1) / 3) % 3)));
  }
}

TEST_CASE("hilbert symbol: oracle via the two places above p") {
  // the unit idele concentrated at 3 is represented by the global omega,
  // whose symbol with p is carried entirely by the two split places above p;
  // evaluating there independently must reproduce the lifted computation
  for (long p : {7, 13, 31, 43}) {
    Eis pi = eis_prime_above(Int(p));
    Eis lam = idele_unit_lift(eis_omega(), Int(p));
    Cyc byhand = tame_symbol(eis_omega(), Eis(p), pi) * tame_symbol(eis_omega(), Eis(p), conj(pi));
    CHECK(hilbert_cubic_at_3(lam, Eis(p)) == byhand);
  }
}

TEST_CASE("hilbert symbol: bilinearity, antisymmetry, Steinberg") {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    Eis a = rand_eis(rng, 25), b = rand_eis(rng, 25), c = rand_eis(rng, 25);
    CHECK(hilbert_cubic_at_3(a * b, c) == hilbert_cubic_at_3(a, c) * hilbert_cubic_at_3(b, c));
    CHECK(hilbert_cubic_at_3(a, b) * hilbert_cubic_at_3(b, a) == Cyc::one(12));
    Eis one_minus_a = eis_one() - a;
    if (!one_minus_a.is_zero())
      CHECK(hilbert_cubic_at_3(a, one_minus_a) == Cyc::one(12)); // Steinberg
    CHECK(hilbert_cubic_at_3(a, -a) == Cyc::one(12));
    CHECK(hilbert_cubic_at_3(a, a * a * a) == Cyc::one(12));
  }
}

TEST_CASE("idele unit lift: congruences and minimality") {
  for (long p : {7, 13, 31}) {
    for (const Eis& u : {eis_omega(), Eis(4, Int(6)), Eis(-1)}) {
      Eis lam = idele_unit_lift(u, Int(p));
      CHECK(eis_divides(Eis(9), lam - u));
      CHECK(eis_divides(Eis(p), lam - eis_one()));
      for (long x = -3; x <= 3; ++x)
        for (long y = -3; y <= 3; ++y) {
          if (x == 0 && y == 0) continue;
          CHECK(norm(lam) <= norm(lam + Eis(9 * p * x, Int(9 * p * y))));
        }
    }
  }
  CHECK_THROWS_AS(idele_unit_lift(eis_sqrtm3(), Int(7)), error);
  CHECK_THROWS_AS(idele_unit_lift(eis_omega(), Int(12)), error);
}

TEST_CASE("unit classes modulo 1+9O") {
  // decomposition is a bijection on the 54 unit residues: reconstruct
  const Eis gens[4] = {Eis(-1), Eis(2, Int(2)), Eis(0, Int(-2)), Eis(4, Int(6))};
  int count = 0;
  for (long a = 0; a < 9; ++a)
    for (long b = 0; b < 9; ++b) {
      if (a % 3 == 0) continue;
      ++count;
      Local u = Local::make(LField::K3, 0, Int(a), Int(b));
      UnitClassK3 cls = unit_class_K3(u);
      Local prod = Local::one(LField::K3);
      for (int g = 0; g < 4; ++g)
        for (int i = 0; i < cls.e[g]; ++i) prod = prod * Local::from_eis(gens[g]);
      // u / prod must be 1 mod 9 = pi^4
      Local r = u / prod - Local::one(LField::K3);
      CHECK((r.is_zero() || r.valuation() >= 4));
    }
  CHECK(count == 54);
  CHECK_THROWS_AS(unit_class_K3(Local::sqrtm3()), error);
  UnitClassK3 c2 = element_class_K3(Local::sqrtm3().pow(3) * Local::make(LField::K3, 0, 4, 5));
  CHECK(c2.pi_exp == 3);
}

TEST_CASE("Theta_3 character table") {
  CharK3 th = CharK3::theta3_big();
  CHECK(th.eval_global(Eis(-1)) == Cyc::integer(Int(-1)));
  CHECK(th.eval_global(Eis(2, Int(2))) == W(2));   // 1+sqrt(-3)
  CHECK(th.eval_global(Eis(0, Int(-2))) == W(1));  // 1-sqrt(-3)
  CHECK(th.eval_global(Eis(4, Int(6))) == W(1));   // 1+3sqrt(-3)
  CHECK(th.eval_global(eis_sqrtm3()) == Cyc::imag_i());
  CHECK(th.conductor() == 4);
  for (int g = 0; g < 4; ++g) CHECK(th.value_on_gen(g).as_root_of_unity().has_value());
}

TEST_CASE("Theta_3: global product formula agrees with the table everywhere") {
  // the table evaluation (via discrete logs mod 9) and the direct global
  // formula are independent routes; they must agree on arbitrary elements
  std::mt19937 rng(93);
  CharK3 th = CharK3::theta3_big();
  int done = 0;
  while (done < 40) {
    Eis t = rand_eis(rng, 60);
    Cyc a = theta3_eval_global(t);
    CHECK(a == th.eval_global(t));
    ++done;
  }
  // trivial on 1 + 9 Z[omega]
  CHECK(theta3_eval_global(Eis(10)) == Cyc::one(12));
  CHECK(theta3_eval_global(Eis(1, Int(9))) == Cyc::one(12));
  CHECK(theta3_eval_global(Eis(19, Int(-9))) == Cyc::one(12));
}

TEST_CASE("Theta_3 restricted to Z_3^x is the quadratic character eta_3") {
  CharK3 th = CharK3::theta3_big();
  for (long u : {2, 4, 5, 7, 8, 10, 11, 13}) {
    int eta = (u % 3 == 1) ? 1 : -1;
    CHECK(th.eval(Local::from_int(LField::K3, Int(u))) == Cyc::integer(Int(eta)));
  }
  CHECK(th.eval(Local::from_rat(LField::K3, Rat(1, 2))) == Cyc::integer(Int(-1)));
}

TEST_CASE("chi_3 tables for the two residue classes") {
  for (long p : {13, 31}) { // p = 4 mod 9
    CharK3 chi = CharK3::chi3(Int(p));
    CHECK(chi.eval_global(Eis(2, Int(2))) == W(1));
    CHECK(chi.eval_global(Eis(4, Int(6))) == W(1));
    CHECK(chi.eval_global(eis_sqrtm3()) == Cyc::one(12));
    CHECK(chi.eval_global(Eis(-1)) == Cyc::one(12));
    CHECK(chi.conductor() == 4);
    CHECK(chi.trivial_on_Q3_units());
  }
  for (long p : {7, 43}) { // p = 7 mod 9
    CharK3 chi = CharK3::chi3(Int(p));
    CHECK(chi.eval_global(Eis(2, Int(2))) == W(2));
    CHECK(chi.eval_global(Eis(4, Int(6))) == W(1));
    CHECK(chi.eval_global(eis_sqrtm3()) == Cyc::one(12));
    CHECK(chi.conductor() == 4);
    CHECK(chi.trivial_on_Q3_units());
  }
  CHECK_THROWS_AS(CharK3::chi3(Int(11)), error);
  CHECK_THROWS_AS(CharK3::chi3(Int(19)), error); // 1 mod 9
}

TEST_CASE("chi_3 equals the direct (t, 3p) symbol") {
  std::mt19937 rng(5);
  for (long p : {13, 7}) {
    CharK3 chi = CharK3::chi3(Int(p));
    for (int trial = 0; trial < 15; ++trial) {
      Eis t = rand_eis(rng, 20);
      CHECK(chi.eval_global(t) == hilbert_cubic_at_3(t, Eis(3 * p)));
    }
  }
}

TEST_CASE("chi_3 is cubic and trivial on cubes") {
  std::mt19937 rng(8);
  CharK3 chi = CharK3::chi3(Int(13));
  for (int trial = 0; trial < 10; ++trial) {
    Eis t = rand_eis(rng, 20);
    CHECK(chi.eval_global(t).pow(3) == Cyc::one(12));
    CHECK(chi.eval_global(t * t * t) == Cyc::one(12));
  }
}

TEST_CASE("Gauss sum and lambda factor") {
  LambdaData ld = lambda_factor();
  CHECK(ld.tau == W(2) - W(1)); // omega^2 - omega = -sqrt(-3)
  CHECK(ld.tau == Cyc::integer(Int(-1)) * Cyc::sqrtm3());
  CHECK(ld.lambda == Cyc::integer(Int(-1)) * Cyc::imag_i());
  CHECK(ld.delta_on_pi == Cyc::integer(Int(-1)) * Cyc::imag_i());
  CHECK(ld.eta_minus1 == -1);
  CharK3 dt = CharK3::delta_theta();
  CHECK(dt.conductor() == 1);
  CHECK(dt.eval_global(Eis(-1)) == Cyc::integer(Int(-1)));
  CHECK(dt.eval_global(Eis(2)) == Cyc::integer(Int(-1)));
  CHECK(dt.eval_global(Eis(4)) == Cyc::one(12));
}

TEST_CASE("theta_3 = Theta_3 Delta_theta is trivial on Q_3 units") {
  CharK3 th = CharK3::theta3_small();
  CHECK(th.trivial_on_Q3_units());
  CHECK(th.eval_global(Eis(-1)) == Cyc::one(12));
  CHECK(th.eval_global(Eis(2, Int(2))) == W(2));
  CHECK(th.eval_global(Eis(0, Int(-2))) == W(1));
  CHECK(th.eval_global(Eis(4, Int(6))) == W(1));
  CHECK(th.eval_global(eis_sqrtm3()) == Cyc::one(12));
}

TEST_CASE("Theta_3 chi_3-bar values row by row") {
  for (long p : {13, 31}) {
    CharK3 nu = CharK3::theta3_big() * CharK3::chi3(Int(p)).conj();
    CHECK(nu.eval_global(Eis(-1)) == Cyc::integer(Int(-1)));
    CHECK(nu.eval_global(Eis(2, Int(2))) == W(1));
    CHECK(nu.eval_global(Eis(0, Int(-2))) == W(2));
    CHECK(nu.eval_global(Eis(4, Int(6))) == Cyc::one(12));
    CHECK(nu.eval_global(eis_sqrtm3()) == Cyc::imag_i());
  }
  for (long p : {7, 43}) {
    CharK3 nu = CharK3::theta3_big() * CharK3::chi3(Int(p)).conj();
    CHECK(nu.eval_global(Eis(-1)) == Cyc::integer(Int(-1)));
    CHECK(nu.eval_global(Eis(2, Int(2))) == Cyc::one(12));
    CHECK(nu.eval_global(Eis(0, Int(-2))) == Cyc::one(12));
    CHECK(nu.eval_global(Eis(4, Int(6))) == Cyc::one(12));
    CHECK(nu.eval_global(eis_sqrtm3()) == Cyc::imag_i());
  }
}

TEST_CASE("additive character psi_3") {
  CHECK(psi3(Local::from_int(LField::Q3, Int(5))) == Cyc::one(12));
  CHECK(psi3(Local::from_rat(LField::Q3, Rat(1, 3))) == W(2));  // e^{-2 pi i/3}
  CHECK(psi3(Local::from_rat(LField::Q3, Rat(2, 3))) == W(1));
  CHECK(psi3(Local::from_rat(LField::Q3, Rat(1, 9))) == Cyc::zeta(36, 32)); // zeta_9^-1
  // additivity on rationals with 3-power denominators
  std::mt19937 rng(4);
  std::uniform_int_distribution<long> num(-40, 40), den(0, 3);
  for (int trial = 0; trial < 30; ++trial) {
    Rat x(num(rng), pow_int(Int(3), den(rng)));
    Rat y(num(rng), pow_int(Int(3), den(rng)));
    x.canonicalize();
    y.canonicalize();
    Cyc a = psi3(Local::from_rat(LField::Q3, x));
    Cyc b = psi3(Local::from_rat(LField::Q3, y));
    Cyc c = psi3(Local::from_rat(LField::Q3, x + y));
    long m = std::max({a.order(), b.order(), c.order()});
    CHECK(a.to_order(m) * b.to_order(m) == c.to_order(m));
  }
  CHECK_THROWS_AS(psi3(Local::sqrtm3()), error);
}

TEST_CASE("dual element of Theta_3 is 1/(9 sqrt(-3))") {
  CharK3 th = CharK3::theta3_big();
  Local alpha = alpha_of_character(th);
  CHECK(alpha.valuation() == -5);
  Local paper = (Local::from_int(LField::K3, Int(9)) * Local::sqrtm3()).inv();
  // determined up to 1 + pi^2: the ratio must be 1 mod pi^2
  Local r = alpha / paper - Local::one(LField::K3);
  CHECK((r.is_zero() || r.valuation() >= 2));
  // and the defining identity holds for the paper representative too
  std::mt19937 rng(12);
  std::uniform_int_distribution<long> d(0, 26);
  for (int trial = 0; trial < 20; ++trial) {
    long j = 2 + d(rng) % 5;
    long w0 = d(rng), w1 = d(rng);
    if (w0 % 3 == 0) w0 += 1;
    Local u = Local::sqrtm3().pow(j) * Local::make(LField::K3, 0, Int(w0), Int(w1));
    Cyc lhs = th.eval(Local::one(LField::K3) + u);
    Cyc rhs = psiK3(paper * u);
    long m = std::max(lhs.order(), rhs.order());
    CHECK(lhs.to_order(m) == rhs.to_order(m));
  }
  CHECK_THROWS_AS(alpha_of_character(th, 0), error);
  CHECK_THROWS_AS(alpha_of_character(CharK3::delta_theta()), error);
}

TEST_CASE("theta chi-bar package") {
  for (long p : {7, 43}) {
    ThetaChiData d = theta_chibar_data(Int(p));
    CHECK(d.conductor == 0);
    CHECK_FALSE(d.has_alpha);
  }
  for (long p : {13, 31}) {
    ThetaChiData d = theta_chibar_data(Int(p));
    CHECK(d.conductor == 2);
    REQUIRE(d.has_alpha);
    CHECK(d.alpha.valuation() == -3);
    Local paper = (Local::from_int(LField::K3, Int(3)) * Local::sqrtm3()).inv();
    Local r = d.alpha / paper - Local::one(LField::K3);
    CHECK((r.is_zero() || r.valuation() >= 1));
  }
  CHECK_THROWS_AS(theta_chibar_data(Int(11)), error);
}
