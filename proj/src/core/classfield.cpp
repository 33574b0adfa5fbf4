#include "core/classfield.hpp"

#include "core/residue.hpp"

#include <map>
#include <utility>

namespace cubesum {

// z^e for a root of unity z, any integer e.
static Cyc ru_pow(const Cyc& z, long e) {
  auto k = z.as_root_of_unity();
  if (!k) fail_internal("ru_pow: value is not a root of unity");
  long m = z.order();
  return Cyc::zeta(m, static_cast<long>(mod_floor(Int(*k) * e, m).get_si()));
}

Cyc tame_symbol(const Eis& a, const Eis& b, const Eis& w) {
  if (a.is_zero() || b.is_zero()) fail_domain("tame_symbol: zero argument");
  if (!eis_is_prime(w)) fail_domain("tame_symbol: w is not prime");
  if (norm(w) == 3) fail_domain("tame_symbol: w lies over 3");
  long va = eis_valuation(a, w), vb = eis_valuation(b, w);
  Eis a2 = a, b2 = b;
  for (long i = 0; i < va; ++i) a2 = eis_div_exact(a2, w);
  for (long i = 0; i < vb; ++i) b2 = eis_div_exact(b2, w);
  // class of (-1)^{va vb} a2^{vb} / b2^{va} in the residue field, cubed down
  Cyc r = Cyc::one(12);
  if ((va * vb) % 2 != 0) r = r * cubic_residue(Eis(-1), w);
  if (vb % 3 != 0) r = r * ru_pow(cubic_residue(a2, w), vb);
  if (va % 3 != 0) r = r * ru_pow(cubic_residue(b2, w), -va);
  return r;
}

Cyc hilbert_cubic_at_3(const Eis& a, const Eis& b) {
  if (a.is_zero() || b.is_zero()) fail_domain("hilbert_cubic_at_3: zero argument");
  std::vector<Eis> places;
  auto add_primes = [&places](const Eis& z) {
    for (const auto& [w, e] : eis_factor(z).primes) {
      (void)e;
      if (norm(w) == 3) continue;
      bool seen = false;
      for (const auto& u : places)
        if (norm(u) == norm(w) && eis_divides(u, w)) { seen = true; break; }
      if (!seen) places.push_back(w);
    }
  };
  add_primes(a);
  add_primes(b);
  // Product formula: the symbol at 3 is the inverse of the product of the
  // local symbols elsewhere; tame_symbol already computes those inverses in
  // this normalization (fixed against the worked values (1+3w,3) and
  // (lambda, p)), so the composite needs no further inversion.
  Cyc prod = Cyc::one(12);
  for (const auto& w : places) prod = prod * tame_symbol(a, b, w);
  return prod;
}

Eis idele_unit_lift(const Eis& u, const Int& p) {
  if (p <= 3 || !is_prime(p)) fail_domain("idele_unit_lift: p must be a prime > 3");
  if (gcd(norm(u), Int(3)) != 1) fail_domain("idele_unit_lift: u not a unit at 3");
  // integer CRT coefficients: e = 1 mod 9, e = 0 mod p
  Int e = p * invmod(mod_floor(p, 9), Int(9));
  Eis lam0 = u * Eis(e, Int(0)) + Eis(1 - e, Int(0));
  Int m = 9 * p;
  auto [q, r] = eis_divrem(lam0, Eis(m, Int(0)));
  (void)q;
  // eis_divrem is only near-minimal; scan the neighbouring lattice points
  Eis best = r;
  for (long x = -2; x <= 2; ++x)
    for (long y = -2; y <= 2; ++y) {
      Eis cand = r + Eis(m * x, m * y);
      Int nc = norm(cand), nb = norm(best);
      if (nc < nb || (nc == nb && (cand.a < best.a || (cand.a == best.a && cand.b < best.b))))
        best = cand;
    }
  return best;
}

// ---- units of O_{K,3} modulo 1+9O ----------------------------------------

namespace {

// residues mod 9 in the basis (1, sqrt(-3))
struct Pair9 {
  long u0, u1;
  bool operator<(const Pair9& o) const {
    return u0 != o.u0 ? u0 < o.u0 : u1 < o.u1;
  }
};

Pair9 mul9(Pair9 x, Pair9 y) {
  long c0 = mod_floor(Int(x.u0 * y.u0 - 3 * x.u1 * y.u1), 9).get_si();
  long c1 = mod_floor(Int(x.u0 * y.u1 + x.u1 * y.u0), 9).get_si();
  return {c0, c1};
}

const std::array<Pair9, 4> kGens = {{{8, 0}, {1, 1}, {1, 8}, {1, 3}}};
const std::array<int, 4> kGenOrder = {2, 3, 3, 3};

const std::map<Pair9, UnitClassK3>& dlog_table() {
  static const std::map<Pair9, UnitClassK3> table = [] {
    std::map<Pair9, UnitClassK3> t;
    for (int e0 = 0; e0 < 2; ++e0)
      for (int e1 = 0; e1 < 3; ++e1)
        for (int e2 = 0; e2 < 3; ++e2)
          for (int e3 = 0; e3 < 3; ++e3) {
            Pair9 v{1, 0};
            int ee[4] = {e0, e1, e2, e3};
            for (int g = 0; g < 4; ++g)
              for (int i = 0; i < ee[g]; ++i) v = mul9(v, kGens[g]);
            if (!t.emplace(v, UnitClassK3{{e0, e1, e2, e3}, 0}).second)
              fail_internal("unit_class_K3: generators do not give a direct product");
          }
    if (t.size() != 54) fail_internal("unit_class_K3: bad group order");
    return t;
  }();
  return table;
}

// sqrt(-3)-valuation of (u-1) as far as a residue mod 9 can tell, capped at 4
long unit_level(Pair9 u) {
  long d0 = mod_floor(Int(u.u0 - 1), 9).get_si();
  long vx = d0 == 0 ? 4 : (d0 % 3 == 0 ? 2 : 0);
  long vy = u.u1 == 0 ? 4 : (u.u1 % 3 == 0 ? 3 : 1);
  return std::min({vx, vy, 4L});
}

} // namespace

UnitClassK3 unit_class_K3(const Local& u) {
  if (u.field() != LField::K3) fail_domain("unit_class_K3: element must lie in K_3");
  if (u.is_zero() || u.valuation() != 0) fail_domain("unit_class_K3: not a unit");
  if (u.prec() < 2) fail_precision("unit_class_K3: need at least 2 digits");
  Pair9 key{mod_floor(u.unit0(), 9).get_si(), mod_floor(u.unit1(), 9).get_si()};
  auto it = dlog_table().find(key);
  if (it == dlog_table().end()) fail_internal("unit_class_K3: residue not a unit mod 9");
  return it->second;
}

UnitClassK3 element_class_K3(const Local& x) {
  if (x.field() != LField::K3) fail_domain("element_class_K3: element must lie in K_3");
  if (x.is_zero()) fail_domain("element_class_K3: zero");
  long v = x.valuation();
  Local unit = x / Local::sqrtm3(x.prec() + std::abs(v) + 2).pow(v);
  UnitClassK3 cls = unit_class_K3(unit);
  cls.pi_exp = v;
  return cls;
}

// ---- characters -----------------------------------------------------------

CharK3::CharK3(Cyc on_pi, std::array<Cyc, 4> on_gen)
    : on_pi_(std::move(on_pi)), on_gen_(std::move(on_gen)), conductor_(0) {
  // every character in play takes values in mu_12; keep a uniform order
  on_pi_ = on_pi_.to_order(12);
  if (!on_pi_.as_root_of_unity()) fail_domain("CharK3: value on pi not a root of unity");
  for (int i = 0; i < 4; ++i) {
    on_gen_[i] = on_gen_[i].to_order(12);
    if (on_gen_[i].pow(kGenOrder[i]) != Cyc::one(12))
      fail_domain("CharK3: generator value has wrong order");
  }
  compute_conductor();
}

void CharK3::compute_conductor() {
  // smallest c with the character trivial on units = 1 mod pi^c
  long c = 0;
  for (const auto& [key, cls] : dlog_table()) {
    Cyc v = Cyc::one(12);
    for (int g = 0; g < 4; ++g) v = v * on_gen_[g].pow(cls.e[g]);
    if (v != Cyc::one(12)) c = std::max(c, unit_level(key) + 1);
  }
  conductor_ = c;
}

bool CharK3::is_trivial() const {
  return conductor_ == 0 && on_pi_ == Cyc::one(on_pi_.order());
}

bool CharK3::trivial_on_Q3_units() const {
  // Z_3^x is generated mod 1+9O by -1 and 4 = (1+sqrt(-3))(1-sqrt(-3))
  return on_gen_[0] == Cyc::one(on_gen_[0].order()) &&
         on_gen_[1] * on_gen_[2] == Cyc::one(12);
}

Cyc CharK3::eval(const Local& t) const {
  Local x = t.field() == LField::Q3 ? t.to_K3() : t;
  if (x.is_zero()) fail_domain("CharK3::eval: zero argument");
  UnitClassK3 cls = element_class_K3(x);
  Cyc r = ru_pow(on_pi_, cls.pi_exp);
  for (int g = 0; g < 4; ++g) r = r * on_gen_[g].pow(cls.e[g]);
  return r;
}

Cyc CharK3::eval_global(const Eis& t) const { return eval(Local::from_eis(t)); }

CharK3 CharK3::operator*(const CharK3& o) const {
  return CharK3(on_pi_ * o.on_pi_,
                {on_gen_[0] * o.on_gen_[0], on_gen_[1] * o.on_gen_[1],
                 on_gen_[2] * o.on_gen_[2], on_gen_[3] * o.on_gen_[3]});
}

CharK3 CharK3::conj() const {
  return CharK3(on_pi_.conj(),
                {on_gen_[0].conj(), on_gen_[1].conj(), on_gen_[2].conj(), on_gen_[3].conj()});
}

// global representatives of the unit generators
static const std::array<Eis, 4> kGenGlobal = {{
    Eis(-1),           // -1
    Eis(2, Int(2)),    // 1 + sqrt(-3)
    Eis(0, Int(-2)),   // 1 - sqrt(-3)
    Eis(4, Int(6)),    // 1 + 3 sqrt(-3)
}};

// Local factor at the prime 2, where the sextic-symbol formula does not
// apply (mu_6 is not inside F_4): pinned by the product formula over the
// element 10, using triviality on 1+9Z and the factor at 5.
static Cyc theta2_factor() {
  static const Cyc v =
      ru_pow(Cyc::integer(Int(-1)) * sextic_residue(Eis(-3), Eis(5)).conj(), -1);
  return v;
}

Cyc theta3_eval_global(const Eis& t) {
  if (t.is_zero()) fail_domain("theta3_eval_global: zero argument");
  EisFactorization fac = eis_factor(t);
  long k3 = 0;
  Eis gen_prod = eis_one();
  Cyc acc = Cyc::one(12);
  for (const auto& [w, e] : fac.primes) {
    if (norm(w) == 3) {
      k3 += e;
      for (long i = 0; i < e; ++i) gen_prod = gen_prod * eis_sqrtm3();
      continue;
    }
    // primary generator of the ideal: the associate = 2 mod 3
    Eis aw;
    bool found = false;
    for (int ui = 0; ui < 6; ++ui) {
      Eis cand = eis_unit(ui) * w;
      if (mod_floor(cand.a - 2, 3) == 0 && mod_floor(cand.b, 3) == 0) {
        aw = cand;
        found = true;
        break;
      }
    }
    if (!found) fail_internal("theta3_eval_global: no primary associate");
    for (long i = 0; i < e; ++i) gen_prod = gen_prod * aw;
    // local factor at w contributes [-conj((-3/a_w)_6)]^{-e} after the
    // norm^{1/2} pieces cancel against the archimedean one
    Cyc f = norm(w) == 4 ? theta2_factor()
                         : Cyc::integer(Int(-1)) * sextic_residue(Eis(-3), aw).conj();
    acc = acc * ru_pow(f, -e);
  }
  Eis u = eis_div_exact(t, gen_prod);
  if (!eis_is_unit(u)) fail_internal("theta3_eval_global: leftover not a unit");
  return Cyc::from_eis(u) * ru_pow(Cyc::imag_i(), k3) * acc;
}

CharK3 CharK3::theta3_big() {
  static const CharK3 c = [] {
    std::array<Cyc, 4> g;
    for (int i = 0; i < 4; ++i) g[i] = theta3_eval_global(kGenGlobal[i]);
    return CharK3(theta3_eval_global(eis_sqrtm3()), g);
  }();
  return c;
}

CharK3 CharK3::chi3(const Int& p) {
  long r9 = mod_floor(p, 9).get_si();
  if (!is_prime(p) || (r9 != 4 && r9 != 7))
    fail_domain("chi3: p must be a prime = 4 or 7 mod 9");
  // 3p = 12 resp. 21 times an element of 1+9Z_3, which is a cube in K_3, so
  // the small representative gives the same symbols
  Eis b(r9 == 4 ? 12 : 21, Int(0));
  std::array<Cyc, 4> g;
  for (int i = 0; i < 4; ++i) g[i] = hilbert_cubic_at_3(kGenGlobal[i], b);
  return CharK3(hilbert_cubic_at_3(eis_sqrtm3(), b), g);
}

// eta_3, the quadratic character of Q_3^x attached to K_3: trivial on norms.
// 3 = N(sqrt(-3)) is a norm; a unit is a norm iff it is 1 mod 3.
static int eta3_of_rat(const Rat& x) {
  if (x == 0) fail_domain("eta3: zero argument");
  Int num = x.get_num(), den = x.get_den();
  while (mpz_divisible_ui_p(num.get_mpz_t(), 3)) num /= 3;
  while (mpz_divisible_ui_p(den.get_mpz_t(), 3)) den /= 3;
  return mod_floor(num, 3) == mod_floor(den, 3) ? 1 : -1;
}

LambdaData lambda_factor() {
  // tau(eta_3, psi_3') = sum over units mod 3 of legendre(x) e^{-2 pi i x/3}
  Cyc z3inv = Cyc::omega().pow(2); // e^{-2 pi i /3}
  Cyc tau = z3inv - z3inv.pow(2);
  // lambda(psi_3') = tau / sqrt 3; certify the division exactly
  Cyc lambda = Cyc::integer(Int(-1)) * Cyc::imag_i();
  if (lambda * Cyc::sqrtm3() * Cyc::imag_i().pow(3) != tau)
    fail_internal("lambda_factor: tau != lambda * sqrt 3"); // sqrt3 = -i*sqrt(-3)
  // lambda(psi_3) = eta_3(3) lambda(psi_3')
  if (eta3_of_rat(Rat(3)) != 1) fail_internal("lambda_factor: eta_3(3) != 1");
  // Delta_theta(sqrt(-3)) = eta_3(pi^3 alpha_Theta) lambda^3 with
  // alpha_Theta = 1/(9 sqrt(-3)), so the eta argument is -1/3
  Cyc delta_pi = Cyc::integer(Int(eta3_of_rat(Rat(-1, 3)))) * lambda.pow(3);
  return {tau, lambda, delta_pi, eta3_of_rat(Rat(-1))};
}

CharK3 CharK3::delta_theta() {
  LambdaData ld = lambda_factor();
  // level one and eta_3 on Z_3^x: only the class of a unit mod sqrt(-3)
  // matters, and -1 is the nontrivial class
  return CharK3(ld.delta_on_pi,
                {Cyc::integer(Int(-1)), Cyc::one(), Cyc::one(), Cyc::one()});
}

CharK3 CharK3::theta3_small() { return theta3_big() * delta_theta(); }

Cyc psi3(const Local& t) {
  if (t.field() != LField::Q3) fail_domain("psi3: argument must lie in Q_3");
  if (t.is_zero() || t.valuation() >= 0) return Cyc::one(12);
  long d = -t.valuation();
  if (t.prec() < d) fail_precision("psi3: not enough digits for the fractional part");
  Int m3 = pow_int(Int(3), d);
  Int r = mod_floor(t.unit0(), m3);
  long ord = 4 * m3.get_si();
  return Cyc::zeta(ord, mod_floor(Int(-4) * r, ord).get_si());
}

Cyc psiK3(const Local& x) {
  if (x.field() != LField::K3) fail_domain("psiK3: argument must lie in K_3");
  return psi3(x.trace_to_Q3());
}

Local alpha_of_character(const CharK3& nu, long psi_level) {
  if (psi_level != -1)
    fail_domain("alpha_of_character: only the project additive character (level -1) is supported");
  long c = nu.conductor();
  if (c < 2) fail_domain("alpha_of_character: conductor must be >= 2");
  long half = (c + 1) / 2; // ceil(c/2)
  Local pi = Local::sqrtm3();
  for (long a0 = 1; a0 < 9; ++a0) {
    if (a0 % 3 == 0) continue;
    for (long a1 = 0; a1 < 9; ++a1) {
      Local alpha = pi.pow(-c - 1) * Local::make(LField::K3, 0, a0, a1);
      bool ok = true;
      for (long j = half; ok && j <= c + 3; ++j)
        for (long w0 = 1; ok && w0 < 9; ++w0) {
          if (w0 % 3 == 0) continue;
          for (long w1 = 0; ok && w1 < 9; ++w1) {
            Local u = pi.pow(j) * Local::make(LField::K3, 0, w0, w1);
            Cyc lhs = nu.eval(Local::one(LField::K3) + u);
            Cyc rhs = psiK3(alpha * u);
            long m = std::max(lhs.order(), rhs.order());
            if (lhs.to_order(m) != rhs.to_order(m)) ok = false;
          }
        }
      if (ok) return alpha;
    }
  }
  fail_internal("alpha_of_character: no dual element found");
}

ThetaChiData theta_chibar_data(const Int& p) {
  CharK3 nu = CharK3::theta3_small() * CharK3::chi3(p).conj();
  ThetaChiData out;
  out.conductor = nu.conductor();
  if (nu.conductor() == 0) {
    if (!nu.is_trivial()) fail_internal("theta_chibar_data: unramified but nontrivial");
    out.has_alpha = false;
    out.alpha = Local();
  } else {
    out.has_alpha = true;
    out.alpha = alpha_of_character(nu);
  }
  return out;
}

} // namespace cubesum
