#ifndef CUBESUM_CLASSFIELD_HPP
#define CUBESUM_CLASSFIELD_HPP

#include "core/cyclotomic.hpp"
#include "core/eisenstein.hpp"
#include "core/local3.hpp"

#include <array>

namespace cubesum {

// Cubic tame symbol at a prime w of Z[omega] away from 3:
// ((-1)^{v(a)v(b)} a^{v(b)} / b^{v(a)} mod w)^{(Nw-1)/3}, as a cube root of
// unity. Trivial (returns 1) when the residue field has no cube roots of
// unity worth of content, which cannot happen here since Nw = 1 or 4 mod 6
// always has mu_3 in its residue field.
Cyc tame_symbol(const Eis& a, const Eis& b, const Eis& w);

// Cubic Hilbert symbol (a,b) at the wild place 3 of K = Q(omega), computed
// via the product formula: the inverse of the product of all tame symbols.
Cyc hilbert_cubic_at_3(const Eis& a, const Eis& b);

// CRT lift of a unit idele concentrated at 3: the element lambda of Z[omega]
// with lambda = u mod 9, lambda = 1 mod p, of smallest norm (ties broken
// lexicographically on (a, b)).
Eis idele_unit_lift(const Eis& u, const Int& p);

// Class of an element of K_3^x in pi^Z x O^x/(1+9O) against the generator
// tuple (-1, 1+sqrt(-3), 1-sqrt(-3), 1+3*sqrt(-3)); unit exponents modulo
// (2,3,3,3), plus the sqrt(-3)-exponent. The decomposition is unique.
struct UnitClassK3 {
  int e[4];
  long pi_exp;
};
UnitClassK3 unit_class_K3(const Local& u);       // units only (pi_exp = 0)
UnitClassK3 element_class_K3(const Local& x);    // any nonzero element

// A character of K_3^x trivial on 1+9*O_{K,3}, stored by its value on the
// uniformizer sqrt(-3) and on the four unit generators above, plus the
// conductor exponent (in sqrt(-3)-valuation).
class CharK3 {
public:
  CharK3(Cyc on_pi, std::array<Cyc, 4> on_gen);

  const Cyc& value_on_pi() const { return on_pi_; }
  const Cyc& value_on_gen(int i) const { return on_gen_[i]; }
  long conductor() const { return conductor_; }
  bool is_trivial() const;
  bool trivial_on_Q3_units() const;

  // Evaluate at a nonzero element of K_3 (needs >= 2 digits of precision).
  Cyc eval(const Local& t) const;
  Cyc eval_global(const Eis& t) const;

  CharK3 operator*(const CharK3& o) const;
  CharK3 conj() const; // complex conjugate character (inverse, values on unit circle)

  // The Hecke-character component at 3 attached to the curve x^3+y^3=9,
  // derived by the product-formula chase over global elements.
  static CharK3 theta3_big(); // Theta_3
  // The cubic character cutting out K(cbrt(3p)), from Hilbert symbols.
  static CharK3 chi3(const Int& p);
  // The level-one twist Delta_theta with Delta|Z_3^x = eta_3 and
  // Delta(sqrt(-3)) = -i.
  static CharK3 delta_theta();
  // theta_3 = Theta_3 * Delta_theta (the compact-induction parameter).
  static CharK3 theta3_small();

private:
  Cyc on_pi_;
  std::array<Cyc, 4> on_gen_;
  long conductor_;
  void compute_conductor();
};

// Theta_3 evaluated at a global element of Z[omega] prime to nothing in
// particular, via Theta_3(t) = unit(t) * i^{v_3(t)} *
// prod_w [ -conj((-3/a_w)_6) ]^{-v_w(t)} over primary generators a_w = 2 mod 3.
Cyc theta3_eval_global(const Eis& t);

// Gauss-sum lambda factor data: tau(eta_3, psi_3'), lambda(psi_3') = tau/sqrt3,
// lambda(psi_3) = eta_3(3) lambda(psi_3'), Delta_theta(sqrt(-3)).
struct LambdaData {
  Cyc tau;            // the Gauss sum itself, in Z[zeta_12]
  Cyc lambda;         // -i
  Cyc delta_on_pi;    // -i
  int eta_minus1;     // eta_3(-1) = -1 (Delta_theta on Z_3^x is eta_3)
};
LambdaData lambda_factor();

// Additive character psi_3(x) = e^{2 pi i iota(x)}, iota(x) = -x mod Z_3,
// evaluated exactly as a root of unity of 3-power order (returned at
// cyclotomic order 12*3^k). x must carry enough precision to know its
// fractional part.
Cyc psi3(const Local& x);
// psi_{K_3} = psi_3 of the trace.
Cyc psiK3(const Local& x);

// The dual element alpha of a character nu with c(nu) >= 2:
// v(alpha) = -c(nu) + psi_level and nu(1+u) = psi_{K3}(alpha u) whenever
// v(u) >= ceil(c/2). The additive character is the project-wide psi_3 o Tr,
// whose level is -1; only that level is accepted. Found by exhaustive search
// over unit residues; the representative is determined up to 1 + pi^{floor(c/2)}.
Local alpha_of_character(const CharK3& nu, long psi_level = -1);

// Conductor and dual element of theta_3 * conj(chi_3): (0, nullopt) for
// p = 7 mod 9, (2, 1/(3 sqrt(-3))) for p = 4 mod 9.
struct ThetaChiData {
  long conductor;
  bool has_alpha;
  Local alpha;
};
ThetaChiData theta_chibar_data(const Int& p);

} // namespace cubesum

#endif
