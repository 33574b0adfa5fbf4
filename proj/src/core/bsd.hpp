#ifndef CUBESUM_BSD_HPP
#define CUBESUM_BSD_HPP

#include "core/heegner.hpp"

#include <string>
#include <vector>

namespace cubesum {

// Assembly of the 3-part of the BSD leading-term comparison for the pair
// (E_p, E_{3p^2}), p = 4,7 mod 9 with 3 not a cube mod p.

// Isogeny-Selmer orders for the degree-3 isogenies E_n -> E'_n : y^2 = x^3 +
// (4n)^2. These are imported 3-descent data (see `source`), not computed
// here; the exact-diagram bound on |Sel_3| is what this module evaluates.
struct SelmerLedger {
  Int p;
  long sel_phi_p, sel_phi_dual_p;     // |Sel_phi(E_p)|, |Sel_phi'(E'_p)|
  long sel_phi_3p2, sel_phi_dual_3p2; // same pair for E_{3p^2}
  long kernel_p, kernel_3p2;          // |E'[phi'](Q) / phi E[3](Q)|
  long sel3_bound_p, sel3_bound_3p2;  // |Sel_3| upper bounds from the diagram
  int dim_bound_p;                    // dim_F3 Sel_3(E_p) <= 1
  int dim_3p2;                        // dim_F3 Sel_3(E_{3p^2}) = 0
  bool sha3_trivial; // with ranks (1, 0): both 3-parts of Sha vanish
  std::string source;
};

// Gates: p prime, p = 4,7 mod 9, and 3^{(p-1)/3} != 1 mod p (3 being a cubic
// residue is a domain error -- outside the hypothesis).
SelmerLedger selmer_bound(const Int& p);

struct BSDReport {
  Int p;
  SelmerLedger ledger;
  Real lprime_p, l_3p2;      // L'(1, E_p), L(1, E_{3p^2})
  Real omega_p, omega_3p2;   // minimal real periods
  EPt<Rat> gen;              // generator of the free part of E_p(Q)
  Real hhat_P, hhat_R;       // x-normalized canonical heights
  long tam_p, tam_3p2;       // Tamagawa products (computed by Tate, checked
                             // against the expected table)
  long tor_p, tor_3p2;       // rational torsion orders
  Real S;                    // the assembled leading-term ratio
  bool recognized;           // S recognized as a rational
  long S_num, S_den;
  int ord3;                  // 3-adic valuation of the recognized S
  bool hr_recognized;        // hhat_R / hhat_P recognized as a rational
  long hr_num, hr_den;
  std::vector<CheckItem> checks;
  bool all_ok() const;
};

// S := [L'(1,E_p) L(1,E_{3p^2}) |tor(E_p)|^2 |tor(E_{3p^2})|^2]
//      / [Omega_p Omega_{3p^2} hhat(P) prod c_l(E_p) prod c_l(E_{3p^2})];
// recognizes S by continued fractions (denominator <= 10^4, residual
// < 10^-6) and verifies ord_3(S) = 0.
BSDReport bsd3_report(const Int& p, mpfr_prec_t prec,
                      const std::string& cache_dir = "");

// Continued-fraction recognition helper: nearest rational with denominator
// <= max_den; returns false if the residual exceeds tol.
bool recognize_rational(const Real& x, long max_den, double tol, long& num,
                        long& den);

} // namespace cubesum

#endif
