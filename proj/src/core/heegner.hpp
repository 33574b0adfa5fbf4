#ifndef CUBESUM_HEEGNER_HPP
#define CUBESUM_HEEGNER_HPP

#include "core/cplx.hpp"
#include "core/curve.hpp"
#include "core/qform.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace cubesum {

// Complex-analytic layer: q-expansion of the level-243 newform, period
// lattices, CM points with their class-group Galois action, Heegner traces,
// L-values, and the numeric Gross-Zagier check.

// ---- q-expansion -----------------------------------------------------------

// Coefficients a_1..a_N of the weight-2 newform attached to E_n, built from
// point counts at primes (CM trace formula, checked against naive counting)
// and the Hecke recursions. a[n] is a_n; a[0] is unused (0).
struct QExpansion {
  Int label;
  long N;
  std::vector<long> a;
};

// cache_dir empty: no disk cache. Otherwise reads/writes
// <cache_dir>/<label>.csv with lines "n,a_n"; a corrupt cache is rebuilt.
QExpansion qexp(const Int& label, long N, const std::string& cache_dir = "");

// ---- period lattice --------------------------------------------------------

// Period lattice of y^2 = x^3 + B, B < 0: hexagonal, w1 = Omega real,
// w2 = Omega * (1 + sqrt(-3))/2, so tau = w2/w1 = zeta_6 and the q-series
// nome is q = -exp(-pi*sqrt(3)).
struct PeriodLattice {
  Int B;
  Real omega;
  Cplx w1, w2;
};

PeriodLattice compute_periods(const Int& B, mpfr_prec_t prec);

// Independent evaluation of the real period by the complex AGM over the
// roots of x^3 + B (cross-check for the Beta-function formula).
Real period_agm(const Int& B, mpfr_prec_t prec);

// z reduced into the fundamental parallelogram (coefficients in [-1/2, 1/2)).
Cplx reduce_mod_lattice(const PeriodLattice& lat, const Cplx& z);
// Distance from z to the nearest lattice point.
Real lattice_distance(const PeriodLattice& lat, const Cplx& z);

// Weierstrass functions via the exponential q-series (z need not be reduced).
Cplx wp_complex(const PeriodLattice& lat, const Cplx& z);
Cplx wp_prime_complex(const PeriodLattice& lat, const Cplx& z);

// Numeric Eisenstein invariants (g2, g3) of the lattice. For a lattice that
// really is the period lattice of y^2 = x^3 + B one must get g2 = 0 and
// g3 = -4B; this is the independent shape check.
std::pair<Cplx, Cplx> lattice_invariants(const PeriodLattice& lat);

// Elliptic logarithm of a complex point (x, y) on y^2 = x^3 + B: the z in
// the fundamental domain with (P(z), P'(z)/2) = (x, y). Coarse grid search
// plus Newton refinement; internal error if the point refuses to converge.
Cplx elliptic_log_complex(const PeriodLattice& lat, const Cplx& x, const Cplx& y);

// ---- CM points and the class-group action ----------------------------------

// A CM point of discriminant -3(9p)^2 carrying Gamma_0(3^5) level structure:
// a form (a,b,c) with 3^5 | a and b in the fixed square-root class mod 2*3^5.
struct CMPoint {
  QForm form; // smallest-a representative within its Gamma_0(3^5) class
};

// tau_Q = (-b + i sqrt|Delta|) / (2a) in the upper half-plane.
Cplx cm_tau(const CMPoint& pt, mpfr_prec_t prec);

// The complete Gamma_0(3^5)-orbit: one CM point per class of Pic(O_{9p}),
// with the b-class pinned by the fixed point tau = (2pw-9)/(9pw-36).
struct HeegnerOrbit {
  Int p;
  Int Delta;        // -243 p^2
  Int beta;         // pinned b residue mod 486
  std::vector<QForm> classes;   // reduced representatives; classes[0] principal
  std::vector<CMPoint> points;  // points[i] lies in class classes[i]
  long class_index(const QForm& f) const; // f arbitrary; reduces and looks up
};

HeegnerOrbit heegner_orbit(const Int& p); // requires p = 4,7 mod 9

// Galois action of Pic(O_{9p}) through the orbit: sigma_[cls] moves a point
// to the representative of (class of pt) * cls^dir, with the direction
// convention pinned once by the Galois-relation battery (see galois report).
CMPoint galois_act(const HeegnerOrbit& orb, const QForm& cls, const CMPoint& pt);

// The form of the paper-normalized fixed point tau = (2pw-9)/(9pw-36).
QForm tau_form(const Int& p);

// Class of the Artin symbol sigma_u for a unit idele concentrated at 3:
// CRT lift lambda (= u mod 9, = 1 mod p), then the proper O_{9p}-ideal
// lambda*O_K intersect O_{9p}, converted to a form class.
QForm idele_class(const Int& p, const Eis& u);

// ---- modular parametrization ----------------------------------------------

struct ComplexPoint {
  Cplx z;    // elliptic log mod the E_9 minimal lattice (B = -48)
  Cplx x, y; // Weierstrass coordinates on y^2 = x^3 - 48
  bool inf;
};

// f(tau) = sum a_n/n e^{2 pi i n tau} on the minimal model y^2 = x^3 - 48,
// cusp [infinity] -> O. Needs Im tau > 2e-4 (series regime), prec <= 512.
ComplexPoint modular_param(const Cplx& tau, mpfr_prec_t prec,
                           const std::string& cache_dir = "");

// ---- cubic class characters ------------------------------------------------

// The mu_3-valued character of Pic(O_{9p}) cutting out K(cbrt(d)) inside the
// ring class field (d in {3, p, 3p}), as omega-exponents per class index.
// Built from tame symbols on a principalized O_K-generator, extended by
// multiplicativity where the direct evaluation meets the conductor.
std::vector<int> class_character(const HeegnerOrbit& orb, const Int& d);

// ---- verification reports --------------------------------------------------

struct CheckItem {
  std::string name;
  bool holds;
  double residual;    // relevant distance / |value - expected|
  std::string detail; // human-readable data for the report
};

// Numeric verification of the Galois relations satisfied by P_0 = [tau, 1]:
// sigma_{1+3w} acts by [w^2]; sigma_w by [w^2] + cusp (p = 4 mod 9) or
// [w] + cusp (p = 7 mod 9); for p = 7 mod 9 the complex-conjugation relation.
// Also checks the cusp (0, 4 sqrt(-3)) is exactly 3-torsion and that the
// principal class acts trivially.
std::vector<CheckItem> verify_galois_relations(const Int& p, mpfr_prec_t prec,
                                               const std::string& cache_dir = "");

// ---- L-values --------------------------------------------------------------

// Sign of the functional equation of L(s, E_n), determined numerically from
// the t <-> 1/t symmetry of the exponential sum (must come out +-1 sharply).
int functional_sign(const Int& n, mpfr_prec_t prec);

// L(1, E_n) (order 0, needs sign +1) or L'(1, E_n) (order 1, needs sign -1),
// by the standard exponential / exponential-integral sums with rigorous
// tail cutoffs. Sign/order mismatch is a domain error.
Real lvalue(const Int& n, int order, mpfr_prec_t prec,
            const std::string& cache_dir = "");

// Integral generator of the free part of E_p(Q) on y^2 = x^3 - 432 p^2,
// found by bounded search over integral x (p = 7 gives (84, 756)).
EPt<Rat> cube_sum_generator(const Int& p);

// ---- the Gross-Zagier check ------------------------------------------------

struct GZReport {
  Int p;
  int alpha;            // 0 for p = 4 mod 9, -1 for p = 7 mod 9
  Real lhs;             // L'(1,E_p) L(1,E_{3p^2}) / (Omega_p Omega_{3p^2})
  Real omega_p, omega_3p2, omega_9;
  long orbit_size;
  Cplx z1, z2;          // elliptic logs of R_1 and R_2
  double r2_residual;   // |z(R_2) - 3 z(R_1)| mod lattice
  bool recognized;      // R_1 found as (unit) * (a/b) * P + torsion
  long rec_num, rec_den;
  int rec_unit;         // zeta_6 exponent of the recognized unit
  Real hhat_r1;         // x-normalized canonical height of R_1
  Real ratio;           // lhs / (2^alpha * 9 * hhat_r1); the GZ target is 1
  std::vector<CheckItem> checks;
};

GZReport gz_check(const Int& p, mpfr_prec_t prec, const std::string& cache_dir = "");

} // namespace cubesum

#endif
