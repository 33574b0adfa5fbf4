#ifndef CUBESUM_HEIGHT_HPP
#define CUBESUM_HEIGHT_HPP

#include "core/curve.hpp"
#include "core/real.hpp"

namespace cubesum {

// Archimedean machinery for y^2 = x^3 + B with B < 0 (the family case).
// The period lattice of a j = 0 curve is hexagonal: Lambda = Omega * Z[zeta_6]
// with Omega real, so tau = zeta_6 exactly and q = -exp(-pi*sqrt(3)).

// Real period Omega = (1/3) B(1/6, 1/2) |B|^(-1/6) (integral of dx/sqrt(x^3+B)
// from the real root to infinity).
Real real_period(const Int& B, mpfr_prec_t prec);

// Weierstrass P-function P(t * Omega) for t in (0, 1), via the real Fourier
// expansion in q.
Real wp_real(const Int& B, const Real& t, mpfr_prec_t prec);

// The parameter t in (0, 1/2] with P(t * Omega) = x, for x > cbrt(-B)
// (bisection; P is strictly decreasing on (0, 1/2]).
Real elliptic_log_t(const Int& B, const Rat& x, mpfr_prec_t prec);

// -log |sigma*(t * Omega)|, the archimedean Neron height kernel: sigma* is
// the quasi-period-corrected Weierstrass sigma, whose modulus is periodic.
Real sigma_star_neglog(const Int& B, const Real& t, mpfr_prec_t prec);

// h(x(2^k P)) / 4^k, the truncated naive-height limit (oracle; error O(4^-k)).
Real naive_height_limit(const Int& B, const EPt<Rat>& P, int k, mpfr_prec_t prec);

// lcm of the Tamagawa numbers of E_n: multiplying by it lands every rational
// point on the identity component at every place.
long height_multiplier(const Int& n);

// Canonical height of P on E_n (odd cube-free label), in the x-coordinate
// normalization hh(P) = lim 4^-k h(x(2^k P)). Torsion gets exactly 0.
// multiplier 0 means "use height_multiplier(n)"; any positive multiple of
// that value is also accepted (used by the consistency tests).
Real canonical_height(const Int& n, const EPt<Rat>& P, mpfr_prec_t prec = 256,
                      long multiplier = 0);

}  // namespace cubesum

#endif
