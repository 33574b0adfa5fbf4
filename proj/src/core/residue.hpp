#ifndef CUBESUM_RESIDUE_HPP
#define CUBESUM_RESIDUE_HPP

#include "core/cyclotomic.hpp"
#include "core/eisenstein.hpp"

namespace cubesum {

// Power residue symbols in Z[omega]. The residue field at a prime pi is
// F_ell (pi of degree one, norm ell = 1 mod 3) or F_{q^2} (pi an associate of
// an inert rational prime q = 2 mod 3).

// Sixth power residue symbol (alpha / pi)_6: the unique sixth root of unity
// congruent to alpha^{(N pi - 1)/6} mod pi. Requires pi prime, pi not
// dividing 6*alpha. Returned inside Z[zeta_12].
Cyc sextic_residue(const Eis& alpha, const Eis& pi);

// Cubic power residue symbol (alpha / pi)_3, a cube root of unity; requires
// pi prime not dividing 3*alpha. Defined also at pi = 2 (residue field F_4).
Cyc cubic_residue(const Eis& alpha, const Eis& pi);

// Reduction of alpha modulo a degree-one prime pi of norm ell: the image in
// F_ell as an integer in [0, ell).
Int residue_deg1(const Eis& alpha, const Eis& pi);

} // namespace cubesum

#endif
