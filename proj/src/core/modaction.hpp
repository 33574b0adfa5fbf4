#ifndef CUBESUM_MODACTION_HPP
#define CUBESUM_MODACTION_HPP

#include "core/eisenstein.hpp"
#include "core/kfield.hpp"
#include "core/mat2.hpp"

#include <string>
#include <vector>

namespace cubesum {

// Congruence-subgroup machinery at level 3^5: the groups U0(3^5) and V (its
// subgroup with a = d mod 3), the generators W, A, B, C, eps of the relevant
// normalizers, the explicit embedding rho of K into M_2(Q) attached to a
// prime p = 4,7 mod 9, and the exact matrix identities that pin down how the
// extra automorphisms act.

// 3-adic membership tests. Conditions: entries 3-integral, det a 3-adic
// unit, lower-left entry = 0 mod 3^5; V additionally requires a = d mod 3.
struct GroupCheck {
  bool ok;
  std::string reason; // empty when ok
};
GroupCheck member_U0(const Mat2& m);
GroupCheck member_V(const Mat2& m);

// Generators (exact rational matrices):
//   W = [[0,1],[-3^5,0]]  (Atkin-Lehner), A = [[28,1/3],[3^4,1]],
//   B = [[1,0],[3^4,1]],  C = [[1,1/9],[-3^3,-2]], eps = diag(1,-1).
Mat2 gen_W();
Mat2 gen_A();
Mat2 gen_B();
Mat2 gen_C();
Mat2 gen_eps();

// The normalized embedding with fixed point tau = (2p omega - 9)/(9p omega - 36):
// rho(omega) = [[2p+8+36/p, -4p/9-2-9/p], [9p+36+144/p, -2p-9-36/p]].
// Requires p = 4 or 7 mod 9.
Mat2 rho_omega(const Int& p);
// rho extended additively: rho(a + b omega) = a I + b rho(omega).
Mat2 rho_of(const Int& p, const Eis& t);
// The fixed point as an exact element of K.
KElem tau_of(const Int& p);
// The extra normalizer for p = 7 mod 9: w = [[-2p-17, 4p/9+4], [-9p-72, 2p+17]].
Mat2 w_normalizer(const Int& p);

// The full identity battery for one prime: rho algebra, the eigen-equation,
// tau in the upper half-plane, the adelic products B rho(1+3w) A^2 etc.
// landing in V with their displayed entry polynomials, the away-from-3
// integrality of the non-3 components, and the determinant component map.
struct IdentityCheck {
  std::string name;
  bool holds;
  std::string detail; // failing entry / valuation when not holding
};
std::vector<IdentityCheck> verify_modular_action(const Int& p);
bool verify_modular_action_all_pass(const Int& p);

// Does g normalize U0 at 3? Checks g R g^-1 = R as lattices localized at 3
// (R the Eichler order of discriminant 3^5) and the determinant component
// map (the 3-unit part of det g must be 1 mod 3, else g swaps the two
// components of the disconnected curve).
struct NormalizerResult {
  bool lattice_ok;
  bool component_ok;
  std::string detail;
};
NormalizerResult normalizer_check(const Mat2& g);

} // namespace cubesum

#endif
