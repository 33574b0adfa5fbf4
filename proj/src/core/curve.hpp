#ifndef CUBESUM_CURVE_HPP
#define CUBESUM_CURVE_HPP

#include "core/ecgroup.hpp"
#include "core/eisenstein.hpp"

#include <string>
#include <vector>

namespace cubesum {

// Member of the family E_n : y^2 = x^3 - 432 n^2 (the cube-sum curve
// x^3 + y^3 = n), plus free-standing models y^2 = x^3 + B.
struct CurveE {
  Int B;
  Int n; // family label; 0 when the curve is not from the family

  static CurveE from_label(const Int& n_) {
    if (n_ == 0) fail_domain("CurveE: label must be nonzero");
    return {-432 * n_ * n_, n_};
  }
  static CurveE from_B(const Int& B_) {
    if (B_ == 0) fail_domain("CurveE: B must be nonzero");
    return {B_, Int(0)};
  }
  Int disc() const { return -432 * B * B; }
};

// a_l = l + 1 - #E(F_l) for y^2 = x^3 + B, good reduction at l (l not
// dividing 6B). Computed two independent ways (exhaustive count and the CM
// trace formula a_l = -Tr(conj((4B/pi)_6) pi) over the primary prime above
// l = 1 mod 3); the two must agree or an internal error is raised.
long count_points_ap(const Int& B, const Int& ell);

// Conductor exponent, Kodaira type and Tamagawa number of a minimal model
// at ell, via Tate's algorithm (odd ell; at 2 the family models reduce to
// good reduction for odd n, and even labels are refused).
struct LocalData {
  Int ell;
  long cond_exp;
  std::string kodaira;
  long tamagawa;
  long vdisc_min;
};
LocalData local_data(const Int& n, const Int& ell);

// All bad places plus the conductor of E_n.
struct GlobalData {
  Int conductor;
  std::vector<LocalData> bad;
};
GlobalData global_data(const Int& n);

// Rational torsion of y^2 = x^3 + B, B a nonzero integer. For j = 0 the
// 2- and 3-division polynomials answer this exactly: 2-torsion needs -B a
// cube, 3-torsion needs B a square (x = 0) or -4B a cube with -3B square.
struct TorsionInfo {
  std::string structure; // "trivial", "Z/2", "Z/3", "Z/6"
  long order;
  std::vector<EPt<Rat>> points; // all nontrivial torsion points
};
TorsionInfo torsion_subgroup(const Int& B);

// The prime of K above p = 1 mod 3 singled out by 3^{(p-1)/3} = omega mod p
// (so requires 3 to be a non-cube mod p), together with the images of omega
// and sqrt(-3) in F_p.
struct SplitPrime {
  Int p;
  Eis frak_p;
  Int omega_img;
  Int sqrtm3_img;
};
SplitPrime normalized_prime(const Int& p);

enum class WhichPrime { frak_p, frak_p_bar };

// Reduce a K-point of y^2 = x^3 + B modulo the normalized prime (or its
// conjugate). Coordinates must be p-integral.
EPt<FpElem> reduce_at_prime_of_K(const Int& B, const EPt<KElem>& P, const SplitPrime& sp,
                                 WhichPrime which);

} // namespace cubesum

#endif
