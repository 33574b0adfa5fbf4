#ifndef CUBESUM_WALDSPURGER_HPP
#define CUBESUM_WALDSPURGER_HPP

#include "core/defs.hpp"
#include "core/mat2.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cubesum {

// Local toric period engine over F = Q_q (q an odd prime) with E = F(sqrt D)
// ramified: exact characters of E^x trivial on F^x, the quadratic congruence
// that locates test vectors, closed-form period values, the epsilon-sign test,
// and a finite brute-force oracle that evaluates the period integral as an
// exact cyclotomic sum.

// --- exact elements of Z[zeta], zeta a root of unity of order q^k ------------

// Sparse representation in the power basis {zeta^j : 0 <= j < (q-1)q^{k-1}},
// reduced with the cyclotomic relation zeta^{(q-1)q^{k-1}} = -sum_j zeta^{j q^{k-1}}.
// Representation in the basis is unique, so equality and rationality tests are
// exact.
class CycSum {
public:
  CycSum(long q, long level);                       // zero
  static CycSum from_rational(long q, long level, const Rat& r);

  // add coef * zeta_{q^level}^e (e taken mod q^level)
  void add_root(long e, const Rat& coef);

  CycSum operator+(const CycSum& o) const;
  CycSum operator-(const CycSum& o) const;
  CycSum operator*(const CycSum& o) const;
  CycSum operator*(const Rat& s) const;
  bool operator==(const CycSum& o) const;
  bool is_zero() const;
  CycSum conj() const;                              // complex conjugation
  bool is_rational() const;
  Rat as_rational() const;                          // fails if not rational
  std::string str() const;

  long q() const { return q_; }
  long level() const { return k_; }

private:
  CycSum promoted(long level) const;                // rewrite at a deeper level
  long q_, k_;
  std::map<long, Rat> c_;                           // basis exponent -> coefficient
};

// --- characters of E^x trivial on F^x ---------------------------------------

// A character is determined by its restriction to the unit classes
// O_E^x / O_F^x U_E(2M+1) (a finite abelian q-group, parametrized by the
// t-coordinate of (1+t sqrt D) mod q^M) together with its value on sqrt(D),
// which is a sign because the character kills F^x.
struct EChar {
  long e_h, e_g;  // exponents on the two distinguished generators
  int sign;       // value at sqrt(D)
};

// The unit-class group at depth M with its discrete-log table. The group is
// cyclic except when q = 3 and E contains the cube roots of unity, where it
// is (order 3) x (cyclic); both shapes are handled by a generator pair (h, g)
// with h of order ord_h | 3 and g generating the rest.
class ToricSystem {
public:
  ToricSystem(long q, const Rat& D, long depth);

  long q() const { return q_; }
  const Rat& D() const { return D_; }
  long depth() const { return Mp_; }
  long qpow() const { return N_; }                  // q^depth
  bool has_torsion() const { return ord_h_ == 3; }
  long ord_h() const { return ord_h_; }
  long ord_g() const { return ord_g_; }

  // group law on t-coordinates: t * s = (t+s)/(1 + D t s) mod q^depth
  long compose(long t, long s) const;
  long cls(const Rat& t) const;                     // reduce, requires v_q(t) >= 0
  long power(long t, long e) const;

  EChar make_char(long e_h, long e_g, int sign) const;
  EChar trivial_char() const { return {0, 0, 1}; }
  EChar product(const EChar& a, const EChar& b) const;
  EChar conjugate(const EChar& a) const;
  bool is_trivial(const EChar& a) const;
  long conductor(const EChar& a) const;             // always even; 0 = unramified

  // value of the character as (sign, exponent of zeta_{q^depth})
  struct Val {
    int s;
    long e;
  };
  Val eval_class(const EChar& a, long t) const;     // on (1 + t sqrt D)
  Val eval(const EChar& a, const Rat& x, const Rat& y) const;  // at x + y sqrt D

  // the unique character with conductor <= max_cond, given sign, taking the
  // value zeta_ord^num at class(t) for each target (t, num, ord)
  EChar char_matching(const std::vector<std::array<long, 3>>& targets, int sign,
                      long max_cond) const;

private:
  long q_, Mp_, N_;
  Rat D_;
  long Dmod_;                                       // D as a residue mod q^{depth+1}
  long ord_h_, ord_g_, gen_h_, gen_g_;
  std::vector<std::pair<long, long>> dlog_;         // t -> (i, j) with t = h^i g^j
};

// --- local setting and character pairs --------------------------------------

struct LocalSetting {
  long q;
  int e_L;        // ramification degree of L = E over F (only 2 is implemented)
  long n;         // c(theta) = 2n
  Rat D;          // E = F(sqrt D); D is itself a uniformizer of F
  Rat Dprime;     // normalized square class 1/(alpha_theta^2 sqrt(D)^{2 c(theta)})
  Rat y_theta;    // alpha_theta = y_theta sqrt(D), the dual element of theta
};

struct ToricCharacterPair {
  EChar theta, chi;
  long l;          // c(theta chibar) = 2l
  bool conjugated; // chi was replaced by its conjugate so that c(theta chibar) <= c(theta chi)
  Rat y_nu;        // alpha_{theta chibar} = y_nu sqrt(D) when l > 0, else 0
};

struct TestVector {
  Rat u;  // v_q(u) >= 0
  Rat v;  // unit
};

struct PeriodValue {
  CycSum value;
  bool unit_volume;  // Haar measure normalized by Vol(O_F^x \ O_E^x) = 1
};

// Kirillov-model support of the minimal vector: Char(pi^{power} U_F(level)).
struct SupportDescriptor {
  long power;
  long level;
};

LocalSetting make_setting(const ToricSystem& sys, const EChar& theta);
ToricCharacterPair make_pair(const ToricSystem& sys, const EChar& theta, const EChar& chi);

// sign of the local epsilon factor of the pair (ramified E = L case)
int epsilon_test(const ToricSystem& sys, const ToricCharacterPair& pair);

SupportDescriptor minimal_vector_support(long c_pi);

// Solutions (u, v) of the quadratic congruence that characterizes test
// vectors; empty exactly when epsilon_test gives -1.
std::vector<TestVector> solve_test_vector(const ToricSystem& sys, const LocalSetting& setting,
                                          const ToricCharacterPair& pair);

// Closed-form value of the period at a test vector: 2 in the unramified-
// difference case, 1/q^{floor(l/2)} per solution otherwise, 0 off support.
PeriodValue period_minimal(const ToricSystem& sys, const LocalSetting& setting,
                           const ToricCharacterPair& pair, const TestVector& tv);

// The finite brute-force oracle: exact cyclotomic sum over unit classes of
// E^x/F^x U_E(M), with matrix-coefficient values decided by an explicit
// L x K decomposition. Fails internally if the value is unstable in M.
PeriodValue brute_force_period(const ToricSystem& sys, const LocalSetting& setting,
                               const ToricCharacterPair& pair, const TestVector& tv, long M);

// Low-level two-sided integral sum_t Phi(hR^{-1} T(t) hL) chi(t) weight over
// unit classes at truncation depth Mt (t mod q^Mt). conj_chi integrates
// against the conjugate character; galois_twist conjugates the embedding.
CycSum period_integral(const ToricSystem& sys, const LocalSetting& setting,
                       const ToricCharacterPair& pair, const Mat2& hL, const Mat2& hR,
                       bool conj_chi, bool galois_twist, long Mt);

// Matrix coefficient of the minimal vector at a single group element, as an
// optional (sign, exponent) value; nullopt means g is off the support.
std::optional<ToricSystem::Val> matrix_coefficient(const ToricSystem& sys,
                                                   const LocalSetting& setting,
                                                   const EChar& theta, const Mat2& g,
                                                   bool exhaustive_only = false);

// Closed form for the period at the newform (even n - l case):
// (1/((q-1) q^{ceil(n/2)-1})) (1/q^{floor(l/2)}) (1 + theta chi(sqrt D))^2.
PeriodValue newform_beta(const ToricSystem& sys, const LocalSetting& setting,
                         const ToricCharacterPair& pair);

struct OffDiagonal {
  int gamma;            // theta chi (sqrt D), a sign
  std::string support;  // description of the torus support of the cross term
};
OffDiagonal off_diagonal_data(const ToricSystem& sys, const LocalSetting& setting,
                              const ToricCharacterPair& pair, const Rat& v, const Rat& vp);

// The q = 3 specialization used by the global formula: the period of the
// L^2-normalized newform against the order-9p torus, computed through the
// explicit conjugation [[ -9c, a/3 ], [ 0, 1 ]] of the standard embedding,
// and the ratio to the admissible test vector. Requires p = 4, 7 mod 9.
Rat beta3(const Int& p);
Rat beta0_ratio(const Int& p);

} // namespace cubesum

#endif
