#ifndef CUBESUM_QFORM_HPP
#define CUBESUM_QFORM_HPP

#include "core/defs.hpp"
#include <vector>

namespace cubesum {

// Primitive positive definite binary quadratic form a x^2 + b x y + c y^2,
// discriminant D = b^2 - 4ac < 0. Stored reduced; composition implements the
// class group Pic(O_D).
struct QForm {
  Int a, b, c;

  QForm() : a(1), b(1), c(1) {}
  QForm(Int a_, Int b_, Int c_);

  Int disc() const { return b * b - 4 * a * c; }
  bool operator==(const QForm& o) const { return a == o.a && b == o.b && c == o.c; }
  bool operator!=(const QForm& o) const { return !(*this == o); }
  bool operator<(const QForm& o) const; // lexicographic, for set/map use
};

QForm qf_reduce(Int a, Int b, Int c);
QForm qf_identity(const Int& D);
QForm qf_inverse(const QForm& f);
QForm qf_compose(const QForm& f, const QForm& g);
QForm qf_pow(const QForm& f, long e);
bool qf_is_principal(const QForm& f);

// Value a x^2 + b x y + c y^2.
Int qf_eval(const QForm& f, const Int& x, const Int& y);

// All reduced primitive forms of discriminant D (the class group, exhaustively).
std::vector<QForm> qf_class_group(const Int& D);

} // namespace cubesum

#endif
