#include "core/local3.hpp"

#include <sstream>

namespace cubesum {

static Int p3(long k) { return pow_int(Int(3), (unsigned long)std::max(0L, k)); }

Local Local::zero(LField f, long prec) {
  Local z;
  z.f_ = f;
  z.zero_ = true;
  z.prec_ = prec;
  return z;
}

Local Local::make(LField f, long v, const Int& u0, const Int& u1, long prec) {
  if (prec < 1) fail_precision("Local: precision below one digit");
  Local z;
  z.f_ = f;
  z.zero_ = false;
  z.v_ = v;
  z.prec_ = prec;
  z.u0_ = mod_floor(u0, p3(prec));
  z.u1_ = f == LField::K3 ? mod_floor(u1, p3(prec)) : Int(0);
  if (f == LField::Q3 && u1 != 0) fail_domain("Local: Q3 element with sqrt(-3) part");
  z.normalize();
  return z;
}

void Local::normalize() {
  if (zero_) return;
  while (true) {
    Int m = p3(prec_);
    u0_ = mod_floor(u0_, m);
    u1_ = mod_floor(u1_, m);
    if (u0_ == 0 && u1_ == 0) { zero_ = true; return; }
    if (prec_ < 1) fail_precision("Local: precision exhausted during normalization");
    if (f_ == LField::Q3) {
      if (!mpz_divisible_ui_p(u0_.get_mpz_t(), 3)) return;
      u0_ /= 3;
      v_ += 1;
      prec_ -= 1;
      if (prec_ < 1) fail_precision("Local: precision exhausted during normalization");
    } else {
      if (!mpz_divisible_ui_p(u0_.get_mpz_t(), 3)) return;
      // u0 + u1*s = s * (u1 - (u0/3) s), s = sqrt(-3)
      Int n0 = u1_, n1 = -(u0_ / 3);
      u0_ = n0;
      u1_ = n1;
      v_ += 1;
      prec_ -= 1;
      if (prec_ < 1) fail_precision("Local: precision exhausted during normalization");
    }
  }
}

Local Local::one(LField f, long prec) { return make(f, 0, 1, 0, prec); }

Local Local::from_int(LField f, const Int& n, long prec) {
  if (n == 0) return zero(f, prec);
  Int m = n;
  long v = 0;
  while (mpz_divisible_ui_p(m.get_mpz_t(), 3)) { m /= 3; ++v; }
  long vf = f == LField::K3 ? 2 * v : v;
  // 3 = -sqrt(-3)^2 in K3, so 3^v = (-1)^v sqrt(-3)^{2v}.
  if (f == LField::K3 && v % 2 == 1) m = -m;
  return make(f, vf, m, 0, prec);
}

Local Local::from_rat(LField f, const Rat& x, long prec) {
  if (x == 0) return zero(f, prec);
  Local n = from_int(f, x.get_num(), prec + 4);
  Local d = from_int(f, x.get_den(), prec + 4);
  Local r = n / d;
  return make(f, r.v_, r.u0_, r.u1_, std::min(prec, r.prec_));
}

Local Local::from_eis(const Eis& z, long prec) {
  if (z.is_zero()) return zero(LField::K3, prec);
  // a + b*omega = (a - b/2) + (b/2) sqrt(-3) -> clear the half: 2z = (2a-b) + b sqrt(-3)
  Local two_z = make(LField::K3, 0, 2 * z.a - z.b, z.b, prec + 4);
  Local half = from_rat(LField::K3, Rat(1, 2), prec + 4);
  Local r = two_z * half;
  return make(LField::K3, r.v_, r.u0_, r.u1_, std::min(prec, r.prec_));
}

Local Local::sqrtm3(long prec) { return make(LField::K3, 1, 1, 0, prec); }

long Local::valuation() const {
  if (zero_) fail_domain("Local::valuation: zero");
  return v_;
}

// Express x at base level vmin: x = pi^{vmin} (c0 + c1 s), coefficients known
// mod 3^kabs.
struct Shifted {
  Int c0, c1;
  long kabs;
};

static Shifted shift_to(const Local& x, long vmin) {
  long d = x.valuation() - vmin;
  Shifted s;
  if (x.field() == LField::Q3) {
    s.c0 = pow_int(Int(3), d) * x.unit0();
    s.c1 = 0;
    s.kabs = x.prec() + d;
  } else {
    long e = d / 2;
    Int sc = pow_int(Int(-3), e);
    Int a = x.unit0(), b = x.unit1();
    if (d % 2 == 1) {
      Int na = -3 * b, nb = a;
      a = na;
      b = nb;
    }
    s.c0 = sc * a;
    s.c1 = sc * b;
    s.kabs = x.prec() + e;
  }
  return s;
}

Local Local::operator+(const Local& o) const {
  if (f_ != o.f_) {
    if (f_ == LField::Q3) return to_K3() + o;
    return *this + o.to_K3();
  }
  if (zero_) return o;
  if (o.zero_) return *this;
  long vmin = std::min(v_, o.v_);
  Shifted a = shift_to(*this, vmin), b = shift_to(o, vmin);
  long k = std::min(a.kabs, b.kabs);
  return make(f_, vmin, a.c0 + b.c0, a.c1 + b.c1, k);
}

Local Local::operator-() const {
  if (zero_) return *this;
  return make(f_, v_, -u0_, -u1_, prec_);
}

Local Local::operator-(const Local& o) const { return *this + (-o); }

Local Local::operator*(const Local& o) const {
  if (f_ != o.f_) {
    if (f_ == LField::Q3) return to_K3() * o;
    return *this * o.to_K3();
  }
  if (zero_ || o.zero_) return zero(f_, std::min(prec_, o.prec_));
  long k = std::min(prec_, o.prec_);
  if (f_ == LField::Q3) return make(f_, v_ + o.v_, u0_ * o.u0_, 0, k);
  Int c0 = u0_ * o.u0_ - 3 * u1_ * o.u1_;
  Int c1 = u0_ * o.u1_ + u1_ * o.u0_;
  return make(f_, v_ + o.v_, c0, c1, k);
}

Local Local::inv() const {
  if (zero_) fail_domain("Local::inv: zero");
  Int m = p3(prec_);
  if (f_ == LField::Q3) return make(f_, -v_, invmod(u0_, m), 0, prec_);
  // (u0 + u1 s)^-1 = (u0 - u1 s) / (u0^2 + 3 u1^2)
  Int den = mod_floor(u0_ * u0_ + 3 * u1_ * u1_, m);
  Int di = invmod(den, m);
  return make(f_, -v_, u0_ * di, -u1_ * di, prec_);
}

Local Local::pow(long e) const {
  if (zero_) {
    if (e <= 0) fail_domain("Local::pow: zero base, nonpositive exponent");
    return *this;
  }
  Local b = e < 0 ? inv() : *this;
  unsigned long ee = e < 0 ? -(unsigned long)e : (unsigned long)e;
  Local r = one(f_, prec_);
  while (ee) {
    if (ee & 1) r = r * b;
    b = b * b;
    ee >>= 1;
  }
  return r;
}

bool Local::eq(const Local& o) const {
  if (f_ != o.f_) {
    if (f_ == LField::Q3) return to_K3().eq(o);
    return eq(o.to_K3());
  }
  if (zero_ && o.zero_) return true;
  if (zero_ != o.zero_) {
    // zero vs nonzero: equal only if the nonzero side's value is beyond the
    // zero side's knowledge; be strict instead.
    return false;
  }
  long vmin = std::min(v_, o.v_);
  Shifted a = shift_to(*this, vmin), b = shift_to(o, vmin);
  Int m = p3(std::min(a.kabs, b.kabs));
  return mod_floor(a.c0 - b.c0, m) == 0 && mod_floor(a.c1 - b.c1, m) == 0;
}

Local Local::to_K3() const {
  if (f_ == LField::K3) return *this;
  if (zero_) return zero(LField::K3, prec_);
  Int u = v_ % 2 == 0 ? u0_ : Int(-u0_);
  return make(LField::K3, 2 * v_, u, 0, prec_);
}

bool Local::in_Q3() const {
  if (f_ == LField::Q3 || zero_) return true;
  return v_ % 2 == 0 && u1_ == 0;
}

Local Local::galois_conj() const {
  if (f_ == LField::Q3) return *this;
  if (zero_) return *this;
  Int s = v_ % 2 == 0 ? Int(1) : Int(-1);
  return make(f_, v_, s * u0_, -s * u1_, prec_);
}

Local Local::norm_to_Q3() const {
  Local n = *this * galois_conj();
  if (n.zero_) return zero(LField::Q3, prec_);
  if (!n.in_Q3()) fail_internal("Local::norm_to_Q3: norm not rational");
  Int u = (n.v_ / 2) % 2 == 0 ? n.u0_ : Int(-n.u0_);
  return make(LField::Q3, n.v_ / 2, u, 0, n.prec_);
}

Local Local::trace_to_Q3() const {
  Local t = *this + galois_conj();
  if (t.zero_) return zero(LField::Q3, prec_);
  if (!t.in_Q3()) fail_internal("Local::trace_to_Q3: trace not rational");
  Int u = (t.v_ / 2) % 2 == 0 ? t.u0_ : Int(-t.u0_);
  return make(LField::Q3, t.v_ / 2, u, 0, t.prec_);
}

std::string Local::str() const {
  std::ostringstream os;
  if (zero_) {
    os << "0";
    return os.str();
  }
  const char* pi = f_ == LField::Q3 ? "3" : "s";
  os << pi << "^" << v_ << " * (" << u0_.get_str();
  if (f_ == LField::K3) os << " + " << u1_.get_str() << "*s";
  os << ") [prec " << prec_ << "]";
  return os.str();
}

} // namespace cubesum
