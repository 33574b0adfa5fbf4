#include "core/cyclotomic.hpp"

#include <numeric>
#include <sstream>

namespace cubesum {

bool Cyc::order_ok(long order) {
  if (order == 3) return true;
  if (order % 12 != 0) return false;
  long t = order / 12;
  while (t % 3 == 0) t /= 3;
  return t == 1;
}

long Cyc::phi(long order) {
  if (!order_ok(order)) fail_domain("Cyc: unsupported order");
  return order == 3 ? 2 : order / 3;
}

Cyc::Cyc(long order) : m_(order), c_(phi(order), Int(0)) {}

Cyc Cyc::one(long order) { return integer(Int(1), order); }

Cyc Cyc::integer(const Int& n, long order) {
  Cyc z(order);
  z.c_[0] = n;
  return z;
}

void Cyc::reduce(std::vector<Int>& raw) const {
  long d = long(raw.size()) - 1;
  if (m_ == 3) {
    // x^2 = -x - 1
    for (; d >= 2; --d) {
      if (raw[d] == 0) continue;
      raw[d - 1] -= raw[d];
      raw[d - 2] -= raw[d];
      raw[d] = 0;
    }
    return;
  }
  long t = m_ / 12; // Phi: x^{4t} = x^{2t} - 1
  for (; d >= 4 * t; --d) {
    if (raw[d] == 0) continue;
    raw[d - 2 * t] += raw[d];
    raw[d - 4 * t] -= raw[d];
    raw[d] = 0;
  }
}

Cyc Cyc::zeta(long order, long k) {
  long n = phi(order);
  k = ((k % order) + order) % order;
  std::vector<Int> raw(order, Int(0));
  raw[k] = 1;
  Cyc z(order);
  z.reduce(raw);
  raw.resize(n);
  z.c_ = raw;
  return z;
}

bool Cyc::is_zero() const {
  for (const auto& x : c_)
    if (x != 0) return false;
  return true;
}

bool Cyc::operator==(const Cyc& o) const {
  if (m_ == o.m_) return c_ == o.c_;
  long m2 = std::max(m_, o.m_);
  if (m_ == 3 || o.m_ == 3) m2 = std::max({m_, o.m_, 12L});
  return to_order(m2).c_ == o.to_order(m2).c_;
}

Cyc Cyc::operator+(const Cyc& o) const {
  if (m_ != o.m_) {
    long m2 = std::max({m_, o.m_, m_ == 3 || o.m_ == 3 ? 12L : 0L});
    return to_order(m2) + o.to_order(m2);
  }
  Cyc z(m_);
  for (size_t i = 0; i < c_.size(); ++i) z.c_[i] = c_[i] + o.c_[i];
  return z;
}

Cyc Cyc::operator-(const Cyc& o) const { return *this + (-o); }

Cyc Cyc::operator-() const {
  Cyc z(m_);
  for (size_t i = 0; i < c_.size(); ++i) z.c_[i] = -c_[i];
  return z;
}

Cyc Cyc::operator*(const Cyc& o) const {
  if (m_ != o.m_) {
    long m2 = std::max({m_, o.m_, m_ == 3 || o.m_ == 3 ? 12L : 0L});
    return to_order(m2) * o.to_order(m2);
  }
  std::vector<Int> raw(2 * c_.size(), Int(0));
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    for (size_t j = 0; j < o.c_.size(); ++j) {
      if (o.c_[j] == 0) continue;
      raw[i + j] += c_[i] * o.c_[j];
    }
  }
  Cyc z(m_);
  z.reduce(raw);
  raw.resize(c_.size());
  z.c_ = raw;
  return z;
}

Cyc Cyc::pow(long e) const {
  if (e < 0) fail_domain("Cyc::pow: negative exponent");
  Cyc r = one(m_);
  Cyc b = *this;
  while (e) {
    if (e & 1) r = r * b;
    b = b * b;
    e >>= 1;
  }
  return r;
}

Cyc Cyc::to_order(long m2) const {
  if (m2 == m_) return *this;
  if (!order_ok(m2) || m2 % m_ != 0) fail_domain("Cyc::to_order: incompatible orders");
  long k = m2 / m_;
  std::vector<Int> raw(m2, Int(0));
  for (size_t j = 0; j < c_.size(); ++j) raw[j * k] = c_[j];
  Cyc z(m2);
  z.reduce(raw);
  raw.resize(phi(m2));
  z.c_ = raw;
  return z;
}

Cyc Cyc::galois(long t) const {
  t = ((t % m_) + m_) % m_;
  if (std::gcd(t, m_) != 1) fail_domain("Cyc::galois: exponent not coprime to order");
  std::vector<Int> raw(m_ + 1, Int(0));
  for (size_t j = 0; j < c_.size(); ++j) raw[(long(j) * t) % m_] += c_[j];
  Cyc z(m_);
  z.reduce(raw);
  raw.resize(c_.size());
  z.c_ = raw;
  return z;
}

std::optional<long> Cyc::as_root_of_unity() const {
  for (long k = 0; k < m_; ++k)
    if (*this == zeta(m_, k)) return k;
  return std::nullopt;
}

std::string Cyc::str() const {
  std::ostringstream os;
  bool first = true;
  for (size_t j = 0; j < c_.size(); ++j) {
    if (c_[j] == 0) continue;
    Int a = c_[j];
    if (!first) os << (a > 0 ? " + " : " - ");
    else if (a < 0) os << "-";
    first = false;
    Int aa = abs(a);
    if (j == 0) os << aa.get_str();
    else {
      if (aa != 1) os << aa.get_str() << "*";
      os << "z" << m_;
      if (j > 1) os << "^" << j;
    }
  }
  if (first) os << "0";
  return os.str();
}

Cyc Cyc::omega(long order) { return zeta(order, order / 3); }
Cyc Cyc::imag_i(long order) {
  if (order == 3) fail_domain("Cyc: i needs order divisible by 4");
  return zeta(order, order / 4);
}
Cyc Cyc::sqrtm3(long order) {
  return integer(Int(1), order) + integer(Int(2), order) * omega(order);
}
Cyc Cyc::from_eis(const Eis& z, long order) {
  return integer(z.a, order) + integer(z.b, order) * omega(order);
}

ScaledCyc ScaledCyc::operator+(const ScaledCyc& o) const {
  if (is_zero()) return o;
  if (o.is_zero()) return *this;
  // a/b * X + c/d * Y = 1/(bd) * (ad X + cb Y); then pull out gcd content.
  Int an = scale.get_num(), ad = scale.get_den();
  Int bn = o.scale.get_num(), bd = o.scale.get_den();
  Cyc v = Cyc::integer(an * bd) * value + Cyc::integer(bn * ad) * o.value;
  if (v.is_zero()) return ScaledCyc::zero(value.order());
  Int content = 0;
  for (const auto& x : v.coeffs()) content = gcd(content, x);
  Cyc w(v.order());
  {
    std::vector<Int> cc = v.coeffs();
    for (auto& x : cc) x /= content;
    // rebuild via additions of monomials
    Cyc acc = Cyc::zero(v.order());
    for (size_t j = 0; j < cc.size(); ++j)
      if (cc[j] != 0) acc = acc + Cyc::integer(cc[j], v.order()) * Cyc::zeta(v.order(), long(j));
    w = acc;
  }
  Rat s(content, ad * bd);
  s.canonicalize();
  return {s, w};
}

ScaledCyc ScaledCyc::operator*(const ScaledCyc& o) const {
  return {scale * o.scale, value * o.value};
}

bool ScaledCyc::operator==(const ScaledCyc& o) const {
  if (is_zero() || o.is_zero()) return is_zero() && o.is_zero();
  Int an = scale.get_num(), ad = scale.get_den();
  Int bn = o.scale.get_num(), bd = o.scale.get_den();
  return Cyc::integer(an * bd) * value == Cyc::integer(bn * ad) * o.value;
}

std::string ScaledCyc::str() const {
  std::ostringstream os;
  os << "(" << scale.get_str() << ") * (" << value.str() << ")";
  return os.str();
}

} // namespace cubesum
