#include "bge/gf.hpp"

#include <map>
#include <mutex>
#include <sstream>

namespace bge {

namespace {

bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

// x^2 + m1*x + m0 is irreducible over F_p iff it has no root.
bool irreducible_quadratic(int p, int m0, int m1) {
  for (int t = 0; t < p; ++t)
    if ((t * t + m1 * t + m0) % p == 0) return false;
  return true;
}

}  // namespace

FieldSpec::FieldSpec(int p, int k) : p_(p), k_(k), q_(k == 1 ? p : p * p) {
  if (!is_prime(p)) throw contract_violation("field characteristic must be prime");
  if (k != 1 && k != 2) throw unsupported_error("only extension degrees 1 and 2 are supported");
  if (q_ > 256) throw unsupported_error("field too large for table-based arithmetic");

  if (k == 2) {
    if (p == 2) {
      m0_ = 1, m1_ = 1;  // x^2 + x + 1
    } else if (p == 3) {
      m0_ = 1, m1_ = 0;  // x^2 + 1
    } else {
      bool found = false;
      for (int m1 = 0; m1 < p && !found; ++m1)
        for (int m0 = 0; m0 < p && !found; ++m0)
          if (irreducible_quadratic(p, m0, m1)) {
            m0_ = m0, m1_ = m1;
            found = true;
          }
    }
    if (!irreducible_quadratic(p, m0_, m1_))
      throw contract_violation("modulus is reducible");
  }

  add_.resize(q_ * q_);
  mul_.resize(q_ * q_);
  neg_.resize(q_);
  inv_.resize(q_, 0);
  auto lo = [&](int a) { return a % p_; };
  auto hi = [&](int a) { return a / p_; };
  for (int a = 0; a < q_; ++a) {
    for (int b = 0; b < q_; ++b) {
      if (k_ == 1) {
        add_[a * q_ + b] = static_cast<uint8_t>((a + b) % p_);
        mul_[a * q_ + b] = static_cast<uint8_t>((a * b) % p_);
      } else {
        int c0 = (lo(a) + lo(b)) % p_, c1 = (hi(a) + hi(b)) % p_;
        add_[a * q_ + b] = static_cast<uint8_t>(c0 + p_ * c1);
        // (a0 + a1 x)(b0 + b1 x) with x^2 = -m1 x - m0
        int t0 = (lo(a) * lo(b)) % p_;
        int t1 = (lo(a) * hi(b) + hi(a) * lo(b)) % p_;
        int t2 = (hi(a) * hi(b)) % p_;
        int r0 = (t0 + (p_ - m0_ % p_) * t2) % p_;
        int r1 = (t1 + (p_ - m1_ % p_) * t2) % p_;
        mul_[a * q_ + b] = static_cast<uint8_t>(r0 + p_ * r1);
      }
    }
  }
  for (int a = 0; a < q_; ++a) {
    if (k_ == 1) {
      neg_[a] = static_cast<uint8_t>((p_ - a) % p_);
    } else {
      neg_[a] = static_cast<uint8_t>((p_ - lo(a)) % p_ + p_ * ((p_ - hi(a)) % p_));
    }
  }
  for (int a = 1; a < q_; ++a)
    for (int b = 1; b < q_; ++b)
      if (mul_[a * q_ + b] == 1) inv_[a] = static_cast<uint8_t>(b);

  if (k_ == 2) {
    frob_.resize(q_);
    for (int a = 0; a < q_; ++a) {
      int r = a;
      for (int i = 1; i < p_; ++i) r = mul_[r * q_ + a];
      frob_[a] = static_cast<uint8_t>(r);
    }
  }
}

int FieldSpec::pow(int a, long e) const {
  if (e < 0) {
    a = inv(a);
    e = -e;
  }
  int r = 1;
  while (e > 0) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

std::string FieldSpec::literal(int a) const {
  std::ostringstream os;
  os << p_ << "^" << k_ << ":";
  if (k_ == 1)
    os << a;
  else
    os << a % p_ << "," << a / p_;
  return os.str();
}

Field make_field(int p, int k) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, Field> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(p, k);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  Field f(new FieldSpec(p, k));
  cache.emplace(key, f);
  return f;
}

FqElement field_arith(FqElement a, FqElement b, FieldOp op) {
  if (!a.field) throw contract_violation("element has no field");
  if (op != FieldOp::neg && op != FieldOp::inv && a.field != b.field)
    throw contract_violation("operands from different fields");
  const FieldSpec& F = *a.field;
  switch (op) {
    case FieldOp::add: return {F.add(a.code, b.code), &F};
    case FieldOp::mul: return {F.mul(a.code, b.code), &F};
    case FieldOp::inv: return {F.inv(a.code), &F};
    case FieldOp::neg: return {F.neg(a.code), &F};
  }
  throw contract_violation("unknown field op");
}

FqElement frobenius(FqElement a) {
  if (!a.field) throw contract_violation("element has no field");
  return {a.field->frobenius(a.code), a.field};
}

std::pair<Field, FqElement> parse_fq_literal(const std::string& s) {
  auto caret = s.find('^');
  auto colon = s.find(':');
  if (caret == std::string::npos || colon == std::string::npos || caret > colon)
    throw contract_violation("bad field literal: " + s);
  int p = std::stoi(s.substr(0, caret));
  int k = std::stoi(s.substr(caret + 1, colon - caret - 1));
  Field F = make_field(p, k);
  std::string coeffs = s.substr(colon + 1);
  int c0 = 0, c1 = 0;
  auto comma = coeffs.find(',');
  if (comma == std::string::npos) {
    c0 = std::stoi(coeffs);
  } else {
    c0 = std::stoi(coeffs.substr(0, comma));
    c1 = std::stoi(coeffs.substr(comma + 1));
  }
  if (k == 1 && c1 != 0) throw contract_violation("prime field literal with extension coefficient");
  c0 = ((c0 % p) + p) % p;
  c1 = ((c1 % p) + p) % p;
  return {F, FqElement{c0 + p * c1, F.get()}};
}

}  // namespace bge
