#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "bge/errors.hpp"

namespace bge {

// Arithmetic in F_q with q = p^k, k in {1, 2}.
//
// Elements are integer codes in 0..q-1.  For k == 1 the code is the
// representative itself; for k == 2 the element c0 + c1*x has code
// c0 + p*c1, where x is a root of the fixed monic modulus
// x^2 + m1*x + m0 over F_p.  The moduli are pinned so that every
// downstream enumeration is bit-stable: F_4 uses x^2+x+1, F_9 uses x^2+1.
class FieldSpec {
 public:
  int p() const { return p_; }
  int k() const { return k_; }
  int q() const { return q_; }

  // lower coefficients (m0, m1) of the modulus; meaningful only for k == 2
  std::pair<int, int> modulus() const { return {m0_, m1_}; }

  int add(int a, int b) const { return add_[a * q_ + b]; }
  int sub(int a, int b) const { return add_[a * q_ + neg_[b]]; }
  int mul(int a, int b) const { return mul_[a * q_ + b]; }
  int neg(int a) const { return neg_[a]; }
  int inv(int a) const {
    if (a == 0) throw math_domain_error("field inverse of zero");
    return inv_[a];
  }
  int pow(int a, long e) const;

  // the order-2 field automorphism a -> a^p; requires k == 2
  int frobenius(int a) const {
    if (k_ != 2) throw unsupported_error("frobenius requires a quadratic extension field");
    return frob_[a];
  }

  // bit width used when packing vectors over this field (supported for q <= 4)
  int bits_per_entry() const { return q_ <= 2 ? 1 : 2; }

  // element literal in the form "p^k:c0[,c1]"
  std::string literal(int a) const;

  bool operator==(const FieldSpec& o) const { return p_ == o.p_ && k_ == o.k_; }

 private:
  friend std::shared_ptr<const FieldSpec> make_field(int p, int k);
  FieldSpec(int p, int k);

  int p_, k_, q_;
  int m0_ = 0, m1_ = 0;
  std::vector<uint8_t> add_, mul_, neg_, inv_, frob_;
};

using Field = std::shared_ptr<const FieldSpec>;

// Cached constructor; the returned pointer is stable for the process
// lifetime, so raw FieldSpec pointers may be stored in hot data structures.
Field make_field(int p, int k);

// An element together with its field descriptor.  Plain value type.
struct FqElement {
  int code = 0;
  const FieldSpec* field = nullptr;

  bool operator==(const FqElement&) const = default;
};

enum class FieldOp { add, mul, inv, neg };

FqElement field_arith(FqElement a, FqElement b, FieldOp op);
FqElement frobenius(FqElement a);

// Parses an element literal "p^k:c0[,c1]", e.g. "2^2:1,1" for x+1 in F_4.
std::pair<Field, FqElement> parse_fq_literal(const std::string& s);

}  // namespace bge
