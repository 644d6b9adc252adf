#pragma once

#include <stdexcept>
#include <string>

namespace bge {

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A documented precondition of an operation was violated by the caller.
struct contract_violation : error {
  using error::error;
};

// The requested (input, operation) pair is outside the supported range.
struct unsupported_error : error {
  using error::error;
};

// Mathematical domain error (e.g. inverting zero in a field).
struct math_domain_error : error {
  using error::error;
};

// A configured resource bound (group order, coset count) was exceeded.
struct resource_error : error {
  using error::error;
};

}  // namespace bge
