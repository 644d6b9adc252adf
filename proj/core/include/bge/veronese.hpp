#pragma once

#include "bge/grouprep.hpp"

namespace bge {

// Quadratic Veronesean of PG(n-1, q), q prime: a point <v> maps to the
// 1-dimensional span of v^T v inside the additive group of symmetric
// n x n matrices, a line to the span of its point images.
GroupEmbedding veronese_quadratic(int n, int q);

// Hermitian Veronesean of PG(n-1, q^2), q prime: <v> maps to the F_q-span
// of conj(v)^T v inside the F_q-space of hermitian n x n matrices over
// F_{q^2} (dimension n^2 over F_q).
GroupEmbedding veronese_hermitian(int n, int q);

// The line grassmannian of PG(n-1, q) in the exterior square of F_q^n:
// <v1, v2> maps to the span of v1 ^ v2.
GroupEmbedding wedge_embedding(int n, int q);

// The natural embedding of the point-line truncation of a classical
// building (types 1 and 2) into its ambient vector space.
GroupEmbedding natural_embedding(const Building& b);

struct IdentifyResult {
  bool ok = false;
  std::string witness;
  std::optional<EmbeddingIso> iso;
};

// Explicit identification of a coordinatized embedding with a unipotent
// representation, or a structured failure witness.
IdentifyResult identify_with_unipotent(const GroupEmbedding& v, const UnipotentRep& rep);

}  // namespace bge
