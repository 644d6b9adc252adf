#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bge/grouprep.hpp"

namespace bge {

// A finite presentation: generators with declared orders, relators as
// signed 1-based index words (negative = inverse).
struct Presentation {
  int ngens = 0;
  std::vector<int> orders;
  std::vector<std::vector<int>> relators;
  std::vector<int> gen_point;  // source geometry point per generator, -1 if none
};

struct CosetTable {
  int ngens = 0;
  long coset_count = 0;
  // row-major over live cosets; per generator two columns (g, g^{-1})
  std::vector<int32_t> entries;

  int32_t at(long coset, int col) const { return entries[coset * 2 * ngens + col]; }
};

enum class TCStatus { complete, overflowed };

struct ToddCoxeterResult {
  TCStatus status = TCStatus::overflowed;
  unsigned long order = 0;
  long high_water = 0;  // most live cosets held at once
  long defined = 0;     // cosets ever defined
  CosetTable table;     // compressed; populated only on completion
};

// Deterministic coset enumeration over the trivial subgroup, HLT strategy:
// relators are scanned in their listed order at each live coset in
// increasing order, gaps filled by defining the lowest new coset, and
// coincidences merged towards the smaller coset number.  max_cosets bounds
// the number of cosets ever defined.
ToddCoxeterResult todd_coxeter(const Presentation& pres, long max_cosets = 1L << 20);

// FNV-1a hash of the compressed table, stable across runs and platforms.
std::string table_hash(const ToddCoxeterResult& r);

// true iff the coset permutations of all generators pairwise commute and
// have the declared prime order
bool is_elementary_abelian(const ToddCoxeterResult& r, const Presentation& pres);

// Reduced presentation of an embedding with point images cyclic of prime
// order p and line images elementary abelian: one generator per point with
// its order relator, commutators for collinear pairs, and one relator per
// basis element of the linear relations among the point generators inside
// each line image.  Because line images are generated by their point images,
// this presents the universal completion of the amalgam of all images.
Presentation build_presentation(const GroupEmbedding& e);

// basis of the linear relations among the point generators of each line,
// as rows over all points (used by the presentation and the abelian hull)
FpMat line_relation_matrix(const GroupEmbedding& e);

// #points - rank of the line relation matrix over F_p
int abelian_hull_dim(const GroupEmbedding& e);

struct Rational {
  long num = 0, den = 1;
  bool operator==(const Rational&) const = default;
};

Rational cover_degree(unsigned long hull_order, long codomain_order);
Rational cover_degree(const ToddCoxeterResult& hull, const UnipotentRep& rep);

// line-oriented amalgam file, versioned header
std::string amalgam_to_string(const Presentation& p);
Presentation amalgam_from_string(const std::string& text);

}  // namespace bge
