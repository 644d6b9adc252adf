#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bge/shadowfar.hpp"

namespace bge {

// A concrete finite group: enumerated elements with composition on indices.
class FiniteGroup {
 public:
  virtual ~FiniteGroup() = default;
  int size() const { return n_; }
  int identity() const { return id_; }
  virtual int mult(int a, int b) const = 0;
  virtual int inverse(int a) const = 0;
  const std::vector<int>& generators() const { return gens_; }
  virtual std::string describe(int a) const { return "g" + std::to_string(a); }

 protected:
  int n_ = 0, id_ = 0;
  std::vector<int> gens_;
};

// Elements are form-preserving matrices, sorted by their packed encoding.
class MatrixGroup final : public FiniteGroup {
 public:
  MatrixGroup(Building b, std::vector<PackedMat> elems, std::vector<PackedMat> gens);
  int mult(int a, int b) const override;
  int inverse(int a) const override;
  const PackedMat& mat(int i) const { return elems_[i]; }
  int index_of(const PackedMat& m) const;  // -1 if absent
  const Building& building() const { return b_; }
  std::string describe(int a) const override;

 private:
  Building b_;
  std::vector<PackedMat> elems_;
  std::vector<std::pair<Enc128, int>> index_;  // sorted for lookup
};

// The additive group of F_p^d; element index digits are the coordinates.
class AdditiveGroup final : public FiniteGroup {
 public:
  AdditiveGroup(int p, int d);
  int mult(int a, int b) const override;
  int inverse(int a) const override;
  int p() const { return p_; }
  int dim() const { return d_; }
  int digit(int a, int i) const;
  int from_digits(const std::vector<int>& digits) const;

 private:
  int p_, d_;
};

// A quotient or other small group given by an explicit Cayley table.
class CayleyGroup final : public FiniteGroup {
 public:
  CayleyGroup(std::vector<std::vector<int>> table, int id, std::vector<int> gens);
  int mult(int a, int b) const override { return table_[a][b]; }
  int inverse(int a) const override { return inv_[a]; }

 private:
  std::vector<std::vector<int>> table_;
  std::vector<int> inv_;
};

std::vector<int> subgroup_closure(const FiniteGroup& g, std::vector<int> gens);
std::vector<int> derived_subgroup(const FiniteGroup& g);
bool is_abelian(const FiniteGroup& g);
bool is_normal(const FiniteGroup& g, const std::vector<int>& n);
int element_order(const FiniteGroup& g, int a);
bool is_elementary_abelian_group(const FiniteGroup& g, int p);

// F_p coordinates for an elementary abelian group; empty when the group is
// not abelian of prime exponent.  Row a holds the coordinates of element a.
std::optional<FpMat> abelian_coordinates(const FiniteGroup& g);

// ---------------------------------------------------------------------------

struct GroupEmbedding {
  PointLineGeometry geom;
  std::shared_ptr<const FiniteGroup> codomain;
  std::vector<std::vector<int>> point_images;  // sorted element indices
  std::vector<std::vector<int>> line_images;
  bool abelian = false;
  std::optional<int> prime;  // common prime order of the point images
};

struct EmbeddingReport {
  std::vector<AxiomCheck> checks;
  bool pass() const {
    for (auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

// the embedding axioms: E1 trivial pairwise point-image intersections,
// E2 containment characterizes incidence, E3 lines generated by their
// points, E4 the codomain generated by all point images
EmbeddingReport check_axioms(const GroupEmbedding& e);

struct QuotientCheck {
  bool normal = false;
  long n_order = 0;
  bool q1 = true;
  std::string q1_witness;
  bool q2 = true;
  std::string q2_witness;
  bool defines_quotient() const { return normal && q1 && q2; }
  std::optional<GroupEmbedding> quotient;
};

// Tests whether N defines a quotient embedding: (Q1) N meets every image
// trivially, (Q2) cosets of non-collinear point images meet in N only.
QuotientCheck quotient_check(const GroupEmbedding& e, const std::vector<int>& n);

// ---------------------------------------------------------------------------

// The unipotent radical of the stabilizer of Astar, as explicit matrices.
// Supported flags: maximal singular subspaces of the polar families
// (either oriflamme class for D), any single type for family A, and
// isotropic points of family C.
std::shared_ptr<const MatrixGroup> unipotent_radical(const Building& b, const BuildingFlag& Astar);

struct UnipotentRep {
  Building building;
  int j = 0;
  BuildingFlag A, Astar;
  LocalGeometry local;
  std::shared_ptr<const MatrixGroup> U;
  GroupEmbedding emb;  // geometry = local.geom, codomain = U
};

// The representation of the local geometry at A inside U_{A*}: an element X
// maps to the subgroup of U_{A*} fixing the minimal flag of X.
UnipotentRep unipotent_rep(const Building& b, int j, const BuildingFlag& A,
                           const BuildingFlag& Astar);
UnipotentRep unipotent_rep(const Building& b, int j);  // standard opposite pair

struct SharpTransitivityReport {
  bool orbit_regular = false;    // orbit of A equals op(A*), trivial stabilizer
  bool refined_regular = false;  // per-element version on each minimal flag
  long op_count = 0;
  long u_order = 0;
  std::string failure;
  bool pass() const { return orbit_regular && refined_regular; }
};

SharpTransitivityReport sharp_transitivity_check(const UnipotentRep& rep);

struct RestrictionResult {
  bool identity = false;  // restriction by a subflag of A itself
  GroupEmbedding emb;     // codomain is the generated subgroup
  std::vector<int> parent_indices;  // its elements, as indices into the parent U
  bool equals_flag_stabilizer = false;
  std::vector<BuildingFlag> point_flags, line_flags;
};

// Restriction to the elements whose shadows lie in the shadow of F; the
// codomain is generated by the restricted images and must coincide with
// the F-stabilizer inside U_{A*}.
RestrictionResult restrict_embedding(const UnipotentRep& rep, const BuildingFlag& f);

struct AbelianizationReport {
  long derived_order = 1;
  bool b1 = true;
  std::string b1_witness;
  bool b2 = true;
  std::string b2_witness;
  bool b3 = false;  // the quotient is the additive group of a vector space
  bool b4 = false;  // image dimensions 1 (points) and 2 (lines)
  std::vector<int> point_dims, line_dims;
  std::optional<GroupEmbedding> abelianization;
};

AbelianizationReport abelianization_check(const UnipotentRep& rep);

// elements of U acting trivially on the anisotropic tail (A + A*)^perp;
// for the odd-dimensional quadratic family this is the subgroup W of
// elements with zero translation part
std::vector<int> tail_fixing_subgroup(const UnipotentRep& rep);

struct EmbeddingIso {
  std::vector<int> geometry_map;  // points of e1 -> points of e2
  std::vector<int> group_map;     // codomain of e1 -> codomain of e2
};

// Explicit isomorphism of embeddings: a geometry isomorphism together with
// a group isomorphism matching every image subgroup, built by mapping point
// generators and extending multiplicatively.
std::optional<EmbeddingIso> embedding_isomorphism(const GroupEmbedding& e1,
                                                  const GroupEmbedding& e2);

}  // namespace bge
