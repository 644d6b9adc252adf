#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "bge/linalg.hpp"

namespace bge {

enum class FormKind {
  linear,          // no form (family A)
  symplectic,      // alternating, family C
  quadratic_odd,   // nondegenerate quadratic, odd dimension (family B)
  quadratic_plus,  // hyperbolic quadric (family D)
  quadratic_minus, // minus-type quadric (family 2D)
  hermitian,       // sesquilinear over F_{q^2} (family 2A)
};

// A subspace in canonical reduced row-echelon form; basis vectors are the
// rows.  Two equal subspaces always compare equal bit for bit.
struct Subspace {
  PackedMat basis;

  int dim() const { return basis.rows; }
  Enc128 key() const { return encode(basis); }
  bool operator==(const Subspace& o) const { return basis == o.basis; }
  bool operator<(const Subspace& o) const { return key() < o.key(); }
};

struct FlagElem {
  int type = 0;  // 1..rank
  Subspace sub;

  bool operator==(const FlagElem&) const = default;
};

// A flag: pairwise incident elements with distinct types, sorted by type.
struct BuildingFlag {
  std::vector<FlagElem> elems;

  bool empty() const { return elems.empty(); }
  std::vector<int> type_set() const;
  const FlagElem* of_type(int t) const;
  bool operator==(const BuildingFlag&) const = default;
  bool operator<(const BuildingFlag& o) const;
};

struct GroupElement {
  PackedMat m;

  bool operator==(const GroupElement&) const = default;
};

// A finite classical building realized inside a formed vector space.
// Standard coordinate layout: e_1..e_w | f_1..f_w | anisotropic tail,
// with the form pairing e_i against f_i.
class BuildingModel {
 public:
  const std::string& name() const { return name_; }
  char family() const { return family_; }   // 'A','B','C','D','a'(2A),'d'(2D)
  int rank() const { return rank_; }
  int dim() const { return dim_; }
  int witt() const { return witt_; }
  int qname() const { return qname_; }
  const FieldSpec& F() const { return *field_; }
  Field field() const { return field_; }
  FormKind kind() const { return kind_; }
  const PackedMat& gram() const { return gram_; }

  // ---- form evaluation ----
  int bilinear(Word u, Word v) const;  // sesquilinear in the hermitian case
  int quad_value(Word v) const;
  bool singular_vector(Word v) const;
  bool totally_singular(const PackedMat& rows) const;
  Subspace perp(const Subspace& s) const;
  bool preserves_form(const PackedMat& g) const;

  // ---- elements ----
  // All totally isotropic/singular k-subspaces (all k-subspaces for family
  // A), canonically sorted.  k above the Witt index yields an empty list.
  const std::vector<Subspace>& isotropic(int k) const;
  const std::vector<Subspace>& elements_of_type(int t) const;
  int type_of_maximal(const Subspace& m) const;  // D only: n or n-1 via class
  int element_type(const Subspace& s) const;

  // oriflamme class of a maximal singular subspace, '+' or '-'
  char type_d_class(const Subspace& m) const;

  // ---- incidence / opposition ----
  bool incident(const FlagElem& a, const FlagElem& b) const;
  bool is_flag(const std::vector<FlagElem>& elems) const;
  int opposite_type(int t) const;
  bool is_opposite_elem(const FlagElem& a, const FlagElem& b) const;
  // requires tau(g) = tau_op(tau(f)); flags are opposite iff elementwise so
  bool is_opposite(const BuildingFlag& f, const BuildingFlag& g) const;

  // ---- diagram data ----
  std::vector<int> diagram_neighbors(int t) const;
  int gonality(int i, int j) const;     // of an {i,j}-residue
  int residue_order(int t) const;       // s_t

  // ---- standard frames ----
  Subspace e_block(int k) const;  // span(e_1..e_k)
  Subspace f_block(int k) const;
  // standard opposite pair of singleton-j flags
  std::pair<BuildingFlag, BuildingFlag> standard_pair(int j) const;
  // change of basis T (columns = images of the standard basis) carrying the
  // standard maximal pair onto (A, A*); form-preserving by construction
  PackedMat adapted_frame(const Subspace& A, const Subspace& Astar) const;

 private:
  friend std::shared_ptr<const BuildingModel> parse_building(const std::string&);
  BuildingModel(std::string name, char family, int rank, int q);

  std::string name_;
  char family_;
  int rank_, dim_, witt_, qname_;
  Field field_;
  FormKind kind_;
  PackedMat gram_;  // polarization for quadratic kinds
  PackedMat quad_;  // upper triangular, Q(v) = sum quad[i][j] v_i v_j

  mutable std::mutex mu_;
  mutable std::map<int, std::vector<Subspace>> iso_cache_;
  mutable std::map<int, std::vector<Subspace>> type_cache_;
};

using Building = std::shared_ptr<const BuildingModel>;

// Parses names like "C3(2)", "B3(3)", "D4(2)", "2A5(2)", "2D4(2)", "A3(2)".
Building parse_building(const std::string& name);

Subspace make_subspace(const FieldSpec& F, PackedMat rows);
Subspace zero_subspace(int ambient_dim);
BuildingFlag flag_of(const BuildingModel& b, const Subspace& s);
BuildingFlag flag_union(const BuildingModel& b, const BuildingFlag& f, const BuildingFlag& g);

Subspace intersect(const FieldSpec& F, const Subspace& a, const Subspace& b);
int intersection_dim(const FieldSpec& F, const Subspace& a, const Subspace& b);
Subspace span_of(const FieldSpec& F, const Subspace& a, const Subspace& b);
bool contains(const FieldSpec& F, const Subspace& big, const Subspace& small);

// all j-dimensional subspaces of the row space of `inside`, canonical order
std::vector<Subspace> subspaces_of(const FieldSpec& F, const Subspace& inside, int j);

Subspace apply(const BuildingModel& b, const GroupElement& g, const Subspace& s);
BuildingFlag apply(const BuildingModel& b, const GroupElement& g, const BuildingFlag& f);

inline bool is_opposite(const BuildingModel& b, const BuildingFlag& f, const BuildingFlag& g) {
  return b.is_opposite(f, g);
}
inline const std::vector<Subspace>& enumerate_isotropic(const BuildingModel& b, int k) {
  return b.isotropic(k);
}

}  // namespace bge
