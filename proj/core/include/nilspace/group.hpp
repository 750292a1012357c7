#pragma once

// Finite groups with indexed elements (index 0 is the identity), subgroups,
// filtrations, quotients and coset spaces.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nilspace {

using Elem = std::uint32_t;

inline constexpr std::size_t kMaxGroupOrder = 4096;

class Group {
 public:
  enum class Law { CyclicProduct, Heisenberg, DirectProduct, Quotient, Table };

  // Z/d_1 x ... x Z/d_r, mixed radix with the first factor least significant.
  static Group cyclic_product(std::vector<int> moduli);
  static Group cyclic(int m) { return cyclic_product({m}); }
  // Upper unitriangular 3x3 matrices over Z/m; (a,b,c) <-> [[1,a,c],[0,1,b],[0,0,1]],
  // index a + m b + m^2 c.
  static Group heisenberg(int m);
  // index of (g, h) is g + |G| h.
  static Group direct_product(const Group& g, const Group& h);
  // Validated multiplication table; row 0 / column 0 must be the identity.
  static Group from_table(std::vector<std::vector<Elem>> table, std::string name = "table");

  std::size_t order() const { return order_; }
  Elem mul(Elem a, Elem b) const { return table_[static_cast<std::size_t>(a) * order_ + b]; }
  Elem inv(Elem a) const { return inverse_[a]; }
  Elem pow(Elem a, long long e) const;
  // [a,b] = a^-1 b^-1 a b
  Elem commutator(Elem a, Elem b) const { return mul(mul(inv(a), inv(b)), mul(a, b)); }
  bool is_abelian() const;
  Law law() const { return law_; }
  const std::string& name() const { return name_; }
  // Structured coordinates: residues for cyclic products, (a,b,c) for Heisenberg.
  const std::vector<int>& moduli() const { return moduli_; }
  std::vector<int> coordinates(Elem g) const;
  Elem from_coordinates(std::span<const int> coords) const;
  std::vector<std::vector<Elem>> table() const;

  friend bool operator==(const Group& a, const Group& b) { return a.table_ == b.table_; }

 private:
  Group() = default;
  void finish();

  Law law_ = Law::Table;
  std::string name_;
  std::size_t order_ = 0;
  std::vector<int> moduli_;
  std::vector<Elem> table_;
  std::vector<Elem> inverse_;
};

class Subgroup {
 public:
  Subgroup() = default;
  // elems must form a subgroup of a group of the given order (checked).
  Subgroup(const Group& g, std::vector<Elem> elems);
  static Subgroup trivial(const Group& g);
  static Subgroup whole(const Group& g);

  bool contains(Elem g) const { return g < member_.size() && member_[g] != 0; }
  std::size_t size() const { return elems_.size(); }
  const std::vector<Elem>& elements() const { return elems_; }
  bool is_trivial() const { return elems_.size() == 1; }
  bool subset_of(const Subgroup& other) const;
  friend bool operator==(const Subgroup& a, const Subgroup& b) { return a.elems_ == b.elems_; }

 private:
  std::vector<char> member_;
  std::vector<Elem> elems_;  // sorted
};

Subgroup subgroup_closure(const Group& g, std::span<const Elem> generators);
// Subgroup generated by all [a,b] with a in A, b in B.
Subgroup commutator_subgroup(const Group& g, const Subgroup& a, const Subgroup& b);
bool is_normal(const Group& g, const Subgroup& n);

struct FiltrationViolation {
  enum class Kind { NotNested, Commutator, NotTerminating } kind;
  int i = 0, j = 0;
  Elem g = 0, h = 0;
  std::string message() const;
};

// Nested chain G_0 >= G_1 >= ... with [G_i, G_j] <= G_{i+j}. Levels beyond
// the stored chain are trivial.
class FilteredGroup {
 public:
  // Throws std::invalid_argument on an invalid chain; use validate_filtration
  // to obtain a witness instead.
  FilteredGroup(Group g, std::vector<Subgroup> chain);

  static FilteredGroup lower_central(const Group& g);
  static FilteredGroup maximal_degree(const Group& a, int k);  // A_0 = ... = A_k = A

  const Group& group() const { return group_; }
  const Subgroup& level(int i) const;
  bool in_level(int i, Elem g) const { return level(i).contains(g); }
  // Smallest k with G_{k+1} trivial.
  int degree() const { return degree_; }
  // Cu^1 is everything, i.e. G_1 = G.
  bool ergodic() const { return level(1).size() == group_.order(); }
  FilteredGroup shifted(int l) const;

 private:
  Group group_;
  std::vector<Subgroup> chain_;
  Subgroup trivial_;
  int degree_ = 0;
};

std::optional<FiltrationViolation> validate_filtration(const Group& g, const std::vector<Subgroup>& chain);

struct QuotientGroup {
  Group group;
  std::vector<Elem> projection;     // G -> G/N
  std::vector<Elem> representative;  // smallest element of each coset
};

// Throws if N is not normal. Coset indices follow representative order.
QuotientGroup quotient(const Group& g, const Subgroup& n);
// (G_i N)/N on the quotient.
FilteredGroup push_forward(const FilteredGroup& fg, const QuotientGroup& q);

// Left cosets x Gamma with the left G-action.
class CosetSpace {
 public:
  CosetSpace(const Group& g, const Subgroup& gamma);

  std::size_t size() const { return representatives_.size(); }
  Elem representative(std::size_t coset) const { return representatives_[coset]; }
  std::size_t coset_of(Elem g) const { return coset_of_[g]; }
  std::size_t act(Elem g, std::size_t coset) const;
  const Subgroup& stabilizer_subgroup() const { return gamma_; }

 private:
  Group group_;
  Subgroup gamma_;
  std::vector<Elem> representatives_;
  std::vector<std::size_t> coset_of_;
};

// Finite abelian group in invariant-factor form d_1 | d_2 | ... | d_r.
class FiniteAbelianGroup {
 public:
  FiniteAbelianGroup() : FiniteAbelianGroup(std::vector<long long>{}) {}
  // Any list of positive moduli; normalized to invariant factors.
  explicit FiniteAbelianGroup(std::vector<long long> moduli);

  const std::vector<long long>& invariant_factors() const { return factors_; }
  std::size_t order() const { return order_; }
  const Group& group() const { return *group_; }

  std::vector<long long> coordinates(Elem a) const;
  Elem from_coordinates(std::span<const long long> c) const;
  Elem add(Elem a, Elem b) const { return group_->mul(a, b); }
  Elem neg(Elem a) const { return group_->inv(a); }
  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }
  Elem scale(long long k, Elem a) const { return group_->pow(a, k); }
  std::string str() const;

  friend bool operator==(const FiniteAbelianGroup& a, const FiniteAbelianGroup& b) {
    return a.factors_ == b.factors_;
  }

 private:
  std::vector<long long> factors_;
  std::size_t order_ = 1;
  std::shared_ptr<const Group> group_;
};

// Invariant factors of an abelian group given by a table.
std::vector<long long> invariant_factors_of(const Group& a);

// An explicit isomorphism from a table-backed abelian group onto its
// invariant-factor form: iso[g] is the image of g.
struct AbelianIdentification {
  FiniteAbelianGroup canonical;
  std::vector<Elem> iso;
};
AbelianIdentification identify_abelian(const Group& a);

}  // namespace nilspace
