#pragma once

// Cubespaces on finite point sets: a membership oracle per dimension, axiom
// checkers, and the generic constructions built on top of corner completion.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nilspace/cube.hpp"
#include "nilspace/group.hpp"

namespace nilspace {

using Point = std::uint32_t;
using CubeMap = CubeValues;  // point indices in colex vertex order

enum class Provenance { ExplicitTables, GroupGenerated, Coset, Product, Arrow, Partial, Quotient, Extension, Subspace };
std::string to_string(Provenance p);

// Colex order on equal-length tuples: the last entry is most significant.
bool colex_less(std::span<const Point> a, std::span<const Point> b);

// Restriction of q to the face {w : w agrees with top off free}, where free is
// a submask of top; the result lives on {0,1}^|free|.
CubeMap face_restriction(std::span<const Point> q, VertexIndex top, VertexIndex free);

class Cubespace {
 public:
  // Decides membership of a map {0,1}^n -> X with 1 <= n <= dim_cap.
  using Oracle = std::function<bool(std::span<const Point>)>;
  // Lists Cu^n(X) directly, for spaces with a fast parametrization.
  using Generator = std::function<std::vector<CubeMap>(int n)>;
  // Some completion of an n-corner (2^n - 1 values), or nullopt.
  using Completer = std::function<std::optional<Point>(std::span<const Point>)>;

  struct Traits {
    int dim_cap = 3;
    std::optional<int> step;  // known upper bound on the step
    bool memoize = true;
    Generator generator;
    Completer completer;
  };

  Cubespace(std::string name, std::size_t points, Provenance provenance, Oracle oracle, Traits traits);

  const std::string& name() const;
  std::size_t size() const;
  Provenance provenance() const;
  int dim_cap() const;
  std::optional<int> step() const;
  bool has_generator() const;

  // Cu^0 is every point. Above dim_cap, a space with known step k <= dim_cap-1
  // is queried through its (k+1)-faces; otherwise DimensionError.
  bool contains(std::span<const Point> q) const;
  // Largest dimension that contains() answers.
  int max_queryable_dim() const;

  // Cu^n(X) in colex order. Uses the generator when present, a full scan
  // when |X|^(2^n) <= 2^22, and otherwise a depth-first search in colex vertex
  // order that prunes with the faces whose top vertex was just assigned.
  const std::vector<CubeMap>& cubes(int n) const;
  // n-corners: maps on {0,1}^n minus 1^n whose (n-1)-faces through 0^n are cubes.
  std::vector<CubeMap> corners(int n) const;

  // Some completion: the configured completer, else the smallest brute-force one.
  std::optional<Point> complete(std::span<const Point> corner) const;

  Cubespace with_name(std::string name) const;
  Cubespace with_step(int k) const;
  Cubespace with_dim_cap(int cap) const;

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

// ---- axiom checks ------------------------------------------------------------

struct CompletionVerdict {
  int n = 0;
  bool complete = true;
  bool unique = true;
  std::optional<CubeMap> incomplete_corner;  // no completion
  std::optional<CubeMap> ambiguous_corner;   // more than one
};

struct AxiomReport {
  int n_max = 0;
  bool composition = true;
  std::optional<std::pair<CubeMorphism, CubeMap>> composition_witness;  // q is a cube, q o phi is not
  bool ergodic = true;
  std::optional<std::pair<Point, Point>> ergodicity_witness;
  std::vector<CompletionVerdict> completion;  // n = 1..n_max
  std::optional<int> step;                    // smallest k with unique completion for k+1 <= n <= n_max

  bool corner_completion() const;
  bool is_nilspace() const { return composition && ergodic && corner_completion(); }
  // Human-readable verdict, always qualified by "up to dimension n_max".
  std::string verdict() const;
};

AxiomReport check_axioms(const Cubespace& x, int n_max = 3);

struct ParallelepipedReport {
  int n_max = 0;
  bool p1_full = true;
  bool face_restrictions = true;
  bool symmetries = true;
  bool equivalence = true;
  bool closing = true;
  std::optional<std::string> witness;  // first failure, described
  bool holds() const { return p1_full && face_restrictions && symmetries && equivalence && closing; }
  std::string verdict() const;
};

ParallelepipedReport check_parallelepiped_axioms(const Cubespace& x, int n_max = 3);

// Every x with corner + {1^n -> x} a cube. Throws std::invalid_argument if
// the corner premise fails.
std::vector<Point> complete_corner_bruteforce(const Cubespace& x, std::span<const Point> corner);
void check_corner_premise(const Cubespace& x, std::span<const Point> corner);

// ---- constructions -----------------------------------------------------------

// The filtered group as a nilspace; step = degree.
Cubespace group_cubespace(const FilteredGroup& fg, std::string name = {});
// D_k(A): A with its maximal degree-k filtration.
Cubespace degree_k_cubespace(const FiniteAbelianGroup& a, int k);
// Cosets x Gamma with cubes the projections of Cu^n(G.). Membership lifts by
// depth-first search over Gamma corrections in colex vertex order, pruning
// on the upper-face coefficients.
Cubespace coset_cubespace(const FilteredGroup& fg, const Subgroup& gamma, std::string name = {});
// Lift q in Cu^n(G.) with q(v) Gamma = cosets[v], first found in search order.
std::optional<CubeValues> lift_coset_cube(const FilteredGroup& fg, const CosetSpace& cosets,
                                          std::span<const Point> q);

// Point (x, y) has index x + |X| y.
Cubespace product(const Cubespace& x, const Cubespace& y);
// X join_k X on pairs (x0, x1) with index x0 + |X| x1.
Cubespace arrow_space(const Cubespace& x, int k);
// d_x X: q is a cube iff <x, q>_1 is a cube of X.
Cubespace partial_x(const Cubespace& x, Point base);
// Induced cubes on a subset; new point i is points[i].
Cubespace restrict_to(const Cubespace& x, std::vector<Point> points);
// Explicit membership tables per dimension 1..max; Cu^0 is every point.
Cubespace explicit_cubespace(std::string name, std::size_t points, std::map<int, std::vector<CubeMap>> tables,
                             std::optional<int> step = std::nullopt);
std::map<int, std::vector<CubeMap>> export_tables(const Cubespace& x, int n_max);
// Disjoint union as explicit tables up to n_max; Y's points follow X's.
Cubespace disjoint_union(const Cubespace& x, const Cubespace& y, int n_max);

// Set system on S = {1..dim}: P is every vertex whose support lies inside one
// of the generating supports (the downward closure is implicit).
struct SimplicialPattern {
  int dim = 0;
  std::vector<VertexIndex> generators;

  bool contains(VertexIndex v) const;
  std::vector<VertexIndex> points() const;
  // The weight <= k part of {0,1}^dim.
  static SimplicialPattern skeleton(int dim, int k);
};

// Extends a morphism P -> X (values given on P, ignored elsewhere) to a cube
// on {0,1}^dim by completing corners in colex order. Throws
// std::invalid_argument if f is not a morphism on P and std::runtime_error if
// some corner has no completion.
CubeMap simplicial_extend(const Cubespace& x, const SimplicialPattern& pattern, std::span<const Point> f);

// Concatenation of adjacent cubes q1 < q2, produced by simplicial extension
// of the two glued faces and read off through (v', 1 - v_n, v_n).
CubeMap concatenate_cubes(const Cubespace& x, std::span<const Point> q1, std::span<const Point> q2);

// Tricube maps T_n -> X are tables indexed by TricubePoint::index().
bool is_tricube_morphism(const Cubespace& x, int n, std::span<const Point> t);
// Glues cubes pieces[v] (read through psi_v) into a map T_n -> X; throws
// std::invalid_argument if two pieces disagree where their subcubes meet.
std::vector<Point> glue_tricube(int n, const std::vector<CubeMap>& pieces);
// t o omega_n, obtained through lambda^n, simplicial extension to {0,1}^{2n}
// and the outer-point morphism.
CubeMap tricube_compose(const Cubespace& x, int n, std::span<const Point> t);

struct ErgodicComponents {
  std::vector<std::size_t> component_of;        // per point
  std::vector<std::vector<Point>> members;       // sorted, by smallest member
  std::vector<Cubespace> spaces;
};
ErgodicComponents ergodic_components(const Cubespace& x);

}  // namespace nilspace
