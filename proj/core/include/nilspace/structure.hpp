#pragma once

// The relations ~k, canonical factors F_k, structure groups, the bundle
// decomposition of a finite nilspace, and bundle-morphism tools.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nilspace/cubespace.hpp"
#include "nilspace/group.hpp"

namespace nilspace {

struct SimK {
  int k = 0;
  std::vector<std::size_t> class_of;       // per point
  std::vector<std::vector<Point>> classes;  // sorted, ordered by smallest member

  std::size_t count() const { return classes.size(); }
  bool related(Point a, Point b) const { return class_of[a] == class_of[b]; }
};

// One membership query: 0^{k+1} -> b, every other vertex -> a.
bool sim_k_related(const Cubespace& x, int k, Point a, Point b);
// Pairwise tests plus union-find. Throws std::logic_error if the pairwise
// relation is not transitive (x is then not a nilspace).
SimK sim_k(const Cubespace& x, int k);

struct FactorSpace {
  SimK relation;
  std::vector<Point> projection;  // X -> F_k(X); the point of F_k is the class index
  Cubespace space;
};

// F_k(X) with step k. Membership lifts the weight <= k+1 skeleton through
// smallest-index preimages and extends simplicially; enumeration projects
// the cubes of X. When every class is a singleton the space is X itself.
FactorSpace factor(const Cubespace& x, int k);
// A cube of X over q, or nullopt if q is not a cube of the factor.
std::optional<CubeMap> lift_factor_cube(const Cubespace& x, const FactorSpace& f, std::span<const Point> q);

// Completion at 1^{k+1} of the corner with x0 off the pattern, y0 at
// (1^k, 0) and x1 on the rest of the w = 1 face.
Point local_translation_at(const Cubespace& x, int k, Point x0, Point x1, Point y0);
// phi_{x0,x1} on the ~_{k-1} class of x0.
std::map<Point, Point> local_translation(const Cubespace& x, int k, Point x0, Point x1);

struct StructureGroup {
  int k = 0;
  SimK fibres;  // classes of ~_{k-1}
  Point base = 0;  // smallest point; its class is the base fibre
  std::vector<Point> base_fibre;
  FiniteAbelianGroup group;
  std::vector<Point> element_point;  // group element a -> base + a
  std::vector<Point> action;         // action[a * |X| + x] = x + a

  std::size_t points() const { return fibres.class_of.size(); }
  Point act(Elem a, Point x) const { return action[static_cast<std::size_t>(a) * points() + x]; }
  // The a with to = from + a; throws if the points lie in different fibres.
  Elem difference(Point from, Point to) const;
};

// A_k of a k-step space: difference classes of the base fibre added by
// transport through local translations, moved to other fibres by the
// canonical isomorphism. Verifies the group laws, freeness and transitivity.
StructureGroup structure_group(const Cubespace& x, int k);
// The second construction of the addition: y and z at the vertices 1^{k+1}
// minus e_1 and minus e_2 of a (k+1)-corner that is b elsewhere; the
// completion is y + z - b.
Point corner_sum(const Cubespace& x, int k, Point b, Point y, Point z);

struct BundleLevel {
  FactorSpace factor;                   // X_i = F_i(X)
  std::vector<Point> down;              // X_i -> X_{i-1}; empty at i = 0
  std::optional<StructureGroup> group;  // A_i acting on X_i; absent at i = 0
};

struct BundleDecomposition {
  int k = 0;
  int n_max = 0;
  std::vector<BundleLevel> levels;  // i = 0..k
  bool cube_correspondence = true;  // fibre-cube correspondence at every level, n <= n_max
  bool factors_consistent = true;   // ~_{i-1} on X_i has the fibres of X_i -> X_{i-1}
  std::optional<std::string> witness;

  bool verified() const { return cube_correspondence && factors_consistent; }
  const FiniteAbelianGroup& structure_group(int i) const { return levels.at(static_cast<std::size_t>(i)).group->group; }
  // X -> X_i
  std::vector<Point> projection_to(int i) const { return levels.at(static_cast<std::size_t>(i)).factor.projection; }
};

// k defaults to the known step of x. Levels above the true step carry
// trivial groups.
BundleDecomposition decompose(const Cubespace& x, std::optional<int> k = std::nullopt, int n_max = 3);

// The abstract degree-k bundle described by d: a map is a cube when its
// image one level down is a cube and it differs from a stored reference
// lift of that image by a degree-i cube of A_i.
Cubespace rebuild(const BundleDecomposition& d);

struct FibreTorsor {
  std::vector<Point> points;         // the fibre, sorted
  std::vector<Elem> coordinate;      // points[j] = base + coordinate[j]
  bool cubes_match = true;           // restricted cubes = Cu^n(D_k(A_k)) for n <= n_max
  std::optional<CubeMap> witness;    // in fibre coordinates
};

FibreTorsor fibre_as_degree_k_torsor(const Cubespace& x, const StructureGroup& g, std::size_t fibre, int n_max = 3);

// ---- morphisms ----------------------------------------------------------------

struct BundleMorphismReport {
  bool morphism = true;  // cubes map to cubes for n <= n_max
  bool well_defined = true;
  bool homomorphisms = true;
  bool totally_surjective = true;
  bool fibre_surjective = true;
  std::vector<std::vector<Point>> induced;   // psi_i : X_i -> X'_i, i = 0..k
  std::vector<std::vector<Elem>> structure;  // alpha_i : A_i -> A'_i at index i - 1
  std::optional<std::string> witness;

  bool bundle_morphism() const { return morphism && well_defined && homomorphisms; }
};

// psi is a table X -> X'. Both decompositions must have the same k.
BundleMorphismReport analyze_morphism(const BundleDecomposition& source, const BundleDecomposition& target,
                                      std::span<const Point> psi, int n_max = 3);

// A cube q of X with psi o q = target_cube, built down the tower: lift to the
// next factor, then correct by a degree-i cube mapped onto the defect.
// Throws std::invalid_argument unless the report is totally surjective.
CubeMap lift_cube_through(const BundleDecomposition& source, const BundleDecomposition& target,
                          const BundleMorphismReport& report, std::span<const Point> psi,
                          std::span<const Point> target_cube);

struct PreimageBundleReport {
  std::vector<std::vector<Point>> factors;  // psi_i^-1(pi_i(t)) inside X_i
  std::vector<std::vector<Elem>> kernels;   // ker alpha_i inside A_i, at index i - 1
  bool sub_bundle = true;
  std::optional<std::string> witness;
};

PreimageBundleReport kernel_preimage_bundle(const BundleDecomposition& source, const BundleDecomposition& target,
                                            const BundleMorphismReport& report, Point t);

// Morphisms P -> X agreeing with f on S, values on the vertices of P (other
// entries 0), in colex order of their P-values.
std::vector<CubeMap> restricted_morphisms(const Cubespace& x, const SimplicialPattern& p, const SimplicialPattern& s,
                                          std::span<const Point> f);

struct RestrictedMorphismReport {
  std::size_t count = 0;                   // |hom_f(P, X)|
  std::vector<std::size_t> factor_counts;  // |hom_{pi_i f}(P, X_i)|, i = 0..k
  std::vector<std::size_t> group_orders;   // |hom_{S->0}(P, D_i(A_i))|, i = 1..k
  bool sub_bundle = true;
  std::optional<std::string> witness;
};

RestrictedMorphismReport restricted_morphism_bundle(const BundleDecomposition& d, const SimplicialPattern& p,
                                                    const SimplicialPattern& s, std::span<const Point> f);

struct MorphismCollectionReport {
  bool hom_is_sub_bundle = true;         // hom(P, X) inside X^P
  bool totally_surjective_power = true;  // psi^P onto hom(P, X'), alpha_i^P onto
  bool preimage_groups = true;           // |(psi^P)^-1(t)| = prod |hom(P, D_i(ker alpha_i))|
  bool restriction_surjective = true;    // (psi^P)^-1(t) -> (psi^S)^-1(t|S) onto
  std::optional<std::string> witness;
  bool holds() const {
    return hom_is_sub_bundle && totally_surjective_power && preimage_groups && restriction_surjective;
  }
};

MorphismCollectionReport morphism_collection_checks(const BundleDecomposition& source,
                                                    const BundleDecomposition& target,
                                                    const BundleMorphismReport& report, std::span<const Point> psi,
                                                    const SimplicialPattern& p, const SimplicialPattern& s);

}  // namespace nilspace
