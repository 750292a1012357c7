#pragma once

// Cocycles on cube sets, boundaries and coboundaries, cohomology class
// counts, the extension M(rho), cross sections and the tricube sum.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nilspace/cubespace.hpp"
#include "nilspace/group.hpp"

namespace nilspace {

// Largest |X|^(2^(k+1)) accepted for a cocycle table.
inline constexpr double kMaxCocycleTable = 1e6;

// A function on Cu^{k+1}(X) with values in A; k is the degree.
struct Cocycle {
  int degree = 0;
  FiniteAbelianGroup group;
  std::vector<CubeMap> cubes;  // Cu^{k+1}(X), colex order
  std::vector<Elem> values;

  std::optional<std::size_t> index_of(std::span<const Point> q) const;
  // Throws std::invalid_argument if q is not in the table.
  Elem at(std::span<const Point> q) const;

  friend bool operator==(const Cocycle& a, const Cocycle& b) {
    return a.degree == b.degree && a.group == b.group && a.cubes == b.cubes && a.values == b.values;
  }
};

// The zero table on Cu^{k+1}(X). Throws std::length_error above the size cap.
Cocycle zero_cocycle(const Cubespace& x, const FiniteAbelianGroup& a, int k);
Cocycle add(const Cocycle& a, const Cocycle& b);
Cocycle subtract(const Cocycle& a, const Cocycle& b);

struct CocycleCheck {
  bool symmetric = true;  // rho(q o theta) = (-1)^r(theta) rho(q)
  bool additive = true;   // rho of a concatenation is the sum
  std::optional<std::string> witness;
  bool ok() const { return symmetric && additive; }
};

CocycleCheck validate_cocycle(const Cocycle& rho);

// q -> sigma_{k+1}(f o q).
Cocycle coboundary_of(const Cubespace& x, const FiniteAbelianGroup& a, std::span<const Elem> f, int k);
// d rho(q) = rho(lower half of q) - rho(upper half of q), split along the last coordinate.
Cocycle boundary(const Cubespace& x, const Cocycle& rho);
// Some f with coboundary_of(f) = rho, checked by re-evaluation.
std::optional<std::vector<Elem>> is_coboundary(const Cubespace& x, const Cocycle& rho);
bool cocycles_equivalent(const Cubespace& x, const Cocycle& a, const Cocycle& b);

struct ClassCount {
  std::size_t cocycles = 0;     // |Z|
  std::size_t coboundaries = 0; // |B|
  std::size_t classes() const { return cocycles / coboundaries; }
};

// Cocycle and coboundary groups as kernel and image of integer matrices over A.
ClassCount count_classes(const Cubespace& x, const FiniteAbelianGroup& a, int k);
// Every table on Cu^{k+1}(X) validated one by one; max_tables caps |A|^|Cu^{k+1}|.
ClassCount count_classes_exhaustive(const Cubespace& x, const FiniteAbelianGroup& a, int k,
                                    std::size_t max_tables = std::size_t{1} << 22);
// Every validated table, in lexicographic order of value vectors.
std::vector<Cocycle> enumerate_cocycles(const Cubespace& x, const FiniteAbelianGroup& a, int k,
                                        std::size_t max_tables = std::size_t{1} << 22);

// ---- extensions ------------------------------------------------------------------

// A bundle Y -> X with a free action of A on the fibres, claimed to be a
// degree-d extension.
struct Extension {
  Cubespace total;
  Cubespace base;
  std::vector<Point> projection;  // Y -> X
  FiniteAbelianGroup group;
  std::vector<Point> action;      // action[a * |Y| + y] = y + a
  int degree = 0;
  std::optional<Cocycle> cocycle;  // set for M(rho)

  Point act(Elem a, Point y) const { return action[static_cast<std::size_t>(a) * total.size() + y]; }
  // The a with to = from + a; throws if the points lie in different fibres.
  Elem difference(Point from, Point to) const;
};

// M(rho) for rho of degree k-1 on Cu^k(X). The point rho_x + z has index
// x + |X| z; its cubes are those f with pi o f a cube and, on every k-face,
// rho(pi o f) = -sum_v (-1)^|v| z_v.
Extension build_extension(const Cubespace& x, const Cocycle& rho);
// M(rho) point for (x, z).
inline Point extension_point(const Extension& m, Point x, Elem z) {
  return static_cast<Point>(x + m.base.size() * static_cast<std::size_t>(z));
}

struct ExtensionReport {
  bool free_action = true;
  bool surjective = true;      // cube projections onto Cu^n(X)
  bool correspondence = true;  // fibres of the cube projection are cosets of Cu^n(D_d(A))
  int n_max = 0;
  std::optional<std::string> witness;
  bool ok() const { return free_action && surjective && correspondence; }
};

ExtensionReport validate_extension(const Extension& e, int n_max = 3);

// s : X -> Y with pi o s = id. Default: the smallest point of each fibre.
std::vector<Point> default_section(const Extension& e);
// f(y) = s(pi y) - y, rho_s(q) = sigma_{d+1}(f o q') for a lift q' of q.
// Throws std::logic_error if two lifts disagree.
Cocycle cross_section_cocycle(const Extension& e, std::span<const Point> section);

struct ExtensionIsomorphism {
  std::vector<Point> table;  // Y -> M(rho_s)
  Extension model;           // M(rho_s)
  bool bijective = true;
  bool cubes_match = true;   // for n <= n_max
  bool preserves_action = true;
  bool ok() const { return bijective && cubes_match && preserves_action; }
};

// theta(y) = (pi y, y - s(pi y)).
ExtensionIsomorphism extension_iso(const Extension& e, std::span<const Point> section, int n_max = 3);

// Split when some section maps cubes to cubes; searched exhaustively up to
// the given number of sections.
std::optional<std::vector<Point>> find_cube_preserving_section(const Extension& e, int n_max = 3);

// ---- tricube sum ----------------------------------------------------------------

// beta(t, xi) = sum_v (-1)^|v| xi(t o psi_v) for a tricube morphism t : T_k -> X
// and xi given on Cu^k(X).
Elem tricube_sum(const Cubespace& x, int k, std::span<const Point> t, const Cocycle& xi);
// The left side of the tricube form of the cube condition on M(rho):
// sum_v (-1)^|v| (rho(t o psi_v) + z_v) for f(v) = rho_{x_v} + z_v.
Elem tricube_cube_condition(const Extension& m, std::span<const Point> t, std::span<const Point> f);

}  // namespace nilspace
