#pragma once

// Cube groups of a filtered group: alternating products, the upper-face
// factorization, membership tests, corner completion and arrows.
//
// A map {0,1}^n -> G is a CubeValues vector of element indices in colex
// vertex order. The i-th upper face F_i = {u : supp(u) contains supp(i)} has
// codimension |i|.

#include <memory>
#include <optional>
#include <stdexcept>
#include <span>
#include <string>
#include <vector>

#include "nilspace/cube.hpp"
#include "nilspace/group.hpp"

namespace nilspace {

// sigma_0(g) = g, sigma_n(g) = sigma_{n-1}(g(.,1))^-1 sigma_{n-1}(g(.,0)).
Elem sigma(const Group& g, std::span<const Elem> values);
// The same product read along the Gray order, prod_{j descending} g(gamma(j))^((-1)^j).
Elem sigma_gray(const Group& g, std::span<const Elem> values);

struct FactorizationFailure {
  std::size_t index = 0;  // upper face F_index
  Elem value = 0;         // its coefficient
  int required_level = 0;
  std::string message() const;
};

struct Factorization {
  std::vector<Elem> coefficients;  // g_0 ... g_{2^n - 1}, complete even on failure
  std::optional<FactorizationFailure> failure;
  bool accepted() const { return !failure.has_value(); }
};

// Coefficients with g_i = (prod_{j < i, supp j in supp i} g_j)^-1 q(i), with no
// subgroup conditions imposed.
std::vector<Elem> upper_face_coefficients(const Group& g, std::span<const Elem> q);

Factorization factorize(const FilteredGroup& fg, std::span<const Elem> q);
// Threshold for F_i is the sum of weights[j] over j in supp(i).
Factorization factorize_weighted(const FilteredGroup& fg, std::span<const Elem> q, std::span<const int> weights);

// q(u) = prod over i with u in F_i of g_i, left to right in colex order.
CubeValues multiply_out(const Group& g, std::span<const Elem> coefficients);

bool is_cube(const FilteredGroup& fg, std::span<const Elem> q);
bool is_cube_weighted(const FilteredGroup& fg, std::span<const Elem> q, std::span<const int> weights);
// sigma_m(q o phi) in G_m for every m-face map phi.
bool is_cube_by_equations(const FilteredGroup& fg, std::span<const Elem> q);
// Cross-check variant running over all injective morphisms, not only face maps.
bool is_cube_by_equations_all_morphisms(const FilteredGroup& fg, std::span<const Elem> q);

// Every cube of Cu^n(G.), generated from coefficient tuples in colex order.
std::vector<CubeValues> enumerate_cubes(const FilteredGroup& fg, int n);
// Number of cubes: prod_i |G_{|i|}|.
std::size_t count_cubes(const FilteredGroup& fg, int n);

struct CornerPremiseError : std::invalid_argument {
  int face = 0;  // the (n-1)-face {v[face] = 0} that is not a cube
  CornerPremiseError(int f, const std::string& what) : std::invalid_argument(what), face(f) {}
};

// Completes n-corners in Cu^n(G.) by the degree-induction algorithm: complete
// in G/G_d, lift, match the values level by level with upper-face
// corrections in G_d, then read off the last vertex.
class CornerCompleter {
 public:
  explicit CornerCompleter(const FilteredGroup& fg);

  // corner holds the 2^n - 1 values off 1^n (colex order). Throws
  // CornerPremiseError if a lower face through 0^n is not a cube.
  CubeValues complete(std::span<const Elem> corner) const;
  // Every completion; they differ by right multiplication by G_n at 1^n.
  std::vector<CubeValues> enumerate_completions(std::span<const Elem> corner) const;

 private:
  CubeValues complete_unchecked(std::span<const Elem> corner, int n) const;

  FilteredGroup fg_;
  // Tower for the degree induction: quotient by the top nontrivial level.
  std::shared_ptr<const CornerCompleter> lower_;
  std::optional<QuotientGroup> quotient_;
};

void check_corner_premise(const FilteredGroup& fg, std::span<const Elem> corner);

// <q0, q1>_k (v, w) = q0(v) if w != 1^k, else q1(v).
template <class T>
std::vector<T> arrow(std::span<const T> q0, std::span<const T> q1, int k) {
  if (q0.size() != q1.size()) throw DimensionError("arrow: maps have different dimensions");
  const std::size_t block = q0.size();
  std::vector<T> out(block << k);
  const std::size_t top = (std::size_t{1} << k) - 1;
  for (std::size_t w = 0; w <= top; ++w)
    for (std::size_t v = 0; v < block; ++v) out[w * block + v] = w == top ? q1[v] : q0[v];
  return out;
}

// Membership of <q0,q1>_k in Cu^{n+k}_{w}(G.) through q0 in Cu^n_{w'}(G.) and
// q0^-1 q1 in Cu^n_{w'}(G.^{+l}), l the sum of the last k weights. weights
// has length n + k (empty means all ones).
bool arrow_membership(const FilteredGroup& fg, std::span<const Elem> q0, std::span<const Elem> q1, int k,
                      std::span<const int> weights = {});

// ---- abelian cubes -----------------------------------------------------------

struct StandardCubeVerdict {
  bool representation = false;  // q(v) = x + sum v_i h_i
  bool affine_extension = false;
  bool equations = false;       // every 2-face has alternating sum 0
  bool agree() const { return representation == affine_extension && affine_extension == equations; }
};

StandardCubeVerdict standard_abelian_cube_verdicts(const FiniteAbelianGroup& a, std::span<const Elem> q);
// Throws std::logic_error if the three characterizations disagree.
bool is_standard_abelian_cube(const FiniteAbelianGroup& a, std::span<const Elem> q);
// Every (k+1)-face has alternating sum zero.
bool is_degree_k_abelian_cube(const Group& a, std::span<const Elem> q, int k);

}  // namespace nilspace
