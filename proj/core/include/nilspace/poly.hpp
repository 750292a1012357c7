#pragma once

// Polynomial maps between filtered groups, discrete derivatives and the
// binomial extension of cubes to Z^n.

#include <optional>
#include <span>
#include <vector>

#include "nilspace/group.hpp"
#include "nilspace/hk_cubes.hpp"

namespace nilspace {

// A map H -> G on a finite group, as a table indexed by the elements of H.
using GroupMap = std::vector<Elem>;

// d_h g(x) = g(x)^-1 g(xh).
GroupMap derivative(const Group& domain, const Group& target, std::span<const Elem> g, Elem h);
GroupMap pointwise_product(const Group& target, std::span<const Elem> g1, std::span<const Elem> g2);
GroupMap pointwise_inverse(const Group& target, std::span<const Elem> g);

// Every iterated derivative d_{h_1}...d_{h_m} g with h_j in H_{i_j} lands in
// G_{i_1+...+i_m}. Sequences stop once the weight reaches deg(G)+1, where the
// target level is trivial; weight-0 steps are only used when H_0 != H_1 and
// then limit the sequence length to depth_cap (default deg(G)+1).
bool is_polynomial(const FilteredGroup& domain, const FilteredGroup& target, std::span<const Elem> g,
                   int depth_cap = -1);

// A cube q of the domain with g o q not a cube, searching n <= dim_cap
// (default deg(target)+1, which is exact for a deg(target)-step target).
std::optional<CubeValues> cube_morphism_witness(const FilteredGroup& domain, const FilteredGroup& target,
                                                std::span<const Elem> g, int dim_cap = -1);
bool is_cube_morphism(const FilteredGroup& domain, const FilteredGroup& target, std::span<const Elem> g,
                      int dim_cap = -1);

// All maps H -> G (|G|^|H| of them, capped at max_maps) that are polynomial.
std::vector<GroupMap> enumerate_polynomial_maps(const FilteredGroup& domain, const FilteredGroup& target,
                                                std::size_t max_maps = 1'000'000);
// Closure under pointwise products and inverses, identity map included.
bool forms_group_under_pointwise_product(const Group& target, const std::vector<GroupMap>& maps);

// ---- Z^n windows -------------------------------------------------------------

// A map on the box [0, extent_1) x ... x [0, extent_n) in Z^n, first
// coordinate varying fastest.
struct BoxMap {
  std::vector<int> extent;
  std::vector<Elem> values;

  std::size_t index(std::span<const int> t) const;
  Elem at(std::span<const int> t) const { return values[index(t)]; }
};

// Derivative along steps * e_direction (direction 1-based); the box shrinks.
BoxMap derivative(const Group& target, const BoxMap& f, int direction, int steps = 1);

// g(t) = prod_j g_j^{binom(t, v_j)} with binom(t, v) = prod_{i in supp v} t_i,
// factors in colex order. Negative exponents are inverses.
struct BinomialForm {
  std::vector<Elem> coefficients;  // indexed by upper faces of {0,1}^n

  static BinomialForm of_cube(const Group& g, std::span<const Elem> q) {
    return BinomialForm{upper_face_coefficients(g, q)};
  }
  int dim() const { return dimension_of(coefficients.size()); }
  Elem evaluate(const Group& g, std::span<const long long> t) const;
  BoxMap on_box(const Group& g, std::vector<int> extent) const;
};

Elem binomial_extension(const Group& g, const BinomialForm& form, std::span<const long long> t);

// Membership in Cu^n(G.) decided through the binomial extension: every
// iterated basis-direction derivative of order m <= deg+1 on the window
// [0, deg+1]^n lies in G_m.
bool has_polynomial_extension(const FilteredGroup& fg, std::span<const Elem> q);

}  // namespace nilspace
