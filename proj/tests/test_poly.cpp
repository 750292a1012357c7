#include <gtest/gtest.h>

#include <random>

#include "nilspace/poly.hpp"

using namespace nilspace;

namespace {

FilteredGroup lcs(const Group& g) { return FilteredGroup::lower_central(g); }

GroupMap square_map(int m) {
  GroupMap g(static_cast<std::size_t>(m));
  for (int x = 0; x < m; ++x) g[static_cast<std::size_t>(x)] = static_cast<Elem>((x * x) % m);
  return g;
}

// Every map H -> G, mixed radix.
std::vector<GroupMap> all_maps(std::size_t domain, std::size_t target) {
  std::vector<GroupMap> out;
  GroupMap g(domain, 0);
  while (true) {
    out.push_back(g);
    std::size_t i = 0;
    while (i < domain && ++g[i] == target) g[i++] = 0;
    if (i == domain) break;
  }
  return out;
}

}  // namespace

TEST(Poly, Derivatives) {
  const auto z5 = Group::cyclic(5);
  const auto d = derivative(z5, z5, square_map(5), 1);
  for (Elem x = 0; x < 5; ++x) EXPECT_EQ(d[x], (2 * x + 1) % 5);
  const auto e = derivative(z5, z5, square_map(5), 0);
  EXPECT_EQ(e, GroupMap(5, 0));
  EXPECT_EQ(derivative(z5, z5, GroupMap(5, 3), 2), GroupMap(5, 0));
}

TEST(Poly, SquareMapDegree) {
  const auto z9 = Group::cyclic(9);
  const auto dom = lcs(z9);
  EXPECT_TRUE(is_polynomial(dom, FilteredGroup::maximal_degree(z9, 2), square_map(9)));
  EXPECT_FALSE(is_polynomial(dom, FilteredGroup::maximal_degree(z9, 1), square_map(9)));
  EXPECT_TRUE(is_cube_morphism(dom, FilteredGroup::maximal_degree(z9, 2), square_map(9)));
  const auto witness = cube_morphism_witness(dom, FilteredGroup::maximal_degree(z9, 1), square_map(9));
  ASSERT_TRUE(witness.has_value());
  EXPECT_TRUE(is_cube(dom, *witness));
}

TEST(Poly, HomomorphismsArePolynomial) {
  const auto h = Group::heisenberg(2);
  GroupMap id(h.order());
  for (Elem x = 0; x < h.order(); ++x) id[x] = x;
  EXPECT_TRUE(is_polynomial(lcs(h), lcs(h), id));
  EXPECT_TRUE(is_cube_morphism(lcs(h), lcs(h), id));
}

TEST(Poly, HomEqualsPolyOnSmallTargets) {
  const auto z3 = Group::cyclic(3);
  for (int k = 1; k <= 2; ++k) {
    const auto target = FilteredGroup::maximal_degree(z3, k);
    for (const auto& g : all_maps(3, 3))
      EXPECT_EQ(is_polynomial(lcs(z3), target, g), is_cube_morphism(lcs(z3), target, g)) << k;
  }
  const auto z2 = Group::cyclic(2);
  const auto h2 = lcs(Group::heisenberg(2));
  for (const auto& g : all_maps(2, 8)) EXPECT_EQ(is_polynomial(lcs(z2), h2, g), is_cube_morphism(lcs(z2), h2, g));
}

TEST(Poly, PolynomialSequencesFormAGroup) {
  const auto z3 = Group::cyclic(3);
  const auto target = FilteredGroup::maximal_degree(z3, 1);
  const auto polys = enumerate_polynomial_maps(lcs(z3), target);
  EXPECT_EQ(polys.size(), 9U);  // affine maps x -> a x + b
  EXPECT_TRUE(forms_group_under_pointwise_product(z3, polys));
  std::vector<GroupMap> not_closed{GroupMap{0, 1, 2}};
  EXPECT_FALSE(forms_group_under_pointwise_product(z3, not_closed));
}

TEST(Poly, LazardLeibmanProductOfSequences) {
  const auto z9 = Group::cyclic(9);
  const auto h3 = Group::heisenberg(3);
  const auto target = lcs(h3);
  std::mt19937 rng(17);
  std::uniform_int_distribution<Elem> pick(0, 26);
  for (int t = 0; t < 20; ++t) {
    // n -> a^n c^binom(n,2) with a random, c central, is polynomial.
    auto sequence = [&](Elem a, Elem c) {
      GroupMap g(9);
      for (int n = 0; n < 9; ++n) g[static_cast<std::size_t>(n)] = h3.mul(h3.pow(a, n), h3.pow(c, n * (n - 1) / 2));
      return g;
    };
    const Elem center = h3.from_coordinates(std::vector<int>{0, 0, 1});
    const auto g1 = sequence(pick(rng), h3.pow(center, pick(rng)));
    const auto g2 = sequence(pick(rng), h3.pow(center, pick(rng)));
    ASSERT_TRUE(is_polynomial(lcs(z9), target, g1));
    ASSERT_TRUE(is_polynomial(lcs(z9), target, g2));
    EXPECT_TRUE(is_polynomial(lcs(z9), target, pointwise_product(h3, g1, g2)));
    EXPECT_EQ(pointwise_product(h3, g1, pointwise_inverse(h3, g1)), GroupMap(9, 0));
  }
}

TEST(Poly, BinomialExtension) {
  const auto z5 = Group::cyclic(5);
  const BinomialForm form{{1, 2, 3, 4}};  // x, h1, h2, s
  const std::vector<long long> t{2, 1};
  EXPECT_EQ(binomial_extension(z5, form, t), (1 + 2 * 2 + 3 + 2 * 4) % 5U);
  const auto cube = multiply_out(z5, form.coefficients);
  for (VertexIndex v = 0; v < 4; ++v) {
    const std::vector<long long> corner{v & 1U, (v >> 1) & 1U};
    EXPECT_EQ(form.evaluate(z5, corner), cube[v]);
  }
  const BinomialForm zero{{0, 0, 0, 0}};
  EXPECT_EQ(zero.evaluate(z5, std::vector<long long>{-3, 7}), 0U);
}

TEST(Poly, BoxDerivativeShrinks) {
  const auto z5 = Group::cyclic(5);
  const BinomialForm form{{1, 2, 3, 4}};
  const auto box = form.on_box(z5, {4, 3});
  const auto d = derivative(z5, box, 1);
  EXPECT_EQ(d.extent, (std::vector<int>{3, 3}));
  const auto dd = derivative(z5, derivative(z5, d, 2), 1);
  for (Elem v : dd.values) EXPECT_EQ(v, 0U);
}

TEST(Poly, PolynomialExtensionMatchesMembership) {
  const auto fg = lcs(Group::heisenberg(2));
  std::mt19937 rng(23);
  std::uniform_int_distribution<Elem> pick(0, 7);
  int cubes = 0;
  for (int t = 0; t < 2000; ++t) {
    CubeValues q(4);
    for (auto& x : q) x = pick(rng);
    const bool member = is_cube(fg, q);
    cubes += member ? 1 : 0;
    EXPECT_EQ(has_polynomial_extension(fg, q), member);
  }
  EXPECT_GT(cubes, 0);
}
