#include <gtest/gtest.h>

#include <map>
#include <random>

#include "nilspace/hk_cubes.hpp"

using namespace nilspace;

namespace {

FilteredGroup heis(int m) { return FilteredGroup::lower_central(Group::heisenberg(m)); }

// All maps {0,1}^n -> G for |G|^(2^n) small, in mixed-radix order.
std::vector<CubeValues> all_maps(std::size_t order, int n) {
  const std::size_t size = cube_size(n);
  std::vector<CubeValues> out;
  CubeValues q(size, 0);
  while (true) {
    out.push_back(q);
    std::size_t i = 0;
    while (i < size && ++q[i] == order) q[i++] = 0;
    if (i == size) break;
  }
  return out;
}

CubeValues random_cube(const FilteredGroup& fg, int n, std::mt19937& rng) {
  std::vector<Elem> coeffs(cube_size(n));
  for (VertexIndex i = 0; i < coeffs.size(); ++i) {
    const auto& level = fg.level(weight(i)).elements();
    coeffs[i] = level[std::uniform_int_distribution<std::size_t>(0, level.size() - 1)(rng)];
  }
  return multiply_out(fg.group(), coeffs);
}

}  // namespace

TEST(HostKra, SigmaSmallDimensions) {
  const auto g = Group::heisenberg(3);
  const Elem a = 5, b = 11, c = 19, d = 7;
  EXPECT_EQ(sigma(g, std::vector<Elem>{a, b}), g.mul(g.inv(b), a));
  const Elem expected = g.mul(g.mul(g.inv(c), d), g.mul(g.inv(b), a));
  EXPECT_EQ(sigma(g, std::vector<Elem>{a, b, c, d}), expected);
  EXPECT_EQ(sigma(g, CubeValues{13}), 13U);
  for (int n = 1; n <= 5; ++n) EXPECT_EQ(sigma(g, CubeValues(cube_size(n), 13)), 0U) << n;
}

TEST(HostKra, SigmaGrayAgreesWithRecursion) {
  const auto g = Group::heisenberg(3);
  std::mt19937 rng(3);
  std::uniform_int_distribution<Elem> pick(0, 26);
  for (int n = 1; n <= 4; ++n)
    for (int t = 0; t < 50; ++t) {
      CubeValues q(cube_size(n));
      for (auto& x : q) x = pick(rng);
      EXPECT_EQ(sigma(g, q), sigma_gray(g, q));
    }
}

TEST(HostKra, SigmaOfConcatenation) {
  const auto g = Group::heisenberg(3);
  std::mt19937 rng(5);
  std::uniform_int_distribution<Elem> pick(0, 26);
  for (int t = 0; t < 50; ++t) {
    CubeValues q1(8), q2(8);
    for (auto& x : q1) x = pick(rng);
    for (auto& x : q2) x = pick(rng);
    for (VertexIndex v = 0; v < 4; ++v) q2[v] = q1[v + 4];
    const auto joined = concatenate<std::uint32_t>(q1, q2);
    EXPECT_EQ(sigma(g, joined), g.mul(sigma(g, q2), sigma(g, q1)));
  }
}

TEST(HostKra, FactorizeExamples) {
  const auto z5 = FilteredGroup::lower_central(Group::cyclic(5));
  const auto constant = factorize(z5, CubeValues(4, 3));
  EXPECT_TRUE(constant.accepted());
  EXPECT_EQ(constant.coefficients, (std::vector<Elem>{3, 0, 0, 0}));
  // q(v) = x + v . h with x = 1, h = (2, 4).
  const CubeValues affine{1, 3, 0, 2};
  const auto f = factorize(z5, affine);
  EXPECT_TRUE(f.accepted());
  EXPECT_EQ(f.coefficients, (std::vector<Elem>{1, 2, 4, 0}));
}

TEST(HostKra, FactorizationRejectsWithWitness) {
  const auto z4 = FilteredGroup::lower_central(Group::cyclic(4));
  EXPECT_TRUE(is_cube(z4, CubeValues{0, 1, 2, 3}));
  EXPECT_TRUE(is_cube_by_equations(z4, CubeValues{0, 1, 2, 3}));
  const auto bad = factorize(z4, CubeValues{0, 1, 2, 2});
  ASSERT_FALSE(bad.accepted());
  EXPECT_EQ(bad.failure->index, 3U);
  EXPECT_EQ(bad.failure->required_level, 2);
  EXPECT_FALSE(is_cube_by_equations(z4, CubeValues{0, 1, 2, 2}));
}

TEST(HostKra, MultiplyOutRoundTrip) {
  const auto fg = heis(2);
  std::mt19937 rng(9);
  for (int n = 1; n <= 3; ++n)
    for (int t = 0; t < 200; ++t) {
      const auto q = random_cube(fg, n, rng);
      const auto f = factorize(fg, q);
      ASSERT_TRUE(f.accepted());
      EXPECT_EQ(multiply_out(fg.group(), f.coefficients), q);
    }
  const auto top = multiply_out(fg.group(), std::vector<Elem>{0, 0, 0, 4});
  EXPECT_EQ(top, (CubeValues{0, 0, 0, 4}));
}

TEST(HostKra, ThreeMembershipTestsAgree) {
  const auto fg = FilteredGroup::lower_central(Group::cyclic(4));
  for (const auto& q : all_maps(4, 2)) {
    const bool a = is_cube(fg, q);
    EXPECT_EQ(a, is_cube_by_equations(fg, q));
    EXPECT_EQ(a, is_cube_by_equations_all_morphisms(fg, q));
  }
  EXPECT_EQ(count_cubes(fg, 2), 64U);
  EXPECT_EQ(enumerate_cubes(fg, 2).size(), 64U);
}

TEST(HostKra, HeisenbergCountsAndEnumeration) {
  const auto fg = heis(2);
  std::size_t cubes = 0;
  for (const auto& q : all_maps(8, 2)) cubes += is_cube(fg, q) ? 1 : 0;
  EXPECT_EQ(cubes, count_cubes(fg, 2));
  EXPECT_EQ(count_cubes(fg, 2), 8U * 8U * 8U * 2U);
  const auto listed = enumerate_cubes(fg, 2);
  EXPECT_EQ(listed.size(), cubes);
  for (const auto& q : listed) EXPECT_TRUE(is_cube_by_equations(fg, q));
}

TEST(HostKra, WeightedCubes) {
  const auto fg = heis(2);
  std::mt19937 rng(13);
  std::uniform_int_distribution<Elem> pick(0, 7);
  const std::vector<int> ones{1, 1, 1};
  const std::vector<int> weak{1, 0, 1};
  for (int t = 0; t < 500; ++t) {
    CubeValues q(8);
    for (auto& x : q) x = pick(rng);
    const bool plain = is_cube(fg, q);
    EXPECT_EQ(plain, is_cube_weighted(fg, q, ones));
    if (plain) EXPECT_TRUE(is_cube_weighted(fg, q, weak));
  }
  EXPECT_TRUE(is_cube_weighted(fg, CubeValues(8, 6), std::vector<int>{3, 2, 5}));
}

TEST(HostKra, MorphismInvariance) {
  const auto fg = heis(2);
  for (const auto& q : enumerate_cubes(fg, 2))
    for (int m = 1; m <= 3; ++m)
      for (const auto& phi : enumerate_morphisms(m, 2))
        ASSERT_TRUE(is_cube(fg, phi.pull_back<std::uint32_t>(q)));
}

TEST(HostKra, CubesDeterminedByLowWeights) {
  const auto fg = heis(2);
  std::map<CubeValues, CubeValues> seen;
  for (const auto& q : enumerate_cubes(fg, 3)) {
    CubeValues low(q);
    low[7] = 0;  // the only vertex of weight 3
    const auto [it, inserted] = seen.emplace(low, q);
    EXPECT_TRUE(inserted || it->second == q);
  }
}

TEST(HostKra, CornerCompletion) {
  const auto z5 = FilteredGroup::lower_central(Group::cyclic(5));
  const CornerCompleter abelian(z5);
  // x = 1, h = (2, 4): the forced value is x + h1 + h2.
  EXPECT_EQ(abelian.complete(std::vector<Elem>{1, 3, 0}).back(), 2U);

  const auto fg = heis(2);
  const CornerCompleter completer(fg);
  std::mt19937 rng(21);
  for (int t = 0; t < 100; ++t) {
    auto q = random_cube(fg, 3, rng);
    const Elem truth = q.back();
    q.pop_back();
    const auto done = completer.complete(q);
    EXPECT_TRUE(is_cube_by_equations(fg, done));
    EXPECT_EQ(done.back(), truth);
    EXPECT_EQ(completer.enumerate_completions(q).size(), 1U);
  }
  EXPECT_EQ(completer.complete(CubeValues(7, 5)), CubeValues(8, 5));
  EXPECT_THROW(completer.complete(std::vector<Elem>{0, 1, 2, 4, 0, 0, 0}), CornerPremiseError);
}

TEST(HostKra, ExtraCompletionsDifferByTopLevel) {
  const auto fg = heis(2);
  const CornerCompleter completer(fg);
  std::mt19937 rng(22);
  const auto q = random_cube(fg, 2, rng);
  const CubeValues corner(q.begin(), q.end() - 1);
  EXPECT_EQ(completer.enumerate_completions(corner).size(), fg.level(2).size());
}

TEST(HostKra, ArrowMembership) {
  const auto fg = heis(2);
  std::mt19937 rng(31);
  for (int t = 0; t < 100; ++t) {
    const auto q0 = random_cube(fg, 2, rng);
    CubeValues q1 = q0;
    const Elem h = static_cast<Elem>(rng() % 8);
    for (auto& x : q1) x = fg.group().mul(x, h);
    // A constant right factor costs nothing on a 1-arrow and needs G_2 on a 2-arrow.
    EXPECT_TRUE(is_cube(fg, arrow<std::uint32_t>(q0, q1, 1)));
    EXPECT_TRUE(arrow_membership(fg, q0, q1, 1));
    const auto direct = is_cube(fg, arrow<std::uint32_t>(q0, q1, 2));
    EXPECT_EQ(arrow_membership(fg, q0, q1, 2), direct);
    EXPECT_EQ(direct, fg.in_level(2, h));
  }
  const CubeValues q{0, 1, 2, 3};
  EXPECT_EQ(arrow<std::uint32_t>(q, q, 2), (CubeValues{0, 1, 2, 3, 0, 1, 2, 3, 0, 1, 2, 3, 0, 1, 2, 3}));
  EXPECT_FALSE(arrow_membership(fg, CubeValues{0, 1, 2, 1}, CubeValues{0, 1, 2, 1}, 1));
}

TEST(HostKra, StandardAbelianCubes) {
  const FiniteAbelianGroup z2({2});
  std::size_t count = 0;
  for (const auto& q : all_maps(2, 3)) {
    const auto v = standard_abelian_cube_verdicts(z2, q);
    EXPECT_TRUE(v.agree());
    count += v.representation ? 1 : 0;
  }
  EXPECT_EQ(count, 16U);
  const FiniteAbelianGroup z3({3});
  EXPECT_FALSE(is_standard_abelian_cube(z3, CubeValues{0, 1, 1, 1}));
}

TEST(HostKra, DegreeKAbelianCubes) {
  const auto z2 = Group::cyclic(2);
  auto count = [&](int n, int k) {
    std::size_t c = 0;
    for (const auto& q : all_maps(2, n)) c += is_degree_k_abelian_cube(z2, q, k) ? 1 : 0;
    return c;
  };
  EXPECT_EQ(count(2, 1), 8U);
  EXPECT_EQ(count(3, 2), 128U);
  EXPECT_EQ(count(2, 2), 16U);
}
