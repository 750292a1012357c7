#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "nilspace/cubespace.hpp"
#include "nilspace/hk_cubes.hpp"

using namespace nilspace;

namespace {

FilteredGroup heis2() { return FilteredGroup::lower_central(Group::heisenberg(2)); }

std::vector<CubeMap> all_maps(std::size_t points, int n) {
  const std::size_t size = cube_size(n);
  std::vector<CubeMap> out;
  CubeMap q(size, 0);
  while (true) {
    out.push_back(q);
    std::size_t i = 0;
    while (i < size && ++q[i] == points) q[i++] = 0;
    if (i == size) break;
  }
  return out;
}

// T_n as explicit tables: a map into T_n is a cube when it factors through some psi_v.
Cubespace tricube_space(int n, int max_dim) {
  std::map<int, std::vector<CubeMap>> tables;
  for (int m = 1; m <= max_dim; ++m)
    for (const auto& q : all_maps(tricube_size(n), m)) {
      std::vector<TricubePoint> c;
      for (Point p : q) c.push_back(TricubePoint::from_index(n, p));
      if (is_tricube_cube(n, c)) tables[m].push_back(q);
    }
  return explicit_cubespace("T" + std::to_string(n), tricube_size(n), std::move(tables));
}

Cubespace without(const Cubespace& x, int n_max, int dim, const CubeMap& drop) {
  auto tables = export_tables(x, n_max);
  auto& t = tables[dim];
  t.erase(std::find(t.begin(), t.end(), drop));
  return explicit_cubespace("doctored", x.size(), std::move(tables));
}

}  // namespace

TEST(Cubespace, ColexOrderAndFaceRestriction) {
  EXPECT_TRUE(colex_less(std::vector<Point>{5, 0}, std::vector<Point>{0, 1}));
  EXPECT_FALSE(colex_less(std::vector<Point>{0, 1}, std::vector<Point>{5, 0}));
  const CubeMap q{0, 1, 2, 3, 4, 5, 6, 7};
  EXPECT_EQ(face_restriction(q, 7, 3), (CubeMap{4, 5, 6, 7}));
  EXPECT_EQ(face_restriction(q, 7, 0), (CubeMap{7}));
}

TEST(Cubespace, AxiomsOnStandardSpaces) {
  const auto d1 = check_axioms(degree_k_cubespace(FiniteAbelianGroup({2}), 1), 3);
  EXPECT_TRUE(d1.is_nilspace());
  EXPECT_EQ(d1.step, 1);
  const auto heis = check_axioms(group_cubespace(heis2()), 3);
  EXPECT_TRUE(heis.is_nilspace()) << heis.verdict();
  EXPECT_EQ(heis.step, 2);
  EXPECT_NE(heis.verdict().find("up to dimension 3"), std::string::npos);
}

TEST(Cubespace, ErgodicityWitness) {
  std::map<int, std::vector<CubeMap>> tables{{1, {{0, 0}, {1, 1}}}};
  const auto x = explicit_cubespace("split", 2, std::move(tables));
  const auto r = check_axioms(x, 1);
  EXPECT_FALSE(r.ergodic);
  ASSERT_TRUE(r.ergodicity_witness.has_value());
  EXPECT_FALSE(x.contains(std::vector<Point>{r.ergodicity_witness->first, r.ergodicity_witness->second}));
}

TEST(Cubespace, CompositionWitnessReplays) {
  const auto x = without(degree_k_cubespace(FiniteAbelianGroup({2}), 1), 2, 2, CubeMap{0, 1, 0, 1});
  const auto r = check_axioms(x, 2);
  EXPECT_FALSE(r.composition);
  ASSERT_TRUE(r.composition_witness.has_value());
  const auto& [phi, q] = *r.composition_witness;
  EXPECT_TRUE(x.contains(q));
  EXPECT_FALSE(x.contains(phi.pull_back<std::uint32_t>(q)));
}

TEST(Cubespace, ParallelepipedAxioms) {
  const auto z3 = degree_k_cubespace(FiniteAbelianGroup({3}), 1);
  const auto p = check_parallelepiped_axioms(z3, 3);
  EXPECT_TRUE(p.holds()) << p.verdict();
  const auto doctored = without(degree_k_cubespace(FiniteAbelianGroup({2}), 1), 3, 2, CubeMap{0, 1, 0, 1});
  const auto bad = check_parallelepiped_axioms(doctored, 3);
  EXPECT_FALSE(bad.symmetries);
  EXPECT_TRUE(bad.witness.has_value());
  EXPECT_FALSE(check_axioms(doctored, 3).is_nilspace());
}

TEST(Cubespace, BruteForceCompletion) {
  const auto x = degree_k_cubespace(FiniteAbelianGroup({2}), 2);
  EXPECT_EQ(complete_corner_bruteforce(x, std::vector<Point>{0, 1, 1}).size(), 2U);
  EXPECT_EQ(complete_corner_bruteforce(x, std::vector<Point>{0, 1, 1, 0, 1, 0, 0}).size(), 1U);
  const auto d1 = degree_k_cubespace(FiniteAbelianGroup({2}), 1);
  EXPECT_THROW(complete_corner_bruteforce(d1, std::vector<Point>{0, 1, 1, 1, 0, 0, 0}), std::invalid_argument);
}

TEST(Cubespace, Products) {
  const auto x = degree_k_cubespace(FiniteAbelianGroup({3}), 1);
  const auto point = degree_k_cubespace(FiniteAbelianGroup({1}), 1);
  const auto xp = product(x, point);
  for (int n = 1; n <= 2; ++n) EXPECT_EQ(xp.cubes(n), x.cubes(n));
  const auto mixed = product(degree_k_cubespace(FiniteAbelianGroup({2}), 1), degree_k_cubespace(FiniteAbelianGroup({2}), 2));
  const auto r = check_axioms(mixed, 3);
  EXPECT_TRUE(r.is_nilspace());
  EXPECT_EQ(r.step, 2);
}

TEST(Cubespace, TricubeIsPowerOfT1) {
  const auto t1 = tricube_space(1, 2);
  const auto t2 = tricube_space(2, 2);
  const auto prod = product(t1, t1);
  for (int n = 1; n <= 2; ++n) EXPECT_EQ(prod.cubes(n), t2.cubes(n)) << n;
}

TEST(Cubespace, CosetSpaces) {
  const auto fg = heis2();
  const auto& g = fg.group();
  const auto trivial = coset_cubespace(fg, Subgroup::trivial(g));
  const auto direct = group_cubespace(fg);
  for (int n = 1; n <= 2; ++n) EXPECT_EQ(trivial.cubes(n), direct.cubes(n));
  EXPECT_EQ(coset_cubespace(fg, Subgroup::whole(g)).size(), 1U);
  const Subgroup gamma(g, {0, 1});
  EXPECT_FALSE(is_normal(g, gamma));
  const auto c = coset_cubespace(fg, gamma);
  const auto r = check_axioms(c, 3);
  EXPECT_TRUE(r.is_nilspace()) << r.verdict();
  EXPECT_EQ(r.step, 2);
  const CosetSpace cosets(g, gamma);
  for (const auto& q : c.cubes(2)) {
    const auto lift = lift_coset_cube(fg, cosets, q);
    ASSERT_TRUE(lift.has_value());
    EXPECT_TRUE(is_cube(fg, *lift));
    for (std::size_t v = 0; v < q.size(); ++v) EXPECT_EQ(cosets.coset_of((*lift)[v]), q[v]);
  }
}

TEST(Cubespace, AutomorphismInvariance) {
  const auto fg = heis2();
  const auto c = coset_cubespace(fg, Subgroup(fg.group(), {0, 1}));
  for (int n = 1; n <= 3; ++n) {
    const auto autos = automorphism_group(n);
    for (const auto& q : c.cubes(n))
      for (const auto& a : autos) ASSERT_TRUE(c.contains(a.morphism().pull_back<std::uint32_t>(q)));
  }
}

TEST(Cubespace, ArrowSpaceOfD1) {
  const auto x = degree_k_cubespace(FiniteAbelianGroup({2}), 1);
  const auto a = arrow_space(x, 1);
  EXPECT_EQ(a.size(), 4U);
  for (int n = 1; n <= 2; ++n)
    for (const auto& q : all_maps(4, n)) {
      bool constant_difference = true;
      const Point d0 = (q[0] % 2) ^ (q[0] / 2);
      for (Point p : q) constant_difference &= ((p % 2) ^ (p / 2)) == d0;
      CubeMap q0(q.size());
      for (std::size_t v = 0; v < q.size(); ++v) q0[v] = q[v] % 2;
      EXPECT_EQ(a.contains(q), constant_difference && x.contains(q0));
    }
}

TEST(Cubespace, ArrowSpaceComponents) {
  // With k at least the step, only diagonal pairs carry cubes: the diagonal is
  // one component and every other pair is isolated.
  const auto x = degree_k_cubespace(FiniteAbelianGroup({2}), 1);
  const auto a = arrow_space(x, 2);
  EXPECT_TRUE(a.contains(std::vector<Point>{0, 3}));
  EXPECT_FALSE(a.contains(std::vector<Point>{1, 1}));
  const auto comps = ergodic_components(a);
  ASSERT_EQ(comps.members.size(), 3U);
  EXPECT_EQ(comps.members[0], (std::vector<Point>{0, 3}));
  EXPECT_EQ(comps.members[1], (std::vector<Point>{1}));
  EXPECT_EQ(comps.members[2], (std::vector<Point>{2}));
}

TEST(Cubespace, PartialX) {
  const auto d2 = degree_k_cubespace(FiniteAbelianGroup({4}), 2);
  const auto d1 = degree_k_cubespace(FiniteAbelianGroup({4}), 1);
  const auto p = partial_x(d2, 0);
  for (int n = 1; n <= 2; ++n) EXPECT_EQ(p.cubes(n), d1.cubes(n)) << n;

  const auto fg = heis2();
  const auto at_identity = partial_x(group_cubespace(fg), 0);
  const auto shifted = group_cubespace(fg.shifted(1));
  for (int n = 1; n <= 2; ++n) EXPECT_EQ(at_identity.cubes(n), shifted.cubes(n)) << n;

  // The derivative of a 1-step space is 0-step: its components are points.
  const auto comps = ergodic_components(partial_x(degree_k_cubespace(FiniteAbelianGroup({3}), 1), 1));
  EXPECT_EQ(comps.members.size(), 3U);
}

TEST(Cubespace, SimplicialExtension) {
  const auto x = group_cubespace(heis2());
  std::mt19937 rng(41);
  const auto& cubes = x.cubes(3);
  for (int t = 0; t < 50; ++t) {
    const auto& q = cubes[rng() % cubes.size()];
    const auto full = SimplicialPattern{3, {7}};
    EXPECT_EQ(simplicial_extend(x, full, q), q);
    const auto skeleton = SimplicialPattern::skeleton(3, 2);
    const auto e = simplicial_extend(x, skeleton, q);
    EXPECT_TRUE(x.contains(e));
    for (VertexIndex v : skeleton.points()) EXPECT_EQ(e[v], q[v]);
  }
  const auto d1 = degree_k_cubespace(FiniteAbelianGroup({2}), 1);
  EXPECT_THROW(simplicial_extend(d1, SimplicialPattern::skeleton(2, 2), std::vector<Point>{0, 1, 1, 1}),
               std::invalid_argument);
}

TEST(Cubespace, Concatenation) {
  const FiniteAbelianGroup z5({5});
  const auto x = degree_k_cubespace(z5, 1);
  // q1(v) = 1 + 2 v1 + 3 v2, q2 continues with step 4 along v2.
  const CubeMap q1{1, 3, 4, 1};
  const CubeMap q2{4, 1, 3, 0};
  const auto c = concatenate_cubes(x, q1, q2);
  EXPECT_TRUE(x.contains(c));
  EXPECT_EQ(c, (CubeMap{1, 3, 3, 0}));  // step along v2 is 3 + 4 = 2 mod 5
  const auto doubled = concatenate_cubes(x, CubeMap{2, 2, 2, 2}, CubeMap{2, 2, 2, 2});
  EXPECT_EQ(doubled, (CubeMap{2, 2, 2, 2}));
  EXPECT_THROW(concatenate_cubes(x, q1, q1), std::invalid_argument);
}

TEST(Cubespace, TricubeComposition) {
  const FiniteAbelianGroup z5({5});
  const auto x = degree_k_cubespace(z5, 1);
  for (int n = 1; n <= 2; ++n) {
    // t(s) = 1 + sum_j s_j h_j is affine on the tricube.
    const std::vector<int> h{2, 3};
    std::vector<Point> t(tricube_size(n));
    for (std::uint32_t i = 0; i < t.size(); ++i) {
      const auto s = TricubePoint::from_index(n, i);
      int value = 1;
      for (int j = 1; j <= n; ++j) value += s[j] * h[static_cast<std::size_t>(j - 1)];
      t[i] = static_cast<Point>(((value % 5) + 5) % 5);
    }
    ASSERT_TRUE(is_tricube_morphism(x, n, t));
    const auto q = tricube_compose(x, n, t);
    EXPECT_TRUE(x.contains(q));
    for (VertexIndex v = 0; v < cube_size(n); ++v) EXPECT_EQ(q[v], t[outer_point(Vertex(n, v)).index()]);
  }
  const std::vector<Point> constant(9, 4);
  EXPECT_EQ(tricube_compose(x, 2, constant), CubeMap(4, 4));
}

TEST(Cubespace, GlueTricubeChecksOverlaps) {
  std::vector<CubeMap> pieces{{0, 1}, {2, 1}};
  const auto t = glue_tricube(1, pieces);
  EXPECT_EQ(t, (std::vector<Point>{0, 1, 2}));
  pieces[1] = {2, 3};
  EXPECT_THROW(glue_tricube(1, pieces), std::invalid_argument);
}

TEST(Cubespace, DisjointUnionSplitsBack) {
  const auto a = degree_k_cubespace(FiniteAbelianGroup({2}), 1);
  const auto b = degree_k_cubespace(FiniteAbelianGroup({3}), 1);
  const auto u = disjoint_union(a, b, 2);
  const auto comps = ergodic_components(u);
  ASSERT_EQ(comps.members.size(), 2U);
  EXPECT_EQ(comps.members[0], (std::vector<Point>{0, 1}));
  EXPECT_EQ(comps.members[1], (std::vector<Point>{2, 3, 4}));
  EXPECT_EQ(comps.spaces[1].cubes(2), b.cubes(2));
  EXPECT_EQ(ergodic_components(a).members.size(), 1U);
}

TEST(Cubespace, QueriesAboveCapUseFaces) {
  const FiniteAbelianGroup z3({3});
  const auto x = degree_k_cubespace(z3, 1).with_dim_cap(2);
  std::mt19937 rng(3);
  for (int t = 0; t < 200; ++t) {
    CubeMap q(16);
    if (t % 2 == 0) {
      for (auto& p : q) p = static_cast<Point>(rng() % 3);
    } else {
      const int h[4] = {int(rng() % 3), int(rng() % 3), int(rng() % 3), int(rng() % 3)};
      for (VertexIndex v = 0; v < 16; ++v) {
        int s = 1;
        for (int j = 0; j < 4; ++j) s += ((v >> j) & 1U) * h[j];
        q[v] = static_cast<Point>(s % 3);
      }
    }
    EXPECT_EQ(x.contains(q), is_degree_k_abelian_cube(z3.group(), q, 1));
  }
  EXPECT_GE(x.max_queryable_dim(), 4);
}

TEST(Cubespace, ExportImportRoundTrip) {
  const auto fg = heis2();
  const auto c = coset_cubespace(fg, Subgroup(fg.group(), {0, 1}));
  const auto tables = export_tables(c, 3);
  const auto back = explicit_cubespace("imported", c.size(), tables, 2);
  EXPECT_EQ(export_tables(back, 3), tables);
  const auto r1 = check_axioms(c, 3);
  const auto r2 = check_axioms(back, 3);
  EXPECT_EQ(r1.verdict(), r2.verdict());
  EXPECT_EQ(export_tables(degree_k_cubespace(FiniteAbelianGroup({2}), 1), 2).at(2).size(), 8U);
}
