#include <gtest/gtest.h>

#include <algorithm>

#include "nilspace/structure.hpp"

using namespace nilspace;

TEST(Structure, DegreeTwoZ2) {
  const auto x = degree_k_cubespace(FiniteAbelianGroup({2}), 2);
  const auto d = decompose(x, std::nullopt, 3);
  EXPECT_TRUE(d.verified()) << d.witness.value_or("");
  EXPECT_EQ(d.structure_group(2).invariant_factors(), std::vector<long long>({2}));
}

TEST(Structure, HeisenbergMod2) {
  const auto x = group_cubespace(FilteredGroup::lower_central(Group::heisenberg(2)));
  const auto d = decompose(x, std::nullopt, 3);
  EXPECT_TRUE(d.verified()) << d.witness.value_or("");
  EXPECT_EQ(d.structure_group(1).invariant_factors(), std::vector<long long>({2, 2}));
  EXPECT_EQ(d.structure_group(2).invariant_factors(), std::vector<long long>({2}));
  const auto r = rebuild(d);
  for (int n = 1; n <= 3; ++n) EXPECT_EQ(r.cubes(n), x.cubes(n)) << n;
}

namespace {

FilteredGroup heis2() { return FilteredGroup::lower_central(Group::heisenberg(2)); }

std::vector<Point> identity_table(std::size_t n) {
  std::vector<Point> out(n);
  for (Point p = 0; p < n; ++p) out[p] = p;
  return out;
}

}  // namespace

TEST(Structure, SimClassesAreCentralCosets) {
  const auto fg = heis2();
  const auto& g = fg.group();
  const auto rel = sim_k(group_cubespace(fg), 1);
  for (Elem x = 0; x < g.order(); ++x) {
    std::vector<Point> coset;
    for (Elem c : fg.level(2).elements()) coset.push_back(g.mul(c, x));
    std::sort(coset.begin(), coset.end());
    EXPECT_EQ(rel.classes[rel.class_of[x]], coset);
  }
  EXPECT_EQ(sim_k(group_cubespace(fg), 2).count(), g.order());
}

TEST(Structure, SimClassesOnCosetSpaceAreOrbits) {
  const auto fg = heis2();
  const auto& g = fg.group();
  const Subgroup gamma(g, {0, 1});
  const auto x = coset_cubespace(fg, gamma);
  const CosetSpace cosets(g, gamma);
  const auto rel = sim_k(x, 1);
  for (Point c = 0; c < x.size(); ++c) {
    std::vector<Point> orbit;
    for (Elem h : fg.level(2).elements()) orbit.push_back(static_cast<Point>(cosets.act(h, c)));
    std::sort(orbit.begin(), orbit.end());
    orbit.erase(std::unique(orbit.begin(), orbit.end()), orbit.end());
    EXPECT_EQ(rel.classes[rel.class_of[c]], orbit);
  }
}

TEST(Structure, Factors) {
  const auto x = group_cubespace(heis2());
  EXPECT_EQ(factor(x, 2).space.size(), 8U);
  EXPECT_EQ(factor(x, 0).space.size(), 1U);
  const auto f1 = factor(x, 1);
  EXPECT_EQ(f1.space.size(), 4U);
  const auto r = check_axioms(f1.space, 3);
  EXPECT_TRUE(r.is_nilspace());
  EXPECT_EQ(r.step, 1);
  const auto model = degree_k_cubespace(FiniteAbelianGroup({2, 2}), 1);
  for (int n = 1; n <= 3; ++n) EXPECT_EQ(f1.space.cubes(n).size(), model.cubes(n).size()) << n;
  for (const auto& q : f1.space.cubes(2)) {
    const auto lift = lift_factor_cube(x, f1, q);
    ASSERT_TRUE(lift.has_value());
    for (std::size_t v = 0; v < q.size(); ++v) EXPECT_EQ(f1.projection[(*lift)[v]], q[v]);
  }
}

TEST(Structure, LocalTranslationsOnAbelianSpaces) {
  const FiniteAbelianGroup a({4});
  const auto x = degree_k_cubespace(a, 2);
  for (Point x0 = 0; x0 < 4; ++x0)
    for (Point x1 = 0; x1 < 4; ++x1) {
      const auto phi = local_translation(x, 2, x0, x1);
      ASSERT_EQ(phi.size(), 4U);
      for (const auto& [y, image] : phi) EXPECT_EQ(image, a.add(y, a.sub(x1, x0)));
    }
}

TEST(Structure, LocalTranslationsCompose) {
  const auto x = group_cubespace(heis2());
  const auto g = structure_group(x, 2);
  for (const auto& fibre : g.fibres.classes)
    for (Point a : fibre)
      for (Point b : fibre)
        for (Point c : fibre) {
          const auto ab = local_translation(x, 2, a, b);
          const auto bc = local_translation(x, 2, b, c);
          const auto ac = local_translation(x, 2, a, c);
          for (const auto& [y, image] : ab) EXPECT_EQ(bc.at(image), ac.at(y));
        }
}

TEST(Structure, StructureGroups) {
  const auto d = structure_group(degree_k_cubespace(FiniteAbelianGroup({6}), 1), 1);
  EXPECT_EQ(d.group.invariant_factors(), std::vector<long long>({6}));
  const auto z5 = degree_k_cubespace(FiniteAbelianGroup({5}), 1);
  const auto g5 = structure_group(z5, 1);
  EXPECT_EQ(g5.group.order(), 5U);
  for (Point b = 0; b < 5; ++b)
    for (Point y = 0; y < 5; ++y)
      for (Point z = 0; z < 5; ++z) {
        const Point s = corner_sum(z5, 1, b, y, z);
        EXPECT_EQ(s, (y + z + 5 - b) % 5);
        EXPECT_EQ(s, g5.act(g5.difference(b, z), y));
      }
  const auto heis = structure_group(group_cubespace(heis2()), 2);
  EXPECT_EQ(heis.group.invariant_factors(), std::vector<long long>({2}));
}

TEST(Structure, FibresAreDegreeKTorsors) {
  const auto x = group_cubespace(heis2());
  const auto g = structure_group(x, 2);
  for (std::size_t f = 0; f < g.fibres.count(); ++f) {
    const auto t = fibre_as_degree_k_torsor(x, g, f, 3);
    EXPECT_EQ(t.points.size(), g.group.order());
    EXPECT_TRUE(t.cubes_match);
  }
  const auto f1 = factor(x, 1);
  const auto g1 = structure_group(f1.space, 1);
  EXPECT_TRUE(fibre_as_degree_k_torsor(f1.space, g1, 0, 3).cubes_match);
}

TEST(Structure, DecompositionOfCyclicAndCoset) {
  const auto z5 = decompose(degree_k_cubespace(FiniteAbelianGroup({5}), 1));
  EXPECT_TRUE(z5.verified());
  EXPECT_EQ(z5.structure_group(1).invariant_factors(), std::vector<long long>({5}));
  const auto fg = heis2();
  const auto c = coset_cubespace(fg, Subgroup(fg.group(), {0, 1}));
  const auto d = decompose(c);
  EXPECT_TRUE(d.verified()) << d.witness.value_or("");
  const auto r = rebuild(d);
  for (int n = 1; n <= 3; ++n) EXPECT_EQ(r.cubes(n), c.cubes(n)) << n;
  const auto d2 = decompose(degree_k_cubespace(FiniteAbelianGroup({2}), 2));
  EXPECT_EQ(d2.structure_group(1).order(), 1U);
}

TEST(Structure, IdentityMorphism) {
  const auto x = group_cubespace(heis2());
  const auto d = decompose(x);
  const auto report = analyze_morphism(d, d, identity_table(x.size()));
  EXPECT_TRUE(report.bundle_morphism());
  EXPECT_TRUE(report.totally_surjective);
  EXPECT_TRUE(report.fibre_surjective);
  for (std::size_t i = 0; i < report.structure.size(); ++i)
    EXPECT_EQ(report.structure[i], identity_table(report.structure[i].size()));
}

TEST(Structure, DoublingMapOnZ4) {
  const auto x = degree_k_cubespace(FiniteAbelianGroup({4}), 1);
  const auto d = decompose(x);
  const std::vector<Point> doubling{0, 2, 0, 2};
  const auto report = analyze_morphism(d, d, doubling);
  EXPECT_TRUE(report.bundle_morphism());
  EXPECT_FALSE(report.totally_surjective);
  ASSERT_EQ(report.structure.size(), 1U);
  const auto& alpha = report.structure[0];
  const FiniteAbelianGroup& a = d.structure_group(1);
  for (Elem e = 0; e < a.order(); ++e) EXPECT_EQ(alpha[e], a.scale(2, e));
}

TEST(Structure, ReductionModTwo) {
  const auto source = decompose(degree_k_cubespace(FiniteAbelianGroup({4}), 1));
  const auto target = decompose(degree_k_cubespace(FiniteAbelianGroup({2}), 1));
  const std::vector<Point> mod2{0, 1, 0, 1};
  const auto report = analyze_morphism(source, target, mod2);
  EXPECT_TRUE(report.bundle_morphism());
  EXPECT_TRUE(report.totally_surjective);
  const auto& y = degree_k_cubespace(FiniteAbelianGroup({2}), 1);
  for (const auto& q : y.cubes(2)) {
    const auto lift = lift_cube_through(source, target, report, mod2, q);
    EXPECT_TRUE(degree_k_cubespace(FiniteAbelianGroup({4}), 1).contains(lift));
    for (std::size_t v = 0; v < q.size(); ++v) EXPECT_EQ(mod2[lift[v]], q[v]);
  }
  const auto pre = kernel_preimage_bundle(source, target, report, 1);
  EXPECT_TRUE(pre.sub_bundle) << pre.witness.value_or("");
  EXPECT_EQ(pre.factors.back(), (std::vector<Point>{1, 3}));
  EXPECT_EQ(pre.kernels[0].size(), 2U);
}

TEST(Structure, ProjectionToFactorIsFibreSurjective) {
  const auto x = group_cubespace(heis2());
  const auto f1 = factor(x, 1);
  const auto source = decompose(x);
  const auto target = decompose(f1.space.with_step(2), 2);
  const auto report = analyze_morphism(source, target, f1.projection);
  EXPECT_TRUE(report.bundle_morphism()) << report.witness.value_or("");
  EXPECT_TRUE(report.totally_surjective);
  EXPECT_TRUE(report.fibre_surjective);
  EXPECT_EQ(target.structure_group(2).order(), 1U);
}

TEST(Structure, RestrictedMorphisms) {
  const auto x = degree_k_cubespace(FiniteAbelianGroup({3}), 1);
  const SimplicialPattern p{1, {1}};
  const SimplicialPattern s{1, {0}};
  EXPECT_EQ(restricted_morphisms(x, p, s, std::vector<Point>{2, 0}).size(), 3U);
  const SimplicialPattern full{2, {3}};
  EXPECT_EQ(restricted_morphisms(x, full, full, std::vector<Point>{0, 1, 2, 0}).size(), 1U);

  const auto d = decompose(group_cubespace(heis2()));
  const auto skeleton = SimplicialPattern::skeleton(2, 1);
  const SimplicialPattern origin{2, {0}};
  const auto r = restricted_morphism_bundle(d, skeleton, origin, std::vector<Point>{5, 0, 0, 0});
  EXPECT_TRUE(r.sub_bundle) << r.witness.value_or("");
  std::size_t product = 1;
  for (auto o : r.group_orders) product *= o;
  EXPECT_EQ(r.count, product);
}

TEST(Structure, MorphismCollections) {
  const auto source = decompose(degree_k_cubespace(FiniteAbelianGroup({4}), 1));
  const auto target = decompose(degree_k_cubespace(FiniteAbelianGroup({2}), 1));
  const std::vector<Point> mod2{0, 1, 0, 1};
  const auto report = analyze_morphism(source, target, mod2);
  const auto checks = morphism_collection_checks(source, target, report, mod2, SimplicialPattern::skeleton(2, 1),
                                                 SimplicialPattern{2, {0}});
  EXPECT_TRUE(checks.holds()) << checks.witness.value_or("");
}
