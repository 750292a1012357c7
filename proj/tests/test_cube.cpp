#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "nilspace/cube.hpp"

using namespace nilspace;

namespace {

// Every bijection of {0,1}^n that is a morphism, found by brute force over tables.
std::size_t count_automorphisms_by_tables(int n) {
  std::vector<VertexIndex> perm(cube_size(n));
  for (VertexIndex v = 0; v < perm.size(); ++v) perm[v] = v;
  std::size_t count = 0;
  do {
    if (CubeMorphism::from_table(n, n, perm)) ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return count;
}

}  // namespace

TEST(Cube, VertexIndexIsColex) {
  const Vertex v = Vertex::from_bits(std::vector<int>{1, 0, 1});
  EXPECT_EQ(v.index(), 5U);
  EXPECT_EQ(v[1], 1);
  EXPECT_EQ(v[2], 0);
  EXPECT_EQ(v.weight(), 2);
  EXPECT_EQ(v.support(), (std::vector<int>{1, 3}));
  EXPECT_LT(Vertex(3, 3), Vertex(3, 4));
}

TEST(Cube, MorphismEvaluation) {
  const CubeMorphism phi(2, {CoordRule::id(1), CoordRule::refl(1), CoordRule::id(2)});
  EXPECT_EQ(phi.apply(VertexIndex{1}), 1U);  // (1,0) -> (1,0,0)
  const CubeMorphism face(2, {CoordRule::id(1), CoordRule::zero(), CoordRule::refl(2)});
  EXPECT_EQ(face.apply(VertexIndex{2}), 0U);  // (0,1) -> (0,0,0)
  const auto id = CubeMorphism::identity(3);
  for (VertexIndex v = 0; v < 8; ++v) EXPECT_EQ(id.apply(v), v);
}

TEST(Cube, FromTable) {
  const std::vector<VertexIndex> square{2, 1, 6, 5};  // v -> (v1, 1 - v1, v2)
  const auto phi = CubeMorphism::from_table(2, 3, square);
  ASSERT_TRUE(phi.has_value());
  EXPECT_EQ(*phi, CubeMorphism(2, {CoordRule::id(1), CoordRule::refl(1), CoordRule::id(2)}));

  const std::vector<VertexIndex> bad{0, 3, 0, 1};
  EXPECT_FALSE(CubeMorphism::from_table(2, 2, bad).has_value());

  const std::vector<VertexIndex> constant{5, 5, 5, 5};
  const auto c = CubeMorphism::from_table(2, 3, constant);
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ(*c, CubeMorphism::constant(2, 5, 3));
}

TEST(Cube, FromTableAgreesWithEveryMorphism) {
  for (const auto& phi : enumerate_morphisms(2, 2)) {
    const auto table = phi.table();
    const auto back = CubeMorphism::from_table(2, 2, table);
    ASSERT_TRUE(back.has_value());
    EXPECT_EQ(back->table(), table);
  }
  EXPECT_EQ(enumerate_morphisms(2, 2).size(), 36U);
}

TEST(Cube, Composition) {
  const CubeMorphism outer(1, {CoordRule::id(1), CoordRule::refl(1)});
  const CubeMorphism inner(1, {CoordRule::refl(1)});
  EXPECT_EQ(outer.compose(inner), CubeMorphism(1, {CoordRule::refl(1), CoordRule::id(1)}));
  EXPECT_EQ(outer.compose(CubeMorphism::identity(1)), outer);
  for (const auto& f : enumerate_face_maps(1, 2))
    for (const auto& g : enumerate_face_maps(2, 3)) EXPECT_TRUE(g.compose(f).is_face_map());
}

TEST(Cube, JSets) {
  const CubeMorphism phi(2, {CoordRule::id(1), CoordRule::refl(1), CoordRule::id(2)});
  EXPECT_EQ(phi.j_sets(), (std::vector<std::vector<int>>{{1, 2}, {3}}));
  EXPECT_EQ(CubeMorphism::identity(3).j_sets(), (std::vector<std::vector<int>>{{1}, {2}, {3}}));
  for (const auto& j : CubeMorphism::constant(2, 1, 2).j_sets()) EXPECT_TRUE(j.empty());
}

TEST(Cube, FaceEnumeration) {
  EXPECT_EQ(enumerate_face_maps(3, 3).size(), 1U);
  EXPECT_EQ(enumerate_face_maps(0, 1).size(), 2U);
  const auto faces = enumerate_faces(2, 3);
  EXPECT_EQ(faces.size(), 6U);
  // Face maps in the wide sense (|J(i)| = 1) are the canonical ones up to automorphisms.
  std::size_t wide = 0;
  for (const auto& phi : enumerate_morphisms(2, 3)) wide += phi.is_face_map() ? 1 : 0;
  EXPECT_EQ(wide, faces.size() * automorphism_group(2).size());
  const CubeMorphism expected(2, {CoordRule::id(1), CoordRule::zero(), CoordRule::id(2)});
  const auto maps = enumerate_face_maps(2, 3);
  EXPECT_NE(std::find(maps.begin(), maps.end(), expected), maps.end());
  for (const auto& f : faces) EXPECT_EQ(f.dim(), 2);
}

TEST(Cube, AutomorphismCounts) {
  const auto one = automorphism_group(1);
  ASSERT_EQ(one.size(), 2U);
  std::set<int> reflections;
  for (const auto& a : one) reflections.insert(a.reflections());
  EXPECT_EQ(reflections, (std::set<int>{0, 1}));
  EXPECT_EQ(automorphism_group(2).size(), count_automorphisms_by_tables(2));
  EXPECT_EQ(automorphism_group(2).size(), 8U);
  EXPECT_EQ(automorphism_group(3).size(), count_automorphisms_by_tables(3));
  EXPECT_EQ(automorphism_group(3).size(), 48U);
}

TEST(Cube, AutomorphismInverse) {
  for (const auto& a : automorphism_group(3)) {
    const auto id = a.compose(a.inverse());
    for (VertexIndex v = 0; v < 8; ++v) EXPECT_EQ(id.apply(v), v);
  }
}

TEST(Cube, GrayOrder) {
  EXPECT_EQ(gray_order(1), (std::vector<VertexIndex>{0, 1}));
  EXPECT_EQ(gray_order(2), (std::vector<VertexIndex>{0, 1, 3, 2}));
  for (int n = 1; n <= 6; ++n) {
    const auto g = gray_order(n);
    ASSERT_EQ(g.size(), cube_size(n));
    EXPECT_EQ(std::set<VertexIndex>(g.begin(), g.end()).size(), g.size());
    for (std::size_t j = 1; j < g.size(); ++j) EXPECT_EQ(weight(g[j] ^ g[j - 1]), 1) << n;
  }
}

namespace {

void expect_valid_decomposition(const CubeMorphism& phi) {
  const auto d = decompose_injective_morphism(phi);
  const auto psi = phi.compose(d.theta.morphism());
  const int m = phi.source_dim();
  const VertexIndex half = static_cast<VertexIndex>(cube_size(m - 1));
  ASSERT_GE(d.parts.size(), 2U);
  for (VertexIndex v = 0; v < half; ++v) {
    EXPECT_EQ(d.parts.front().apply(v), psi.apply(v));
    EXPECT_EQ(d.parts.back().apply(v + half), psi.apply(v + half));
    for (std::size_t a = 0; a + 1 < d.parts.size(); ++a)
      EXPECT_EQ(d.parts[a].apply(v + half), d.parts[a + 1].apply(v));
  }
  for (const auto& p : d.parts) {
    EXPECT_TRUE(p.injective());
    EXPECT_LT(p.varying_coordinates().size(), phi.varying_coordinates().size());
  }
}

}  // namespace

TEST(Cube, InjectiveDecomposition) {
  expect_valid_decomposition(CubeMorphism(1, {CoordRule::id(1), CoordRule::id(1)}));
  expect_valid_decomposition(CubeMorphism(1, {CoordRule::id(1), CoordRule::refl(1)}));
  expect_valid_decomposition(CubeMorphism(2, {CoordRule::id(1), CoordRule::refl(1), CoordRule::id(2)}));
  expect_valid_decomposition(CubeMorphism(2, {CoordRule::id(2), CoordRule::id(1), CoordRule::id(2)}));
  EXPECT_THROW(decompose_injective_morphism(CubeMorphism::identity(2)), std::invalid_argument);
}

TEST(Cube, ConcatenateRequiresAdjacency) {
  const std::vector<int> a{0, 1, 2, 3};
  const std::vector<int> b{2, 3, 4, 5};
  EXPECT_EQ(concatenate<int>(a, b), (std::vector<int>{0, 1, 4, 5}));
  EXPECT_THROW(concatenate<int>(a, a), std::invalid_argument);
}

TEST(Cube, TricubeEmbedding) {
  const Vertex ones(2, 3);
  EXPECT_EQ(tricube_embed(ones, ones), TricubePoint({0, 0}));
  EXPECT_EQ(tricube_embed(Vertex(1, 0), Vertex(1, 0)), TricubePoint({-1}));
  for (int n = 1; n <= 4; ++n)
    for (VertexIndex v = 0; v < cube_size(n); ++v)
      EXPECT_EQ(outer_point(Vertex(n, v)), tricube_embed(Vertex(n, v), Vertex(n, 0)));
}

TEST(Cube, TricubeLambda) {
  EXPECT_EQ(tricube_lambda_embed(TricubePoint({0, 0})).index(), 0U);
  EXPECT_EQ(tricube_lambda_embed(TricubePoint({1, -1})), Vertex::from_bits(std::vector<int>{1, 0, 0, 1}));
  // The image is closed downward under support containment.
  for (int n = 1; n <= 3; ++n) {
    std::set<VertexIndex> image;
    for (std::uint32_t t = 0; t < tricube_size(n); ++t)
      image.insert(tricube_lambda_embed(TricubePoint::from_index(n, t)).index());
    for (VertexIndex v : image)
      for (VertexIndex u = 0; u < cube_size(2 * n); ++u)
        if ((u & v) == u) EXPECT_TRUE(image.count(u)) << n;
  }
}

TEST(Cube, TricubeCubes) {
  for (VertexIndex v = 0; v < 4; ++v) {
    std::vector<TricubePoint> c;
    for (VertexIndex w = 0; w < 4; ++w) c.push_back(tricube_embed(Vertex(2, v), Vertex(2, w)));
    EXPECT_TRUE(is_tricube_cube(2, c));
  }
  EXPECT_FALSE(is_tricube_cube(1, std::vector<TricubePoint>{TricubePoint({-1}), TricubePoint({1})}));
  EXPECT_TRUE(is_tricube_cube(2, std::vector<TricubePoint>(4, TricubePoint({0, 0}))));
}

TEST(Cube, TricubeIndexRoundTrip) {
  for (std::uint32_t t = 0; t < tricube_size(3); ++t) EXPECT_EQ(TricubePoint::from_index(3, t).index(), t);
}
