#include <gtest/gtest.h>

#include <random>
#include <set>

#include "nilspace/group.hpp"
#include "nilspace/linear.hpp"

using namespace nilspace;

namespace {

void expect_group_axioms(const Group& g) {
  const auto n = static_cast<Elem>(g.order());
  for (Elem a = 0; a < n; ++a) {
    EXPECT_EQ(g.mul(0, a), a);
    EXPECT_EQ(g.mul(a, 0), a);
    EXPECT_EQ(g.mul(a, g.inv(a)), 0U);
    for (Elem b = 0; b < n; ++b)
      for (Elem c = 0; c < n; ++c) ASSERT_EQ(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
  }
}

}  // namespace

TEST(Group, StructuredGroupsSatisfyAxioms) {
  expect_group_axioms(Group::cyclic_product({2, 3}));
  expect_group_axioms(Group::heisenberg(2));
  expect_group_axioms(Group::heisenberg(3));
  expect_group_axioms(Group::direct_product(Group::cyclic(2), Group::heisenberg(2)));
}

TEST(Group, HeisenbergShape) {
  const auto h2 = FilteredGroup::lower_central(Group::heisenberg(2));
  EXPECT_EQ(h2.group().order(), 8U);
  EXPECT_EQ(h2.level(2).size(), 2U);
  EXPECT_EQ(h2.degree(), 2);
  const auto h3 = FilteredGroup::lower_central(Group::heisenberg(3));
  EXPECT_EQ(h3.group().order(), 27U);
  EXPECT_EQ(h3.degree(), 2);
  const auto& g = h3.group();
  const Elem x = g.from_coordinates(std::vector<int>{1, 0, 0});
  const Elem y = g.from_coordinates(std::vector<int>{0, 1, 0});
  EXPECT_EQ(g.coordinates(g.commutator(x, y)), (std::vector<int>{0, 0, 1}));
  EXPECT_FALSE(g.is_abelian());
}

TEST(Group, FromTableValidates) {
  auto table = Group::cyclic(3).table();
  const auto g = Group::from_table(table);
  EXPECT_EQ(g, Group::cyclic(3));
  table[1][1] = 1;
  EXPECT_THROW(Group::from_table(table), std::invalid_argument);
}

TEST(Group, FiltrationValidation) {
  const auto g = Group::heisenberg(3);
  const auto lcs = FilteredGroup::lower_central(g);
  EXPECT_FALSE(validate_filtration(g, {Subgroup::whole(g), lcs.level(1), lcs.level(2)}).has_value());
  const auto bad = validate_filtration(g, {Subgroup::whole(g), Subgroup::whole(g), Subgroup::trivial(g)});
  ASSERT_TRUE(bad.has_value());
  EXPECT_EQ(bad->kind, FiltrationViolation::Kind::Commutator);
  EXPECT_EQ(bad->i, 1);
  EXPECT_EQ(bad->j, 1);
  EXPECT_THROW(FilteredGroup(g, {Subgroup::whole(g), Subgroup::whole(g), Subgroup::trivial(g)}),
               std::invalid_argument);
}

TEST(Group, MaximalDegreeFiltration) {
  const auto a = Group::cyclic_product({2, 4});
  for (int k = 1; k <= 3; ++k) {
    const auto fg = FilteredGroup::maximal_degree(a, k);
    EXPECT_EQ(fg.degree(), k);
    for (int i = 0; i <= k; ++i) EXPECT_EQ(fg.level(i).size(), a.order());
    EXPECT_TRUE(fg.level(k + 1).is_trivial());
  }
}

TEST(Group, ShiftedFiltration) {
  const auto fg = FilteredGroup::lower_central(Group::heisenberg(3));
  const auto same = fg.shifted(0);
  for (int i = 0; i <= 3; ++i) EXPECT_EQ(same.level(i), fg.level(i));
  const auto one = fg.shifted(1);
  EXPECT_EQ(one.degree(), 1);
  EXPECT_EQ(one.level(1), fg.level(2));
  EXPECT_FALSE(one.ergodic());
  EXPECT_TRUE(fg.shifted(5).level(0).is_trivial());
}

TEST(Group, Quotients) {
  const auto g = Group::heisenberg(2);
  const auto center = FilteredGroup::lower_central(g).level(2);
  const auto q = quotient(g, center);
  EXPECT_EQ(q.group.order(), 4U);
  EXPECT_TRUE(q.group.is_abelian());
  EXPECT_EQ(invariant_factors_of(q.group), (std::vector<long long>{2, 2}));
  for (Elem a = 0; a < g.order(); ++a)
    for (Elem b = 0; b < g.order(); ++b)
      EXPECT_EQ(q.projection[g.mul(a, b)], q.group.mul(q.projection[a], q.projection[b]));
  EXPECT_EQ(quotient(g, Subgroup::trivial(g)).group.order(), 8U);
  EXPECT_EQ(quotient(g, Subgroup::whole(g)).group.order(), 1U);
  EXPECT_THROW(quotient(g, Subgroup(g, {0, 1})), std::invalid_argument);
}

TEST(Group, SubgroupClosure) {
  const auto g = Group::cyclic(6);
  EXPECT_TRUE(subgroup_closure(g, std::vector<Elem>{0}).is_trivial());
  EXPECT_EQ(subgroup_closure(g, std::vector<Elem>{2}).size(), 3U);
  EXPECT_EQ(subgroup_closure(g, std::vector<Elem>{2, 3}).size(), 6U);
}

TEST(Group, CosetSpaceAction) {
  const auto g = Group::heisenberg(2);
  const CosetSpace cosets(g, Subgroup(g, {0, 1}));
  EXPECT_EQ(cosets.size(), 4U);
  for (Elem a = 0; a < g.order(); ++a)
    for (std::size_t c = 0; c < cosets.size(); ++c)
      for (Elem b = 0; b < g.order(); ++b)
        EXPECT_EQ(cosets.act(g.mul(a, b), c), cosets.act(a, cosets.act(b, c)));
}

TEST(Group, AbelianNormalForm) {
  EXPECT_EQ(FiniteAbelianGroup({6, 4}).invariant_factors(), (std::vector<long long>{2, 12}));
  EXPECT_EQ(FiniteAbelianGroup({1, 1}).order(), 1U);
  const FiniteAbelianGroup a({2, 2});
  const auto id = identify_abelian(Group::cyclic_product({2, 2}));
  EXPECT_EQ(id.canonical, a);
  const auto g = Group::cyclic_product({2, 2});
  for (Elem x = 0; x < 4; ++x)
    for (Elem y = 0; y < 4; ++y) EXPECT_EQ(id.iso[g.mul(x, y)], a.add(id.iso[x], id.iso[y]));
}

TEST(Linear, SmithNormalForm) {
  const IntMatrix m{{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}};
  const auto s = smith_normal_form(m);
  EXPECT_EQ(s.diagonal, (std::vector<long long>{2, 6, 12}));
  // u m v is diagonal.
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      long long e = 0;
      for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = 0; b < 3; ++b) e += s.u[i][a] * m[a][b] * s.v[b][j];
      EXPECT_EQ(e, i == j ? s.diagonal[i] : 0);
    }
}

TEST(Linear, SmallSystems) {
  const FiniteAbelianGroup z2({2});
  const std::vector<LinearEquation> eqs{{{{0, 1}, {1, 1}}, 1}, {{{0, 1}, {1, -1}}, 1}};
  const auto sol = solve_abelian_linear_system(z2, 2, eqs);
  ASSERT_TRUE(sol.has_value());
  EXPECT_EQ(((*sol)[0] + (*sol)[1]) % 2, 1U);

  const FiniteAbelianGroup z4({4});
  EXPECT_FALSE(solve_abelian_linear_system(z4, 1, {{{{0, 2}}, 1}}).has_value());
  const auto empty = solve_abelian_linear_system(z4, 3, {});
  ASSERT_TRUE(empty.has_value());
  EXPECT_EQ(empty->size(), 3U);
}

TEST(Linear, SolverAgreesWithEnumeration) {
  std::mt19937 rng(7);
  const FiniteAbelianGroup a({2, 6});
  std::uniform_int_distribution<int> coef(-3, 3);
  std::uniform_int_distribution<Elem> elem(0, static_cast<Elem>(a.order() - 1));
  for (int trial = 0; trial < 60; ++trial) {
    const int unknowns = 2;
    std::vector<LinearEquation> eqs(3);
    for (auto& e : eqs) {
      for (int j = 0; j < unknowns; ++j) e.terms.emplace_back(j, coef(rng));
      e.constant = elem(rng);
    }
    auto satisfies = [&](const std::vector<Elem>& x) {
      for (const auto& e : eqs) {
        Elem s = 0;
        for (const auto& [j, c] : e.terms) s = a.add(s, a.scale(c, x[static_cast<std::size_t>(j)]));
        if (s != e.constant) return false;
      }
      return true;
    };
    bool brute = false;
    for (Elem x0 = 0; x0 < a.order() && !brute; ++x0)
      for (Elem x1 = 0; x1 < a.order() && !brute; ++x1) brute = satisfies({x0, x1});
    const auto sol = solve_abelian_linear_system(a, unknowns, eqs);
    EXPECT_EQ(sol.has_value(), brute) << trial;
    if (sol) EXPECT_TRUE(satisfies(*sol));
  }
}

TEST(Linear, ImageSizeAgreesWithEnumeration) {
  std::mt19937 rng(11);
  const FiniteAbelianGroup a({2, 4});
  std::uniform_int_distribution<int> coef(-4, 4);
  for (int trial = 0; trial < 30; ++trial) {
    IntMatrix m(3, std::vector<long long>(2));
    for (auto& row : m)
      for (auto& c : row) c = coef(rng);
    std::set<std::vector<Elem>> image;
    for (Elem x0 = 0; x0 < a.order(); ++x0)
      for (Elem x1 = 0; x1 < a.order(); ++x1) {
        std::vector<Elem> y;
        for (const auto& row : m) y.push_back(a.add(a.scale(row[0], x0), a.scale(row[1], x1)));
        image.insert(y);
      }
    EXPECT_EQ(image_size(a, m), image.size()) << trial;
  }
}

TEST(Linear, KernelSizeAgreesWithEnumeration) {
  std::mt19937 rng(12);
  const FiniteAbelianGroup a({2, 6});
  std::uniform_int_distribution<int> coef(-6, 6);
  for (int trial = 0; trial < 30; ++trial) {
    IntMatrix m(1 + trial % 3, std::vector<long long>(3));
    for (auto& row : m)
      for (auto& c : row) c = coef(rng);
    std::size_t kernel = 0;
    for (Elem x0 = 0; x0 < a.order(); ++x0)
      for (Elem x1 = 0; x1 < a.order(); ++x1)
        for (Elem x2 = 0; x2 < a.order(); ++x2) {
          bool zero = true;
          for (const auto& row : m)
            zero = zero && a.add(a.add(a.scale(row[0], x0), a.scale(row[1], x1)), a.scale(row[2], x2)) == 0;
          kernel += zero;
        }
    EXPECT_EQ(kernel_size(a, m, 3), kernel) << trial;
  }
  EXPECT_EQ(kernel_size(a, IntMatrix{}, 2), 144u);
}

TEST(Group, InvariantFactorsOfMixedOrders) {
  EXPECT_EQ(invariant_factors_of(Group::cyclic(6)), (std::vector<long long>{6}));
  EXPECT_EQ(invariant_factors_of(Group::cyclic_product({2, 6, 9})), (std::vector<long long>{6, 18}));
  EXPECT_EQ(invariant_factors_of(Group::cyclic(1)), (std::vector<long long>{}));
}
