#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

#include "nilspace/cubespace.hpp"
#include "nilspace/hk_cubes.hpp"

namespace nilspace {

namespace {

constexpr std::size_t kGeneratorLimit = std::size_t{1} << 21;

}  // namespace

Cubespace group_cubespace(const FilteredGroup& fg, std::string name) {
  if (name.empty()) name = fg.group().name();
  Cubespace::Traits t;
  t.dim_cap = std::max(fg.degree() + 2, 6);
  t.step = fg.degree();
  t.memoize = false;
  t.generator = [fg](int n) {
    if (count_cubes(fg, n) > kGeneratorLimit) throw std::length_error("cube enumeration exceeds the generator limit");
    return enumerate_cubes(fg, n);
  };
  auto completer = std::make_shared<const CornerCompleter>(fg);
  t.completer = [fg, completer](std::span<const Point> corner) -> std::optional<Point> {
    try {
      return completer->complete(corner).back();
    } catch (const CornerPremiseError&) {
      return std::nullopt;
    }
  };
  return Cubespace(std::move(name), fg.group().order(), Provenance::GroupGenerated,
                   [fg](std::span<const Point> q) { return is_cube(fg, q); }, std::move(t));
}

Cubespace degree_k_cubespace(const FiniteAbelianGroup& a, int k) {
  if (k < 0) throw std::invalid_argument("degree_k_cubespace: k must be nonnegative");
  return group_cubespace(FilteredGroup::maximal_degree(a.group(), k),
                         "D_" + std::to_string(k) + "(" + a.str() + ")");
}

std::optional<CubeValues> lift_coset_cube(const FilteredGroup& fg, const CosetSpace& cosets, std::span<const Point> q) {
  const Group& g = fg.group();
  const auto& gamma = cosets.stabilizer_subgroup().elements();
  CubeValues lift(q.size(), 0), coeff(q.size(), 0);
  lift[0] = cosets.representative(q[0]);
  coeff[0] = lift[0];
  if (!fg.in_level(0, lift[0])) return std::nullopt;
  // Depth-first over Gamma corrections; the coefficient at u only depends on
  // vertices below u, so it is checked as soon as u is assigned.
  auto dfs = [&](auto&& self, VertexIndex u) -> bool {
    if (u == q.size()) return true;
    Elem prefix = 0;
    VertexIndex s = 0;
    while (s != u) {
      prefix = g.mul(prefix, coeff[s]);
      s = (s - u) & u;
    }
    const Elem rep = cosets.representative(q[u]);
    for (Elem c : gamma) {
      lift[u] = g.mul(rep, c);
      coeff[u] = g.mul(g.inv(prefix), lift[u]);
      if (fg.in_level(weight(u), coeff[u]) && self(self, u + 1)) return true;
    }
    return false;
  };
  if (!dfs(dfs, 1)) return std::nullopt;
  return lift;
}

Cubespace coset_cubespace(const FilteredGroup& fg, const Subgroup& gamma, std::string name) {
  auto cosets = std::make_shared<const CosetSpace>(fg.group(), gamma);
  if (name.empty()) name = fg.group().name() + "/Gamma";
  Cubespace::Traits t;
  t.dim_cap = std::max(fg.degree() + 2, 4);
  t.step = fg.degree();
  t.generator = [fg, cosets](int n) {
    if (count_cubes(fg, n) > kGeneratorLimit) throw std::length_error("cube enumeration exceeds the generator limit");
    std::set<CubeMap> seen;
    for (const CubeValues& q : enumerate_cubes(fg, n)) {
      CubeMap image(q.size());
      for (std::size_t v = 0; v < q.size(); ++v) image[v] = static_cast<Point>(cosets->coset_of(q[v]));
      seen.insert(std::move(image));
    }
    return std::vector<CubeMap>(seen.begin(), seen.end());
  };
  return Cubespace(std::move(name), cosets->size(), Provenance::Coset,
                   [fg, cosets](std::span<const Point> q) { return lift_coset_cube(fg, *cosets, q).has_value(); },
                   std::move(t));
}

Cubespace product(const Cubespace& x, const Cubespace& y) {
  const std::size_t nx = x.size();
  Cubespace::Traits t;
  t.dim_cap = std::min(x.dim_cap(), y.dim_cap());
  if (x.step() && y.step()) t.step = std::max(*x.step(), *y.step());
  t.memoize = false;
  if (x.has_generator() && y.has_generator()) {
    t.generator = [x, y, nx](int n) {
      const auto& cx = x.cubes(n);
      const auto& cy = y.cubes(n);
      if (cx.size() * cy.size() > kGeneratorLimit) throw std::length_error("product enumeration exceeds the generator limit");
      std::vector<CubeMap> out;
      out.reserve(cx.size() * cy.size());
      for (const auto& b : cy)
        for (const auto& a : cx) {
          CubeMap q(a.size());
          for (std::size_t v = 0; v < a.size(); ++v) q[v] = static_cast<Point>(a[v] + nx * b[v]);
          out.push_back(std::move(q));
        }
      return out;
    };
  }
  return Cubespace(x.name() + " x " + y.name(), nx * y.size(), Provenance::Product,
                   [x, y, nx](std::span<const Point> q) {
                     CubeMap a(q.size()), b(q.size());
                     for (std::size_t v = 0; v < q.size(); ++v) {
                       a[v] = static_cast<Point>(q[v] % nx);
                       b[v] = static_cast<Point>(q[v] / nx);
                     }
                     return x.contains(a) && y.contains(b);
                   },
                   std::move(t));
}

Cubespace arrow_space(const Cubespace& x, int k) {
  if (k < 1) throw std::invalid_argument("arrow_space: k must be positive");
  const std::size_t nx = x.size();
  Cubespace::Traits t;
  t.step = x.step();
  t.dim_cap = x.step() ? x.dim_cap() : std::max(0, x.dim_cap() - k);
  return Cubespace(x.name() + " join_" + std::to_string(k), nx * nx, Provenance::Arrow,
                   [x, k, nx](std::span<const Point> q) {
                     CubeMap a(q.size()), b(q.size());
                     for (std::size_t v = 0; v < q.size(); ++v) {
                       a[v] = static_cast<Point>(q[v] % nx);
                       b[v] = static_cast<Point>(q[v] / nx);
                     }
                     return x.contains(arrow<Point>(a, b, k));
                   },
                   std::move(t));
}

Cubespace partial_x(const Cubespace& x, Point base) {
  if (base >= x.size()) throw std::out_of_range("partial_x: base point outside the space");
  Cubespace::Traits t;
  if (x.step()) t.step = std::max(0, *x.step() - 1);
  t.dim_cap = x.step() ? x.dim_cap() : std::max(0, x.dim_cap() - 1);
  return Cubespace("d_" + std::to_string(base) + " " + x.name(), x.size(), Provenance::Partial,
                   [x, base](std::span<const Point> q) {
                     const CubeMap constant(q.size(), base);
                     return x.contains(arrow<Point>(constant, CubeMap(q.begin(), q.end()), 1));
                   },
                   std::move(t));
}

Cubespace restrict_to(const Cubespace& x, std::vector<Point> points) {
  if (points.empty()) throw std::invalid_argument("restrict_to: empty subset");
  for (Point p : points)
    if (p >= x.size()) throw std::out_of_range("restrict_to: point outside the space");
  Cubespace::Traits t;
  t.dim_cap = x.dim_cap();
  t.step = x.step();
  auto pts = std::make_shared<const std::vector<Point>>(std::move(points));
  const std::size_t n = pts->size();
  return Cubespace(x.name() + "|sub", n, Provenance::Subspace,
                   [x, pts](std::span<const Point> q) {
                     CubeMap image(q.size());
                     for (std::size_t v = 0; v < q.size(); ++v) image[v] = (*pts)[q[v]];
                     return x.contains(image);
                   },
                   std::move(t));
}

Cubespace explicit_cubespace(std::string name, std::size_t points, std::map<int, std::vector<CubeMap>> tables,
                             std::optional<int> step) {
  int top = 0;
  auto sets = std::make_shared<std::map<int, std::set<CubeMap>>>();
  for (auto& [n, list] : tables) {
    if (n < 1 || n > kMaxCubeDim) throw DimensionError("explicit_cubespace: table dimension out of range");
    for (const auto& q : list) {
      if (q.size() != cube_size(n)) throw DimensionError("explicit_cubespace: table entry has wrong size");
      for (Point p : q)
        if (p >= points) throw std::out_of_range("explicit_cubespace: value outside the point set");
    }
    (*sets)[n].insert(list.begin(), list.end());
    top = std::max(top, n);
  }
  Cubespace::Traits t;
  t.dim_cap = top;
  t.step = step;
  t.memoize = false;
  t.generator = [sets](int n) {
    auto it = sets->find(n);
    return it == sets->end() ? std::vector<CubeMap>{} : std::vector<CubeMap>(it->second.begin(), it->second.end());
  };
  std::shared_ptr<const std::map<int, std::set<CubeMap>>> frozen = sets;
  return Cubespace(std::move(name), points, Provenance::ExplicitTables,
                   [frozen](std::span<const Point> q) {
                     auto it = frozen->find(dimension_of(q.size()));
                     return it != frozen->end() && it->second.count(CubeMap(q.begin(), q.end())) > 0;
                   },
                   std::move(t));
}

std::map<int, std::vector<CubeMap>> export_tables(const Cubespace& x, int n_max) {
  std::map<int, std::vector<CubeMap>> out;
  for (int n = 1; n <= n_max; ++n) out[n] = x.cubes(n);
  return out;
}

Cubespace disjoint_union(const Cubespace& x, const Cubespace& y, int n_max) {
  auto tables = export_tables(x, n_max);
  const auto shift = static_cast<Point>(x.size());
  for (int n = 1; n <= n_max; ++n)
    for (CubeMap q : y.cubes(n)) {
      for (auto& p : q) p += shift;
      tables[n].push_back(std::move(q));
    }
  std::optional<int> step;
  if (x.step() && y.step()) step = std::max(*x.step(), *y.step());
  return explicit_cubespace(x.name() + " + " + y.name(), x.size() + y.size(), std::move(tables), step);
}

// ---- simplicial extension ----------------------------------------------------

bool SimplicialPattern::contains(VertexIndex v) const {
  return std::any_of(generators.begin(), generators.end(), [v](VertexIndex h) { return (v & ~h) == 0; });
}

std::vector<VertexIndex> SimplicialPattern::points() const {
  std::vector<VertexIndex> out;
  for (VertexIndex v = 0; v < cube_size(dim); ++v)
    if (contains(v)) out.push_back(v);
  return out;
}

SimplicialPattern SimplicialPattern::skeleton(int dim, int k) {
  SimplicialPattern p{dim, {}};
  for (VertexIndex v = 0; v < cube_size(dim); ++v)
    if (weight(v) == std::min(k, dim)) p.generators.push_back(v);
  return p;
}

CubeMap simplicial_extend(const Cubespace& x, const SimplicialPattern& pattern, std::span<const Point> f) {
  if (f.size() != cube_size(pattern.dim)) throw DimensionError("simplicial_extend: map has wrong size");
  for (VertexIndex h : pattern.generators)
    if (!x.contains(face_restriction(f, h, h)))
      throw std::invalid_argument("simplicial_extend: map is not a morphism on the subcube over " + std::to_string(h));
  CubeMap out(f.begin(), f.end());
  for (VertexIndex u = 0; u < out.size(); ++u) {
    if (pattern.contains(u)) continue;
    CubeMap corner = face_restriction(out, u, u);
    corner.pop_back();
    const auto value = x.complete(corner);
    if (!value) throw std::runtime_error("simplicial_extend: corner over " + std::to_string(u) + " has no completion");
    out[u] = *value;
  }
  return out;
}

CubeMap concatenate_cubes(const Cubespace& x, std::span<const Point> q1, std::span<const Point> q2) {
  const int n = dimension_of(q1.size());
  if (n < 1 || q2.size() != q1.size()) throw DimensionError("concatenate_cubes: need equal dimensions >= 1");
  if (!x.contains(q1) || !x.contains(q2)) throw std::invalid_argument("concatenate_cubes: inputs must be cubes");
  const CubeMap expected = concatenate<Point>(q1, q2);  // also checks adjacency

  const VertexIndex low_mask = (VertexIndex{1} << (n - 1)) - 1;
  const VertexIndex bit_n = VertexIndex{1} << (n - 1), bit_n1 = VertexIndex{1} << n;
  const SimplicialPattern pattern{n + 1, {bit_n1 - 1, (bit_n1 | low_mask)}};
  CubeMap f(cube_size(n + 1), 0);
  for (VertexIndex w = 0; w < f.size(); ++w) {
    const VertexIndex head = w & low_mask;
    if ((w & bit_n1) == 0) {
      // (v', v_n, 0) -> q1(v', 1 - v_n)
      f[w] = q1[head | ((w & bit_n) ? 0 : bit_n)];
    } else if ((w & bit_n) == 0) {
      // (v', 0, v_{n+1}) -> q2(v', v_{n+1})
      f[w] = q2[head | bit_n];
    }
  }
  const CubeMap extended = simplicial_extend(x, pattern, f);
  CubeMap out(q1.size());
  for (VertexIndex v = 0; v < out.size(); ++v) {
    const VertexIndex head = v & low_mask;
    const bool vn = (v & bit_n) != 0;
    out[v] = extended[head | (vn ? bit_n1 : bit_n)];
  }
  if (out != expected || !x.contains(out)) throw std::logic_error("concatenate_cubes: concatenation is not a cube");
  return out;
}

// ---- tricubes ----------------------------------------------------------------

bool is_tricube_morphism(const Cubespace& x, int n, std::span<const Point> t) {
  if (t.size() != tricube_size(n)) throw DimensionError("tricube map has wrong size");
  for (VertexIndex v = 0; v < cube_size(n); ++v) {
    CubeMap piece(cube_size(n));
    for (VertexIndex w = 0; w < piece.size(); ++w)
      piece[w] = t[tricube_embed(Vertex(n, v), Vertex(n, w)).index()];
    if (!x.contains(piece)) return false;
  }
  return true;
}

std::vector<Point> glue_tricube(int n, const std::vector<CubeMap>& pieces) {
  if (pieces.size() != cube_size(n)) throw DimensionError("glue_tricube: need one piece per subcube");
  std::vector<Point> t(tricube_size(n), 0);
  std::vector<char> set(t.size(), 0);
  for (VertexIndex v = 0; v < pieces.size(); ++v) {
    if (pieces[v].size() != cube_size(n)) throw DimensionError("glue_tricube: piece has wrong size");
    for (VertexIndex w = 0; w < pieces[v].size(); ++w) {
      const auto idx = tricube_embed(Vertex(n, v), Vertex(n, w)).index();
      if (set[idx] && t[idx] != pieces[v][w])
        throw std::invalid_argument("glue_tricube: pieces disagree at tricube point " + std::to_string(idx));
      t[idx] = pieces[v][w];
      set[idx] = 1;
    }
  }
  return t;
}

CubeMap tricube_compose(const Cubespace& x, int n, std::span<const Point> t) {
  if (!is_tricube_morphism(x, n, t)) throw std::invalid_argument("tricube_compose: some subcube is not a cube");
  SimplicialPattern pattern{2 * n, {}};
  for (VertexIndex v = 0; v < cube_size(n); ++v)
    pattern.generators.push_back(tricube_lambda_embed(outer_point(Vertex(n, v))).index());
  CubeMap f(cube_size(2 * n), 0);
  for (std::uint32_t i = 0; i < t.size(); ++i)
    f[tricube_lambda_embed(TricubePoint::from_index(n, i)).index()] = t[i];
  const CubeMap extended = simplicial_extend(x, pattern, f);
  const CubeMap out = outer_point_morphism(n).pull_back(std::span<const Point>(extended));
  for (VertexIndex v = 0; v < out.size(); ++v)
    if (out[v] != t[outer_point(Vertex(n, v)).index()])
      throw std::logic_error("tricube_compose: outer points were not preserved");
  if (!x.contains(out)) throw std::logic_error("tricube_compose: composition is not a cube");
  return out;
}

// ---- ergodic components --------------------------------------------------------

ErgodicComponents ergodic_components(const Cubespace& x) {
  const std::size_t n = x.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (Point a = 0; a < n; ++a)
    for (Point b = a + 1; b < n; ++b) {
      const Point pair[2] = {a, b};
      if (x.contains(pair)) {
        const auto ra = find(a), rb = find(b);
        if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
      }
    }
  ErgodicComponents out;
  out.component_of.assign(n, 0);
  std::vector<std::size_t> index_of_root(n, n);
  for (Point p = 0; p < n; ++p) {
    const auto r = find(p);
    if (index_of_root[r] == n) {
      index_of_root[r] = out.members.size();
      out.members.emplace_back();
    }
    out.component_of[p] = index_of_root[r];
    out.members[index_of_root[r]].push_back(p);
  }
  for (const auto& m : out.members) out.spaces.push_back(restrict_to(x, m));
  return out;
}

}  // namespace nilspace
