#include "nilspace/structure.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "nilspace/hk_cubes.hpp"

namespace nilspace {

namespace {

std::string show(std::span<const Point> q) {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < q.size(); ++i) out << (i ? "," : "") << q[i];
  out << ')';
  return out.str();
}

CubeMap compose(std::span<const Point> table, std::span<const Point> q) {
  CubeMap out(q.size());
  for (std::size_t v = 0; v < q.size(); ++v) out[v] = table[q[v]];
  return out;
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
  std::size_t find(std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

SimK classes_from(int k, UnionFind& uf, std::size_t n) {
  SimK out;
  out.k = k;
  out.class_of.assign(n, 0);
  std::vector<std::size_t> root_to_class(n, n);
  for (std::size_t p = 0; p < n; ++p) {
    const std::size_t r = uf.find(p);
    if (root_to_class[r] == n) {
      root_to_class[r] = out.classes.size();
      out.classes.emplace_back();
    }
    out.class_of[p] = root_to_class[r];
    out.classes[root_to_class[r]].push_back(static_cast<Point>(p));
  }
  return out;
}

// A cube of y over the cube q of z = y / projection, where projection
// identifies points that are ~_level related. Smallest preimages on the
// weight <= level+1 skeleton, then simplicial extension.
std::optional<CubeMap> lift_through(const Cubespace& y, std::span<const Point> projection, int level,
                                    std::span<const Point> q) {
  const int n = dimension_of(q.size());
  std::vector<Point> smallest;
  for (Point p = 0; p < projection.size(); ++p) {
    if (projection[p] >= smallest.size()) smallest.resize(projection[p] + 1, static_cast<Point>(projection.size()));
    smallest[projection[p]] = std::min(smallest[projection[p]], p);
  }
  CubeMap lift(q.size(), 0);
  for (std::size_t v = 0; v < q.size(); ++v) {
    if (q[v] >= smallest.size() || smallest[q[v]] == projection.size())
      throw std::invalid_argument("lift_through: value outside the factor");
    if (weight(static_cast<VertexIndex>(v)) <= level + 1) lift[v] = smallest[q[v]];
  }
  if (n <= level + 1) {
    if (!y.contains(lift)) return std::nullopt;
    return lift;
  }
  CubeMap full;
  try {
    full = simplicial_extend(y, SimplicialPattern::skeleton(n, level + 1), lift);
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  } catch (const std::runtime_error&) {
    return std::nullopt;
  }
  for (std::size_t v = 0; v < q.size(); ++v)
    if (projection[full[v]] != q[v]) return std::nullopt;
  return full;
}

// A degree-k cube of A with alpha o result = target: smallest preimages on
// the weight <= k skeleton, then extension in D_k(A).
std::optional<CubeMap> lift_abelian_cube(const FiniteAbelianGroup& a, int k, std::span<const Elem> alpha,
                                         std::span<const Elem> target) {
  const int n = dimension_of(target.size());
  std::vector<std::optional<Elem>> preimage(target.size() ? *std::max_element(alpha.begin(), alpha.end()) + 1 : 0);
  for (Elem e = 0; e < alpha.size(); ++e)
    if (!preimage[alpha[e]]) preimage[alpha[e]] = e;
  CubeMap lift(target.size(), 0);
  for (std::size_t v = 0; v < target.size(); ++v) {
    if (weight(static_cast<VertexIndex>(v)) > k) continue;
    if (target[v] >= preimage.size() || !preimage[target[v]]) return std::nullopt;
    lift[v] = *preimage[target[v]];
  }
  const Cubespace d = degree_k_cubespace(a, k);
  CubeMap full = n <= k ? lift : simplicial_extend(d, SimplicialPattern::skeleton(n, k), lift);
  for (std::size_t v = 0; v < target.size(); ++v)
    if (alpha[full[v]] != target[v]) return std::nullopt;
  if (!is_degree_k_abelian_cube(a.group(), full, k)) return std::nullopt;
  return full;
}

const BundleLevel& level_at(const BundleDecomposition& d, int i) { return d.levels.at(static_cast<std::size_t>(i)); }

}  // namespace

// ---- ~k and factors -----------------------------------------------------------

bool sim_k_related(const Cubespace& x, int k, Point a, Point b) {
  CubeMap q(cube_size(k + 1), a);
  q[0] = b;
  return x.contains(q);
}

SimK sim_k(const Cubespace& x, int k) {
  const std::size_t n = x.size();
  std::vector<char> rel(n * n);
  for (Point a = 0; a < n; ++a)
    for (Point b = 0; b < n; ++b) rel[a * n + b] = sim_k_related(x, k, a, b) ? 1 : 0;
  for (std::size_t a = 0; a < n; ++a) {
    if (!rel[a * n + a]) throw std::logic_error("sim_k: relation is not reflexive at " + std::to_string(a));
    for (std::size_t b = 0; b < n; ++b) {
      if (rel[a * n + b] != rel[b * n + a])
        throw std::logic_error("sim_k: relation is not symmetric at " + std::to_string(a) + "," + std::to_string(b));
      if (!rel[a * n + b]) continue;
      for (std::size_t c = 0; c < n; ++c)
        if (rel[b * n + c] && !rel[a * n + c])
          throw std::logic_error("sim_k: relation is not transitive at " + std::to_string(a) + "," +
                                 std::to_string(b) + "," + std::to_string(c));
    }
  }
  UnionFind uf(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (rel[a * n + b]) uf.unite(a, b);
  return classes_from(k, uf, n);
}

FactorSpace factor(const Cubespace& x, int k) {
  SimK relation = sim_k(x, k);
  std::vector<Point> projection(relation.class_of.begin(), relation.class_of.end());
  const std::string name = "F" + std::to_string(k) + "(" + x.name() + ")";
  if (relation.count() == x.size()) {
    Cubespace same = x.with_name(name);
    if (!x.step() || *x.step() > k) same = same.with_step(k);
    return {std::move(relation), std::move(projection), std::move(same)};
  }
  Cubespace::Traits traits;
  traits.step = k;
  traits.memoize = true;
  traits.dim_cap = std::min(x.max_queryable_dim(), std::max(k + 2, x.dim_cap()));
  auto proj = std::make_shared<const std::vector<Point>>(projection);
  Cubespace::Oracle oracle = [x, proj, k](std::span<const Point> q) {
    return lift_through(x, *proj, k, q).has_value();
  };
  Cubespace space(name, relation.count(), Provenance::Quotient, std::move(oracle), std::move(traits));
  return {std::move(relation), std::move(projection), std::move(space)};
}

std::optional<CubeMap> lift_factor_cube(const Cubespace& x, const FactorSpace& f, std::span<const Point> q) {
  return lift_through(x, f.projection, f.relation.k, q);
}

// ---- local translations and structure groups --------------------------------

Point local_translation_at(const Cubespace& x, int k, Point x0, Point x1, Point y0) {
  const std::size_t half = cube_size(k);
  CubeMap corner(2 * half - 1);
  for (std::size_t v = 0; v < half; ++v) corner[v] = x0;
  corner[half - 1] = y0;
  for (std::size_t v = half; v + 1 < 2 * half; ++v) corner[v] = x1;
  auto done = x.complete(corner);
  if (!done) throw std::runtime_error("local translation: corner without completion");
  return *done;
}

std::map<Point, Point> local_translation(const Cubespace& x, int k, Point x0, Point x1) {
  if (k < 1) throw std::invalid_argument("local translation needs k >= 1");
  const SimK fibres = sim_k(x, k - 1);
  std::map<Point, Point> out;
  for (Point y : fibres.classes[fibres.class_of[x0]]) out[y] = local_translation_at(x, k, x0, x1, y);
  return out;
}

Point corner_sum(const Cubespace& x, int k, Point b, Point y, Point z) {
  if (k < 1) throw std::invalid_argument("corner_sum needs k >= 1");
  const VertexIndex top = full_vertex(k + 1);
  CubeMap corner(top, b);
  corner[top ^ 1U] = y;
  corner[top ^ 2U] = z;
  auto done = x.complete(corner);
  if (!done) throw std::runtime_error("corner_sum: corner without completion");
  return *done;
}

Elem StructureGroup::difference(Point from, Point to) const {
  for (Elem a = 0; a < group.order(); ++a)
    if (act(a, from) == to) return a;
  throw std::invalid_argument("difference: points " + std::to_string(from) + " and " + std::to_string(to) +
                              " lie in different fibres");
}

StructureGroup structure_group(const Cubespace& x, int k) {
  if (k < 1) throw std::invalid_argument("structure_group needs k >= 1");
  StructureGroup out;
  out.k = k;
  out.fibres = sim_k(x, k - 1);
  out.base = 0;
  out.base_fibre = out.fibres.classes[out.fibres.class_of[out.base]];
  const auto& fib = out.base_fibre;
  const std::size_t m = fib.size();
  std::map<Point, Elem> pos;
  for (std::size_t i = 0; i < m; ++i) pos[fib[i]] = static_cast<Elem>(i);

  std::vector<std::vector<Elem>> table(m, std::vector<Elem>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const Point s = local_translation_at(x, k, out.base, fib[i], fib[j]);
      auto it = pos.find(s);
      if (it == pos.end()) throw std::logic_error("structure_group: sum leaves the base fibre");
      table[i][j] = it->second;
    }
  const Group raw = Group::from_table(table, "A" + std::to_string(k));
  for (Elem a = 0; a < m; ++a)
    for (Elem b = 0; b < m; ++b)
      if (raw.mul(a, b) != raw.mul(b, a)) throw std::logic_error("structure_group: addition is not commutative");
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (corner_sum(x, k, out.base, fib[i], fib[j]) != fib[table[i][j]])
        throw std::logic_error("structure_group: corner completion disagrees with the transported sum");

  auto id = identify_abelian(raw);
  out.group = id.canonical;
  out.element_point.assign(m, 0);
  for (std::size_t i = 0; i < m; ++i) out.element_point[id.iso[i]] = fib[i];

  const std::size_t n = x.size();
  out.action.assign(m * n, 0);
  for (Point p = 0; p < n; ++p)
    for (Elem a = 0; a < m; ++a)
      out.action[a * n + p] = local_translation_at(x, k, out.base, p, out.element_point[a]);

  for (Point p = 0; p < n; ++p) {
    std::set<Point> orbit;
    for (Elem a = 0; a < m; ++a) {
      const Point q = out.act(a, p);
      if (!out.fibres.related(p, q)) throw std::logic_error("structure_group: action leaves a fibre");
      orbit.insert(q);
      for (Elem b = 0; b < m; ++b)
        if (out.act(b, q) != out.act(out.group.add(a, b), p))
          throw std::logic_error("structure_group: not a group action at point " + std::to_string(p));
    }
    if (orbit.size() != m) throw std::logic_error("structure_group: action is not free");
    if (orbit.size() != out.fibres.classes[out.fibres.class_of[p]].size())
      throw std::logic_error("structure_group: action is not transitive on a fibre");
  }
  return out;
}

// ---- bundle decomposition -------------------------------------------------------

BundleDecomposition decompose(const Cubespace& x, std::optional<int> k_opt, int n_max) {
  if (!k_opt && !x.step()) throw std::invalid_argument("decompose: step unknown; pass k");
  const int k = k_opt ? *k_opt : *x.step();
  if (x.step() && *x.step() > k) throw std::invalid_argument("decompose: k below the known step");
  BundleDecomposition d;
  d.k = k;
  d.n_max = n_max;
  for (int i = 0; i <= k; ++i) {
    BundleLevel level{factor(x, i), {}, std::nullopt};
    if (i > 0) {
      const auto& below = d.levels.back().factor.projection;
      level.down.assign(level.factor.relation.count(), 0);
      for (std::size_t c = 0; c < level.factor.relation.count(); ++c) {
        const auto& members = level.factor.relation.classes[c];
        level.down[c] = below[members.front()];
        for (Point p : members)
          if (below[p] != level.down[c]) throw std::logic_error("decompose: ~i does not refine ~(i-1)");
      }
      level.group = structure_group(level.factor.space, i);
    }
    d.levels.push_back(std::move(level));
  }

  auto fail = [&](bool& flag, std::string why) {
    flag = false;
    if (!d.witness) d.witness = std::move(why);
  };

  for (int i = 1; i <= k; ++i) {
    const auto& lv = level_at(d, i);
    const auto& g = *lv.group;
    const std::size_t pts = lv.factor.relation.count();
    // The fibres of ~(i-1) on X_i are the fibres of X_i -> X_{i-1}.
    std::map<std::size_t, Point> fibre_to_down;
    std::map<Point, std::size_t> down_to_fibre;
    for (Point c = 0; c < pts; ++c) {
      auto [a, ins_a] = fibre_to_down.emplace(g.fibres.class_of[c], lv.down[c]);
      auto [b, ins_b] = down_to_fibre.emplace(lv.down[c], g.fibres.class_of[c]);
      if (a->second != lv.down[c] || b->second != g.fibres.class_of[c]) {
        fail(d.factors_consistent, "level " + std::to_string(i) + ": fibres of ~" + std::to_string(i - 1) +
                                       " differ from the fibres of the projection at point " + std::to_string(c));
        break;
      }
    }

    const Cubespace group_space = degree_k_cubespace(g.group, i);
    for (int n = 1; n <= n_max && d.cube_correspondence; ++n) {
      std::map<CubeMap, std::vector<std::size_t>> by_base;
      const auto& cubes = lv.factor.space.cubes(n);
      for (std::size_t j = 0; j < cubes.size(); ++j) by_base[compose(lv.down, cubes[j])].push_back(j);
      const auto& offsets = group_space.cubes(n);
      for (const auto& [base, members] : by_base) {
        if (members.size() != offsets.size()) {
          fail(d.cube_correspondence, "level " + std::to_string(i) + ", n=" + std::to_string(n) + ": over base " +
                                          show(base) + " there are " + std::to_string(members.size()) +
                                          " cubes but " + std::to_string(offsets.size()) + " group cubes");
          break;
        }
        std::set<CubeMap> fibre;
        for (std::size_t j : members) fibre.insert(cubes[j]);
        const CubeMap& q = cubes[members.front()];
        for (const auto& off : offsets) {
          CubeMap moved(q.size());
          for (std::size_t v = 0; v < q.size(); ++v) moved[v] = g.act(off[v], q[v]);
          if (!fibre.count(moved)) {
            fail(d.cube_correspondence, "level " + std::to_string(i) + ", n=" + std::to_string(n) + ": " +
                                            show(q) + " + " + show(off) + " = " + show(moved) + " is not a cube");
            break;
          }
        }
        if (!d.cube_correspondence) break;
      }
    }
  }
  return d;
}

namespace {

struct RebuildData {
  // reference[i][n]: level-(i-1) cube -> a level-i cube over it
  std::vector<std::vector<std::map<CubeMap, CubeMap>>> reference;
  std::vector<std::vector<Point>> down;
  std::vector<StructureGroup> groups;  // A_i at index i - 1
};

bool rebuilt_member(const RebuildData& data, int i, const CubeMap& q) {
  if (i == 0) return true;
  const CubeMap base = compose(data.down[i], q);
  if (!rebuilt_member(data, i - 1, base)) return false;
  const auto& table = data.reference[i][dimension_of(q.size())];
  auto it = table.find(base);
  if (it == table.end()) return false;
  const StructureGroup& g = data.groups[i - 1];
  CubeMap diff(q.size());
  for (std::size_t v = 0; v < q.size(); ++v) {
    if (!g.fibres.related(it->second[v], q[v])) return false;
    diff[v] = g.difference(it->second[v], q[v]);
  }
  return is_degree_k_abelian_cube(g.group.group(), diff, i);
}

}  // namespace

Cubespace rebuild(const BundleDecomposition& d) {
  const int k = d.k;
  auto data = std::make_shared<RebuildData>();
  data->reference.resize(static_cast<std::size_t>(k) + 1);
  data->down.resize(static_cast<std::size_t>(k) + 1);
  for (int i = 1; i <= k; ++i) {
    const auto& lv = level_at(d, i);
    data->down[i] = lv.down;
    data->groups.push_back(*lv.group);
    data->reference[i].resize(static_cast<std::size_t>(d.n_max) + 1);
    for (int n = 1; n <= d.n_max; ++n)
      for (const auto& q : lv.factor.space.cubes(n)) data->reference[i][n].emplace(compose(lv.down, q), q);
  }
  const std::size_t points = level_at(d, k).factor.relation.count();
  Cubespace::Traits traits;
  traits.dim_cap = d.n_max;
  traits.step = k;
  traits.memoize = true;
  Cubespace::Oracle oracle = [data, k](std::span<const Point> q) {
    return rebuilt_member(*data, k, CubeMap(q.begin(), q.end()));
  };
  return Cubespace("rebuilt(" + level_at(d, k).factor.space.name() + ")", points, Provenance::Extension,
                   std::move(oracle), std::move(traits));
}

FibreTorsor fibre_as_degree_k_torsor(const Cubespace& x, const StructureGroup& g, std::size_t fibre, int n_max) {
  FibreTorsor out;
  out.points = g.fibres.classes.at(fibre);
  const Point b = out.points.front();
  for (Point p : out.points) out.coordinate.push_back(g.difference(b, p));
  const Cubespace sub = restrict_to(x, out.points);
  const Cubespace model = degree_k_cubespace(g.group, g.k);
  for (int n = 1; n <= n_max && out.cubes_match; ++n) {
    std::set<CubeMap> mine;
    for (const auto& q : sub.cubes(n)) mine.insert(compose(out.coordinate, q));
    std::set<CubeMap> theirs(model.cubes(n).begin(), model.cubes(n).end());
    if (mine == theirs) continue;
    out.cubes_match = false;
    for (const auto& q : mine)
      if (!theirs.count(q)) {
        out.witness = q;
        break;
      }
    if (!out.witness)
      for (const auto& q : theirs)
        if (!mine.count(q)) {
          out.witness = q;
          break;
        }
  }
  return out;
}

// ---- morphisms ------------------------------------------------------------------

BundleMorphismReport analyze_morphism(const BundleDecomposition& source, const BundleDecomposition& target,
                                      std::span<const Point> psi, int n_max) {
  if (source.k != target.k) throw std::invalid_argument("analyze_morphism: decompositions of different depth");
  const int k = source.k;
  const auto& top = level_at(source, k).factor;
  const auto& top_t = level_at(target, k).factor;
  if (psi.size() != top.projection.size()) throw std::invalid_argument("analyze_morphism: table size mismatch");
  BundleMorphismReport r;
  auto fail = [&](bool& flag, std::string why) {
    flag = false;
    if (!r.witness) r.witness = std::move(why);
  };
  for (Point p : psi)
    if (p >= top_t.projection.size()) throw std::invalid_argument("analyze_morphism: value outside the target");

  for (int n = 1; n <= n_max && r.morphism; ++n)
    for (const auto& q : top.space.cubes(n)) {
      CubeMap image(q.size());
      for (std::size_t v = 0; v < q.size(); ++v) image[v] = top_t.projection[psi[top.relation.classes[q[v]][0]]];
      if (!top_t.space.contains(image)) {
        fail(r.morphism, "cube " + show(q) + " maps to non-cube " + show(image));
        break;
      }
    }

  for (int i = 0; i <= k; ++i) {
    const auto& f = level_at(source, i).factor;
    const auto& ft = level_at(target, i).factor;
    std::vector<Point> induced(f.relation.count(), 0);
    for (std::size_t c = 0; c < f.relation.count(); ++c) {
      const auto& members = f.relation.classes[c];
      induced[c] = ft.projection[psi[members.front()]];
      for (Point p : members)
        if (ft.projection[psi[p]] != induced[c]) {
          fail(r.well_defined, "psi_" + std::to_string(i) + " is not well defined at points " +
                                   std::to_string(members.front()) + " and " + std::to_string(p));
          break;
        }
    }
    r.induced.push_back(std::move(induced));
  }

  for (int i = 1; i <= k && r.well_defined; ++i) {
    const auto& g = *level_at(source, i).group;
    const auto& gt = *level_at(target, i).group;
    const auto& psi_i = r.induced[i];
    std::vector<Elem> alpha(g.group.order(), 0);
    bool ok = true;
    for (Elem a = 0; a < g.group.order() && ok; ++a) {
      for (Point x = 0; x < psi_i.size() && ok; ++x) {
        const Point from = psi_i[x];
        const Point to = psi_i[g.act(a, x)];
        if (!gt.fibres.related(from, to)) {
          fail(r.homomorphisms, "alpha_" + std::to_string(i) + ": psi moves a fibre across fibres");
          ok = false;
          break;
        }
        const Elem value = gt.difference(from, to);
        if (x == 0) {
          alpha[a] = value;
        } else if (alpha[a] != value) {
          fail(r.homomorphisms, "alpha_" + std::to_string(i) + " depends on the point at element " +
                                    std::to_string(a));
          ok = false;
        }
      }
    }
    for (Elem a = 0; a < g.group.order() && ok; ++a)
      for (Elem b = 0; b < g.group.order() && ok; ++b)
        if (alpha[g.group.add(a, b)] != gt.group.add(alpha[a], alpha[b])) {
          fail(r.homomorphisms, "alpha_" + std::to_string(i) + " is not a homomorphism");
          ok = false;
        }
    std::set<Elem> image(alpha.begin(), alpha.end());
    if (image.size() != gt.group.order()) r.totally_surjective = false;
    r.structure.push_back(std::move(alpha));
  }
  if (!r.well_defined || !r.homomorphisms) r.totally_surjective = false;

  // Fibre-surjectivity: each ~i class maps onto the ~i class of its image.
  for (int i = 0; i < k && r.fibre_surjective; ++i) {
    const auto& rel = level_at(source, i).factor.relation;
    const auto& rel_t = level_at(target, i).factor.relation;
    for (const auto& cls : rel.classes) {
      std::set<Point> image;
      for (Point p : cls) image.insert(psi[p]);
      const auto& want = rel_t.classes[rel_t.class_of[psi[cls.front()]]];
      if (image != std::set<Point>(want.begin(), want.end())) {
        r.fibre_surjective = false;
        break;
      }
    }
  }
  return r;
}

CubeMap lift_cube_through(const BundleDecomposition& source, const BundleDecomposition& target,
                          const BundleMorphismReport& report, std::span<const Point> psi,
                          std::span<const Point> target_cube) {
  (void)psi;
  if (!report.bundle_morphism() || !report.totally_surjective)
    throw std::invalid_argument("lift_cube_through: the morphism is not totally surjective");
  const int k = source.k;
  const std::size_t size = target_cube.size();
  CubeMap q(size, 0);
  for (int i = 0; i < k; ++i) {
    const auto& up = level_at(source, i + 1);
    auto q2 = lift_through(up.factor.space, up.down, i, q);
    if (!q2) throw std::logic_error("lift_cube_through: no lift to level " + std::to_string(i + 1));
    const auto& gt = *level_at(target, i + 1).group;
    const auto& proj_t = level_at(target, i + 1).factor.projection;
    const auto& psi_up = report.induced[i + 1];
    CubeMap defect(size);
    for (std::size_t v = 0; v < size; ++v) defect[v] = gt.difference(proj_t[target_cube[v]], psi_up[(*q2)[v]]);
    const auto& g = *up.group;
    auto correction = lift_abelian_cube(g.group, i + 1, report.structure[i], defect);
    if (!correction) throw std::logic_error("lift_cube_through: defect has no preimage cube");
    for (std::size_t v = 0; v < size; ++v) q[v] = g.act(g.group.neg((*correction)[v]), (*q2)[v]);
    for (std::size_t v = 0; v < size; ++v)
      if (psi_up[q[v]] != proj_t[target_cube[v]])
        throw std::logic_error("lift_cube_through: corrected lift misses the target at level " +
                               std::to_string(i + 1));
  }
  const auto& top = level_at(source, k).factor;
  CubeMap out(size);
  for (std::size_t v = 0; v < size; ++v) out[v] = top.relation.classes[q[v]].front();
  return out;
}

PreimageBundleReport kernel_preimage_bundle(const BundleDecomposition& source, const BundleDecomposition& target,
                                            const BundleMorphismReport& report, Point t) {
  if (!report.bundle_morphism()) throw std::invalid_argument("kernel_preimage_bundle: not a bundle morphism");
  const int k = source.k;
  PreimageBundleReport r;
  auto fail = [&](std::string why) {
    r.sub_bundle = false;
    if (!r.witness) r.witness = std::move(why);
  };
  for (int i = 0; i <= k; ++i) {
    const Point ti = level_at(target, i).factor.projection.at(t);
    std::vector<Point> f;
    for (Point c = 0; c < report.induced[i].size(); ++c)
      if (report.induced[i][c] == ti) f.push_back(c);
    r.factors.push_back(std::move(f));
  }
  for (int i = 1; i <= k; ++i) {
    const auto& alpha = report.structure[i - 1];
    const auto& g = *level_at(source, i).group;
    std::vector<Elem> kernel;
    for (Elem a = 0; a < alpha.size(); ++a)
      if (alpha[a] == 0) kernel.push_back(a);
    const std::set<Point> here(r.factors[i].begin(), r.factors[i].end());
    for (Point x : r.factors[i]) {
      std::vector<Elem> stay;
      for (Elem a = 0; a < g.group.order(); ++a)
        if (here.count(g.act(a, x))) stay.push_back(a);
      if (stay != kernel) {
        fail("level " + std::to_string(i) + ": stabilizing set at " + std::to_string(x) + " is not ker alpha");
        break;
      }
    }
    std::set<Point> below;
    for (Point x : r.factors[i]) below.insert(level_at(source, i).down[x]);
    if (below != std::set<Point>(r.factors[i - 1].begin(), r.factors[i - 1].end()))
      fail("level " + std::to_string(i) + ": projection is not onto the factor below");
    r.kernels.push_back(std::move(kernel));
  }
  if (r.factors.back().empty()) fail("empty preimage");
  return r;
}

std::vector<CubeMap> restricted_morphisms(const Cubespace& x, const SimplicialPattern& p, const SimplicialPattern& s,
                                          std::span<const Point> f) {
  const std::size_t size = cube_size(p.dim);
  if (s.dim != p.dim) throw DimensionError("restricted_morphisms: patterns of different dimension");
  const auto order = p.points();
  for (VertexIndex v : s.points())
    if (!p.contains(v)) throw std::invalid_argument("restricted_morphisms: S is not inside P");
  if (f.size() != size) throw DimensionError("restricted_morphisms: f must have 2^dim entries");
  std::vector<CubeMap> out;
  CubeMap current(size, 0);
  auto face_ok = [&](VertexIndex u) {
    if (u == 0) return true;
    return x.contains(face_restriction(current, u, u));
  };
  std::function<void(std::size_t)> dfs = [&](std::size_t idx) {
    if (idx == order.size()) {
      out.push_back(current);
      return;
    }
    const VertexIndex u = order[idx];
    if (s.contains(u)) {
      current[u] = f[u];
      if (face_ok(u)) dfs(idx + 1);
      return;
    }
    for (Point value = 0; value < x.size(); ++value) {
      current[u] = value;
      if (face_ok(u)) dfs(idx + 1);
    }
    current[u] = 0;
  };
  dfs(0);
  return out;
}

RestrictedMorphismReport restricted_morphism_bundle(const BundleDecomposition& d, const SimplicialPattern& p,
                                                    const SimplicialPattern& s, std::span<const Point> f) {
  const int k = d.k;
  RestrictedMorphismReport r;
  auto fail = [&](std::string why) {
    r.sub_bundle = false;
    if (!r.witness) r.witness = std::move(why);
  };
  const auto pts = p.points();
  std::vector<std::set<CubeMap>> homs;
  for (int i = 0; i <= k; ++i) {
    const auto& lv = level_at(d, i);
    CubeMap fi(f.size(), 0);
    for (VertexIndex v : s.points()) fi[v] = lv.factor.projection[f[v]];
    auto list = restricted_morphisms(lv.factor.space, p, s, fi);
    r.factor_counts.push_back(list.size());
    homs.emplace_back(list.begin(), list.end());
  }
  r.count = r.factor_counts.back();

  for (int i = 1; i <= k; ++i) {
    const auto& lv = level_at(d, i);
    const auto& g = *lv.group;
    const CubeMap zero(f.size(), 0);
    const auto offsets = restricted_morphisms(degree_k_cubespace(g.group, i), p, s, zero);
    r.group_orders.push_back(offsets.size());
    std::map<CubeMap, std::size_t> fibre_size;
    for (const auto& phi : homs[i]) {
      CubeMap below(phi.size(), 0);
      for (VertexIndex v : pts) below[v] = lv.down[phi[v]];
      if (!homs[i - 1].count(below)) {
        fail("level " + std::to_string(i) + ": projection of " + show(phi) + " is not a restricted morphism");
        return r;
      }
      ++fibre_size[below];
    }
    if (fibre_size.size() != homs[i - 1].size()) {
      fail("level " + std::to_string(i) + ": projection is not onto");
      return r;
    }
    for (const auto& [below, count] : fibre_size)
      if (count != offsets.size()) {
        fail("level " + std::to_string(i) + ": fibre over " + show(below) + " has " + std::to_string(count) +
             " elements, the group " + std::to_string(offsets.size()));
        return r;
      }
    for (const auto& phi : homs[i])
      for (const auto& off : offsets) {
        CubeMap moved = phi;
        for (VertexIndex v : pts) moved[v] = g.act(off[v], phi[v]);
        if (!homs[i].count(moved)) {
          fail("level " + std::to_string(i) + ": " + show(phi) + " + " + show(off) + " leaves hom_f");
          return r;
        }
      }
  }
  return r;
}

MorphismCollectionReport morphism_collection_checks(const BundleDecomposition& source,
                                                    const BundleDecomposition& target,
                                                    const BundleMorphismReport& report, std::span<const Point> psi,
                                                    const SimplicialPattern& p, const SimplicialPattern& s) {
  MorphismCollectionReport r;
  const int k = source.k;
  const std::size_t size = cube_size(p.dim);
  const auto pts = p.points();
  const auto spts = s.points();
  const CubeMap zero(size, 0);
  auto note = [&](bool& flag, std::string why) {
    flag = false;
    if (!r.witness) r.witness = std::move(why);
  };

  // hom(P, X) as a sub-bundle of X^P: the S = empty case.
  const SimplicialPattern none{p.dim, {}};
  if (!restricted_morphism_bundle(source, p, none, zero).sub_bundle)
    note(r.hom_is_sub_bundle, "hom(P, X) is not a sub-bundle");

  const auto& top = level_at(source, k).factor.space;
  const auto& top_t = level_at(target, k).factor.space;
  const auto homs = restricted_morphisms(top, p, none, zero);
  const auto homs_t = restricted_morphisms(top_t, p, none, zero);
  std::map<CubeMap, std::vector<const CubeMap*>> preimages;
  for (const auto& phi : homs) {
    CubeMap image(size, 0);
    for (VertexIndex v : pts) image[v] = psi[phi[v]];
    preimages[image].push_back(&phi);
  }
  if (preimages.size() != homs_t.size()) note(r.totally_surjective_power, "psi^P is not onto hom(P, X')");

  std::size_t kernel_product = 1;
  for (int i = 1; i <= k; ++i) {
    const auto& g = *level_at(source, i).group;
    const auto& gt = *level_at(target, i).group;
    const auto& alpha = report.structure[i - 1];
    const auto group_homs = restricted_morphisms(degree_k_cubespace(g.group, i), p, none, zero);
    const auto group_homs_t = restricted_morphisms(degree_k_cubespace(gt.group, i), p, none, zero);
    std::set<CubeMap> image;
    std::size_t in_kernel = 0;
    for (const auto& a : group_homs) {
      CubeMap b(size, 0);
      bool kernel = true;
      for (VertexIndex v : pts) {
        b[v] = alpha[a[v]];
        kernel = kernel && b[v] == 0;
      }
      image.insert(b);
      if (kernel) ++in_kernel;
    }
    if (image.size() != group_homs_t.size())
      note(r.totally_surjective_power, "alpha_" + std::to_string(i) + "^P is not onto");
    kernel_product *= in_kernel;
  }

  for (const auto& [t, pre] : preimages) {
    if (pre.size() != kernel_product) {
      note(r.preimage_groups, "preimage of " + show(t) + " has " + std::to_string(pre.size()) + " elements, expected " +
                                  std::to_string(kernel_product));
      break;
    }
  }

  // (psi^P)^-1(t) restricted to S covers every morphism S -> X over t|S.
  const SimplicialPattern& sub = s;
  for (const auto& [t, pre] : preimages) {
    std::set<CubeMap> restricted;
    for (const CubeMap* phi : pre) {
      CubeMap r_s(size, 0);
      for (VertexIndex v : spts) r_s[v] = (*phi)[v];
      restricted.insert(r_s);
    }
    const auto on_s = restricted_morphisms(top, sub, none, zero);
    std::size_t over = 0;
    for (const auto& m : on_s) {
      bool match = true;
      for (VertexIndex v : spts) match = match && psi[m[v]] == t[v];
      if (match) ++over;
    }
    if (restricted.size() != over) {
      note(r.restriction_surjective, "restriction to S is not onto over " + show(t));
      break;
    }
  }
  return r;
}

}  // namespace nilspace
