#include "nilspace/translations.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

#include "nilspace/hk_cubes.hpp"

namespace nilspace {

namespace {

PointMap compose_maps(const PointMap& outer, const PointMap& inner) {
  PointMap out(inner.size());
  for (std::size_t p = 0; p < inner.size(); ++p) out[p] = outer[inner[p]];
  return out;
}

PointMap inverse_map(const PointMap& a) {
  PointMap out(a.size());
  for (std::size_t p = 0; p < a.size(); ++p) out[a[p]] = static_cast<Point>(p);
  return out;
}

PointMap identity_map(std::size_t n) {
  PointMap out(n);
  for (std::size_t p = 0; p < n; ++p) out[p] = static_cast<Point>(p);
  return out;
}

void require_bijection(std::span<const Point> alpha, std::size_t n) {
  if (alpha.size() != n) throw std::invalid_argument("translation: table size differs from |X|");
  std::vector<char> hit(n, 0);
  for (Point p : alpha) {
    if (p >= n || hit[p]) throw std::invalid_argument("translation: map is not a bijection");
    hit[p] = 1;
  }
}

int step_of(const Cubespace& x) {
  if (!x.step()) throw std::invalid_argument("translations need a space with known step");
  return *x.step();
}

bool arrow_ok(const Cubespace& x, std::span<const Point> q, std::span<const Point> alpha, int height) {
  CubeMap image(q.size());
  for (std::size_t v = 0; v < q.size(); ++v) image[v] = alpha[q[v]];
  return x.contains(arrow<Point>(q, image, height));
}

std::vector<PointMap> brute_force_translations(const Cubespace& x, int height, std::size_t cap) {
  const std::size_t n = x.size();
  if (n > cap) throw std::length_error("brute-force translation search: |X| = " + std::to_string(n) +
                                       " exceeds the cap " + std::to_string(cap));
  const int k = step_of(x);
  std::vector<std::vector<const CubeMap*>> by_max(n);
  for (const auto& q : x.cubes(k + 1)) by_max[*std::max_element(q.begin(), q.end())].push_back(&q);
  std::vector<PointMap> out;
  PointMap alpha(n, 0);
  std::vector<char> used(n, 0);
  std::function<void(Point)> dfs = [&](Point p) {
    if (p == n) {
      out.push_back(alpha);
      return;
    }
    for (Point y = 0; y < n; ++y) {
      if (used[y]) continue;
      alpha[p] = y;
      // The 0-cube test <p, alpha(p)>_height first: it is cheap and prunes most.
      CubeMap zero(cube_size(height), p);
      zero.back() = y;
      if (!x.contains(zero)) continue;
      bool ok = true;
      for (const CubeMap* q : by_max[p])
        if (!arrow_ok(x, *q, alpha, height)) {
          ok = false;
          break;
        }
      if (!ok) continue;
      used[y] = 1;
      dfs(p + 1);
      used[y] = 0;
    }
  };
  dfs(0);
  return out;
}

std::vector<PointMap> closure(std::size_t n, const std::vector<PointMap>& seeds) {
  std::set<PointMap> seen{identity_map(n)};
  std::vector<PointMap> frontier{identity_map(n)};
  for (const auto& s : seeds) require_bijection(s, n);
  while (!frontier.empty()) {
    std::vector<PointMap> next;
    for (const auto& a : frontier)
      for (const auto& s : seeds) {
        PointMap c = compose_maps(s, a);
        if (seen.insert(c).second) next.push_back(std::move(c));
      }
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

}  // namespace

TranslationCertificate certify_translation(const Cubespace& x, std::span<const Point> alpha, int height,
                                           std::optional<int> n) {
  require_bijection(alpha, x.size());
  if (height < 0) throw std::invalid_argument("translation height must be nonnegative");
  TranslationCertificate c;
  c.height = height;
  c.dims_checked = n ? *n : step_of(x) + 1;
  c.ok = true;
  for (const auto& q : x.cubes(c.dims_checked))
    if (!arrow_ok(x, q, alpha, height)) {
      c.ok = false;
      c.witness = q;
      break;
    }
  return c;
}

bool is_translation(const Cubespace& x, std::span<const Point> alpha, int height) {
  return certify_translation(x, alpha, height).ok;
}

CubeMap face_action(std::span<const Point> alpha, const Face& face, std::span<const Point> q) {
  if (q.size() != cube_size(face.n)) throw DimensionError("face_action: cube and face dimensions differ");
  CubeMap out(q.begin(), q.end());
  for (std::size_t v = 0; v < q.size(); ++v)
    if (face.contains(static_cast<VertexIndex>(v))) out[v] = alpha[q[v]];
  return out;
}

bool is_translation_by_faces(const Cubespace& x, std::span<const Point> alpha, int height, int n_max) {
  require_bijection(alpha, x.size());
  for (int n = std::max(height, 1); n <= n_max; ++n) {
    const auto faces = enumerate_faces(n - height, n);
    for (const auto& q : x.cubes(n))
      for (const auto& f : faces)
        if (!x.contains(face_action(alpha, f, q))) return false;
  }
  return true;
}

std::vector<PointMap> translation_group(const Cubespace& x, int height, const TranslationSearch& search) {
  if (height < 1) throw std::invalid_argument("translation_group: height must be at least 1");
  if (search.mode == TranslationSearch::Mode::BruteForce) return brute_force_translations(x, height, search.brute_cap);
  std::vector<PointMap> out;
  for (auto& a : closure(x.size(), search.seeds))
    if (is_translation(x, a, height)) out.push_back(std::move(a));
  return out;
}

TranslationTower translation_tower(const Cubespace& x, const TranslationSearch& search) {
  TranslationTower t;
  t.k = step_of(x);
  const std::size_t n = x.size();
  auto fail = [&](bool& flag, std::string why) {
    flag = false;
    if (!t.witness) t.witness = std::move(why);
  };
  if (search.mode == TranslationSearch::Mode::BruteForce) {
    for (int i = 1; i <= t.k + 1; ++i) t.levels.push_back(translation_group(x, i, search));
  } else {
    // One closure, filtered per height.
    const auto all = closure(n, search.seeds);
    for (int i = 1; i <= t.k + 1; ++i) {
      std::vector<PointMap> level;
      for (const auto& a : all)
        if (is_translation(x, a, i)) level.push_back(a);
      t.levels.push_back(std::move(level));
    }
  }
  std::vector<std::set<PointMap>> sets;
  for (const auto& level : t.levels) sets.emplace_back(level.begin(), level.end());
  for (int i = 1; i <= t.k + 1; ++i) {
    const auto& s = sets[i - 1];
    for (const auto& a : s) {
      if (!s.count(inverse_map(a))) fail(t.closed, "Tran_" + std::to_string(i) + " lacks an inverse");
      for (const auto& b : s)
        if (!s.count(compose_maps(a, b))) {
          fail(t.closed, "Tran_" + std::to_string(i) + " is not closed under composition");
          break;
        }
      if (!t.closed) break;
    }
    if (i > 1)
      for (const auto& a : s)
        if (!sets[i - 2].count(a)) fail(t.nested, "Tran_" + std::to_string(i) + " is not inside the level below");
  }
  const PointMap id = identity_map(n);
  if (sets.back() != std::set<PointMap>{id}) fail(t.top_trivial, "Tran_(k+1) is not trivial");
  for (int i = 1; i <= t.k + 1 && t.commutators; ++i)
    for (int j = i; j <= t.k + 1 && t.commutators; ++j) {
      const auto& target = sets[static_cast<std::size_t>(std::min(i + j, t.k + 1)) - 1];
      for (const auto& a : t.levels[i - 1]) {
        for (const auto& b : t.levels[j - 1]) {
          const PointMap c = compose_maps(compose_maps(inverse_map(a), inverse_map(b)), compose_maps(a, b));
          const bool inside = i + j > t.k + 1 ? c == id : target.count(c) > 0;
          if (!inside) {
            fail(t.commutators, "[Tran_" + std::to_string(i) + ", Tran_" + std::to_string(j) +
                                    "] leaves Tran_" + std::to_string(i + j));
            break;
          }
        }
        if (!t.commutators) break;
      }
    }
  return t;
}

std::vector<PointMap> structure_group_shifts(const StructureGroup& g) {
  std::vector<PointMap> out;
  for (Elem a = 0; a < g.group.order(); ++a) {
    PointMap m(g.points());
    for (Point p = 0; p < g.points(); ++p) m[p] = g.act(a, p);
    out.push_back(std::move(m));
  }
  std::sort(out.begin(), out.end());
  return out;
}

TranslationCubeVerdict translation_cube_test(const Cubespace& x, std::span<const Point> q,
                                             const TranslationTower& tower) {
  TranslationCubeVerdict out;
  std::vector<PointMap> elems = tower.level(1);
  std::sort(elems.begin(), elems.end());  // the identity is the smallest table
  std::map<PointMap, Elem> index;
  for (Elem i = 0; i < elems.size(); ++i) index[elems[i]] = i;
  std::vector<std::vector<Elem>> table(elems.size(), std::vector<Elem>(elems.size()));
  for (Elem a = 0; a < elems.size(); ++a)
    for (Elem b = 0; b < elems.size(); ++b) {
      auto it = index.find(compose_maps(elems[a], elems[b]));
      if (it == index.end()) throw std::invalid_argument("translation_cube_test: Tran_1 is not closed");
      table[a][b] = it->second;
    }
  const Group g = Group::from_table(table, "Tran");
  std::vector<Subgroup> chain;
  for (int i = 0; i <= tower.k + 1; ++i) {
    std::vector<Elem> members;
    for (const auto& a : tower.level(std::max(i, 1))) members.push_back(index.at(a));
    std::sort(members.begin(), members.end());
    chain.emplace_back(g, members);
  }
  const FilteredGroup fg(g, chain);

  std::set<Point> orbit;
  for (const auto& a : elems) orbit.insert(a[0]);
  out.transitive = orbit.size() == x.size();

  const int n = dimension_of(q.size());
  for (const auto& c : enumerate_cubes(fg, n)) {
    bool match = true;
    for (std::size_t v = 0; v < q.size() && match; ++v) match = elems[c[v]][q[0]] == q[v];
    if (match) {
      out.reachable = true;
      break;
    }
  }
  return out;
}

TranslationBundle translation_bundle(const Cubespace& x, std::span<const Point> alpha, int height, int n_max) {
  const int k = step_of(x);
  if (height < 1 || height >= k)
    throw std::invalid_argument("translation_bundle: need 1 <= height < k, got height " + std::to_string(height) +
                                " with k = " + std::to_string(k));
  FactorSpace base = factor(x, k - 1);
  const auto cert = certify_translation(base.space, alpha, height, k);
  if (!cert.ok) throw std::invalid_argument("translation_bundle: alpha is not a translation of F_{k-1}(X)");

  const std::size_t nx = x.size();
  std::vector<Point> pairs;
  for (Point x1 = 0; x1 < nx; ++x1)
    for (Point x0 = 0; x0 < nx; ++x0)
      if (alpha[base.projection[x0]] == base.projection[x1]) pairs.push_back(static_cast<Point>(x0 + nx * x1));
  std::sort(pairs.begin(), pairs.end());
  std::map<Point, Point> pair_index;
  for (Point i = 0; i < pairs.size(); ++i) pair_index[pairs[i]] = i;

  Cubespace total = restrict_to(arrow_space(x, height), pairs).with_name("T(" + x.name() + ")").with_step(k);
  FactorSpace reduced = factor(total, k - 1);
  StructureGroup top = structure_group(x, k);

  const std::size_t nt = reduced.relation.count();
  std::vector<Point> gamma(nt);
  for (std::size_t c = 0; c < nt; ++c) {
    const auto& members = reduced.relation.classes[c];
    gamma[c] = base.projection[pairs[members.front()] % nx];
    for (Point m : members)
      if (base.projection[pairs[m] % nx] != gamma[c]) throw std::logic_error("translation_bundle: gamma is not well defined");
  }
  const std::size_t order = top.group.order();
  std::vector<Point> action(order * nt);
  for (Elem a = 0; a < order; ++a)
    for (std::size_t c = 0; c < nt; ++c) {
      std::optional<Point> value;
      for (Point m : reduced.relation.classes[c]) {
        const Point x0 = pairs[m] % nx, x1 = static_cast<Point>(pairs[m] / nx);
        const Point moved = pair_index.at(static_cast<Point>(top.act(a, x0) + nx * x1));
        const Point cls = static_cast<Point>(reduced.relation.class_of[moved]);
        if (value && *value != cls) throw std::logic_error("translation_bundle: A_k action on T* is not well defined");
        value = cls;
      }
      action[a * nt + c] = *value;
    }

  Extension ext{reduced.space, base.space, gamma, top.group, action, k - height, std::nullopt};
  ExtensionReport report = validate_extension(ext, n_max);
  return TranslationBundle{k,           height,          PointMap(alpha.begin(), alpha.end()),
                           std::move(base), std::move(pairs), std::move(total),
                           std::move(reduced), std::move(gamma), std::move(ext),
                           std::move(top), std::move(report)};
}

LiftResult try_lift_translation(const Cubespace& x, const TranslationBundle& b) {
  LiftResult out;
  const auto& base = b.base.space;
  const auto& tstar = b.reduced.space;
  const std::size_t nb = base.size();
  std::vector<std::vector<Point>> candidates(nb);
  for (Point c = 0; c < b.gamma.size(); ++c) candidates[b.gamma[c]].push_back(c);
  std::vector<std::vector<const CubeMap*>> by_max(nb);
  for (int n = 1; n <= b.k; ++n)
    for (const auto& q : base.cubes(n)) by_max[*std::max_element(q.begin(), q.end())].push_back(&q);

  std::vector<Point> m(nb, 0);
  std::function<bool(Point)> dfs = [&](Point p) -> bool {
    if (p == nb) {
      ++out.sections_tried;
      return true;
    }
    for (Point c : candidates[p]) {
      m[p] = c;
      bool ok = true;
      for (const CubeMap* q : by_max[p]) {
        CubeMap image(q->size());
        for (std::size_t v = 0; v < q->size(); ++v) image[v] = m[(*q)[v]];
        if (!tstar.contains(image)) {
          ok = false;
          break;
        }
      }
      if (ok && dfs(p + 1)) return true;
    }
    return false;
  };
  if (!dfs(0)) {
    out.message = "no section found";
    return out;
  }
  out.section = m;

  const std::size_t nx = x.size();
  PointMap beta(nx);
  for (Point p = 0; p < nx; ++p) {
    const Point cls = m[b.base.projection[p]];
    const Point rep = b.pairs[b.reduced.relation.classes[cls].front()];
    const Point x0 = rep % nx, x1 = static_cast<Point>(rep / nx);
    beta[p] = local_translation_at(x, b.k, x0, x1, p);
    // The class of (x0, x1) is the graph of this local translation.
    const auto it = std::lower_bound(b.pairs.begin(), b.pairs.end(), static_cast<Point>(p + nx * beta[p]));
    if (it == b.pairs.end() || *it != p + nx * beta[p] ||
        b.reduced.relation.class_of[static_cast<std::size_t>(it - b.pairs.begin())] != cls)
      throw std::logic_error("try_lift_translation: local translation leaves the class at point " + std::to_string(p));
  }
  try {
    require_bijection(beta, nx);
  } catch (const std::invalid_argument&) {
    out.message = "section found but lift failed certification";
    return out;
  }
  out.certificate = certify_translation(x, beta, b.height);
  out.beta = std::move(beta);
  out.message = out.certificate->ok ? "lift found" : "section found but lift failed certification";
  return out;
}

}  // namespace nilspace
