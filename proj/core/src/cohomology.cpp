#include "nilspace/cohomology.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "nilspace/linear.hpp"

namespace nilspace {

namespace {

std::string show(std::span<const Point> q) {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < q.size(); ++i) out << (i ? "," : "") << q[i];
  out << ')';
  return out.str();
}

int sign_of(VertexIndex v) { return weight(v) % 2 ? -1 : 1; }

Elem signed_sum(const FiniteAbelianGroup& a, std::span<const Elem> values) {
  Elem sum = 0;
  for (std::size_t v = 0; v < values.size(); ++v) {
    const Elem term = sign_of(static_cast<VertexIndex>(v)) < 0 ? a.neg(values[v]) : values[v];
    sum = a.add(sum, term);
  }
  return sum;
}

CubeMap precompose(std::span<const Point> q, const CubeAutomorphism& theta) {
  CubeMap out(q.size());
  for (std::size_t v = 0; v < q.size(); ++v) out[v] = q[theta.apply(static_cast<VertexIndex>(v))];
  return out;
}

// The linear conditions defining cocycles among tables on a fixed cube list.
struct CocycleConstraints {
  // value[target] = sign * value[source]
  struct Symmetry {
    std::size_t source, target;
    int sign;
  };
  // value[whole] = value[first] + value[second]
  struct Additivity {
    std::size_t first, second, whole;
  };
  std::vector<Symmetry> symmetry;
  std::vector<Additivity> additivity;
  std::optional<std::string> closure_failure;  // q o theta outside the table
};

CocycleConstraints constraints_for(const Cocycle& shape) {
  CocycleConstraints out;
  if (shape.cubes.empty()) return out;
  const int n = dimension_of(shape.cubes.front().size());
  const auto autos = automorphism_group(n);
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (std::size_t i = 0; i < shape.cubes.size(); ++i)
    for (const auto& theta : autos) {
      const auto j = shape.index_of(precompose(shape.cubes[i], theta));
      if (!j) {
        if (!out.closure_failure) out.closure_failure = "q o theta is missing from the table for q = " + show(shape.cubes[i]);
        continue;
      }
      const int sign = theta.reflections() % 2 ? -1 : 1;
      if (*j == i && sign > 0) continue;
      if (seen.emplace(i, *j).second) out.symmetry.push_back({i, *j, sign});
    }
  const std::size_t half = shape.cubes.front().size() / 2;
  std::map<CubeMap, std::vector<std::size_t>> by_lower;
  for (std::size_t i = 0; i < shape.cubes.size(); ++i)
    by_lower[CubeMap(shape.cubes[i].begin(), shape.cubes[i].begin() + static_cast<std::ptrdiff_t>(half))].push_back(i);
  for (std::size_t i = 0; i < shape.cubes.size(); ++i) {
    const CubeMap upper(shape.cubes[i].begin() + static_cast<std::ptrdiff_t>(half), shape.cubes[i].end());
    auto it = by_lower.find(upper);
    if (it == by_lower.end()) continue;
    for (std::size_t j : it->second) {
      const auto whole = shape.index_of(concatenate<Point>(shape.cubes[i], shape.cubes[j]));
      if (whole) out.additivity.push_back({i, j, *whole});
    }
  }
  return out;
}

std::optional<std::string> first_violation(const CocycleConstraints& c, const FiniteAbelianGroup& a,
                                            std::span<const Elem> values, bool& symmetric, bool& additive) {
  std::optional<std::string> witness;
  for (const auto& s : c.symmetry) {
    const Elem want = s.sign < 0 ? a.neg(values[s.source]) : values[s.source];
    if (values[s.target] != want) {
      symmetric = false;
      witness = "symmetry fails between cubes " + std::to_string(s.source) + " and " + std::to_string(s.target);
      break;
    }
  }
  for (const auto& t : c.additivity) {
    if (values[t.whole] != a.add(values[t.first], values[t.second])) {
      additive = false;
      if (!witness)
        witness = "additivity fails for the concatenation of cubes " + std::to_string(t.first) + " and " +
                  std::to_string(t.second);
      break;
    }
  }
  return witness;
}

bool satisfies(const CocycleConstraints& c, const FiniteAbelianGroup& a, std::span<const Elem> values) {
  for (const auto& s : c.symmetry)
    if (values[s.target] != (s.sign < 0 ? a.neg(values[s.source]) : values[s.source])) return false;
  for (const auto& t : c.additivity)
    if (values[t.whole] != a.add(values[t.first], values[t.second])) return false;
  return true;
}

std::size_t checked_power(std::size_t base, std::size_t exp, std::size_t cap) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && out > cap / base) throw std::length_error("table count exceeds the cap");
    out *= base;
  }
  return out;
}

// Mixed-radix counter over A^N; false when it wraps.
bool advance(std::vector<Elem>& digits, std::size_t order) {
  for (auto& d : digits) {
    if (++d < order) return true;
    d = 0;
  }
  return false;
}

}  // namespace

// ---- cocycles ---------------------------------------------------------------------

std::optional<std::size_t> Cocycle::index_of(std::span<const Point> q) const {
  auto it = std::lower_bound(cubes.begin(), cubes.end(), q,
                             [](const CubeMap& a, std::span<const Point> b) { return colex_less(a, b); });
  if (it == cubes.end() || !std::equal(it->begin(), it->end(), q.begin(), q.end())) return std::nullopt;
  return static_cast<std::size_t>(it - cubes.begin());
}

Elem Cocycle::at(std::span<const Point> q) const {
  auto i = index_of(q);
  if (!i) throw std::invalid_argument("cocycle: " + show(q) + " is not in the table");
  return values[*i];
}

Cocycle zero_cocycle(const Cubespace& x, const FiniteAbelianGroup& a, int k) {
  if (k < 0) throw std::invalid_argument("zero_cocycle: degree must be nonnegative");
  if (std::pow(static_cast<double>(x.size()), static_cast<double>(cube_size(k + 1))) > kMaxCocycleTable)
    throw std::length_error("cocycle table for |X|^(2^(k+1)) beyond 10^6 entries");
  Cocycle rho;
  rho.degree = k;
  rho.group = a;
  rho.cubes = x.cubes(k + 1);
  rho.values.assign(rho.cubes.size(), 0);
  return rho;
}

Cocycle add(const Cocycle& a, const Cocycle& b) {
  if (a.cubes != b.cubes || !(a.group == b.group)) throw std::invalid_argument("add: cocycles on different tables");
  Cocycle out = a;
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = a.group.add(a.values[i], b.values[i]);
  return out;
}

Cocycle subtract(const Cocycle& a, const Cocycle& b) {
  if (a.cubes != b.cubes || !(a.group == b.group))
    throw std::invalid_argument("subtract: cocycles on different tables");
  Cocycle out = a;
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = a.group.sub(a.values[i], b.values[i]);
  return out;
}

CocycleCheck validate_cocycle(const Cocycle& rho) {
  CocycleCheck out;
  const auto c = constraints_for(rho);
  if (c.closure_failure) {
    out.symmetric = false;
    out.witness = c.closure_failure;
    return out;
  }
  out.witness = first_violation(c, rho.group, rho.values, out.symmetric, out.additive);
  return out;
}

Cocycle coboundary_of(const Cubespace& x, const FiniteAbelianGroup& a, std::span<const Elem> f, int k) {
  if (f.size() != x.size()) throw std::invalid_argument("coboundary_of: f must have one value per point");
  Cocycle rho = zero_cocycle(x, a, k);
  std::vector<Elem> values;
  for (std::size_t i = 0; i < rho.cubes.size(); ++i) {
    values.clear();
    for (Point p : rho.cubes[i]) values.push_back(f[p]);
    rho.values[i] = signed_sum(a, values);
  }
  return rho;
}

Cocycle boundary(const Cubespace& x, const Cocycle& rho) {
  Cocycle out = zero_cocycle(x, rho.group, rho.degree + 1);
  for (std::size_t i = 0; i < out.cubes.size(); ++i) {
    const auto& q = out.cubes[i];
    const std::size_t half = q.size() / 2;
    const std::span<const Point> lower(q.data(), half), upper(q.data() + half, half);
    out.values[i] = rho.group.sub(rho.at(lower), rho.at(upper));
  }
  return out;
}

std::optional<std::vector<Elem>> is_coboundary(const Cubespace& x, const Cocycle& rho) {
  std::vector<LinearEquation> equations;
  for (std::size_t i = 0; i < rho.cubes.size(); ++i) {
    std::map<int, long long> coef;
    for (std::size_t v = 0; v < rho.cubes[i].size(); ++v)
      coef[static_cast<int>(rho.cubes[i][v])] += sign_of(static_cast<VertexIndex>(v));
    LinearEquation eq;
    for (auto [var, c] : coef)
      if (c != 0) eq.terms.emplace_back(var, c);
    eq.constant = rho.values[i];
    equations.push_back(std::move(eq));
  }
  auto f = solve_abelian_linear_system(rho.group, static_cast<int>(x.size()), equations);
  if (!f) return std::nullopt;
  if (coboundary_of(x, rho.group, *f, rho.degree).values != rho.values)
    throw std::logic_error("is_coboundary: solution does not reproduce the table");
  return f;
}

bool cocycles_equivalent(const Cubespace& x, const Cocycle& a, const Cocycle& b) {
  return is_coboundary(x, subtract(a, b)).has_value();
}

ClassCount count_classes(const Cubespace& x, const FiniteAbelianGroup& a, int k) {
  const Cocycle shape = zero_cocycle(x, a, k);
  const auto c = constraints_for(shape);
  if (c.closure_failure) throw std::invalid_argument("count_classes: " + *c.closure_failure);
  const std::size_t cols = shape.cubes.size();
  std::set<std::vector<long long>> rows;
  for (const auto& s : c.symmetry) {
    std::vector<long long> row(cols, 0);
    row[s.target] += 1;
    row[s.source] -= s.sign;
    if (std::any_of(row.begin(), row.end(), [](long long e) { return e != 0; })) rows.insert(row);
  }
  for (const auto& t : c.additivity) {
    std::vector<long long> row(cols, 0);
    row[t.whole] += 1;
    row[t.first] -= 1;
    row[t.second] -= 1;
    if (std::any_of(row.begin(), row.end(), [](long long e) { return e != 0; })) rows.insert(row);
  }
  const IntMatrix constraint(rows.begin(), rows.end());
  ClassCount out;
  out.cocycles = kernel_size(a, constraint, cols);

  IntMatrix cobo(cols, std::vector<long long>(x.size(), 0));
  for (std::size_t i = 0; i < cols; ++i)
    for (std::size_t v = 0; v < shape.cubes[i].size(); ++v)
      cobo[i][shape.cubes[i][v]] += sign_of(static_cast<VertexIndex>(v));
  out.coboundaries = image_size(a, cobo);
  return out;
}

std::vector<Cocycle> enumerate_cocycles(const Cubespace& x, const FiniteAbelianGroup& a, int k,
                                        std::size_t max_tables) {
  const Cocycle shape = zero_cocycle(x, a, k);
  checked_power(a.order(), shape.cubes.size(), max_tables);
  const auto c = constraints_for(shape);
  std::vector<Cocycle> out;
  std::vector<Elem> digits(shape.cubes.size(), 0);
  do {
    if (satisfies(c, a, digits)) {
      Cocycle rho = shape;
      rho.values = digits;
      out.push_back(std::move(rho));
    }
  } while (advance(digits, a.order()));
  std::sort(out.begin(), out.end(), [](const Cocycle& p, const Cocycle& q) { return p.values < q.values; });
  return out;
}

ClassCount count_classes_exhaustive(const Cubespace& x, const FiniteAbelianGroup& a, int k, std::size_t max_tables) {
  const Cocycle shape = zero_cocycle(x, a, k);
  checked_power(a.order(), shape.cubes.size(), max_tables);
  const auto c = constraints_for(shape);
  ClassCount out;
  std::vector<Elem> digits(shape.cubes.size(), 0);
  do {
    if (satisfies(c, a, digits)) ++out.cocycles;
  } while (advance(digits, a.order()));
  std::set<std::vector<Elem>> boundaries;
  std::vector<Elem> f(x.size(), 0);
  checked_power(a.order(), x.size(), max_tables);
  do {
    boundaries.insert(coboundary_of(x, a, f, k).values);
  } while (advance(f, a.order()));
  out.coboundaries = boundaries.size();
  return out;
}

// ---- extensions -------------------------------------------------------------------

Elem Extension::difference(Point from, Point to) const {
  for (Elem a = 0; a < group.order(); ++a)
    if (act(a, from) == to) return a;
  throw std::invalid_argument("difference: points " + std::to_string(from) + " and " + std::to_string(to) +
                              " lie in different fibres");
}

Extension build_extension(const Cubespace& x, const Cocycle& rho) {
  const int k = rho.degree + 1;  // cube dimension carrying rho
  const std::size_t nx = x.size();
  const FiniteAbelianGroup a = rho.group;
  const std::size_t points = nx * a.order();
  auto table = std::make_shared<const Cocycle>(rho);

  // rho(pi o f) = -sum_v (-1)^|v| z_v on a k-dimensional map.
  auto k_face_ok = [table, nx, a](std::span<const Point> f) {
    CubeMap base(f.size());
    std::vector<Elem> z(f.size());
    for (std::size_t v = 0; v < f.size(); ++v) {
      base[v] = static_cast<Point>(f[v] % nx);
      z[v] = static_cast<Elem>(f[v] / nx);
    }
    auto i = table->index_of(base);
    if (!i) return false;
    return table->values[*i] == a.neg(signed_sum(a, z));
  };

  Cubespace::Oracle oracle = [x, nx, k, k_face_ok](std::span<const Point> f) {
    const int n = dimension_of(f.size());
    CubeMap base(f.size());
    for (std::size_t v = 0; v < f.size(); ++v) base[v] = static_cast<Point>(f[v] % nx);
    if (!x.contains(base)) return false;
    if (n < k) return true;
    if (n == k) return k_face_ok(f);
    const VertexIndex all = full_vertex(n);
    for (const auto& face : enumerate_faces(k, n)) {
      const VertexIndex free = all & ~face.fixed_mask;
      if (!k_face_ok(face_restriction(f, face.fixed_values | free, free))) return false;
    }
    return true;
  };

  Cubespace::Traits traits;
  traits.memoize = true;
  traits.dim_cap = std::min(x.max_queryable_dim(), std::max(k + 2, 5));
  if (x.step()) traits.step = std::max(*x.step(), rho.degree);
  Cubespace total("M(" + x.name() + ", " + a.str() + ", degree " + std::to_string(rho.degree) + ")", points,
                  Provenance::Extension, std::move(oracle), std::move(traits));

  Extension e{total, x, {}, a, {}, rho.degree, rho};
  e.projection.resize(points);
  e.action.resize(points * a.order());
  for (Point p = 0; p < points; ++p) {
    e.projection[p] = static_cast<Point>(p % nx);
    const Elem z = static_cast<Elem>(p / nx);
    for (Elem b = 0; b < a.order(); ++b)
      e.action[b * points + p] = static_cast<Point>(p % nx + nx * a.add(z, b));
  }
  return e;
}

ExtensionReport validate_extension(const Extension& e, int n_max) {
  ExtensionReport r;
  r.n_max = n_max;
  auto fail = [&](bool& flag, std::string why) {
    flag = false;
    if (!r.witness) r.witness = std::move(why);
  };
  const std::size_t ny = e.total.size();
  const std::size_t order = e.group.order();
  std::vector<std::size_t> fibre_size(e.base.size(), 0);
  for (Point y = 0; y < ny; ++y) ++fibre_size[e.projection[y]];
  for (Point y = 0; y < ny && r.free_action; ++y) {
    std::set<Point> orbit;
    for (Elem a = 0; a < order; ++a) {
      const Point moved = e.act(a, y);
      if (e.projection[moved] != e.projection[y]) {
        fail(r.free_action, "the action moves " + std::to_string(y) + " off its fibre");
        break;
      }
      for (Elem b = 0; b < order; ++b)
        if (e.act(b, moved) != e.act(e.group.add(a, b), y)) {
          fail(r.free_action, "not a group action at " + std::to_string(y));
          break;
        }
      orbit.insert(moved);
    }
    if (r.free_action && (orbit.size() != order || fibre_size[e.projection[y]] != order))
      fail(r.free_action, "the action is not free and transitive on the fibre of " + std::to_string(y));
  }
  if (!r.free_action) return r;

  const Cubespace offsets_space = degree_k_cubespace(e.group, e.degree);
  for (int n = 1; n <= n_max && r.ok(); ++n) {
    std::map<CubeMap, std::vector<std::size_t>> by_base;
    const auto& cubes = e.total.cubes(n);
    for (std::size_t j = 0; j < cubes.size(); ++j) {
      CubeMap base(cubes[j].size());
      for (std::size_t v = 0; v < base.size(); ++v) base[v] = e.projection[cubes[j][v]];
      by_base[base].push_back(j);
    }
    const auto& base_cubes = e.base.cubes(n);
    for (const auto& [base, members] : by_base)
      if (!e.base.contains(base)) {
        fail(r.surjective, "n=" + std::to_string(n) + ": a cube projects to the non-cube " + show(base));
        break;
      }
    if (r.surjective && by_base.size() != base_cubes.size())
      fail(r.surjective, "n=" + std::to_string(n) + ": only " + std::to_string(by_base.size()) + " of " +
                             std::to_string(base_cubes.size()) + " base cubes are projections");
    if (!r.surjective) break;
    const auto& offsets = offsets_space.cubes(n);
    for (const auto& [base, members] : by_base) {
      if (members.size() != offsets.size()) {
        fail(r.correspondence, "n=" + std::to_string(n) + ": " + std::to_string(members.size()) + " cubes over " +
                                   show(base) + ", expected " + std::to_string(offsets.size()));
        break;
      }
      std::set<CubeMap> fibre;
      for (std::size_t j : members) fibre.insert(cubes[j]);
      const CubeMap& q = cubes[members.front()];
      for (const auto& off : offsets) {
        CubeMap moved(q.size());
        for (std::size_t v = 0; v < q.size(); ++v) moved[v] = e.act(off[v], q[v]);
        if (!fibre.count(moved)) {
          fail(r.correspondence, "n=" + std::to_string(n) + ": " + show(q) + " + " + show(off) + " is not a cube");
          break;
        }
      }
      if (!r.correspondence) break;
    }
  }
  return r;
}

std::vector<Point> default_section(const Extension& e) {
  std::vector<Point> s(e.base.size(), static_cast<Point>(e.total.size()));
  for (Point y = 0; y < e.total.size(); ++y) s[e.projection[y]] = std::min(s[e.projection[y]], y);
  for (Point v : s)
    if (v == e.total.size()) throw std::invalid_argument("default_section: empty fibre");
  return s;
}

Cocycle cross_section_cocycle(const Extension& e, std::span<const Point> section) {
  if (section.size() != e.base.size()) throw std::invalid_argument("cross section: wrong size");
  for (Point x = 0; x < section.size(); ++x)
    if (e.projection.at(section[x]) != x) throw std::invalid_argument("cross section: pi o s is not the identity");
  std::vector<Elem> f(e.total.size());
  for (Point y = 0; y < e.total.size(); ++y) f[y] = e.difference(y, section[e.projection[y]]);
  Cocycle rho = zero_cocycle(e.base, e.group, e.degree);
  std::vector<char> assigned(rho.cubes.size(), 0);
  std::vector<Elem> values;
  for (const auto& lift : e.total.cubes(e.degree + 1)) {
    CubeMap base(lift.size());
    values.clear();
    for (std::size_t v = 0; v < lift.size(); ++v) {
      base[v] = e.projection[lift[v]];
      values.push_back(f[lift[v]]);
    }
    const Elem value = signed_sum(e.group, values);
    auto i = rho.index_of(base);
    if (!i) throw std::logic_error("cross section: a cube projects to a non-cube");
    if (assigned[*i] && rho.values[*i] != value)
      throw std::logic_error("cross section: two lifts of " + show(base) + " give different values");
    rho.values[*i] = value;
    assigned[*i] = 1;
  }
  if (std::find(assigned.begin(), assigned.end(), 0) != assigned.end())
    throw std::logic_error("cross section: some base cube has no lift");
  return rho;
}

ExtensionIsomorphism extension_iso(const Extension& e, std::span<const Point> section, int n_max) {
  const Cocycle rho = cross_section_cocycle(e, section);
  ExtensionIsomorphism out{{}, build_extension(e.base, rho)};
  out.table.resize(e.total.size());
  for (Point y = 0; y < e.total.size(); ++y) {
    const Point x = e.projection[y];
    out.table[y] = extension_point(out.model, x, e.difference(section[x], y));
  }
  std::set<Point> image(out.table.begin(), out.table.end());
  out.bijective = image.size() == e.total.size() && out.model.total.size() == e.total.size();
  for (Point y = 0; y < e.total.size(); ++y)
    for (Elem a = 0; a < e.group.order(); ++a)
      if (out.table[e.act(a, y)] != out.model.act(a, out.table[y])) out.preserves_action = false;
  for (int n = 1; n <= n_max && out.cubes_match; ++n) {
    std::set<CubeMap> moved;
    for (const auto& q : e.total.cubes(n)) {
      CubeMap m(q.size());
      for (std::size_t v = 0; v < q.size(); ++v) m[v] = out.table[q[v]];
      moved.insert(std::move(m));
    }
    const auto& want = out.model.total.cubes(n);
    out.cubes_match = moved == std::set<CubeMap>(want.begin(), want.end());
  }
  return out;
}

std::optional<std::vector<Point>> find_cube_preserving_section(const Extension& e, int n_max) {
  const std::size_t nx = e.base.size();
  std::vector<std::vector<Point>> fibres(nx);
  for (Point y = 0; y < e.total.size(); ++y) fibres[e.projection[y]].push_back(y);
  // Base cubes grouped by their largest point, checked once that point is assigned.
  std::vector<std::vector<const CubeMap*>> by_max(nx);
  for (int n = 1; n <= n_max; ++n)
    for (const auto& q : e.base.cubes(n)) by_max[*std::max_element(q.begin(), q.end())].push_back(&q);
  std::vector<Point> s(nx, 0);
  std::function<bool(Point)> dfs = [&](Point x) -> bool {
    if (x == nx) return true;
    for (Point y : fibres[x]) {
      s[x] = y;
      bool ok = true;
      for (const CubeMap* q : by_max[x]) {
        CubeMap lifted(q->size());
        for (std::size_t v = 0; v < q->size(); ++v) lifted[v] = s[(*q)[v]];
        if (!e.total.contains(lifted)) {
          ok = false;
          break;
        }
      }
      if (ok && dfs(x + 1)) return true;
    }
    return false;
  };
  if (!dfs(0)) return std::nullopt;
  return s;
}

// ---- tricube sum ------------------------------------------------------------------

Elem tricube_sum(const Cubespace& x, int k, std::span<const Point> t, const Cocycle& xi) {
  if (t.size() != tricube_size(k)) throw DimensionError("tricube_sum: t must be a table on T_k");
  if (!is_tricube_morphism(x, k, t)) throw std::invalid_argument("tricube_sum: t is not a tricube morphism");
  const FiniteAbelianGroup& a = xi.group;
  Elem sum = 0;
  const std::size_t size = cube_size(k);
  for (VertexIndex v = 0; v < size; ++v) {
    CubeMap piece(size);
    for (VertexIndex w = 0; w < size; ++w) piece[w] = t[tricube_embed(Vertex(k, v), Vertex(k, w)).index()];
    const Elem value = xi.at(piece);
    sum = a.add(sum, sign_of(v) < 0 ? a.neg(value) : value);
  }
  return sum;
}

Elem tricube_cube_condition(const Extension& m, std::span<const Point> t, std::span<const Point> f) {
  if (!m.cocycle) throw std::invalid_argument("tricube_cube_condition: extension without a cocycle");
  const int k = m.cocycle->degree + 1;
  const std::size_t size = cube_size(k);
  if (f.size() != size) throw DimensionError("tricube_cube_condition: f must be a map on {0,1}^k");
  const std::size_t nx = m.base.size();
  for (VertexIndex v = 0; v < size; ++v)
    if (t[outer_point(Vertex(k, v)).index()] != f[v] % nx)
      throw std::invalid_argument("tricube_cube_condition: outer points of t differ from pi o f");
  const FiniteAbelianGroup& a = m.group;
  std::vector<Elem> z(size);
  for (VertexIndex v = 0; v < size; ++v) z[v] = static_cast<Elem>(f[v] / nx);
  return a.add(tricube_sum(m.base, k, t, *m.cocycle), signed_sum(a, z));
}

}  // namespace nilspace
