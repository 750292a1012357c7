#include "nilspace/cubespace.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <set>
#include <shared_mutex>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace nilspace {

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::ExplicitTables: return "explicit-tables";
    case Provenance::GroupGenerated: return "group-generated";
    case Provenance::Coset: return "coset";
    case Provenance::Product: return "product";
    case Provenance::Arrow: return "arrow";
    case Provenance::Partial: return "partial";
    case Provenance::Quotient: return "quotient";
    case Provenance::Extension: return "extension";
    case Provenance::Subspace: return "subspace";
  }
  return "unknown";
}

bool colex_less(std::span<const Point> a, std::span<const Point> b) {
  return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
}

namespace {

struct MapHash {
  std::size_t operator()(const CubeMap& q) const noexcept {
    std::size_t h = 1469598103934665603ULL;
    for (Point p : q) {
      h ^= p;
      h *= 1099511628211ULL;
    }
    return h;
  }
};

// Scatter the low bits of t onto the set bits of mask.
VertexIndex deposit(VertexIndex t, VertexIndex mask) {
  VertexIndex out = 0;
  for (VertexIndex bit = 1; mask; bit <<= 1) {
    const VertexIndex low = mask & (~mask + 1);
    if (t & bit) out |= low;
    mask &= mask - 1;
  }
  return out;
}

constexpr double kScanLimit = 4194304.0;  // 2^22 maps

CubeMap restrict_below(std::span<const Point> q, VertexIndex u, VertexIndex s) { return face_restriction(q, u, s); }

}  // namespace

CubeMap face_restriction(std::span<const Point> q, VertexIndex top, VertexIndex free) {
  const VertexIndex base = top & ~free;
  CubeMap out(cube_size(weight(free)));
  for (VertexIndex t = 0; t < out.size(); ++t) out[t] = q[base | deposit(t, free)];
  return out;
}

struct Cubespace::Impl {
  std::string name;
  std::size_t points = 0;
  Provenance provenance = Provenance::ExplicitTables;
  Oracle oracle;
  Traits traits;

  mutable std::shared_mutex memo_mutex;
  mutable std::map<int, std::unordered_map<CubeMap, bool, MapHash>> memo;
  mutable std::mutex enum_mutex;
  mutable std::map<int, std::shared_ptr<const std::vector<CubeMap>>> enumerated;

  Impl(std::string n, std::size_t p, Provenance pr, Oracle o, Traits t)
      : name(std::move(n)), points(p), provenance(pr), oracle(std::move(o)), traits(std::move(t)) {}

  bool faces_ok(std::span<const Point> q, VertexIndex u, const Cubespace& self) const {
    // Every face whose colex-largest vertex is u, of dimension >= 1.
    VertexIndex s = u;
    while (s) {
      if (!self.contains(restrict_below(q, u, s))) return false;
      s = (s - 1) & u;
    }
    return true;
  }

  std::vector<CubeMap> search(int n, bool skip_last, const Cubespace& self) const {
    const std::size_t size = cube_size(n);
    const std::size_t assigned = skip_last ? size - 1 : size;
    std::vector<CubeMap> out;
    CubeMap cur(size, 0);
    const double total = std::pow(static_cast<double>(points), static_cast<double>(assigned));
    if (total <= kScanLimit) {
      // Exact scan: no reliance on face closure.
      std::vector<Point> digit(assigned, 0);
      while (true) {
        std::copy(digit.begin(), digit.end(), cur.begin());
        bool ok;
        if (skip_last) {
          ok = true;
          for (int i = 1; i <= n && ok; ++i) {
            const VertexIndex top = full_vertex(n) & ~(VertexIndex{1} << (i - 1));
            ok = self.contains(restrict_below(cur, top, top));
          }
        } else {
          ok = self.contains(cur);
        }
        if (ok) out.emplace_back(cur.begin(), cur.begin() + static_cast<std::ptrdiff_t>(assigned));
        std::size_t i = 0;
        while (i < assigned && ++digit[i] == points) digit[i++] = 0;
        if (i == assigned) break;
      }
      return out;
    }
    // Colex depth-first search; faces topped by the new vertex prune.
    std::function<void(VertexIndex)> dfs = [&](VertexIndex u) {
      if (u == assigned) {
        out.emplace_back(cur.begin(), cur.begin() + static_cast<std::ptrdiff_t>(assigned));
        return;
      }
      for (Point x = 0; x < points; ++x) {
        cur[u] = x;
        if (faces_ok(cur, u, self)) dfs(u + 1);
      }
    };
    dfs(0);
    std::sort(out.begin(), out.end(), [](const CubeMap& a, const CubeMap& b) { return colex_less(a, b); });
    return out;
  }
};

Cubespace::Cubespace(std::string name, std::size_t points, Provenance provenance, Oracle oracle, Traits traits) {
  if (points == 0) throw std::invalid_argument("cubespaces must be nonempty");
  if (!oracle) throw std::invalid_argument("cubespace needs a membership oracle");
  if (traits.dim_cap < 0 || traits.dim_cap > kMaxCubeDim) throw DimensionError("cubespace dim_cap out of range");
  impl_ = std::make_shared<Impl>(std::move(name), points, provenance, std::move(oracle), std::move(traits));
}

const std::string& Cubespace::name() const { return impl_->name; }
std::size_t Cubespace::size() const { return impl_->points; }
Provenance Cubespace::provenance() const { return impl_->provenance; }
int Cubespace::dim_cap() const { return impl_->traits.dim_cap; }
std::optional<int> Cubespace::step() const { return impl_->traits.step; }
bool Cubespace::has_generator() const { return static_cast<bool>(impl_->traits.generator); }

int Cubespace::max_queryable_dim() const {
  const auto& t = impl_->traits;
  if (t.step && *t.step + 1 <= t.dim_cap) return kMaxCubeDim;
  return t.dim_cap;
}

bool Cubespace::contains(std::span<const Point> q) const {
  const int n = dimension_of(q.size());
  for (Point p : q)
    if (p >= impl_->points) throw std::out_of_range("cube value outside the point set");
  if (n == 0) return true;
  const auto& t = impl_->traits;
  if (n > t.dim_cap) {
    if (!t.step || *t.step + 1 > t.dim_cap)
      throw DimensionError(impl_->name + ": dimension " + std::to_string(n) + " exceeds dim_cap " +
                           std::to_string(t.dim_cap));
    for (const Face& f : enumerate_faces(*t.step + 1, n))
      if (!contains(f.face_map().pull_back(q))) return false;
    return true;
  }
  if (!t.memoize) return impl_->oracle(q);
  CubeMap key(q.begin(), q.end());
  {
    std::shared_lock lock(impl_->memo_mutex);
    if (auto level = impl_->memo.find(n); level != impl_->memo.end())
      if (auto it = level->second.find(key); it != level->second.end()) return it->second;
  }
  const bool verdict = impl_->oracle(q);
  std::unique_lock lock(impl_->memo_mutex);
  impl_->memo[n].emplace(std::move(key), verdict);
  return verdict;
}

const std::vector<CubeMap>& Cubespace::cubes(int n) const {
  if (n < 0 || n > max_queryable_dim()) throw DimensionError("cubes: dimension out of range");
  {
    std::lock_guard lock(impl_->enum_mutex);
    if (auto it = impl_->enumerated.find(n); it != impl_->enumerated.end()) return *it->second;
  }
  std::vector<CubeMap> list;
  if (n == 0) {
    for (Point p = 0; p < impl_->points; ++p) list.push_back({p});
  } else if (impl_->traits.generator && n <= impl_->traits.dim_cap) {
    list = impl_->traits.generator(n);
    std::sort(list.begin(), list.end(), [](const CubeMap& a, const CubeMap& b) { return colex_less(a, b); });
    list.erase(std::unique(list.begin(), list.end()), list.end());
  } else {
    list = impl_->search(n, false, *this);
  }
  auto shared = std::make_shared<const std::vector<CubeMap>>(std::move(list));
  std::lock_guard lock(impl_->enum_mutex);
  auto [it, inserted] = impl_->enumerated.emplace(n, std::move(shared));
  return *it->second;
}

std::vector<CubeMap> Cubespace::corners(int n) const {
  if (n < 1) throw DimensionError("corners of dimension 0 are not defined");
  return impl_->search(n, true, *this);
}

std::optional<Point> Cubespace::complete(std::span<const Point> corner) const {
  if (impl_->traits.completer) return impl_->traits.completer(corner);
  const int n = dimension_of(corner.size() + 1);
  CubeMap q(corner.begin(), corner.end());
  q.push_back(0);
  for (Point x = 0; x < impl_->points; ++x) {
    q.back() = x;
    if (n <= max_queryable_dim() && contains(q)) return x;
  }
  return std::nullopt;
}

Cubespace Cubespace::with_name(std::string name) const {
  Traits t = impl_->traits;
  return Cubespace(std::move(name), impl_->points, impl_->provenance, impl_->oracle, std::move(t));
}

Cubespace Cubespace::with_step(int k) const {
  Traits t = impl_->traits;
  t.step = k;
  return Cubespace(impl_->name, impl_->points, impl_->provenance, impl_->oracle, std::move(t));
}

Cubespace Cubespace::with_dim_cap(int cap) const {
  Traits t = impl_->traits;
  t.dim_cap = cap;
  return Cubespace(impl_->name, impl_->points, impl_->provenance, impl_->oracle, std::move(t));
}

// ---- axiom checks ------------------------------------------------------------

bool AxiomReport::corner_completion() const {
  return std::all_of(completion.begin(), completion.end(), [](const CompletionVerdict& c) { return c.complete; });
}

std::string AxiomReport::verdict() const {
  std::ostringstream os;
  if (is_nilspace()) {
    os << "nilspace";
    if (step) os << " of step " << *step;
  } else {
    os << "not a nilspace (";
    bool first = true;
    auto item = [&](const char* s) {
      os << (first ? "" : ", ") << s;
      first = false;
    };
    if (!composition) item("composition fails");
    if (!ergodic) item("not ergodic");
    if (!corner_completion()) item("corner completion fails");
    os << ")";
  }
  os << " up to dimension " << n_max;
  return os.str();
}

AxiomReport check_axioms(const Cubespace& x, int n_max) {
  if (n_max < 1 || n_max > x.max_queryable_dim()) throw DimensionError("check_axioms: n_max exceeds dim_cap");
  AxiomReport r;
  r.n_max = n_max;

  for (int n = 0; n <= n_max && r.composition; ++n) {
    const auto& cubes = x.cubes(n);
    for (int m = 1; m <= n_max && r.composition; ++m) {
      for (const CubeMorphism& phi : enumerate_morphisms(m, n)) {
        const auto table = phi.table();
        CubeMap image(table.size());
        for (const CubeMap& q : cubes) {
          for (std::size_t v = 0; v < table.size(); ++v) image[v] = q[table[v]];
          if (!x.contains(image)) {
            r.composition = false;
            r.composition_witness = std::make_pair(phi, q);
            break;
          }
        }
        if (!r.composition) break;
      }
    }
  }

  for (Point a = 0; a < x.size() && r.ergodic; ++a)
    for (Point b = 0; b < x.size(); ++b) {
      const Point pair[2] = {a, b};
      if (!x.contains(pair)) {
        r.ergodic = false;
        r.ergodicity_witness = std::make_pair(a, b);
        break;
      }
    }

  for (int n = 1; n <= n_max; ++n) {
    CompletionVerdict c;
    c.n = n;
    CubeMap q(cube_size(n));
    for (const CubeMap& corner : x.corners(n)) {
      std::copy(corner.begin(), corner.end(), q.begin());
      std::size_t count = 0;
      for (Point p = 0; p < x.size() && count < 2; ++p) {
        q.back() = p;
        if (x.contains(q)) ++count;
      }
      if (count == 0 && c.complete) {
        c.complete = false;
        c.incomplete_corner = corner;
      }
      if (count > 1 && c.unique) {
        c.unique = false;
        c.ambiguous_corner = corner;
      }
      if (count == 0) c.unique = false;
    }
    r.completion.push_back(std::move(c));
  }

  for (int k = 0; k < n_max; ++k) {
    bool ok = true;
    for (int n = k + 1; n <= n_max; ++n) ok = ok && r.completion[static_cast<std::size_t>(n - 1)].unique;
    if (ok) {
      r.step = k;
      break;
    }
  }
  return r;
}

std::string ParallelepipedReport::verdict() const {
  std::ostringstream os;
  os << (holds() ? "parallelepiped structure" : "not a parallelepiped structure") << " up to dimension " << n_max;
  if (witness) os << ": " << *witness;
  return os.str();
}

namespace {

std::string describe(const CubeMap& q) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < q.size(); ++i) os << (i ? "," : "") << q[i];
  os << "]";
  return os.str();
}

}  // namespace

ParallelepipedReport check_parallelepiped_axioms(const Cubespace& x, int n_max) {
  if (n_max < 1 || n_max > x.max_queryable_dim()) throw DimensionError("check_parallelepiped_axioms: n_max exceeds dim_cap");
  ParallelepipedReport r;
  r.n_max = n_max;
  auto fail = [&](bool& flag, const std::string& what) {
    if (flag && !r.witness) r.witness = what;
    flag = false;
  };

  for (Point a = 0; a < x.size() && r.p1_full; ++a)
    for (Point b = 0; b < x.size(); ++b) {
      const Point pair[2] = {a, b};
      if (!x.contains(pair)) {
        fail(r.p1_full, "P_1 misses the pair (" + std::to_string(a) + "," + std::to_string(b) + ")");
        break;
      }
    }

  for (int m = 2; m <= n_max; ++m) {
    const auto& cubes = x.cubes(m);
    const auto faces = enumerate_faces(m - 1, m);
    const auto autos = automorphism_group(m);
    for (const CubeMap& p : cubes) {
      for (const Face& f : faces)
        if (r.face_restrictions && !x.contains(f.face_map().pull_back(std::span<const Point>(p))))
          fail(r.face_restrictions, "face restriction of " + describe(p) + " leaves P_" + std::to_string(m - 1));
      for (const CubeAutomorphism& th : autos)
        if (r.symmetries && !x.contains(th.morphism().pull_back(std::span<const Point>(p))))
          fail(r.symmetries, "symmetry image of " + describe(p) + " leaves P_" + std::to_string(m));
    }

    // The 1-arrow relation on P_{m-1}.
    const auto& lower = x.cubes(m - 1);
    std::map<CubeMap, std::size_t> id;
    for (std::size_t i = 0; i < lower.size(); ++i) id.emplace(lower[i], i);
    std::vector<std::set<std::size_t>> rel(lower.size());
    const std::size_t half = cube_size(m - 1);
    for (const CubeMap& p : cubes) {
      const CubeMap p0(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(half));
      const CubeMap p1(p.begin() + static_cast<std::ptrdiff_t>(half), p.end());
      auto i0 = id.find(p0), i1 = id.find(p1);
      if (i0 != id.end() && i1 != id.end()) rel[i0->second].insert(i1->second);
    }
    for (std::size_t a = 0; a < rel.size() && r.equivalence; ++a) {
      if (!rel[a].count(a)) {
        fail(r.equivalence, "not reflexive at " + describe(lower[a]));
        break;
      }
      for (std::size_t b : rel[a]) {
        if (!rel[b].count(a)) {
          fail(r.equivalence, "not symmetric: " + describe(lower[a]) + " ~ " + describe(lower[b]));
          break;
        }
        for (std::size_t c : rel[b])
          if (!rel[a].count(c)) {
            fail(r.equivalence, "not transitive: " + describe(lower[a]) + " ~ " + describe(lower[b]) + " ~ " +
                                    describe(lower[c]));
            break;
          }
        if (!r.equivalence) break;
      }
    }

    CubeMap q(cube_size(m));
    for (const CubeMap& corner : x.corners(m)) {
      std::copy(corner.begin(), corner.end(), q.begin());
      bool found = false;
      for (Point p = 0; p < x.size() && !found; ++p) {
        q.back() = p;
        found = x.contains(q);
      }
      if (!found) {
        fail(r.closing, "corner " + describe(corner) + " cannot be closed");
        break;
      }
    }
  }
  return r;
}

void check_corner_premise(const Cubespace& x, std::span<const Point> corner) {
  const int n = dimension_of(corner.size() + 1);
  if (n < 1) throw DimensionError("corners of dimension 0 are not defined");
  CubeMap q(corner.begin(), corner.end());
  q.push_back(0);
  for (int i = 1; i <= n; ++i) {
    const VertexIndex top = full_vertex(n) & ~(VertexIndex{1} << (i - 1));
    if (!x.contains(restrict_below(q, top, top)))
      throw std::invalid_argument("corner face v[" + std::to_string(i) + "]=0 is not a cube");
  }
}

std::vector<Point> complete_corner_bruteforce(const Cubespace& x, std::span<const Point> corner) {
  check_corner_premise(x, corner);
  CubeMap q(corner.begin(), corner.end());
  q.push_back(0);
  std::vector<Point> out;
  for (Point p = 0; p < x.size(); ++p) {
    q.back() = p;
    if (x.contains(q)) out.push_back(p);
  }
  return out;
}

}  // namespace nilspace
