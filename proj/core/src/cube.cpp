#include "nilspace/cube.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace nilspace {

int dimension_of(std::size_t values) {
  for (int n = 0; n <= kMaxCubeDim; ++n)
    if (cube_size(n) == values) return n;
  throw DimensionError("map size " + std::to_string(values) + " is not 2^n for n <= 16");
}

Vertex::Vertex(int n, VertexIndex bits) : n_(n), bits_(bits) {
  if (n < 0 || n > kMaxCubeDim) throw DimensionError("vertex dimension out of range");
  if (n < 32 && (bits >> n) != 0) throw DimensionError("vertex bits exceed dimension");
}

Vertex Vertex::from_bits(std::span<const int> bits) {
  VertexIndex v = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != 0 && bits[i] != 1) throw std::invalid_argument("vertex coordinates must be 0 or 1");
    v |= static_cast<VertexIndex>(bits[i]) << i;
  }
  return Vertex(static_cast<int>(bits.size()), v);
}

std::vector<int> Vertex::support() const {
  std::vector<int> s;
  for (int i = 1; i <= n_; ++i)
    if ((*this)[i]) s.push_back(i);
  return s;
}

std::vector<int> Vertex::bits() const {
  std::vector<int> b(static_cast<std::size_t>(n_));
  for (int i = 1; i <= n_; ++i) b[static_cast<std::size_t>(i - 1)] = (*this)[i];
  return b;
}

std::string Vertex::str() const {
  std::string s = "(";
  for (int i = 1; i <= n_; ++i) {
    if (i > 1) s += ',';
    s += static_cast<char>('0' + (*this)[i]);
  }
  return s + ")";
}

int CoordRule::eval(VertexIndex v) const {
  switch (kind) {
    case Kind::Zero: return 0;
    case Kind::One: return 1;
    case Kind::Id: return static_cast<int>((v >> (source - 1)) & 1U);
    case Kind::Refl: return 1 - static_cast<int>((v >> (source - 1)) & 1U);
  }
  return 0;
}

CubeMorphism::CubeMorphism(int m, std::vector<CoordRule> coords) : m_(m), coords_(std::move(coords)) {
  if (m < 0 || m > kMaxCubeDim || coords_.size() > static_cast<std::size_t>(kMaxCubeDim))
    throw DimensionError("morphism dimension out of range");
  for (const auto& c : coords_) {
    const bool varying = c.kind == CoordRule::Kind::Id || c.kind == CoordRule::Kind::Refl;
    if (varying && (c.source < 1 || c.source > m)) throw DimensionError("morphism source coordinate out of range");
  }
}

CubeMorphism CubeMorphism::identity(int n) {
  std::vector<CoordRule> c;
  for (int i = 1; i <= n; ++i) c.push_back(CoordRule::id(i));
  return CubeMorphism(n, std::move(c));
}

CubeMorphism CubeMorphism::constant(int m, VertexIndex target, int n) {
  std::vector<CoordRule> c;
  for (int j = 0; j < n; ++j) c.push_back(((target >> j) & 1U) ? CoordRule::one() : CoordRule::zero());
  return CubeMorphism(m, std::move(c));
}

std::optional<CubeMorphism> CubeMorphism::from_table(int m, int n, std::span<const VertexIndex> table) {
  if (table.size() != cube_size(m)) throw DimensionError("morphism table has wrong size");
  std::vector<CoordRule> coords;
  for (int j = 0; j < n; ++j) {
    auto bit = [&](VertexIndex v) { return static_cast<int>((table[v] >> j) & 1U); };
    std::optional<CoordRule> found;
    std::vector<CoordRule> candidates{CoordRule::zero(), CoordRule::one()};
    for (int i = 1; i <= m; ++i) {
      candidates.push_back(CoordRule::id(i));
      candidates.push_back(CoordRule::refl(i));
    }
    for (const auto& c : candidates) {
      bool ok = true;
      for (VertexIndex v = 0; v < table.size() && ok; ++v) ok = c.eval(v) == bit(v);
      if (ok) {
        found = c;
        break;
      }
    }
    if (!found) return std::nullopt;
    coords.push_back(*found);
  }
  for (auto t : table)
    if (n < 32 && (t >> n) != 0) return std::nullopt;
  return CubeMorphism(m, std::move(coords));
}

VertexIndex CubeMorphism::apply(VertexIndex v) const {
  VertexIndex out = 0;
  for (std::size_t j = 0; j < coords_.size(); ++j) out |= static_cast<VertexIndex>(coords_[j].eval(v)) << j;
  return out;
}

Vertex CubeMorphism::apply(const Vertex& v) const {
  if (v.dim() != m_) throw DimensionError("apply_morphism: vertex has dimension " + std::to_string(v.dim()) +
                                          ", morphism expects " + std::to_string(m_));
  return Vertex(target_dim(), apply(v.index()));
}

std::vector<VertexIndex> CubeMorphism::table() const {
  std::vector<VertexIndex> t(cube_size(m_));
  for (VertexIndex v = 0; v < t.size(); ++v) t[v] = apply(v);
  return t;
}

CubeMorphism CubeMorphism::compose(const CubeMorphism& inner) const {
  if (inner.target_dim() != m_) throw DimensionError("compose_morphisms: dimensions do not chain");
  std::vector<CoordRule> out;
  for (const auto& c : coords_) {
    if (c.kind == CoordRule::Kind::Zero || c.kind == CoordRule::Kind::One) {
      out.push_back(c);
      continue;
    }
    CoordRule r = inner.coords_[static_cast<std::size_t>(c.source - 1)];
    if (c.kind == CoordRule::Kind::Refl) {
      switch (r.kind) {
        case CoordRule::Kind::Zero: r.kind = CoordRule::Kind::One; break;
        case CoordRule::Kind::One: r.kind = CoordRule::Kind::Zero; break;
        case CoordRule::Kind::Id: r.kind = CoordRule::Kind::Refl; break;
        case CoordRule::Kind::Refl: r.kind = CoordRule::Kind::Id; break;
      }
    }
    out.push_back(r);
  }
  return CubeMorphism(inner.m_, std::move(out));
}

std::vector<std::vector<int>> CubeMorphism::j_sets() const {
  std::vector<std::vector<int>> J(static_cast<std::size_t>(m_));
  for (std::size_t j = 0; j < coords_.size(); ++j) {
    const auto& c = coords_[j];
    if (c.kind == CoordRule::Kind::Id || c.kind == CoordRule::Kind::Refl)
      J[static_cast<std::size_t>(c.source - 1)].push_back(static_cast<int>(j) + 1);
  }
  return J;
}

std::vector<int> CubeMorphism::varying_coordinates() const {
  std::vector<int> out;
  for (std::size_t j = 0; j < coords_.size(); ++j) {
    const auto k = coords_[j].kind;
    if (k == CoordRule::Kind::Id || k == CoordRule::Kind::Refl) out.push_back(static_cast<int>(j) + 1);
  }
  return out;
}

bool CubeMorphism::injective() const {
  for (const auto& J : j_sets())
    if (J.empty()) return false;
  return true;
}

bool CubeMorphism::is_face_map() const {
  for (const auto& J : j_sets())
    if (J.size() != 1) return false;
  return true;
}

std::string CubeMorphism::str() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t j = 0; j < coords_.size(); ++j) {
    if (j) os << ',';
    const auto& c = coords_[j];
    switch (c.kind) {
      case CoordRule::Kind::Zero: os << '0'; break;
      case CoordRule::Kind::One: os << '1'; break;
      case CoordRule::Kind::Id: os << 'v' << c.source; break;
      case CoordRule::Kind::Refl: os << "1-v" << c.source; break;
    }
  }
  os << ')';
  return os.str();
}

CubeMorphism Face::face_map() const {
  std::vector<CoordRule> c;
  int next = 1;
  for (int j = 0; j < n; ++j) {
    if ((fixed_mask >> j) & 1U)
      c.push_back(((fixed_values >> j) & 1U) ? CoordRule::one() : CoordRule::zero());
    else
      c.push_back(CoordRule::id(next++));
  }
  return CubeMorphism(dim(), std::move(c));
}

std::vector<Face> enumerate_faces(int m, int n) {
  if (m < 0 || m > n || n > kMaxCubeDim) throw DimensionError("enumerate_faces: need 0 <= m <= n");
  std::vector<Face> faces;
  const VertexIndex all = full_vertex(n);
  for (VertexIndex free = 0; free <= all; ++free) {
    if (weight(free) != m) continue;
    const VertexIndex fixed = all & ~free;
    // Enumerate assignments to the fixed coordinates as submasks of fixed.
    VertexIndex s = 0;
    while (true) {
      faces.push_back(Face{n, fixed, s});
      if (s == fixed) break;
      s = (s - fixed) & fixed;
    }
  }
  return faces;
}

std::vector<CubeMorphism> enumerate_face_maps(int m, int n) {
  std::vector<CubeMorphism> out;
  for (const auto& f : enumerate_faces(m, n)) out.push_back(f.face_map());
  return out;
}

std::vector<CubeMorphism> enumerate_morphisms(int m, int n) {
  std::vector<CoordRule> options{CoordRule::zero(), CoordRule::one()};
  for (int i = 1; i <= m; ++i) {
    options.push_back(CoordRule::id(i));
    options.push_back(CoordRule::refl(i));
  }
  std::vector<CubeMorphism> out;
  std::vector<std::size_t> pick(static_cast<std::size_t>(n), 0);
  while (true) {
    std::vector<CoordRule> c;
    for (auto p : pick) c.push_back(options[p]);
    out.emplace_back(m, std::move(c));
    std::size_t j = 0;
    while (j < pick.size() && ++pick[j] == options.size()) pick[j++] = 0;
    if (j == pick.size()) break;
  }
  return out;
}

CubeAutomorphism::CubeAutomorphism(std::vector<int> perm, VertexIndex flips) : perm_(std::move(perm)), flips_(flips) {
  std::vector<int> sorted = perm_;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i)
    if (sorted[i] != static_cast<int>(i) + 1) throw std::invalid_argument("automorphism: not a permutation");
  if (dim() < 32 && (flips_ >> dim()) != 0) throw DimensionError("automorphism flips exceed dimension");
}

VertexIndex CubeAutomorphism::apply(VertexIndex v) const {
  VertexIndex out = 0;
  for (std::size_t j = 0; j < perm_.size(); ++j)
    out |= (((v >> (perm_[j] - 1)) & 1U) ^ ((flips_ >> j) & 1U)) << j;
  return out;
}

CubeMorphism CubeAutomorphism::morphism() const {
  std::vector<CoordRule> c;
  for (std::size_t j = 0; j < perm_.size(); ++j)
    c.push_back(((flips_ >> j) & 1U) ? CoordRule::refl(perm_[j]) : CoordRule::id(perm_[j]));
  return CubeMorphism(dim(), std::move(c));
}

CubeAutomorphism CubeAutomorphism::compose(const CubeAutomorphism& inner) const {
  if (inner.dim() != dim()) throw DimensionError("automorphism dimensions differ");
  std::vector<int> p(perm_.size());
  VertexIndex f = 0;
  for (std::size_t j = 0; j < perm_.size(); ++j) {
    const auto k = static_cast<std::size_t>(perm_[j] - 1);
    p[j] = inner.perm_[k];
    f |= (((flips_ >> j) & 1U) ^ ((inner.flips_ >> k) & 1U)) << j;
  }
  return CubeAutomorphism(std::move(p), f);
}

CubeAutomorphism CubeAutomorphism::inverse() const {
  std::vector<int> p(perm_.size());
  VertexIndex f = 0;
  for (std::size_t j = 0; j < perm_.size(); ++j) {
    const auto i = static_cast<std::size_t>(perm_[j] - 1);
    p[i] = static_cast<int>(j) + 1;
    f |= ((flips_ >> j) & 1U) << i;
  }
  return CubeAutomorphism(std::move(p), f);
}

std::vector<CubeAutomorphism> automorphism_group(int n) {
  if (n < 0 || n > 8) throw DimensionError("automorphism_group: n must be in [0, 8]");
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 1);
  std::vector<CubeAutomorphism> out;
  do {
    for (VertexIndex f = 0; f < cube_size(n); ++f) out.emplace_back(perm, f);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

std::vector<VertexIndex> gray_order(int n) {
  if (n < 0 || n > kMaxCubeDim) throw DimensionError("gray_order: dimension out of range");
  std::vector<VertexIndex> out(cube_size(n));
  for (VertexIndex j = 0; j < out.size(); ++j) out[j] = j ^ (j >> 1);
  return out;
}

namespace {

CubeMorphism with_rules(const CubeMorphism& phi, const std::vector<std::pair<int, CoordRule>>& changes) {
  auto c = phi.coords();
  for (const auto& [j, r] : changes) c[static_cast<std::size_t>(j - 1)] = r;
  return CubeMorphism(phi.source_dim(), std::move(c));
}

// Both identity and reflection copies of the last coordinate are present.
std::vector<CubeMorphism> split_mixed(const CubeMorphism& phi, const std::vector<int>& J) {
  std::vector<std::pair<int, CoordRule>> drop_id, drop_refl;
  for (int j : J) {
    const auto k = phi.coords()[static_cast<std::size_t>(j - 1)].kind;
    (k == CoordRule::Kind::Id ? drop_id : drop_refl).emplace_back(j, CoordRule::zero());
  }
  return {with_rules(phi, drop_id), with_rules(phi, drop_refl)};
}

}  // namespace

InjectiveDecomposition decompose_injective_morphism(const CubeMorphism& phi) {
  const int m = phi.source_dim();
  if (!phi.injective()) throw std::invalid_argument("decompose_injective_morphism: morphism is not injective");
  const auto J = phi.j_sets();
  int i = 0;
  for (int k = 1; k <= m; ++k)
    if (J[static_cast<std::size_t>(k - 1)].size() >= 2) {
      i = k;
      break;
    }
  if (i == 0) throw std::invalid_argument("decompose_injective_morphism: |J| must exceed m (got a face map)");

  std::vector<int> perm(static_cast<std::size_t>(m));
  std::iota(perm.begin(), perm.end(), 1);
  std::swap(perm[static_cast<std::size_t>(i - 1)], perm[static_cast<std::size_t>(m - 1)]);
  CubeAutomorphism theta(perm, 0);
  const CubeMorphism psi = phi.compose(theta.morphism());
  const auto Jm = psi.j_sets()[static_cast<std::size_t>(m - 1)];

  bool has_id = false, has_refl = false;
  for (int j : Jm) {
    const auto k = psi.coords()[static_cast<std::size_t>(j - 1)].kind;
    has_id |= k == CoordRule::Kind::Id;
    has_refl |= k == CoordRule::Kind::Refl;
  }

  InjectiveDecomposition out{theta, {}};
  if (has_id && has_refl) {
    out.parts = split_mixed(psi, Jm);
    return out;
  }
  // Only one orientation occurs: pin one copy, flip the others, pin again.
  const int j = Jm.front();
  const bool id = has_id;
  std::vector<std::pair<int, CoordRule>> flip;
  for (int k : Jm)
    if (k != j) flip.emplace_back(k, id ? CoordRule::refl(m) : CoordRule::id(m));
  const CubeMorphism first = with_rules(psi, {{j, id ? CoordRule::zero() : CoordRule::one()}});
  const CubeMorphism middle = with_rules(psi, flip);
  const CubeMorphism last = with_rules(psi, {{j, id ? CoordRule::one() : CoordRule::zero()}});
  out.parts.push_back(first);
  for (auto& p : split_mixed(middle, Jm)) out.parts.push_back(std::move(p));
  out.parts.push_back(last);
  return out;
}

TricubePoint::TricubePoint(std::vector<int> coords) : coords_(std::move(coords)) {
  for (int c : coords_)
    if (c < -1 || c > 1) throw std::invalid_argument("tricube coordinates must lie in {-1,0,1}");
}

TricubePoint TricubePoint::from_index(int n, std::uint32_t index) {
  std::vector<int> c(static_cast<std::size_t>(n));
  for (auto& x : c) {
    x = static_cast<int>(index % 3) - 1;
    index /= 3;
  }
  return TricubePoint(std::move(c));
}

std::uint32_t TricubePoint::index() const {
  std::uint32_t idx = 0;
  for (auto it = coords_.rbegin(); it != coords_.rend(); ++it) idx = idx * 3 + static_cast<std::uint32_t>(*it + 1);
  return idx;
}

TricubePoint tricube_embed(const Vertex& v, const Vertex& w) {
  if (v.dim() != w.dim()) throw DimensionError("tricube_embed: dimensions differ");
  std::vector<int> c(static_cast<std::size_t>(v.dim()));
  for (int j = 1; j <= v.dim(); ++j) c[static_cast<std::size_t>(j - 1)] = (2 * v[j] - 1) * (1 - w[j]);
  return TricubePoint(std::move(c));
}

TricubePoint outer_point(const Vertex& v) { return tricube_embed(v, Vertex(v.dim(), 0)); }

Vertex tricube_lambda_embed(const TricubePoint& t) {
  VertexIndex bits = 0;
  for (int j = 0; j < t.dim(); ++j) {
    const int c = t.coords()[static_cast<std::size_t>(j)];
    if (c == 1) bits |= VertexIndex{1} << (2 * j);
    if (c == -1) bits |= VertexIndex{1} << (2 * j + 1);
  }
  return Vertex(2 * t.dim(), bits);
}

CubeMorphism outer_point_morphism(int n) {
  std::vector<CoordRule> c;
  for (int j = 1; j <= n; ++j) {
    c.push_back(CoordRule::id(j));
    c.push_back(CoordRule::refl(j));
  }
  return CubeMorphism(n, std::move(c));
}

bool is_tricube_cube(int n, std::span<const TricubePoint> c) {
  const int m = dimension_of(c.size());
  for (VertexIndex v = 0; v < cube_size(n); ++v) {
    // psi_v is a bijection onto {t : t[j] in {0, 2v[j]-1}} with inverse w[j] = 1 - |t[j]|.
    std::vector<VertexIndex> table(c.size());
    bool inside = true;
    for (std::size_t u = 0; u < c.size() && inside; ++u) {
      if (c[u].dim() != n) throw DimensionError("is_tricube_cube: point dimension mismatch");
      VertexIndex w = 0;
      for (int j = 1; j <= n && inside; ++j) {
        const int t = c[u][j];
        if (t != 0 && t != 2 * static_cast<int>((v >> (j - 1)) & 1U) - 1) inside = false;
        if (t == 0) w |= VertexIndex{1} << (j - 1);
      }
      table[u] = w;
    }
    if (inside && CubeMorphism::from_table(m, n, table)) return true;
  }
  return false;
}

}  // namespace nilspace
