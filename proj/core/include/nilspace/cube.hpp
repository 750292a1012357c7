#pragma once

// Discrete cubes {0,1}^n: vertices, morphisms, faces, automorphisms,
// Gray order and tricubes.
//
// A vertex v of {0,1}^n is stored as the integer sum v[i]*2^(i-1), so that
// integer order on indices is colex order on vertices. Coordinates are
// 1-based in the public API, as in the usual notation v[1..n].

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nilspace {

inline constexpr int kMaxCubeDim = 16;

using VertexIndex = std::uint32_t;

// A value attached to each vertex of {0,1}^n, in colex order.
using CubeValues = std::vector<std::uint32_t>;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

constexpr std::size_t cube_size(int n) { return std::size_t{1} << n; }

int dimension_of(std::size_t values);  // inverse of cube_size, throws otherwise

inline int weight(VertexIndex v) { return __builtin_popcount(v); }

inline VertexIndex full_vertex(int n) { return static_cast<VertexIndex>(cube_size(n) - 1); }

class Vertex {
 public:
  Vertex() = default;
  Vertex(int n, VertexIndex bits);
  static Vertex from_bits(std::span<const int> bits);

  int dim() const { return n_; }
  VertexIndex index() const { return bits_; }
  int operator[](int i) const { return static_cast<int>((bits_ >> (i - 1)) & 1U); }
  int weight() const { return nilspace::weight(bits_); }
  std::vector<int> support() const;
  std::vector<int> bits() const;
  std::string str() const;

  friend bool operator==(const Vertex&, const Vertex&) = default;
  // Colex order; only meaningful between vertices of equal dimension.
  friend bool operator<(const Vertex& a, const Vertex& b) { return a.bits_ < b.bits_; }

 private:
  int n_ = 0;
  VertexIndex bits_ = 0;
};

struct CoordRule {
  enum class Kind : std::uint8_t { Zero, One, Id, Refl };
  Kind kind = Kind::Zero;
  int source = 0;  // 1-based input coordinate for Id and Refl

  static CoordRule zero() { return {Kind::Zero, 0}; }
  static CoordRule one() { return {Kind::One, 0}; }
  static CoordRule id(int i) { return {Kind::Id, i}; }
  static CoordRule refl(int i) { return {Kind::Refl, i}; }

  int eval(VertexIndex v) const;
  friend bool operator==(const CoordRule&, const CoordRule&) = default;
};

// Morphism {0,1}^m -> {0,1}^n in normal form: each output coordinate is
// constant, a copy of an input coordinate, or its reflection.
class CubeMorphism {
 public:
  CubeMorphism() = default;
  CubeMorphism(int m, std::vector<CoordRule> coords);

  static CubeMorphism identity(int n);
  static CubeMorphism constant(int m, VertexIndex target, int n);
  // Converts a raw table {0,1}^m -> {0,1}^n; nullopt if no affine map matches.
  static std::optional<CubeMorphism> from_table(int m, int n, std::span<const VertexIndex> table);

  int source_dim() const { return m_; }
  int target_dim() const { return static_cast<int>(coords_.size()); }
  const std::vector<CoordRule>& coords() const { return coords_; }

  VertexIndex apply(VertexIndex v) const;
  Vertex apply(const Vertex& v) const;
  std::vector<VertexIndex> table() const;

  // (*this) after inner.
  CubeMorphism compose(const CubeMorphism& inner) const;

  // j_sets()[i-1] lists the output coordinates driven by input coordinate i.
  std::vector<std::vector<int>> j_sets() const;
  std::vector<int> varying_coordinates() const;
  bool injective() const;
  bool is_face_map() const;

  // Precomposition of a map on {0,1}^n with this morphism.
  template <class T>
  std::vector<T> pull_back(std::span<const T> values) const {
    if (values.size() != cube_size(target_dim())) throw DimensionError("pull_back: size mismatch");
    std::vector<T> out(cube_size(m_));
    for (VertexIndex v = 0; v < out.size(); ++v) out[v] = values[apply(v)];
    return out;
  }

  std::string str() const;
  friend bool operator==(const CubeMorphism&, const CubeMorphism&) = default;

 private:
  int m_ = 0;
  std::vector<CoordRule> coords_;
};

// A face of {0,1}^n: the coordinates in fixed_mask are pinned to the
// corresponding bits of fixed_values.
struct Face {
  int n = 0;
  VertexIndex fixed_mask = 0;
  VertexIndex fixed_values = 0;

  int codim() const { return weight(fixed_mask); }
  int dim() const { return n - codim(); }
  bool contains(VertexIndex v) const { return (v & fixed_mask) == fixed_values; }
  // Canonical injective morphism onto the face, increasing on free coordinates.
  CubeMorphism face_map() const;
  static Face upper(int n, VertexIndex v) { return {n, v, v}; }
  friend bool operator==(const Face&, const Face&) = default;
};

std::vector<Face> enumerate_faces(int m, int n);
std::vector<CubeMorphism> enumerate_face_maps(int m, int n);
// Every morphism {0,1}^m -> {0,1}^n, (2m+2)^n of them.
std::vector<CubeMorphism> enumerate_morphisms(int m, int n);

// theta(v)[j] = v[perm[j]] xor flip_j.
class CubeAutomorphism {
 public:
  CubeAutomorphism() = default;
  CubeAutomorphism(std::vector<int> perm, VertexIndex flips);

  int dim() const { return static_cast<int>(perm_.size()); }
  const std::vector<int>& perm() const { return perm_; }
  VertexIndex flips() const { return flips_; }
  int reflections() const { return weight(flips_); }
  VertexIndex apply(VertexIndex v) const;
  CubeMorphism morphism() const;
  CubeAutomorphism compose(const CubeAutomorphism& inner) const;
  CubeAutomorphism inverse() const;
  friend bool operator==(const CubeAutomorphism&, const CubeAutomorphism&) = default;

 private:
  std::vector<int> perm_;  // 1-based
  VertexIndex flips_ = 0;
};

std::vector<CubeAutomorphism> automorphism_group(int n);

// Binary-reflected Gray order: result[j] is the j-th vertex.
std::vector<VertexIndex> gray_order(int n);

struct InjectiveDecomposition {
  CubeAutomorphism theta;
  std::vector<CubeMorphism> parts;  // parts[0] < parts[1] < ... adjacent
};

// Splits phi o theta into a concatenation of injective morphisms with
// fewer varying coordinates. Requires phi injective and not a face map.
InjectiveDecomposition decompose_injective_morphism(const CubeMorphism& phi);

// Concatenation of maps on {0,1}^n along the last coordinate; throws if not adjacent.
template <class T>
std::vector<T> concatenate(std::span<const T> first, std::span<const T> second) {
  if (first.size() != second.size() || first.size() < 2) throw DimensionError("concatenate: size mismatch");
  const std::size_t half = first.size() / 2;
  for (std::size_t v = 0; v < half; ++v)
    if (first[v + half] != second[v]) throw std::invalid_argument("concatenate: maps are not adjacent");
  std::vector<T> out(first.begin(), first.end());
  for (std::size_t v = 0; v < half; ++v) out[v + half] = second[v + half];
  return out;
}

// ---- tricubes ---------------------------------------------------------------

// A point of {-1,0,1}^n, indexed in base 3 with digit t[j]+1 at place j.
class TricubePoint {
 public:
  TricubePoint() = default;
  explicit TricubePoint(std::vector<int> coords);
  static TricubePoint from_index(int n, std::uint32_t index);

  int dim() const { return static_cast<int>(coords_.size()); }
  int operator[](int j) const { return coords_[static_cast<std::size_t>(j - 1)]; }
  const std::vector<int>& coords() const { return coords_; }
  std::uint32_t index() const;
  friend bool operator==(const TricubePoint&, const TricubePoint&) = default;

 private:
  std::vector<int> coords_;
};

inline std::uint32_t tricube_size(int n) {
  std::uint32_t s = 1;
  for (int i = 0; i < n; ++i) s *= 3;
  return s;
}

// psi_v(w)[j] = (2 v[j] - 1)(1 - w[j]).
TricubePoint tricube_embed(const Vertex& v, const Vertex& w);
// omega_n(v) = psi_v(0^n), the outer point of the v-th subcube.
TricubePoint outer_point(const Vertex& v);
// lambda^n : T_n -> {0,1}^{2n}, lambda(1)=(1,0), lambda(0)=(0,0), lambda(-1)=(0,1).
Vertex tricube_lambda_embed(const TricubePoint& t);
// The morphism lambda^n o omega_n : {0,1}^n -> {0,1}^{2n}.
CubeMorphism outer_point_morphism(int n);
// True iff the map c : {0,1}^m -> T_n equals psi_v o phi for some v and morphism phi.
bool is_tricube_cube(int n, std::span<const TricubePoint> c);

}  // namespace nilspace
