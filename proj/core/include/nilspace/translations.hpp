#pragma once

// Translations of finite nilspaces: certification, the groups Tran_i(X)
// with their filtration, translation-equivalent cubes, and the translation
// bundle used to lift a translation from F_{k-1}(X) to X.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nilspace/cohomology.hpp"
#include "nilspace/cubespace.hpp"
#include "nilspace/structure.hpp"

namespace nilspace {

using PointMap = std::vector<Point>;  // a self-map of X as a table

struct TranslationCertificate {
  bool ok = false;
  int height = 0;
  int dims_checked = 0;            // dimension of the cubes q tested
  std::optional<CubeMap> witness;  // q with <q, alpha o q>_i not a cube
};

// <q, alpha o q>_i in Cu^{n+i}(X) for all q in Cu^n(X), n = step + 1 unless
// given. Throws std::invalid_argument if alpha is not a bijection.
TranslationCertificate certify_translation(const Cubespace& x, std::span<const Point> alpha, int height,
                                           std::optional<int> n = std::nullopt);
bool is_translation(const Cubespace& x, std::span<const Point> alpha, int height);

// alpha applied at the vertices of the face only.
CubeMap face_action(std::span<const Point> alpha, const Face& face, std::span<const Point> q);
// Directly from the definition: alpha^F(q) is a cube for every face F of
// codimension height and every q in Cu^n(X), 1 <= n <= n_max.
bool is_translation_by_faces(const Cubespace& x, std::span<const Point> alpha, int height, int n_max);

struct TranslationSearch {
  enum class Mode { BruteForce, Generated };
  Mode mode = Mode::BruteForce;
  std::vector<PointMap> seeds;   // generators for Generated mode
  std::size_t brute_cap = 12;    // largest |X| for BruteForce mode
};

// Every translation of the given height, sorted. Brute force assigns
// alpha(0), alpha(1), ... and prunes with the 0-cube arrow test and every
// (k+1)-cube whose points are all assigned.
std::vector<PointMap> translation_group(const Cubespace& x, int height, const TranslationSearch& search = {});

struct TranslationTower {
  int k = 0;
  std::vector<std::vector<PointMap>> levels;  // levels[i - 1] = Tran_i, i = 1..k+1
  bool closed = true;         // each level is a group
  bool nested = true;         // Tran_{i+1} inside Tran_i
  bool commutators = true;    // [Tran_i, Tran_j] inside Tran_{i+j}
  bool top_trivial = true;    // Tran_{k+1} = {id}
  std::optional<std::string> witness;

  bool verified() const { return closed && nested && commutators && top_trivial; }
  const std::vector<PointMap>& level(int i) const { return levels.at(static_cast<std::size_t>(i - 1)); }
};

TranslationTower translation_tower(const Cubespace& x, const TranslationSearch& search = {});

// The maps x -> x + a for a in the structure group.
std::vector<PointMap> structure_group_shifts(const StructureGroup& g);

struct TranslationCubeVerdict {
  bool transitive = true;  // Tran_1 acts transitively on X
  bool reachable = false;  // q = g(.)(q(0)) for some g in Cu^n(Tran.)
};

// Is q obtained from a constant cube by face actions of tower elements?
TranslationCubeVerdict translation_cube_test(const Cubespace& x, std::span<const Point> q,
                                             const TranslationTower& tower);

struct TranslationBundle {
  int k = 0;
  int height = 0;
  PointMap alpha;                // on F_{k-1}(X)
  FactorSpace base;              // F_{k-1}(X)
  std::vector<Point> pairs;      // T as indices x0 + |X| x1 into X join_i X
  Cubespace total;               // T with the cubes of X join_i X
  FactorSpace reduced;           // T* = F_{k-1}(T)
  std::vector<Point> gamma;      // T* -> F_{k-1}(X)
  Extension extension;           // T* over F_{k-1}(X), group A_k, degree k - i
  StructureGroup top_group;      // A_k of X
  ExtensionReport report;
};

// Throws std::invalid_argument unless 1 <= height < k and alpha is a
// certified translation of F_{k-1}(X).
TranslationBundle translation_bundle(const Cubespace& x, std::span<const Point> alpha, int height, int n_max = 3);

struct LiftResult {
  std::optional<std::vector<Point>> section;  // F_{k-1}(X) -> T*
  std::optional<PointMap> beta;               // the lift, when a section was found
  std::optional<TranslationCertificate> certificate;
  std::size_t sections_tried = 0;
  // "lift found", "no section found" or "section found but lift failed certification"
  std::string message;
};

// Searches for a morphism section of gamma; from one, assembles beta(x) as
// the local translation of the section's value applied to x.
LiftResult try_lift_translation(const Cubespace& x, const TranslationBundle& bundle);

}  // namespace nilspace
