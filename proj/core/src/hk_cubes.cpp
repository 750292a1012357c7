#include "nilspace/hk_cubes.hpp"

#include <sstream>
#include <stdexcept>

#include "nilspace/linear.hpp"

namespace nilspace {

namespace {

// Calls f(j) for every submask j of mask in increasing order, mask included.
template <class F>
void for_each_submask(VertexIndex mask, F&& f) {
  VertexIndex s = 0;
  while (true) {
    f(s);
    if (s == mask) break;
    s = (s - mask) & mask;
  }
}

int face_threshold(VertexIndex i, std::span<const int> weights) {
  if (weights.empty()) return weight(i);
  int t = 0;
  for (std::size_t j = 0; j < weights.size(); ++j)
    if ((i >> j) & 1U) t += weights[j];
  return t;
}

Factorization factorize_with(const FilteredGroup& fg, std::span<const Elem> q, std::span<const int> weights) {
  const int n = dimension_of(q.size());
  if (!weights.empty() && static_cast<int>(weights.size()) != n)
    throw DimensionError("factorize: weight vector length differs from cube dimension");
  Factorization out{upper_face_coefficients(fg.group(), q), std::nullopt};
  for (std::size_t i = 0; i < out.coefficients.size(); ++i) {
    const int level = face_threshold(static_cast<VertexIndex>(i), weights);
    if (!fg.in_level(level, out.coefficients[i])) {
      out.failure = FactorizationFailure{i, out.coefficients[i], level};
      break;
    }
  }
  return out;
}

}  // namespace

Elem sigma(const Group& g, std::span<const Elem> values) {
  if (values.size() == 1) return values[0];
  const std::size_t half = values.size() / 2;
  if (half * 2 != values.size()) throw DimensionError("sigma: size is not a power of two");
  return g.mul(g.inv(sigma(g, values.subspan(half))), sigma(g, values.first(half)));
}

Elem sigma_gray(const Group& g, std::span<const Elem> values) {
  const int n = dimension_of(values.size());
  const auto order = gray_order(n);
  Elem acc = 0;
  for (std::size_t j = order.size(); j-- > 0;) {
    const Elem x = values[order[j]];
    acc = g.mul(acc, j % 2 ? g.inv(x) : x);
  }
  return acc;
}

std::string FactorizationFailure::message() const {
  std::ostringstream os;
  os << "coefficient g_" << index << " = " << value << " is not in level " << required_level;
  return os.str();
}

std::vector<Elem> upper_face_coefficients(const Group& g, std::span<const Elem> q) {
  dimension_of(q.size());
  std::vector<Elem> coeff(q.size(), 0);
  for (VertexIndex i = 0; i < q.size(); ++i) {
    Elem prefix = 0;
    for_each_submask(i, [&](VertexIndex j) {
      if (j != i) prefix = g.mul(prefix, coeff[j]);
    });
    coeff[i] = g.mul(g.inv(prefix), q[i]);
  }
  return coeff;
}

Factorization factorize(const FilteredGroup& fg, std::span<const Elem> q) { return factorize_with(fg, q, {}); }

Factorization factorize_weighted(const FilteredGroup& fg, std::span<const Elem> q, std::span<const int> weights) {
  return factorize_with(fg, q, weights);
}

CubeValues multiply_out(const Group& g, std::span<const Elem> coefficients) {
  dimension_of(coefficients.size());
  CubeValues q(coefficients.size(), 0);
  for (VertexIndex u = 0; u < q.size(); ++u) {
    Elem acc = 0;
    for_each_submask(u, [&](VertexIndex j) { acc = g.mul(acc, coefficients[j]); });
    q[u] = acc;
  }
  return q;
}

bool is_cube(const FilteredGroup& fg, std::span<const Elem> q) { return factorize(fg, q).accepted(); }

bool is_cube_weighted(const FilteredGroup& fg, std::span<const Elem> q, std::span<const int> weights) {
  return factorize_weighted(fg, q, weights).accepted();
}

bool is_cube_by_equations(const FilteredGroup& fg, std::span<const Elem> q) {
  const int n = dimension_of(q.size());
  for (int m = 0; m <= n; ++m)
    for (const Face& f : enumerate_faces(m, n)) {
      const auto restricted = f.face_map().pull_back(q);
      if (!fg.in_level(m, sigma(fg.group(), restricted))) return false;
    }
  return true;
}

bool is_cube_by_equations_all_morphisms(const FilteredGroup& fg, std::span<const Elem> q) {
  const int n = dimension_of(q.size());
  for (int m = 0; m <= n; ++m)
    for (const CubeMorphism& phi : enumerate_morphisms(m, n)) {
      if (!phi.injective()) continue;
      if (!fg.in_level(m, sigma(fg.group(), phi.pull_back(q)))) return false;
    }
  return true;
}

std::size_t count_cubes(const FilteredGroup& fg, int n) {
  std::size_t total = 1;
  for (VertexIndex i = 0; i < cube_size(n); ++i) total *= fg.level(weight(i)).size();
  return total;
}

std::vector<CubeValues> enumerate_cubes(const FilteredGroup& fg, int n) {
  if (n < 0 || n > kMaxCubeDim) throw DimensionError("enumerate_cubes: dimension out of range");
  const std::size_t size = cube_size(n);
  std::vector<const std::vector<Elem>*> choices(size);
  for (std::size_t i = 0; i < size; ++i) choices[i] = &fg.level(weight(static_cast<VertexIndex>(i))).elements();
  std::vector<std::size_t> digit(size, 0);
  std::vector<Elem> coeff(size, 0);
  std::vector<CubeValues> out;
  out.reserve(count_cubes(fg, n));
  while (true) {
    for (std::size_t i = 0; i < size; ++i) coeff[i] = (*choices[i])[digit[i]];
    out.push_back(multiply_out(fg.group(), coeff));
    std::size_t i = 0;
    while (i < size && ++digit[i] == choices[i]->size()) digit[i++] = 0;
    if (i == size) break;
  }
  return out;
}

// ---- completion --------------------------------------------------------------

void check_corner_premise(const FilteredGroup& fg, std::span<const Elem> corner) {
  const int n = dimension_of(corner.size() + 1);
  if (n < 1) throw DimensionError("corners of dimension 0 are not defined");
  for (int i = 1; i <= n; ++i) {
    // Face {v[i] = 0}, read through its canonical face map.
    const CubeMorphism phi = Face{n, VertexIndex{1} << (i - 1), 0}.face_map();
    std::vector<Elem> restricted(cube_size(n - 1));
    for (VertexIndex v = 0; v < restricted.size(); ++v) restricted[v] = corner[phi.apply(v)];
    const auto f = factorize(fg, restricted);
    if (!f.accepted())
      throw CornerPremiseError(i, "corner face v[" + std::to_string(i) + "]=0 is not a cube: " + f.failure->message());
  }
}

CornerCompleter::CornerCompleter(const FilteredGroup& fg) : fg_(fg) {
  const int d = fg_.degree();
  if (d > 0) {
    quotient_ = quotient(fg_.group(), fg_.level(d));
    lower_ = std::make_shared<const CornerCompleter>(push_forward(fg_, *quotient_));
  }
}

CubeValues CornerCompleter::complete(std::span<const Elem> corner) const {
  check_corner_premise(fg_, corner);
  return complete_unchecked(corner, dimension_of(corner.size() + 1));
}

CubeValues CornerCompleter::complete_unchecked(std::span<const Elem> corner, int n) const {
  const Group& g = fg_.group();
  const std::size_t size = cube_size(n);
  const int d = fg_.degree();
  if (d == 0) return CubeValues(size, corner[0]);

  // Complete the image in G/G_d and lift it coefficient by coefficient.
  std::vector<Elem> projected(corner.size());
  for (std::size_t v = 0; v < corner.size(); ++v) projected[v] = quotient_->projection[corner[v]];
  const CubeValues low = lower_->complete_unchecked(projected, n);
  auto coeff = upper_face_coefficients(quotient_->group, low);
  for (auto& c : coeff) c = quotient_->representative[c];
  CubeValues q = multiply_out(g, coeff);

  const Elem shift = g.mul(corner[0], g.inv(q[0]));
  for (auto& x : q) x = g.mul(shift, x);

  // Match weight level j by right multiplication with g_v on F(v), |v| = j.
  for (int j = 1; j <= std::min(d, n - 1); ++j) {
    for (VertexIndex v = 1; v + 1 < size; ++v) {
      if (weight(v) != j) continue;
      const Elem gv = g.mul(g.inv(q[v]), corner[v]);
      if (gv == 0) continue;
      for (VertexIndex u = v; u < size; ++u)
        if ((u & v) == v) q[u] = g.mul(q[u], gv);
    }
  }
  return q;
}

std::vector<CubeValues> CornerCompleter::enumerate_completions(std::span<const Elem> corner) const {
  const CubeValues base = complete(corner);
  const int n = dimension_of(base.size());
  std::vector<CubeValues> out;
  for (Elem h : fg_.level(n).elements()) {
    CubeValues q = base;
    q.back() = fg_.group().mul(q.back(), h);
    out.push_back(std::move(q));
  }
  return out;
}

bool arrow_membership(const FilteredGroup& fg, std::span<const Elem> q0, std::span<const Elem> q1, int k,
                      std::span<const int> weights) {
  if (q0.size() != q1.size()) throw DimensionError("arrow_membership: maps have different dimensions");
  const int n = dimension_of(q0.size());
  std::vector<int> w(weights.begin(), weights.end());
  if (w.empty()) w.assign(static_cast<std::size_t>(n + k), 1);
  if (static_cast<int>(w.size()) != n + k) throw DimensionError("arrow_membership: weight vector has wrong length");
  int shift = 0;
  for (int j = n; j < n + k; ++j) shift += w[static_cast<std::size_t>(j)];
  const std::span<const int> lower(w.data(), static_cast<std::size_t>(n));
  if (!is_cube_weighted(fg, q0, lower)) return false;
  const Group& g = fg.group();
  std::vector<Elem> diff(q0.size());
  for (std::size_t v = 0; v < q0.size(); ++v) diff[v] = g.mul(g.inv(q0[v]), q1[v]);
  return is_cube_weighted(fg.shifted(shift), diff, lower);
}

// ---- abelian cubes -----------------------------------------------------------

StandardCubeVerdict standard_abelian_cube_verdicts(const FiniteAbelianGroup& a, std::span<const Elem> q) {
  const int n = dimension_of(q.size());
  StandardCubeVerdict verdict;

  // Representation read off the corner values x = q(0), h_i = q(e_i) - x.
  {
    const Elem x = q[0];
    std::vector<Elem> h(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) h[static_cast<std::size_t>(i)] = a.sub(q[VertexIndex{1} << i], x);
    bool ok = true;
    for (VertexIndex v = 0; v < q.size() && ok; ++v) {
      Elem y = x;
      for (int i = 0; i < n; ++i)
        if ((v >> i) & 1U) y = a.add(y, h[static_cast<std::size_t>(i)]);
      ok = y == q[v];
    }
    verdict.representation = ok;
  }

  // Affine extension: solve x + sum v_i h_i = q(v) for unknowns (x, h_1..h_n).
  {
    std::vector<LinearEquation> eqs;
    for (VertexIndex v = 0; v < q.size(); ++v) {
      LinearEquation e;
      e.terms.emplace_back(0, 1);
      for (int i = 0; i < n; ++i)
        if ((v >> i) & 1U) e.terms.emplace_back(i + 1, 1);
      e.constant = q[v];
      eqs.push_back(std::move(e));
    }
    verdict.affine_extension = solve_abelian_linear_system(a, n + 1, eqs).has_value();
  }

  verdict.equations = is_degree_k_abelian_cube(a.group(), q, 1);
  return verdict;
}

bool is_standard_abelian_cube(const FiniteAbelianGroup& a, std::span<const Elem> q) {
  const auto v = standard_abelian_cube_verdicts(a, q);
  if (!v.agree()) throw std::logic_error("standard abelian cube characterizations disagree");
  return v.representation;
}

bool is_degree_k_abelian_cube(const Group& a, std::span<const Elem> q, int k) {
  const int n = dimension_of(q.size());
  if (n <= k) return true;
  for (const Face& f : enumerate_faces(k + 1, n))
    if (sigma(a, f.face_map().pull_back(q)) != 0) return false;
  return true;
}

}  // namespace nilspace
