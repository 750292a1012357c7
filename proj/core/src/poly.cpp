#include "nilspace/poly.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace nilspace {

GroupMap derivative(const Group& domain, const Group& target, std::span<const Elem> g, Elem h) {
  if (g.size() != domain.order()) throw DimensionError("derivative: table does not cover the domain");
  GroupMap out(g.size());
  for (Elem x = 0; x < g.size(); ++x) out[x] = target.mul(target.inv(g[x]), g[domain.mul(x, h)]);
  return out;
}

GroupMap pointwise_product(const Group& target, std::span<const Elem> g1, std::span<const Elem> g2) {
  if (g1.size() != g2.size()) throw DimensionError("pointwise_product: windows differ");
  GroupMap out(g1.size());
  for (std::size_t x = 0; x < g1.size(); ++x) out[x] = target.mul(g1[x], g2[x]);
  return out;
}

GroupMap pointwise_inverse(const Group& target, std::span<const Elem> g) {
  GroupMap out(g.size());
  for (std::size_t x = 0; x < g.size(); ++x) out[x] = target.inv(g[x]);
  return out;
}

namespace {

bool all_in_level(const FilteredGroup& fg, int level, std::span<const Elem> values) {
  return std::all_of(values.begin(), values.end(), [&](Elem v) { return fg.in_level(level, v); });
}

bool polynomial_dfs(const FilteredGroup& domain, const FilteredGroup& target, const GroupMap& f, int weight_sum,
                    int depth, int depth_cap, int min_step) {
  if (!all_in_level(target, weight_sum, f)) return false;
  const int top = target.degree() + 1;
  if (weight_sum >= top || depth >= depth_cap) return true;
  for (int i = min_step; i <= top - weight_sum; ++i)
    for (Elem h : domain.level(i).elements()) {
      if (h == 0) continue;
      if (!polynomial_dfs(domain, target, derivative(domain.group(), target.group(), f, h), weight_sum + i,
                          depth + 1, depth_cap, min_step))
        return false;
    }
  return true;
}

}  // namespace

bool is_polynomial(const FilteredGroup& domain, const FilteredGroup& target, std::span<const Elem> g, int depth_cap) {
  if (g.size() != domain.group().order()) throw DimensionError("is_polynomial: table does not cover the domain");
  const int top = target.degree() + 1;
  if (depth_cap < 0) depth_cap = top;
  // With H_0 = H_1 every weight-0 step is dominated by the same step at weight 1.
  const int min_step = domain.level(0) == domain.level(1) ? 1 : 0;
  if (min_step == 1) depth_cap = std::max(depth_cap, top);
  return polynomial_dfs(domain, target, GroupMap(g.begin(), g.end()), 0, 0, depth_cap, min_step);
}

std::optional<CubeValues> cube_morphism_witness(const FilteredGroup& domain, const FilteredGroup& target,
                                                std::span<const Elem> g, int dim_cap) {
  if (g.size() != domain.group().order()) throw DimensionError("cube_morphism_witness: table does not cover the domain");
  if (dim_cap < 0) dim_cap = target.degree() + 1;
  for (int n = 0; n <= dim_cap; ++n)
    for (const CubeValues& q : enumerate_cubes(domain, n)) {
      CubeValues image(q.size());
      for (std::size_t v = 0; v < q.size(); ++v) image[v] = g[q[v]];
      if (!is_cube(target, image)) return q;
    }
  return std::nullopt;
}

bool is_cube_morphism(const FilteredGroup& domain, const FilteredGroup& target, std::span<const Elem> g, int dim_cap) {
  return !cube_morphism_witness(domain, target, g, dim_cap).has_value();
}

std::vector<GroupMap> enumerate_polynomial_maps(const FilteredGroup& domain, const FilteredGroup& target,
                                                std::size_t max_maps) {
  const std::size_t h = domain.group().order(), m = target.group().order();
  std::size_t total = 1;
  for (std::size_t i = 0; i < h; ++i) {
    if (total > max_maps / m) throw std::length_error("enumerate_polynomial_maps: map count exceeds the cap");
    total *= m;
  }
  std::vector<GroupMap> out;
  GroupMap g(h, 0);
  for (std::size_t c = 0; c < total; ++c) {
    if (is_polynomial(domain, target, g)) out.push_back(g);
    for (std::size_t i = 0; i < h && ++g[i] == m; ++i) g[i] = 0;
  }
  return out;
}

bool forms_group_under_pointwise_product(const Group& target, const std::vector<GroupMap>& maps) {
  if (maps.empty()) return false;
  const std::set<GroupMap> members(maps.begin(), maps.end());
  if (!members.count(GroupMap(maps.front().size(), 0))) return false;
  for (const auto& a : maps) {
    if (!members.count(pointwise_inverse(target, a))) return false;
    for (const auto& b : maps)
      if (!members.count(pointwise_product(target, a, b))) return false;
  }
  return true;
}

// ---- Z^n windows -------------------------------------------------------------

std::size_t BoxMap::index(std::span<const int> t) const {
  std::size_t idx = 0, stride = 1;
  for (std::size_t i = 0; i < extent.size(); ++i) {
    if (t[i] < 0 || t[i] >= extent[i]) throw std::out_of_range("BoxMap: point outside the window");
    idx += static_cast<std::size_t>(t[i]) * stride;
    stride *= static_cast<std::size_t>(extent[i]);
  }
  return idx;
}

BoxMap derivative(const Group& target, const BoxMap& f, int direction, int steps) {
  const auto d = static_cast<std::size_t>(direction - 1);
  if (d >= f.extent.size() || steps < 0) throw DimensionError("derivative: bad direction");
  BoxMap out{f.extent, {}};
  out.extent[d] = std::max(0, f.extent[d] - steps);
  std::size_t total = 1;
  for (int e : out.extent) total *= static_cast<std::size_t>(e);
  out.values.resize(total);
  std::vector<int> t(out.extent.size(), 0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    const Elem here = f.at(t);
    t[d] += steps;
    const Elem there = f.at(t);
    t[d] -= steps;
    out.values[idx] = target.mul(target.inv(here), there);
    for (std::size_t i = 0; i < t.size() && ++t[i] == out.extent[i]; ++i) t[i] = 0;
  }
  return out;
}

Elem BinomialForm::evaluate(const Group& g, std::span<const long long> t) const {
  const int n = dim();
  if (static_cast<int>(t.size()) != n) throw DimensionError("binomial form: point has wrong dimension");
  Elem acc = 0;
  for (VertexIndex j = 0; j < coefficients.size(); ++j) {
    long long e = 1;
    for (int i = 0; i < n; ++i)
      if ((j >> i) & 1U) e *= t[static_cast<std::size_t>(i)];
    acc = g.mul(acc, g.pow(coefficients[j], e));
  }
  return acc;
}

BoxMap BinomialForm::on_box(const Group& g, std::vector<int> extent) const {
  if (static_cast<int>(extent.size()) != dim()) throw DimensionError("binomial form: window has wrong dimension");
  BoxMap out{std::move(extent), {}};
  std::size_t total = 1;
  for (int e : out.extent) total *= static_cast<std::size_t>(e);
  out.values.resize(total);
  std::vector<long long> t(out.extent.size(), 0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    out.values[idx] = evaluate(g, t);
    for (std::size_t i = 0; i < t.size() && ++t[i] == out.extent[i]; ++i) t[i] = 0;
  }
  return out;
}

Elem binomial_extension(const Group& g, const BinomialForm& form, std::span<const long long> t) {
  return form.evaluate(g, t);
}

namespace {

bool box_derivatives_ok(const FilteredGroup& fg, const BoxMap& f, int order, int top) {
  if (!std::all_of(f.values.begin(), f.values.end(), [&](Elem v) { return fg.in_level(order, v); })) return false;
  if (order >= top) return true;
  for (int dir = 1; dir <= static_cast<int>(f.extent.size()); ++dir)
    if (!box_derivatives_ok(fg, derivative(fg.group(), f, dir), order + 1, top)) return false;
  return true;
}

}  // namespace

bool has_polynomial_extension(const FilteredGroup& fg, std::span<const Elem> q) {
  const int n = dimension_of(q.size());
  const int top = fg.degree() + 1;
  const auto form = BinomialForm::of_cube(fg.group(), q);
  const BoxMap window = form.on_box(fg.group(), std::vector<int>(static_cast<std::size_t>(n), top + 1));
  return box_derivatives_ok(fg, window, 0, top);
}

}  // namespace nilspace
