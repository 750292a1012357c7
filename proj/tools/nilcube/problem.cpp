#include "problem.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "nilspace/cohomology.hpp"
#include "nilspace/hk_cubes.hpp"
#include "nilspace/poly.hpp"
#include "nilspace/structure.hpp"
#include "nilspace/translations.hpp"

namespace nilcube {

using namespace nilspace;

namespace {

constexpr double kMaxExportScan = 1099511627776.0;  // 2^40 candidate maps per dimension
constexpr std::size_t kMaxExportCubes = 2'000'000;
constexpr double kMaxEnumeratedMaps = 1e6;

std::string escape(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

// A JSON value with its pointer, so every complaint names its location.
class Node {
 public:
  Node(const Json& j, std::string path) : j_(&j), path_(std::move(path)) {}

  const Json& json() const { return *j_; }
  const std::string& path() const { return path_; }

  [[noreturn]] void fail(const std::string& what) const { throw SpecError(path_.empty() ? "/" : path_, what); }

  bool has(const std::string& key) const { return j_->is_object() && j_->contains(key); }
  Node at(const std::string& key) const {
    if (!j_->is_object()) fail("expected an object");
    auto it = j_->find(key);
    if (it == j_->end()) throw SpecError(path_ + "/" + escape(key), "missing required field");
    return Node(*it, path_ + "/" + escape(key));
  }
  std::optional<Node> find(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return at(key);
  }
  std::size_t size() const {
    if (!j_->is_array()) fail("expected an array");
    return j_->size();
  }
  Node operator[](std::size_t i) const { return Node((*j_)[i], path_ + "/" + std::to_string(i)); }

  long long integer(long long lo, long long hi) const {
    if (!j_->is_number_integer()) fail("expected an integer");
    const auto v = j_->get<long long>();
    if (v < lo || v > hi) fail("must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return v;
  }
  std::string string() const {
    if (!j_->is_string()) fail("expected a string");
    return j_->get<std::string>();
  }
  bool boolean() const {
    if (!j_->is_boolean()) fail("expected true or false");
    return j_->get<bool>();
  }
  std::vector<long long> integers(long long lo, long long hi) const {
    std::vector<long long> out;
    for (std::size_t i = 0; i < size(); ++i) out.push_back((*this)[i].integer(lo, hi));
    return out;
  }

 private:
  const Json* j_;
  std::string path_;
};

long long max_index(std::size_t order) { return static_cast<long long>(order) - 1; }

// ---- objects ----------------------------------------------------------------------

Group parse_group(const Node& n) {
  const Node type = n.at("type");
  const std::string t = type.string();
  if (t == "cyclic_product") {
    const Node orders = n.at("orders");
    const auto m = orders.integers(1, static_cast<long long>(kMaxGroupOrder));
    double order = 1;
    for (long long d : m) order *= static_cast<double>(d);
    if (order > static_cast<double>(kMaxGroupOrder))
      orders.fail("group order exceeds the cap " + std::to_string(kMaxGroupOrder));
    return Group::cyclic_product(std::vector<int>(m.begin(), m.end()));
  }
  if (t == "heisenberg") {
    const Node m = n.at("m");
    const auto v = m.integer(2, 16);
    return Group::heisenberg(static_cast<int>(v));
  }
  if (t == "direct_product") {
    const Node factors = n.at("factors");
    if (factors.size() == 0) factors.fail("needs at least one factor");
    Group g = parse_group(factors[0]);
    for (std::size_t i = 1; i < factors.size(); ++i) {
      Group h = parse_group(factors[i]);
      if (g.order() * h.order() > kMaxGroupOrder) factors[i].fail("group order exceeds the cap");
      g = Group::direct_product(g, h);
    }
    return g;
  }
  if (t == "table") {
    const Node rows = n.at("table");
    const std::size_t order = rows.size();
    if (order == 0 || order > kMaxGroupOrder) rows.fail("table must have between 1 and 4096 rows");
    std::vector<std::vector<Elem>> table;
    for (std::size_t i = 0; i < order; ++i) {
      const Node row = rows[i];
      if (row.size() != order) row.fail("row length differs from the number of rows");
      std::vector<Elem> r;
      for (std::size_t j = 0; j < order; ++j) r.push_back(static_cast<Elem>(row[j].integer(0, max_index(order))));
      table.push_back(std::move(r));
    }
    try {
      return Group::from_table(std::move(table));
    } catch (const std::invalid_argument& e) {
      rows.fail(e.what());
    }
  }
  if (t == "quotient") {
    const Group g = parse_group(n.at("group"));
    const Node normal = n.at("normal");
    const auto elems = normal.integers(0, max_index(g.order()));
    try {
      const Subgroup sub = subgroup_closure(g, std::vector<Elem>(elems.begin(), elems.end()));
      return quotient(g, sub).group;
    } catch (const std::invalid_argument& e) {
      normal.fail(e.what());
    }
  }
  type.fail("unknown group type '" + t + "'");
}

Subgroup parse_subgroup(const Node& n, const Group& g) {
  auto elems = n.integers(0, max_index(g.order()));
  std::vector<Elem> e(elems.begin(), elems.end());
  e.push_back(0);
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());
  try {
    return Subgroup(g, e);
  } catch (const std::invalid_argument& ex) {
    n.fail(std::string("not a subgroup: ") + ex.what());
  }
}

FilteredGroup parse_filtration(const std::optional<Node>& n, const Group& g) {
  if (!n) return FilteredGroup::lower_central(g);
  const Node type = n->at("type");
  const std::string t = type.string();
  if (t == "lcs") return FilteredGroup::lower_central(g);
  if (t == "maximal_degree_k") {
    if (!g.is_abelian()) type.fail("maximal_degree_k needs an abelian group");
    return FilteredGroup::maximal_degree(g, static_cast<int>(n->at("k").integer(1, 8)));
  }
  if (t == "explicit") {
    const Node chain = n->at("chain");
    std::vector<Subgroup> levels;
    for (std::size_t i = 0; i < chain.size(); ++i) levels.push_back(parse_subgroup(chain[i], g));
    if (auto v = validate_filtration(g, levels)) chain.fail(v->message());
    return FilteredGroup(g, std::move(levels));
  }
  type.fail("unknown filtration type '" + t + "'");
}

// {group, filtration} at n.
FilteredGroup parse_filtered(const Node& n) {
  const Group g = parse_group(n.at("group"));
  return parse_filtration(n.find("filtration"), g);
}

FiniteAbelianGroup parse_abelian(const Node& n) {
  if (n.json().is_number_integer()) return FiniteAbelianGroup({n.integer(1, 4096)});
  const auto moduli = n.integers(1, 4096);
  double order = 1;
  for (long long d : moduli) order *= static_cast<double>(d);
  if (order > static_cast<double>(kMaxGroupOrder)) n.fail("group order exceeds the cap");
  return FiniteAbelianGroup(moduli);
}

CubeMap parse_points(const Node& n, std::size_t expected, std::size_t points) {
  if (n.size() != expected) n.fail("expected " + std::to_string(expected) + " values");
  CubeMap out;
  for (std::size_t i = 0; i < expected; ++i) out.push_back(static_cast<Point>(n[i].integer(0, max_index(points))));
  return out;
}

// cube = {n, values}; a corner has 2^n - 1 values.
CubeMap parse_cube(const Node& n, std::size_t points, bool corner = false) {
  const int dim = static_cast<int>(n.at("n").integer(corner ? 1 : 0, 10));
  return parse_points(n.at("values"), cube_size(dim) - (corner ? 1 : 0), points);
}

Cocycle parse_cocycle(const Node& n, const Cubespace& x) {
  const int k = static_cast<int>(n.at("k").integer(0, 4));
  const auto a = parse_abelian(n.at("A"));
  Cocycle rho = zero_cocycle(x, a, k);
  if (auto entries = n.find("entries")) {
    for (std::size_t i = 0; i < entries->size(); ++i) {
      const Node entry = (*entries)[i];
      if (entry.size() != 2) entry.fail("expected [cube values, A-element]");
      const auto q = parse_points(entry[0], cube_size(k + 1), x.size());
      const auto index = rho.index_of(q);
      if (!index) entry[0].fail("not a cube of dimension " + std::to_string(k + 1));
      rho.values[*index] = static_cast<Elem>(entry[1].integer(0, max_index(a.order())));
    }
  }
  return rho;
}

Cubespace parse_cubespace(const Node& n) {
  const Node source = n.at("source");
  const std::string s = source.string();
  if (s == "group") return group_cubespace(parse_filtered(n));
  if (s == "coset") {
    const auto fg = parse_filtered(n);
    return coset_cubespace(fg, parse_subgroup(n.at("gamma"), fg.group()));
  }
  if (s == "product") return product(parse_cubespace(n.at("left")), parse_cubespace(n.at("right")));
  if (s == "arrow") return arrow_space(parse_cubespace(n.at("of")), static_cast<int>(n.at("k").integer(1, 4)));
  if (s == "partial") {
    const auto x = parse_cubespace(n.at("of"));
    return partial_x(x, static_cast<Point>(n.at("base").integer(0, max_index(x.size()))));
  }
  if (s == "extension") {
    const auto base = parse_cubespace(n.at("base"));
    return build_extension(base, parse_cocycle(n.at("cocycle"), base)).total;
  }
  if (s == "explicit") {
    const auto points = static_cast<std::size_t>(n.at("points").integer(1, 1 << 20));
    const Node tables = n.at("tables");
    if (!tables.json().is_object()) tables.fail("expected an object keyed by dimension");
    std::map<int, std::vector<CubeMap>> parsed;
    for (const auto& [key, value] : tables.json().items()) {
      const Node t(value, tables.path() + "/" + escape(key));
      int dim = 0;
      try {
        dim = std::stoi(key);
      } catch (const std::exception&) {
        t.fail("dimension keys must be integers");
      }
      if (dim < 1 || dim > 6) t.fail("dimension must lie in [1, 6]");
      auto& list = parsed[dim];
      for (std::size_t i = 0; i < t.size(); ++i) list.push_back(parse_points(t[i], cube_size(dim), points));
      std::sort(list.begin(), list.end(), [](const CubeMap& a, const CubeMap& b) { return colex_less(a, b); });
      list.erase(std::unique(list.begin(), list.end()), list.end());
    }
    std::optional<int> step;
    if (auto st = n.find("step")) step = static_cast<int>(st->integer(0, 5));
    return explicit_cubespace(n.has("name") ? n.at("name").string() : "explicit", points, std::move(parsed), step);
  }
  source.fail("unknown cubespace source '" + s + "'");
}

// ---- reports ----------------------------------------------------------------------

Json tables_json(const Cubespace& x, int n_max) {
  Json out = Json::object();
  for (int n = 1; n <= n_max; ++n) {
    const double scan = std::pow(static_cast<double>(x.size()), static_cast<double>(cube_size(n)));
    if (scan > kMaxExportScan && !x.has_generator())
      throw std::length_error("export: |X|^(2^" + std::to_string(n) + ") exceeds the scan cap 2^40");
    const auto& cubes = x.cubes(n);
    if (cubes.size() > kMaxExportCubes)
      throw std::length_error("export: " + std::to_string(cubes.size()) + " cubes in dimension " + std::to_string(n) +
                              " exceed the cap " + std::to_string(kMaxExportCubes));
    out[std::to_string(n)] = cubes;
  }
  return out;
}

Json axioms_json(const AxiomReport& r) {
  Json out;
  out["n_max"] = r.n_max;
  out["composition"] = r.composition;
  out["ergodic"] = r.ergodic;
  out["nilspace"] = r.is_nilspace();
  out["step"] = r.step ? Json(*r.step) : Json(nullptr);
  out["verdict"] = r.verdict();
  Json completion = Json::array();
  std::vector<std::string> failing;
  if (!r.composition) failing.emplace_back("composition");
  if (!r.ergodic) failing.emplace_back("ergodicity");
  for (const auto& c : r.completion) {
    Json entry{{"n", c.n}, {"complete", c.complete}, {"unique", c.unique}};
    if (c.incomplete_corner) entry["incomplete_corner"] = *c.incomplete_corner;
    if (c.ambiguous_corner) entry["ambiguous_corner"] = *c.ambiguous_corner;
    if (!c.complete) failing.push_back("completion n=" + std::to_string(c.n));
    completion.push_back(std::move(entry));
  }
  out["completion"] = std::move(completion);
  if (r.composition_witness) out["composition_witness"] = r.composition_witness->second;
  if (r.ergodicity_witness) out["ergodicity_witness"] = {r.ergodicity_witness->first, r.ergodicity_witness->second};
  out["axioms"] = failing.empty() ? Json("all-ok") : Json(failing);
  return out;
}

int n_max_of(const Node& p, const RunOptions& o, int fallback = 3) {
  if (o.n_max) {
    if (*o.n_max < 1 || *o.n_max > 6) throw SpecError("/n_max", "--n-max must lie in [1, 6]");
    return *o.n_max;
  }
  if (auto n = p.find("n_max")) return static_cast<int>(n->integer(1, 6));
  return fallback;
}

// n_max for a space whose cube tables stop at dim_cap.
int n_max_of(const Node& p, const RunOptions& o, const Cubespace& x) {
  const int n = n_max_of(p, o);
  if (n > x.dim_cap())
    throw SpecError("/n_max", "n_max " + std::to_string(n) + " exceeds the largest cube dimension " +
                                  std::to_string(x.dim_cap()) + " this cubespace defines");
  return n;
}

bool flag(const Node& p, const std::string& key) { return p.has(key) && p.at(key).boolean(); }

// ---- kinds ------------------------------------------------------------------------

RunResult run_check(const Node& p, const RunOptions& o) {
  const auto x = parse_cubespace(p.at("cubespace"));
  const int n_max = n_max_of(p, o, x);
  // Tables first, so an oversized export fails before the axiom scan.
  const Json tables = flag(p, "export") ? tables_json(x, n_max) : Json();
  const auto r = check_axioms(x, n_max);
  RunResult out{r.is_nilspace() ? kOk : kMathFailure, axioms_json(r)};
  out.report["space"] = x.name();
  out.report["points"] = x.size();
  if (flag(p, "parallelepiped")) {
    const auto para = check_parallelepiped_axioms(x, n_max);
    out.report["parallelepiped"] = {{"holds", para.holds()},        {"p1_full", para.p1_full},
                                    {"faces", para.face_restrictions}, {"symmetries", para.symmetries},
                                    {"equivalence", para.equivalence}, {"closing", para.closing}};
    if (para.witness) out.report["parallelepiped"]["witness"] = *para.witness;
  }
  if (!tables.is_null()) out.report["tables"] = tables;
  return out;
}

RunResult run_factorize(const Node& p, const RunOptions&) {
  const auto fg = parse_filtered(p);
  const auto q = parse_cube(p.at("cube"), fg.group().order());
  Factorization f;
  if (auto w = p.find("weights")) {
    const auto weights = w->integers(0, 16);
    if (weights.size() != static_cast<std::size_t>(dimension_of(q.size())))
      w->fail("needs one weight per coordinate");
    const std::vector<int> ws(weights.begin(), weights.end());
    f = factorize_weighted(fg, q, ws);
  } else {
    f = factorize(fg, q);
  }
  RunResult out{f.accepted() ? kOk : kMathFailure, Json::object()};
  out.report["accepted"] = f.accepted();
  out.report["coefficients"] = f.coefficients;
  if (f.failure)
    out.report["failure"] = {{"index", f.failure->index},
                             {"value", f.failure->value},
                             {"required_level", f.failure->required_level},
                             {"message", f.failure->message()}};
  return out;
}

RunResult run_complete(const Node& p, const RunOptions&) {
  RunResult out{kOk, Json::object()};
  if (p.has("cubespace")) {
    const auto x = parse_cubespace(p.at("cubespace"));
    const auto corner = parse_cube(p.at("corner"), x.size(), true);
    try {
      nilspace::check_corner_premise(x, corner);
    } catch (const std::invalid_argument& e) {
      out.exit_code = kMathFailure;
      out.report["premise"] = false;
      out.report["witness"] = e.what();
      return out;
    }
    const auto values = complete_corner_bruteforce(x, corner);
    out.report["premise"] = true;
    out.report["completions"] = values;
    out.report["unique"] = values.size() == 1;
    if (values.empty()) {
      out.exit_code = kMathFailure;
      out.report["witness"] = "the corner has no completion";
    } else {
      out.report["value"] = values.front();
    }
    return out;
  }
  const auto fg = parse_filtered(p);
  const auto corner = parse_cube(p.at("corner"), fg.group().order(), true);
  const CornerCompleter completer(fg);
  try {
    const auto cube = completer.complete(corner);
    out.report["premise"] = true;
    out.report["value"] = cube.back();
    out.report["cube"] = cube;
    out.report["completions"] = completer.enumerate_completions(corner).size();
  } catch (const CornerPremiseError& e) {
    out.exit_code = kMathFailure;
    out.report["premise"] = false;
    out.report["face"] = e.face;
    out.report["witness"] = e.what();
  }
  return out;
}

RunResult run_poly(const Node& p, const RunOptions&) {
  const auto domain = parse_filtered(p.at("domain"));
  const auto target = parse_filtered(p.at("target"));
  RunResult out{kOk, Json::object()};
  if (auto m = p.find("map")) {
    const auto g = parse_points(*m, domain.group().order(), target.group().order());
    const GroupMap map(g.begin(), g.end());
    const bool poly = is_polynomial(domain, target, map);
    const auto witness = cube_morphism_witness(domain, target, map);
    out.report["polynomial"] = poly;
    out.report["cube_morphism"] = !witness.has_value();
    if (witness) out.report["witness"] = *witness;
    if (!poly || witness) out.exit_code = kMathFailure;
    return out;
  }
  const double maps = std::pow(static_cast<double>(target.group().order()), static_cast<double>(domain.group().order()));
  if (maps > kMaxEnumeratedMaps) throw std::length_error("poly: |G|^|H| exceeds the enumeration cap 10^6");
  const auto polys = enumerate_polynomial_maps(domain, target);
  const bool group = forms_group_under_pointwise_product(target.group(), polys);
  out.report["maps"] = static_cast<std::size_t>(maps);
  out.report["polynomial"] = polys.size();
  out.report["forms_group"] = group;
  if (flag(p, "list")) out.report["polynomial_maps"] = polys;
  if (!group) out.exit_code = kMathFailure;
  return out;
}

RunResult run_decompose(const Node& p, const RunOptions& o) {
  const auto x = parse_cubespace(p.at("cubespace"));
  const int n_max = n_max_of(p, o, x);
  std::optional<int> k;
  if (auto kk = p.find("k")) k = static_cast<int>(kk->integer(0, 5));
  const auto d = decompose(x, k, n_max);
  RunResult out{kOk, Json::object()};
  out.report["k"] = d.k;
  out.report["n_max"] = d.n_max;
  out.report["cube_correspondence"] = d.cube_correspondence;
  out.report["factors_consistent"] = d.factors_consistent;
  out.report["verified"] = d.verified();
  if (d.witness) out.report["witness"] = *d.witness;
  Json levels = Json::array();
  for (std::size_t i = 0; i < d.levels.size(); ++i) {
    Json level{{"i", i}, {"points", d.levels[i].factor.space.size()}};
    if (const auto& a = d.levels[i].group) {
      level["structure_group"] = a->group.invariant_factors();
      level["base_point"] = a->base;  // fibres are identified with the smallest point's fibre
      level["base_fibre"] = a->base_fibre;
    }
    levels.push_back(std::move(level));
  }
  out.report["levels"] = std::move(levels);
  bool rebuilt = true;
  if (!p.has("rebuild") || flag(p, "rebuild")) {
    const auto r = rebuild(d);
    for (int n = 1; n <= n_max; ++n) rebuilt = rebuilt && r.cubes(n) == x.cubes(n);
    out.report["rebuild_matches"] = rebuilt;
  }
  if (!d.verified() || !rebuilt) out.exit_code = kMathFailure;
  return out;
}

RunResult run_translations(const Node& p, const RunOptions& o) {
  const auto x = parse_cubespace(p.at("cubespace"));
  TranslationSearch search;
  search.brute_cap = o.brute_cap;
  RunResult out{kOk, Json::object()};
  if (auto m = p.find("map")) {
    const auto alpha = parse_points(*m, x.size(), x.size());
    const int height = p.has("height") ? static_cast<int>(p.at("height").integer(1, 6)) : 1;
    const auto c = certify_translation(x, alpha, height);
    out.report["translation"] = c.ok;
    out.report["height"] = c.height;
    out.report["dims_checked"] = c.dims_checked;
    if (c.witness) out.report["witness"] = *c.witness;
    if (!c.ok) out.exit_code = kMathFailure;
    return out;
  }
  if (auto h = p.find("height")) {
    const auto group = translation_group(x, static_cast<int>(h->integer(1, 6)), search);
    out.report["height"] = h->json();
    out.report["count"] = group.size();
    out.report["translations"] = group;
    return out;
  }
  const auto tower = translation_tower(x, search);
  Json sizes = Json::array();
  for (const auto& level : tower.levels) sizes.push_back(level.size());
  out.report["k"] = tower.k;
  out.report["level_sizes"] = std::move(sizes);
  out.report["closed"] = tower.closed;
  out.report["nested"] = tower.nested;
  out.report["commutators"] = tower.commutators;
  out.report["top_trivial"] = tower.top_trivial;
  out.report["verified"] = tower.verified();
  if (tower.witness) out.report["witness"] = *tower.witness;
  if (!tower.verified()) out.exit_code = kMathFailure;
  return out;
}

std::set<std::vector<Elem>> all_coboundaries(const Cubespace& x, const FiniteAbelianGroup& a, int k) {
  if (std::pow(static_cast<double>(a.order()), static_cast<double>(x.size())) > kMaxEnumeratedMaps)
    throw std::length_error("cohomology: |A|^|X| exceeds the brute-force cap 10^6");
  std::set<std::vector<Elem>> out;
  std::vector<Elem> f(x.size(), 0);
  while (true) {
    out.insert(coboundary_of(x, a, f, k).values);
    std::size_t i = 0;
    while (i < f.size() && ++f[i] == a.order()) f[i++] = 0;
    if (i == f.size()) break;
  }
  return out;
}

RunResult run_cohomology(const Node& p, const RunOptions& o) {
  const auto x = parse_cubespace(p.at("base"));
  const Node op_node = p.at("op");
  const std::string op = op_node.string();
  RunResult out{kOk, Json::object()};
  out.report["op"] = op;
  if (op == "count_classes" || op == "count_classes_exhaustive" || op == "enumerate" || op == "property") {
    const auto a = parse_abelian(p.at("A"));
    const int k = static_cast<int>(p.at("k").integer(0, 4));
    out.report["k"] = k;
    out.report["A"] = a.invariant_factors();
    if (op == "enumerate") {
      const auto cocycles = enumerate_cocycles(x, a, k);
      out.report["count"] = cocycles.size();
      if (!cocycles.empty()) out.report["cubes"] = cocycles.front().cubes;
      Json values = Json::array();
      for (const auto& rho : cocycles) values.push_back(rho.values);
      out.report["cocycles"] = std::move(values);
      return out;
    }
    if (op == "property") {
      const auto samples = p.has("samples") ? p.at("samples").integer(1, 100000) : 200;
      const auto images = all_coboundaries(x, a, k);
      std::mt19937_64 rng(o.seed);
      std::size_t disagreements = 0;
      for (long long t = 0; t < samples; ++t) {
        Cocycle rho = zero_cocycle(x, a, k);
        if (t % 2) {
          for (auto& v : rho.values) v = static_cast<Elem>(rng() % a.order());
        } else {
          std::vector<Elem> f(x.size());
          for (auto& v : f) v = static_cast<Elem>(rng() % a.order());
          rho = coboundary_of(x, a, f, k);
        }
        if (is_coboundary(x, rho).has_value() != (images.count(rho.values) > 0)) ++disagreements;
      }
      out.report["seed"] = o.seed;
      out.report["samples"] = samples;
      out.report["disagreements"] = disagreements;
      if (disagreements) out.exit_code = kMathFailure;
      return out;
    }
    const auto c = op == "count_classes" ? count_classes(x, a, k) : count_classes_exhaustive(x, a, k);
    out.report["cocycles"] = c.cocycles;
    out.report["coboundaries"] = c.coboundaries;
    out.report["classes"] = c.classes();
    return out;
  }
  if (op == "validate" || op == "is_coboundary") {
    const auto rho = parse_cocycle(p.at("cocycle"), x);
    const auto check = validate_cocycle(rho);
    out.report["cocycle"] = check.ok();
    out.report["symmetric"] = check.symmetric;
    out.report["additive"] = check.additive;
    if (check.witness) out.report["witness"] = *check.witness;
    if (op == "is_coboundary") {
      const auto f = is_coboundary(x, rho);
      out.report["coboundary"] = f.has_value();
      if (f) out.report["f"] = *f;
    } else if (!check.ok()) {
      out.exit_code = kMathFailure;
    }
    return out;
  }
  op_node.fail("unknown cohomology op '" + op + "'");
}

RunResult run_extend(const Node& p, const RunOptions& o) {
  const auto base = parse_cubespace(p.at("base"));
  const auto rho = parse_cocycle(p.at("cocycle"), base);
  const int n_max = n_max_of(p, o, base);
  RunResult out{kOk, Json::object()};
  const auto check = validate_cocycle(rho);
  if (!check.ok()) {
    out.exit_code = kMathFailure;
    out.report["cocycle"] = false;
    out.report["witness"] = check.witness.value_or("");
    return out;
  }
  const auto m = build_extension(base, rho);
  const auto ext = validate_extension(m, n_max);
  const auto axioms = check_axioms(m.total, n_max);
  out.report["cocycle"] = true;
  out.report["points"] = m.total.size();
  out.report["extension"] = {{"free_action", ext.free_action},
                             {"surjective", ext.surjective},
                             {"correspondence", ext.correspondence},
                             {"n_max", ext.n_max},
                             {"ok", ext.ok()}};
  if (ext.witness) out.report["extension"]["witness"] = *ext.witness;
  out.report["axioms"] = axioms_json(axioms);
  out.report["coboundary"] = is_coboundary(base, rho).has_value();
  const auto section = find_cube_preserving_section(m, n_max);
  out.report["split"] = section.has_value();
  if (section) out.report["section"] = *section;
  if (flag(p, "export")) out.report["tables"] = tables_json(m.total, n_max);
  if (!ext.ok() || !axioms.is_nilspace()) out.exit_code = kMathFailure;
  return out;
}

RunResult dispatch(const Json& problem, const RunOptions& o) {
  const Node p(problem, "");
  if (!problem.is_object()) p.fail("the problem must be a JSON object");
  const Node kind_node = p.at("kind");
  const std::string kind = kind_node.string();
  RunResult r;
  if (kind == "check") r = run_check(p, o);
  else if (kind == "factorize") r = run_factorize(p, o);
  else if (kind == "complete") r = run_complete(p, o);
  else if (kind == "poly") r = run_poly(p, o);
  else if (kind == "decompose") r = run_decompose(p, o);
  else if (kind == "translations") r = run_translations(p, o);
  else if (kind == "cohomology") r = run_cohomology(p, o);
  else if (kind == "extend") r = run_extend(p, o);
  else kind_node.fail("unknown kind '" + kind + "'");
  r.report["kind"] = kind;
  r.report["caps"] = {{"brute_cap", o.brute_cap},
                      {"group_order", kMaxGroupOrder},
                      {"export_scan", static_cast<std::uint64_t>(kMaxExportScan)},
                      {"export_cubes", kMaxExportCubes},
                      {"enumerated_maps", static_cast<std::uint64_t>(kMaxEnumeratedMaps)}};
  return r;
}

RunResult error(int code, const std::string& path, const std::string& message) {
  Json e{{"message", message}};
  if (!path.empty()) e["path"] = path;
  return {code, Json{{"error", std::move(e)}}};
}

void flatten(const Json& j, const std::string& prefix, std::ostringstream& out) {
  const bool scalar_array =
      j.is_array() && std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
  if (j.is_object() && !j.empty()) {
    for (const auto& [key, value] : j.items()) flatten(value, prefix.empty() ? key : prefix + "." + key, out);
  } else if (j.is_array() && !j.empty() && !scalar_array) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else {
    out << prefix << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << '\n';
  }
}

}  // namespace

RunResult run_problem(const Json& problem, const RunOptions& options) {
  try {
    return dispatch(problem, options);
  } catch (const SpecError& e) {
    return error(kSpecError, e.pointer(), e.what());
  } catch (const CornerPremiseError& e) {
    return error(kMathFailure, "", e.what());
  } catch (const std::length_error& e) {
    return error(kSpecError, "", std::string("cap exceeded: ") + e.what());
  } catch (const std::invalid_argument& e) {
    return error(kSpecError, "", e.what());
  } catch (const std::logic_error& e) {
    // Library consistency checks that fail only on spaces that are not nilspaces.
    return error(kMathFailure, "", e.what());
  } catch (const std::exception& e) {
    return error(kMathFailure, "", e.what());
  }
}

std::string to_text(const Json& report) {
  std::ostringstream out;
  flatten(report, "", out);
  return out.str();
}

}  // namespace nilcube
