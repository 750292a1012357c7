#include "nilspace/group.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

#include "nilspace/linear.hpp"

namespace nilspace {

namespace {

void check_order(std::size_t n) {
  if (n == 0 || n > kMaxGroupOrder)
    throw std::invalid_argument("group order " + std::to_string(n) + " outside [1, " +
                                std::to_string(kMaxGroupOrder) + "]");
}

}  // namespace

void Group::finish() {
  inverse_.assign(order_, 0);
  for (Elem a = 0; a < order_; ++a)
    for (Elem b = 0; b < order_; ++b)
      if (mul(a, b) == 0) {
        inverse_[a] = b;
        break;
      }
}

Group Group::cyclic_product(std::vector<int> moduli) {
  std::size_t n = 1;
  for (int d : moduli) {
    if (d < 1) throw std::invalid_argument("cyclic_product: moduli must be positive");
    n *= static_cast<std::size_t>(d);
    check_order(n);
  }
  Group g;
  g.law_ = Law::CyclicProduct;
  g.order_ = n;
  g.moduli_ = moduli;
  g.name_ = "Z";
  for (std::size_t i = 0; i < moduli.size(); ++i) g.name_ += (i ? "xZ/" : "/") + std::to_string(moduli[i]);
  if (moduli.empty()) g.name_ = "trivial";
  g.table_.resize(n * n);
  for (Elem a = 0; a < n; ++a) {
    const auto ca = g.coordinates(a);
    for (Elem b = 0; b < n; ++b) {
      auto cb = g.coordinates(b);
      for (std::size_t i = 0; i < moduli.size(); ++i) cb[i] = (cb[i] + ca[i]) % moduli[i];
      g.table_[a * n + b] = g.from_coordinates(cb);
    }
  }
  g.finish();
  return g;
}

Group Group::heisenberg(int m) {
  if (m < 2) throw std::invalid_argument("heisenberg: modulus must be at least 2");
  const std::size_t n = static_cast<std::size_t>(m) * m * m;
  check_order(n);
  Group g;
  g.law_ = Law::Heisenberg;
  g.order_ = n;
  g.moduli_ = {m, m, m};
  g.name_ = "Heisenberg(Z/" + std::to_string(m) + ")";
  g.table_.resize(n * n);
  for (Elem x = 0; x < n; ++x) {
    const auto p = g.coordinates(x);
    for (Elem y = 0; y < n; ++y) {
      const auto q = g.coordinates(y);
      // [[1,a,c],[0,1,b]] * [[1,a',c'],[0,1,b']] has corner c + c' + a b'.
      const int c[3] = {(p[0] + q[0]) % m, (p[1] + q[1]) % m, (p[2] + q[2] + p[0] * q[1]) % m};
      g.table_[x * n + y] = g.from_coordinates(c);
    }
  }
  g.finish();
  return g;
}

Group Group::direct_product(const Group& a, const Group& b) {
  const std::size_t n = a.order() * b.order();
  check_order(n);
  Group g;
  g.law_ = Law::DirectProduct;
  g.order_ = n;
  g.name_ = a.name() + " x " + b.name();
  g.table_.resize(n * n);
  const auto na = static_cast<Elem>(a.order());
  for (Elem x = 0; x < n; ++x)
    for (Elem y = 0; y < n; ++y)
      g.table_[x * n + y] = a.mul(x % na, y % na) + na * b.mul(x / na, y / na);
  g.finish();
  return g;
}

Group Group::from_table(std::vector<std::vector<Elem>> table, std::string name) {
  const std::size_t n = table.size();
  check_order(n);
  Group g;
  g.law_ = Law::Table;
  g.order_ = n;
  g.name_ = std::move(name);
  g.table_.resize(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    if (table[a].size() != n) throw std::invalid_argument("group table is not square");
    for (std::size_t b = 0; b < n; ++b) {
      if (table[a][b] >= n) throw std::invalid_argument("group table entry out of range");
      g.table_[a * n + b] = table[a][b];
    }
  }
  for (Elem a = 0; a < n; ++a)
    if (g.mul(0, a) != a || g.mul(a, 0) != a) throw std::invalid_argument("group table: index 0 is not the identity");
  for (Elem a = 0; a < n; ++a) {
    bool has_inverse = false;
    for (Elem b = 0; b < n && !has_inverse; ++b) has_inverse = g.mul(a, b) == 0 && g.mul(b, a) == 0;
    if (!has_inverse) throw std::invalid_argument("group table: element " + std::to_string(a) + " has no inverse");
  }
  for (Elem a = 0; a < n; ++a)
    for (Elem b = 0; b < n; ++b)
      for (Elem c = 0; c < n; ++c)
        if (g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c)))
          throw std::invalid_argument("group table is not associative");
  g.finish();
  return g;
}

Elem Group::pow(Elem a, long long e) const {
  if (e < 0) {
    a = inv(a);
    e = -e;
  }
  e %= static_cast<long long>(order_);  // a^|G| = 1
  Elem result = 0, base = a;
  while (e > 0) {
    if (e & 1) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

bool Group::is_abelian() const {
  for (Elem a = 0; a < order_; ++a)
    for (Elem b = a + 1; b < order_; ++b)
      if (mul(a, b) != mul(b, a)) return false;
  return true;
}

std::vector<int> Group::coordinates(Elem g) const {
  std::vector<int> c(moduli_.size());
  for (std::size_t i = 0; i < moduli_.size(); ++i) {
    c[i] = static_cast<int>(g % static_cast<Elem>(moduli_[i]));
    g /= static_cast<Elem>(moduli_[i]);
  }
  return c;
}

Elem Group::from_coordinates(std::span<const int> coords) const {
  if (coords.size() != moduli_.size()) throw std::invalid_argument("wrong number of group coordinates");
  Elem g = 0;
  for (std::size_t i = moduli_.size(); i-- > 0;) {
    const int m = moduli_[i];
    g = g * static_cast<Elem>(m) + static_cast<Elem>(((coords[i] % m) + m) % m);
  }
  return g;
}

std::vector<std::vector<Elem>> Group::table() const {
  std::vector<std::vector<Elem>> t(order_, std::vector<Elem>(order_));
  for (Elem a = 0; a < order_; ++a)
    for (Elem b = 0; b < order_; ++b) t[a][b] = mul(a, b);
  return t;
}

Subgroup::Subgroup(const Group& g, std::vector<Elem> elems) : member_(g.order(), 0), elems_(std::move(elems)) {
  std::sort(elems_.begin(), elems_.end());
  elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
  for (Elem e : elems_) {
    if (e >= g.order()) throw std::invalid_argument("subgroup element out of range");
    member_[e] = 1;
  }
  if (elems_.empty() || elems_.front() != 0) throw std::invalid_argument("subgroup must contain the identity");
  for (Elem a : elems_)
    for (Elem b : elems_)
      if (!member_[g.mul(a, b)]) throw std::invalid_argument("subset is not closed under multiplication");
}

Subgroup Subgroup::trivial(const Group& g) { return Subgroup(g, {0}); }

Subgroup Subgroup::whole(const Group& g) {
  std::vector<Elem> all(g.order());
  std::iota(all.begin(), all.end(), Elem{0});
  return Subgroup(g, std::move(all));
}

bool Subgroup::subset_of(const Subgroup& other) const {
  return std::all_of(elems_.begin(), elems_.end(), [&](Elem e) { return other.contains(e); });
}

Subgroup subgroup_closure(const Group& g, std::span<const Elem> generators) {
  std::vector<char> seen(g.order(), 0);
  std::vector<Elem> elems{0};
  seen[0] = 1;
  // Breadth-first closure under right multiplication by generators; finite
  // groups make this closed under inverses as well.
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (Elem s : generators) {
      const Elem x = g.mul(elems[i], s);
      if (!seen[x]) {
        seen[x] = 1;
        elems.push_back(x);
      }
    }
  return Subgroup(g, std::move(elems));
}

Subgroup commutator_subgroup(const Group& g, const Subgroup& a, const Subgroup& b) {
  std::vector<Elem> gens;
  std::vector<char> seen(g.order(), 0);
  for (Elem x : a.elements())
    for (Elem y : b.elements()) {
      const Elem c = g.commutator(x, y);
      if (!seen[c]) {
        seen[c] = 1;
        gens.push_back(c);
      }
    }
  return subgroup_closure(g, gens);
}

bool is_normal(const Group& g, const Subgroup& n) {
  for (Elem x = 0; x < g.order(); ++x)
    for (Elem h : n.elements())
      if (!n.contains(g.mul(g.mul(x, h), g.inv(x)))) return false;
  return true;
}

std::string FiltrationViolation::message() const {
  switch (kind) {
    case Kind::NotNested: return "G_" + std::to_string(i + 1) + " is not contained in G_" + std::to_string(i);
    case Kind::NotTerminating: return "filtration chain does not end in the trivial group";
    case Kind::Commutator:
      return "[G_" + std::to_string(i) + ", G_" + std::to_string(j) + "] not contained in G_" +
             std::to_string(i + j) + " (witness " + std::to_string(g) + ", " + std::to_string(h) + ")";
  }
  return {};
}

std::optional<FiltrationViolation> validate_filtration(const Group& g, const std::vector<Subgroup>& chain) {
  using K = FiltrationViolation::Kind;
  if (chain.empty()) return FiltrationViolation{K::NotTerminating};
  for (std::size_t i = 0; i + 1 < chain.size(); ++i)
    if (!chain[i + 1].subset_of(chain[i])) return FiltrationViolation{K::NotNested, static_cast<int>(i)};
  const Subgroup trivial = Subgroup::trivial(g);
  auto level = [&](std::size_t i) -> const Subgroup& { return i < chain.size() ? chain[i] : trivial; };
  // Beyond the chain all levels are trivial, so indices up to chain.size() cover every case.
  for (std::size_t i = 0; i <= chain.size(); ++i)
    for (std::size_t j = i; j <= chain.size(); ++j) {
      const Subgroup& target = level(i + j);
      for (Elem x : level(i).elements())
        for (Elem y : level(j).elements())
          if (!target.contains(g.commutator(x, y)))
            return FiltrationViolation{K::Commutator, static_cast<int>(i), static_cast<int>(j), x, y};
    }
  return std::nullopt;
}

FilteredGroup::FilteredGroup(Group g, std::vector<Subgroup> chain)
    : group_(std::move(g)), chain_(std::move(chain)), trivial_(Subgroup::trivial(group_)) {
  if (auto v = validate_filtration(group_, chain_)) throw std::invalid_argument("invalid filtration: " + v->message());
  while (!chain_.empty() && chain_.back().is_trivial()) chain_.pop_back();
  degree_ = chain_.empty() ? 0 : static_cast<int>(chain_.size()) - 1;
}

FilteredGroup FilteredGroup::lower_central(const Group& g) {
  const Subgroup whole = Subgroup::whole(g);
  std::vector<Subgroup> chain{whole, whole};
  while (!chain.back().is_trivial()) {
    Subgroup next = commutator_subgroup(g, whole, chain.back());
    if (next == chain.back()) throw std::invalid_argument("lower central series does not terminate: group is not nilpotent");
    chain.push_back(std::move(next));
  }
  return FilteredGroup(g, std::move(chain));
}

FilteredGroup FilteredGroup::maximal_degree(const Group& a, int k) {
  if (k < 0) throw std::invalid_argument("maximal_degree: k must be nonnegative");
  if (!a.is_abelian() && k > 0) throw std::invalid_argument("maximal_degree: group must be abelian");
  std::vector<Subgroup> chain(static_cast<std::size_t>(k) + 1, Subgroup::whole(a));
  chain.push_back(Subgroup::trivial(a));
  return FilteredGroup(a, std::move(chain));
}

const Subgroup& FilteredGroup::level(int i) const {
  if (i < 0) i = 0;
  return static_cast<std::size_t>(i) < chain_.size() ? chain_[static_cast<std::size_t>(i)] : trivial_;
}

FilteredGroup FilteredGroup::shifted(int l) const {
  if (l < 0) throw std::invalid_argument("shift must be nonnegative");
  std::vector<Subgroup> chain;
  for (int i = 0; i + l < static_cast<int>(chain_.size()); ++i) chain.push_back(level(i + l));
  if (chain.empty()) chain.push_back(trivial_);
  return FilteredGroup(group_, std::move(chain));
}

QuotientGroup quotient(const Group& g, const Subgroup& n) {
  if (!is_normal(g, n)) throw std::invalid_argument("quotient: subgroup is not normal");
  QuotientGroup q{Group::cyclic(1), std::vector<Elem>(g.order(), 0), {}};
  std::vector<char> assigned(g.order(), 0);
  for (Elem x = 0; x < g.order(); ++x) {
    if (assigned[x]) continue;
    const auto idx = static_cast<Elem>(q.representative.size());
    q.representative.push_back(x);
    for (Elem h : n.elements()) {
      const Elem y = g.mul(x, h);
      assigned[y] = 1;
      q.projection[y] = idx;
    }
  }
  const std::size_t m = q.representative.size();
  std::vector<std::vector<Elem>> table(m, std::vector<Elem>(m));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      table[a][b] = q.projection[g.mul(q.representative[a], q.representative[b])];
  q.group = Group::from_table(std::move(table), g.name() + "/N");
  return q;
}

FilteredGroup push_forward(const FilteredGroup& fg, const QuotientGroup& q) {
  std::vector<Subgroup> chain;
  for (int i = 0; i <= fg.degree() + 1; ++i) {
    std::vector<Elem> image;
    for (Elem x : fg.level(i).elements()) image.push_back(q.projection[x]);
    chain.emplace_back(q.group, std::move(image));
  }
  return FilteredGroup(q.group, std::move(chain));
}

CosetSpace::CosetSpace(const Group& g, const Subgroup& gamma)
    : group_(g), gamma_(gamma), coset_of_(g.order(), 0) {
  std::vector<char> assigned(g.order(), 0);
  for (Elem x = 0; x < g.order(); ++x) {
    if (assigned[x]) continue;
    const std::size_t idx = representatives_.size();
    representatives_.push_back(x);
    for (Elem h : gamma.elements()) {
      const Elem y = g.mul(x, h);
      assigned[y] = 1;
      coset_of_[y] = idx;
    }
  }
}

std::size_t CosetSpace::act(Elem g, std::size_t coset) const {
  return coset_of_[group_.mul(g, representatives_[coset])];
}

FiniteAbelianGroup::FiniteAbelianGroup(std::vector<long long> moduli) {
  for (long long d : moduli)
    if (d < 1) throw std::invalid_argument("abelian group moduli must be positive");
  if (!moduli.empty()) {
    IntMatrix diag(moduli.size(), std::vector<long long>(moduli.size(), 0));
    for (std::size_t i = 0; i < moduli.size(); ++i) diag[i][i] = moduli[i];
    for (long long d : smith_normal_form(diag).diagonal)
      if (d != 1) factors_.push_back(d);
  }
  std::vector<int> mods;
  order_ = 1;
  for (long long d : factors_) {
    mods.push_back(static_cast<int>(d));
    order_ *= static_cast<std::size_t>(d);
  }
  group_ = std::make_shared<const Group>(Group::cyclic_product(mods));
}

std::vector<long long> FiniteAbelianGroup::coordinates(Elem a) const {
  std::vector<long long> c;
  for (int x : group_->coordinates(a)) c.push_back(x);
  return c;
}

Elem FiniteAbelianGroup::from_coordinates(std::span<const long long> c) const {
  std::vector<int> r(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const long long d = factors_.at(i);
    r[i] = static_cast<int>(((c[i] % d) + d) % d);
  }
  return group_->from_coordinates(r);
}

std::string FiniteAbelianGroup::str() const {
  if (factors_.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < factors_.size(); ++i) s += (i ? " x Z/" : "Z/") + std::to_string(factors_[i]);
  return s;
}

namespace {

std::size_t element_order(const Group& a, Elem g) {
  std::size_t k = 1;
  for (Elem x = g; x != 0; x = a.mul(x, g)) ++k;
  return k;
}

}  // namespace

std::vector<long long> invariant_factors_of(const Group& a) {
  if (!a.is_abelian()) throw std::invalid_argument("invariant_factors_of: group is not abelian");
  // For each prime p, |A[p^j]| / |A[p^(j-1)]| = p^(number of cyclic p-factors of order >= p^j).
  const auto n = static_cast<long long>(a.order());
  std::vector<long long> primes;
  long long rest = n;
  for (long long p = 2; p * p <= rest; ++p)
    if (rest % p == 0) {
      primes.push_back(p);
      while (rest % p == 0) rest /= p;
    }
  if (rest > 1) primes.push_back(rest);

  std::vector<long long> moduli;
  for (long long p : primes) {
    std::vector<std::size_t> torsion{1};
    for (long long pj = p;; pj *= p) {
      std::size_t count = 0;
      for (Elem g = 0; g < a.order(); ++g) count += a.pow(g, pj) == 0;
      if (count == torsion.back()) break;  // the p-part is exhausted
      torsion.push_back(count);
    }
    // counts[j] = number of factors of order >= p^j
    std::vector<int> at_least;
    for (std::size_t j = 1; j < torsion.size(); ++j) {
      std::size_t ratio = torsion[j] / torsion[j - 1];
      int e = 0;
      while (ratio > 1) {
        ratio /= static_cast<std::size_t>(p);
        ++e;
      }
      at_least.push_back(e);
    }
    for (std::size_t j = 0; j < at_least.size(); ++j) {
      const int next = j + 1 < at_least.size() ? at_least[j + 1] : 0;
      long long pe = 1;
      for (std::size_t t = 0; t <= j; ++t) pe *= p;
      for (int c = 0; c < at_least[j] - next; ++c) moduli.push_back(pe);
    }
  }
  return FiniteAbelianGroup(moduli).invariant_factors();
}

AbelianIdentification identify_abelian(const Group& a) {
  FiniteAbelianGroup canonical(invariant_factors_of(a));
  const auto& d = canonical.invariant_factors();
  const std::size_t r = d.size();
  // Backtracking search for generators g_i of order d_i whose span is all of A.
  std::vector<Elem> gens(r, 0);
  std::vector<std::vector<Elem>> spans(r + 1);
  spans[0] = {0};
  std::vector<std::size_t> orders(a.order());
  for (Elem g = 0; g < a.order(); ++g) orders[g] = element_order(a, g);

  auto search = [&](auto&& self, std::size_t i) -> bool {
    if (i == r) return true;
    for (Elem g = 0; g < a.order(); ++g) {
      if (orders[g] != static_cast<std::size_t>(d[i])) continue;
      std::vector<char> in(a.order(), 0);
      for (Elem x : spans[i]) in[x] = 1;
      std::vector<Elem> next;
      bool independent = true;
      Elem step = 0;
      for (long long t = 0; t < d[i] && independent; ++t) {
        for (Elem x : spans[i]) {
          const Elem y = a.mul(x, step);
          if (t > 0 && in[y]) {
            independent = false;
            break;
          }
          next.push_back(y);
        }
        step = a.mul(step, g);
      }
      if (!independent) continue;
      gens[i] = g;
      spans[i + 1] = std::move(next);
      if (self(self, i + 1)) return true;
    }
    return false;
  };
  if (!search(search, 0)) throw std::logic_error("identify_abelian: no generating set found");

  AbelianIdentification out{canonical, std::vector<Elem>(a.order(), 0)};
  std::vector<long long> coords(r, 0);
  const std::size_t n = canonical.order();
  for (std::size_t idx = 0; idx < n; ++idx) {
    Elem x = 0;
    for (std::size_t i = 0; i < r; ++i) x = a.mul(x, a.pow(gens[i], coords[i]));
    out.iso[x] = canonical.from_coordinates(coords);
    for (std::size_t i = 0; i < r; ++i) {
      if (++coords[i] < d[i]) break;
      coords[i] = 0;
    }
  }
  return out;
}

}  // namespace nilspace
