#include "nilspace/linear.hpp"

#include <cstdlib>
#include <numeric>
#include <stdexcept>

namespace nilspace {

namespace {

IntMatrix identity_matrix(std::size_t n) {
  IntMatrix m(n, std::vector<long long>(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

void row_addmul(IntMatrix& m, std::size_t dst, std::size_t src, long long q) {
  for (std::size_t j = 0; j < m[dst].size(); ++j) m[dst][j] += q * m[src][j];
}

void col_addmul(IntMatrix& m, std::size_t dst, std::size_t src, long long q) {
  for (auto& row : m) row[dst] += q * row[src];
}

void col_swap(IntMatrix& m, std::size_t a, std::size_t b) {
  for (auto& row : m) std::swap(row[a], row[b]);
}

long long mod(long long a, long long d) {
  a %= d;
  return a < 0 ? a + d : a;
}

// Extended gcd: returns g and sets s, t with s a + t b = g >= 0.
long long ext_gcd(long long a, long long b, long long& s, long long& t) {
  long long old_r = a, r = b, old_s = 1, cur_s = 0, old_t = 0, cur_t = 1;
  while (r != 0) {
    const long long q = old_r / r;
    old_r -= q * r;
    std::swap(old_r, r);
    old_s -= q * cur_s;
    std::swap(old_s, cur_s);
    old_t -= q * cur_t;
    std::swap(old_t, cur_t);
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  s = old_s;
  t = old_t;
  return old_r;
}

}  // namespace

SmithForm smith_normal_form(const IntMatrix& input) {
  IntMatrix a = input;
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  for (const auto& r : a)
    if (r.size() != cols) throw std::invalid_argument("smith_normal_form: ragged matrix");
  SmithForm out{identity_matrix(rows), identity_matrix(cols), {}};
  const std::size_t steps = std::min(rows, cols);

  for (std::size_t t = 0; t < steps; ++t) {
    while (true) {
      // Smallest nonzero entry of the trailing block becomes the pivot.
      std::size_t pi = rows, pj = cols;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j)
          if (a[i][j] != 0 && (pi == rows || std::llabs(a[i][j]) < std::llabs(a[pi][pj]))) {
            pi = i;
            pj = j;
          }
      if (pi == rows) break;
      std::swap(a[t], a[pi]);
      std::swap(out.u[t], out.u[pi]);
      col_swap(a, t, pj);
      col_swap(out.v, t, pj);

      bool dirty = false;
      for (std::size_t i = t + 1; i < rows; ++i) {
        const long long q = a[i][t] / a[t][t];
        row_addmul(a, i, t, -q);
        row_addmul(out.u, i, t, -q);
        dirty |= a[i][t] != 0;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        const long long q = a[t][j] / a[t][t];
        col_addmul(a, j, t, -q);
        col_addmul(out.v, j, t, -q);
        dirty |= a[t][j] != 0;
      }
      if (dirty) continue;
      // Enforce divisibility of the remaining block by the pivot.
      std::size_t bad = rows;
      for (std::size_t i = t + 1; i < rows && bad == rows; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (a[i][j] % a[t][t] != 0) {
            bad = i;
            break;
          }
      if (bad == rows) break;
      row_addmul(a, t, bad, 1);
      row_addmul(out.u, t, bad, 1);
    }
    if (a[t][t] < 0) {
      for (auto& x : a[t]) x = -x;
      for (auto& x : out.u[t]) x = -x;
    }
    out.diagonal.push_back(a[t][t]);
  }
  return out;
}

std::optional<std::vector<Elem>> solve_abelian_linear_system(const FiniteAbelianGroup& grp, int unknowns,
                                                             const std::vector<LinearEquation>& equations) {
  if (unknowns < 0) throw std::invalid_argument("solve_abelian_linear_system: negative unknown count");
  const auto n = static_cast<std::size_t>(unknowns);
  const auto& factors = grp.invariant_factors();
  std::vector<std::vector<long long>> solution(n, std::vector<long long>(factors.size(), 0));

  for (std::size_t comp = 0; comp < factors.size(); ++comp) {
    const long long d = factors[comp];
    // Augmented system [C | b] over Z/d.
    IntMatrix c(equations.size(), std::vector<long long>(n, 0));
    std::vector<long long> b(equations.size(), 0);
    for (std::size_t e = 0; e < equations.size(); ++e) {
      for (const auto& [var, coef] : equations[e].terms) {
        if (var < 0 || static_cast<std::size_t>(var) >= n) throw std::invalid_argument("equation refers to unknown out of range");
        c[e][static_cast<std::size_t>(var)] = mod(c[e][static_cast<std::size_t>(var)] + coef, d);
      }
      b[e] = grp.coordinates(equations[e].constant)[comp];
    }
    IntMatrix v = identity_matrix(n);
    const std::size_t rows = c.size();
    std::size_t rank = 0;
    for (std::size_t t = 0; t < std::min(rows, n); ++t) {
      std::size_t pi = rows, pj = n;
      for (std::size_t i = t; i < rows && pi == rows; ++i)
        for (std::size_t j = t; j < n; ++j)
          if (c[i][j] != 0) {
            pi = i;
            pj = j;
            break;
          }
      if (pi == rows) break;
      std::swap(c[t], c[pi]);
      std::swap(b[t], b[pi]);
      col_swap(c, t, pj);
      col_swap(v, t, pj);
      // Clear row t and column t. Exact multiples are removed by subtraction;
      // otherwise a unimodular gcd step strictly shrinks the pivot.
      bool dirty = true;
      while (dirty) {
        dirty = false;
        for (std::size_t i = t + 1; i < rows; ++i) {
          const long long x = c[t][t], y = c[i][t];
          if (y == 0) continue;
          if (y % x == 0) {
            const long long q = y / x;
            for (std::size_t j = 0; j < n; ++j) c[i][j] = mod(c[i][j] - q * c[t][j], d);
            b[i] = mod(b[i] - q * b[t], d);
            continue;
          }
          long long s, u;
          const long long g = ext_gcd(x, y, s, u);
          const long long xg = x / g, yg = y / g;
          for (std::size_t j = 0; j < n; ++j) {
            const long long rt = c[t][j], ri = c[i][j];
            c[t][j] = mod(s * rt + u * ri, d);
            c[i][j] = mod(-yg * rt + xg * ri, d);
          }
          const long long bt = b[t], bi = b[i];
          b[t] = mod(s * bt + u * bi, d);
          b[i] = mod(-yg * bt + xg * bi, d);
          dirty = true;
        }
        for (std::size_t j = t + 1; j < n; ++j) {
          const long long x = c[t][t], y = c[t][j];
          if (y == 0) continue;
          if (y % x == 0) {
            const long long q = y / x;
            for (std::size_t i = 0; i < rows; ++i) c[i][j] = mod(c[i][j] - q * c[i][t], d);
            for (std::size_t i = 0; i < n; ++i) v[i][j] = mod(v[i][j] - q * v[i][t], d);
            continue;
          }
          long long s, u;
          const long long g = ext_gcd(x, y, s, u);
          const long long xg = x / g, yg = y / g;
          for (std::size_t i = 0; i < rows; ++i) {
            const long long ct = c[i][t], cj = c[i][j];
            c[i][t] = mod(s * ct + u * cj, d);
            c[i][j] = mod(-yg * ct + xg * cj, d);
          }
          for (std::size_t i = 0; i < n; ++i) {
            const long long vt = v[i][t], vj = v[i][j];
            v[i][t] = mod(s * vt + u * vj, d);
            v[i][j] = mod(-yg * vt + xg * vj, d);
          }
          dirty = true;
        }
      }
      rank = t + 1;
    }
    // Solve c[t][t] y_t = b_t mod d; remaining rows need b = 0.
    std::vector<long long> y(n, 0);
    for (std::size_t t = 0; t < rows; ++t) {
      const long long a = t < rank ? c[t][t] : 0;
      if (a == 0) {
        if (mod(b[t], d) != 0) return std::nullopt;
        continue;
      }
      long long s, u;
      const long long g = ext_gcd(a, d, s, u);
      if (b[t] % g != 0) return std::nullopt;
      const long long dg = d / g;
      y[t] = mod(mod(s, dg) * ((b[t] / g) % dg), dg);
    }
    for (std::size_t i = 0; i < n; ++i) {
      long long x = 0;
      for (std::size_t j = 0; j < n; ++j) x = mod(x + v[i][j] * y[j], d);
      solution[i][comp] = x;
    }
  }
  std::vector<Elem> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = grp.from_coordinates(solution[i]);
  // Exact re-check guards the elimination bookkeeping.
  for (const auto& eq : equations) {
    Elem sum = 0;
    for (const auto& [var, coef] : eq.terms) sum = grp.add(sum, grp.scale(coef, out[static_cast<std::size_t>(var)]));
    if (sum != eq.constant) throw std::logic_error("solve_abelian_linear_system: internal elimination error");
  }
  return out;
}

namespace {

// Nonzero diagonal of m reduced over Z/d, after diagonalizing.
std::vector<long long> diagonal_mod(const IntMatrix& m, std::size_t cols, long long d) {
  const std::size_t rows = m.size();
  std::vector<long long> diagonal;
  {
    IntMatrix c(rows, std::vector<long long>(cols, 0));
    for (std::size_t i = 0; i < rows; ++i) {
      if (m[i].size() != cols) throw std::invalid_argument("image_size: ragged matrix");
      for (std::size_t j = 0; j < cols; ++j) c[i][j] = mod(m[i][j], d);
    }
    for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
      std::size_t pi = rows, pj = cols;
      for (std::size_t i = t; i < rows && pi == rows; ++i)
        for (std::size_t j = t; j < cols; ++j)
          if (c[i][j] != 0) {
            pi = i;
            pj = j;
            break;
          }
      if (pi == rows) break;
      std::swap(c[t], c[pi]);
      col_swap(c, t, pj);
      bool dirty = true;
      while (dirty) {
        dirty = false;
        for (std::size_t i = t + 1; i < rows; ++i) {
          const long long x = c[t][t], y = c[i][t];
          if (y == 0) continue;
          if (y % x == 0) {
            const long long q = y / x;
            for (std::size_t j = 0; j < cols; ++j) c[i][j] = mod(c[i][j] - q * c[t][j], d);
            continue;
          }
          long long s, u;
          const long long g = ext_gcd(x, y, s, u);
          const long long xg = x / g, yg = y / g;
          for (std::size_t j = 0; j < cols; ++j) {
            const long long rt = c[t][j], ri = c[i][j];
            c[t][j] = mod(s * rt + u * ri, d);
            c[i][j] = mod(-yg * rt + xg * ri, d);
          }
          dirty = true;
        }
        for (std::size_t j = t + 1; j < cols; ++j) {
          const long long x = c[t][t], y = c[t][j];
          if (y == 0) continue;
          if (y % x == 0) {
            const long long q = y / x;
            for (std::size_t i = 0; i < rows; ++i) c[i][j] = mod(c[i][j] - q * c[i][t], d);
            continue;
          }
          long long s, u;
          const long long g = ext_gcd(x, y, s, u);
          const long long xg = x / g, yg = y / g;
          for (std::size_t i = 0; i < rows; ++i) {
            const long long ct = c[i][t], cj = c[i][j];
            c[i][t] = mod(s * ct + u * cj, d);
            c[i][j] = mod(-yg * ct + xg * cj, d);
          }
          dirty = true;
        }
      }
      diagonal.push_back(c[t][t]);
    }
  }
  return diagonal;
}

std::size_t columns_of(const IntMatrix& m, std::size_t cols) {
  if (m.empty()) return cols;
  if (cols != m[0].size()) throw std::invalid_argument("kernel_size: column count mismatch");
  return cols;
}

}  // namespace

std::size_t image_size(const FiniteAbelianGroup& grp, const IntMatrix& m) {
  const std::size_t cols = m.empty() ? 0 : m[0].size();
  std::size_t size = 1;
  for (long long d : grp.invariant_factors())
    for (long long e : diagonal_mod(m, cols, d)) size *= static_cast<std::size_t>(d / std::gcd(d, e));
  return size;
}

std::size_t kernel_size(const FiniteAbelianGroup& grp, const IntMatrix& m, std::size_t cols) {
  cols = columns_of(m, cols);
  std::size_t size = 1;
  const auto times = [&size](long long f) {
    if (size > (std::size_t{1} << 62) / static_cast<std::size_t>(f))
      throw std::length_error("kernel_size: kernel exceeds 2^62 elements");
    size *= static_cast<std::size_t>(f);
  };
  for (long long d : grp.invariant_factors()) {
    const auto diagonal = diagonal_mod(m, cols, d);
    for (long long e : diagonal) times(std::gcd(d, e));
    for (std::size_t j = diagonal.size(); j < cols; ++j) times(d);
  }
  return size;
}

}  // namespace nilspace
