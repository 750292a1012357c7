#pragma once

// Integer linear algebra over finite abelian groups.

#include <optional>
#include <vector>

#include "nilspace/group.hpp"

namespace nilspace {

using IntMatrix = std::vector<std::vector<long long>>;

struct SmithForm {
  IntMatrix u;         // rows x rows, unimodular
  IntMatrix v;         // cols x cols, unimodular
  std::vector<long long> diagonal;  // d_1 | d_2 | ..., length min(rows, cols)
};

// u * a * v = diag(diagonal). Entries must stay within 64 bits; intended for
// small matrices such as relation matrices of finite abelian groups.
SmithForm smith_normal_form(const IntMatrix& a);

struct LinearEquation {
  std::vector<std::pair<int, long long>> terms;  // (unknown, integer coefficient)
  Elem constant = 0;                             // element of A
};

// Finds x in A^unknowns with sum_j c_j x_j = constant for every equation, or
// nullopt if no solution exists. Exact: each cyclic factor Z/d of A is
// solved by diagonalizing the coefficient matrix over Z/d.
std::optional<std::vector<Elem>> solve_abelian_linear_system(const FiniteAbelianGroup& a, int unknowns,
                                                             const std::vector<LinearEquation>& equations);

// |{M x : x in A^cols}| for an integer matrix M acting on A^cols. Computed per
// cyclic factor Z/d by diagonalizing M over Z/d.
std::size_t image_size(const FiniteAbelianGroup& a, const IntMatrix& m);
// |{x in A^cols : M x = 0}|; cols is given separately so M may have no rows.
std::size_t kernel_size(const FiniteAbelianGroup& a, const IntMatrix& m, std::size_t cols);

}  // namespace nilspace
