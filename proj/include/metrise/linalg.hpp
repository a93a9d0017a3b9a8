#pragma once

#include <vector>

#include "metrise/poly.hpp"

namespace metrise {

using RatMatrix = std::vector<std::vector<Rat>>;
using IntMatrix = std::vector<std::vector<Int>>;
using PolyMatrix = std::vector<std::vector<Poly>>;

/// Reduced row echelon form in place; returns pivot columns.
std::vector<int> rref(RatMatrix& m);

int rank(RatMatrix m);

/// Fraction-free (Bareiss) elimination rank over the integers.
int bareiss_rank(IntMatrix m);

/// Nullspace basis of an m x n rational matrix (deterministic order: one
/// basis vector per free column, unit in that column).
std::vector<std::vector<Rat>> kernel_basis(const RatMatrix& m, int ncols);

/// Determinant of a square polynomial matrix by fraction-free elimination
/// (Bareiss); every division performed is exact.
Poly poly_det(PolyMatrix m);

} // namespace metrise
