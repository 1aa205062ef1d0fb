#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "bratteli/numeric.hpp"

namespace bratteli {

/// Outcome of an exact feasibility test for M y = x, y >= 0. Exactly one of
/// `solution` (feasible) and `farkas` is set; a Farkas vector z satisfies
/// z^T M >= 0 and z^T x < 0.
struct FeasibilityResult {
  bool feasible = false;
  RatVector solution;
  RatVector farkas;
};

/// Phase-one simplex over the rationals with Bland's rule (terminates).
inline FeasibilityResult nonnegative_feasibility(const RatMatrix& m, const RatVector& x) {
  const std::size_t rows = m.size();
  if (x.size() != rows) throw DimensionMismatch("feasibility: rhs size mismatch");
  const std::size_t cols = rows == 0 ? 0 : m[0].size();
  const std::size_t width = cols + rows;  // structural + artificial columns

  std::vector<int> sign(rows, 1);
  RatMatrix t(rows, RatVector(width + 1, Rational(0)));
  for (std::size_t i = 0; i < rows; ++i) {
    if (m[i].size() != cols) throw DimensionMismatch("feasibility: ragged matrix");
    if (x[i] < 0) sign[i] = -1;
    for (std::size_t j = 0; j < cols; ++j) t[i][j] = sign[i] * m[i][j];
    t[i][cols + i] = 1;
    t[i][width] = sign[i] * x[i];
  }
  std::vector<std::size_t> basis(rows);
  for (std::size_t i = 0; i < rows; ++i) basis[i] = cols + i;

  // Reduced costs of the phase-one objective sum(artificials).
  RatVector cost(width + 1, Rational(0));
  for (std::size_t j = cols; j < width; ++j) cost[j] = 1;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j <= width; ++j) cost[j] -= t[i][j];

  for (;;) {
    std::size_t enter = width;
    for (std::size_t j = 0; j < width; ++j)
      if (cost[j] < 0) {
        enter = j;
        break;
      }
    if (enter == width) break;
    std::size_t leave = rows;
    Rational best_ratio;
    for (std::size_t i = 0; i < rows; ++i) {
      if (t[i][enter] <= 0) continue;
      Rational ratio = t[i][width] / t[i][enter];
      if (leave == rows || ratio < best_ratio ||
          (ratio == best_ratio && basis[i] < basis[leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave == rows) break;  // unbounded cannot happen in phase one
    Rational pivot = t[leave][enter];
    for (auto& v : t[leave]) v /= pivot;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == leave || t[i][enter] == 0) continue;
      Rational f = t[i][enter];
      for (std::size_t j = 0; j <= width; ++j) t[i][j] -= f * t[leave][j];
    }
    if (cost[enter] != 0) {
      Rational f = cost[enter];
      for (std::size_t j = 0; j <= width; ++j) cost[j] -= f * t[leave][j];
    }
    basis[leave] = enter;
  }

  FeasibilityResult result;
  // cost[width] holds minus the objective value.
  if (cost[width] == 0) {
    result.feasible = true;
    result.solution.assign(cols, Rational(0));
    for (std::size_t i = 0; i < rows; ++i)
      if (basis[i] < cols) result.solution[basis[i]] = t[i][width];
    return result;
  }
  result.farkas.assign(rows, Rational(0));
  for (std::size_t i = 0; i < rows; ++i) {
    Rational dual = 1 - cost[cols + i];
    result.farkas[i] = -sign[i] * dual;
  }
  return result;
}

}  // namespace bratteli
