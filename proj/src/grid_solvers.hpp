#pragma once

// Backends for solve_grid. Both assume a validated problem with
// ||c||_2 > eps and fill `b` (length N) and the iteration fields of `report`.

#include <vector>

#include "qsr/decode.hpp"
#include "qsr/fourier_grid.hpp"

namespace qsr::detail {

double norm1(std::span<const Complex> v);
double norm2(std::span<const Complex> v);

/// b <- projection of b onto {||F b - c||_2 <= eps}; returns ||F b - c||_2
/// before projecting.
double project_to_ball(FourierGrid& grid, std::span<const Complex> c, double eps,
                       std::vector<Complex>& b);

void solve_douglas_rachford(const TvMinProblem& problem, FourierGrid& grid,
                            std::vector<Complex>& b, SolverReport& report);

void solve_barrier(const TvMinProblem& problem, FourierGrid& grid,
                   std::vector<Complex>& b, SolverReport& report);

}  // namespace qsr::detail
