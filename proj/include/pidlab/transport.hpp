#pragma once

#include <cstddef>
#include <vector>

namespace pidlab {

// Optimal plan of a balanced transportation problem with its dual potentials:
// cost[i*n+j] - u[i] - v[j] >= 0 everywhere and == 0 on basic cells.
struct TransportSolution {
  std::vector<double> plan;
  std::vector<double> u;
  std::vector<double> v;
  double cost = 0.0;
  std::size_t pivots = 0;
};

// MODI transportation simplex. supply and demand must be nonnegative with equal sums
// (demand is rescaled to match supply exactly).
TransportSolution solve_transport(const std::vector<double>& cost, const std::vector<double>& supply,
                                  const std::vector<double>& demand);

}  // namespace pidlab
