#pragma once

#include <optional>
#include <vector>

namespace pidlab {

// For {x >= 0 : A x = b} with b >= 0, marks the coordinates that are strictly positive
// at some feasible point. Returns nullopt when the set is empty.
// Dense two-phase simplex with Bland's rule; meant for the small systems IPF meets.
std::optional<std::vector<bool>> maximal_support(const std::vector<std::vector<double>>& a,
                                                 const std::vector<double>& b);

}  // namespace pidlab
