#pragma once

#include <limits>
#include <span>

#include "pidlab/dist.hpp"

namespace pidlab {

// Returned by kl_divergence when supp(p) is not inside supp(q).
inline constexpr double kDivergenceInfinite = std::numeric_limits<double>::infinity();

double entropy(const JointDist& p, const Names& vars);
double entropy(const JointDist& p);
double entropy(std::span<const double> p);
double mutual_information(const JointDist& p, const Names& a, const Names& b);
double conditional_mutual_information(const JointDist& p, const Names& a, const Names& b,
                                      const Names& c);

double kl_divergence(std::span<const double> p, std::span<const double> q);
double kl_divergence(const JointDist& p, const JointDist& q);

}  // namespace pidlab
