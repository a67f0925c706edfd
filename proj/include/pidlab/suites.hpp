#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pidlab/harness.hpp"

namespace pidlab {

enum class Comparator { AtMost, AtLeast, Report };
std::string_view to_string(Comparator c);

struct PropertyResult {
  std::string name;
  bool passed = true;
  double value = 0.0;
  double threshold = 0.0;
  Comparator comparator = Comparator::Report;
  std::string detail;
};

// value <= threshold / value >= threshold / always passes
PropertyResult check(std::string name, double value, Comparator cmp, double threshold, std::string detail = {});

struct SuiteReport {
  std::string suite;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<PropertyResult> properties;

  bool passed() const;
  const PropertyResult& property(const std::string& name) const;
};

// consistency, additivity, iid, continuity, locking, mmi-bound, oracle
const std::vector<std::string>& suite_names();

// trials == 0 picks the suite's default count.
SuiteReport run_suite(const std::string& name, std::size_t trials, std::uint64_t seed, const Tolerances& tol = {},
                      Execution exec = Execution::Parallel);

struct WitnessPair {
  MeasureId measure;
  std::uint64_t seed_a;
  std::uint64_t seed_b;
};

// Dirichlet(1) 2x2x2 seed pairs whose si defect is at least 1e-3.
const std::vector<WitnessPair>& superadditivity_witnesses();
// Dirichlet(1) 2x2x2 seed whose I_min iid defect is at least 1e-3.
std::uint64_t iid_min_witness();

// Full-support Dirichlet(1) draw with every cell above floor; redraws on later seeds if needed.
JointDist full_support_draw(std::vector<std::size_t> shape, std::uint64_t seed, double floor = 1e-5);
// P plus a random zero-sum direction of L1 norm eps.
JointDist perturb(const JointDist& p, double eps, std::uint64_t seed);
// S with |S| labels, Y and Z with two support blocks of two symbols each.
JointDist block_draw(std::uint64_t seed);

}  // namespace pidlab
