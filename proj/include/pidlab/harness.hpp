#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "pidlab/measures.hpp"
#include "pidlab/parallel.hpp"

namespace pidlab {

struct RedDiscontinuity {
  double a;
};
struct GkDiscontinuity {
  double eps;
};
struct XorGate {};
struct AndGate {};
struct CopyGate {};
struct UnqGate {};
struct RdnGate {};
struct DirichletRandom {
  std::vector<std::size_t> shape{2, 2, 2};
  double alpha = 1.0;
  std::uint64_t seed = 0;
};

using FamilySpec =
    std::variant<RedDiscontinuity, GkDiscontinuity, XorGate, AndGate, CopyGate, UnqGate, RdnGate, DirichletRandom>;

JointDist generate(const FamilySpec& spec);
std::string describe(const FamilySpec& spec);
// Names as used on the command line: red-discontinuity, gk-discontinuity, xor, and, copy, unq, rdn,
// dirichlet-random. Parameters: a, eps, shape (e.g. "2x2x2"), alpha, seed.
FamilySpec parse_family(const std::string& name, const std::map<std::string, std::string>& params);

// splitmix64 of base + trial
std::uint64_t trial_seed(std::uint64_t base, std::size_t trial);

struct Residuals {
  double total;  // si + ui_y + ui_z + ci - I(S;YZ)
  double y;      // si + ui_y - I(S;Y)
  double z;      // si + ui_z - I(S;Z)

  double max_abs() const;
};

Residuals consistency_check(const JointDist& p, const PidResult& r);

enum class Component { Si, UiY, UiZ, Ci };
std::string_view to_string(Component c);

struct DefectReport {
  MeasureId measure;
  Component component;
  double defect;
  std::string inputs;
};

std::vector<DefectReport> additivity_defect(MeasureId id, const JointDist& p1, const JointDist& p2,
                                            const Tolerances& tol = {}, const std::string& inputs = {});
std::vector<DefectReport> iid_additivity_check(MeasureId id, const JointDist& p, const Tolerances& tol = {},
                                               const std::string& inputs = {});
double defect_of(const std::vector<DefectReport>& reports, Component c);

enum class Verdict { Continuous, Discontinuous, Inconclusive };
std::string_view to_string(Verdict v);

struct ContinuityProbe {
  std::vector<double> a_values;
  std::vector<double> si_values;
  double limit_estimate;
  double boundary_value;
  double jump;  // limit_estimate - boundary_value
  double richardson;
  Verdict verdict;
};

std::vector<double> default_probe_sequence();
ContinuityProbe continuity_probe(MeasureId id, const std::function<FamilySpec(double)>& curve,
                                 const std::vector<double>& a_sequence = default_probe_sequence(),
                                 const Tolerances& tol = {});

struct LockingReport {
  double lhs;
  double rhs;
  double slack;
};

// Expects variables named S, Y, Z, U.
LockingReport locking_check(const JointDist& p4, const Tolerances& tol = {});

struct BoundSweep {
  double worst;
  MeasureId measure;
  std::size_t trial;
};

BoundSweep mmi_bound_sweep(const std::vector<MeasureId>& measures, const DirichletRandom& ensemble,
                           std::size_t trials, std::uint64_t seed, Execution exec = Execution::Parallel,
                           const Tolerances& tol = {});

// Independent multistart search over the one free coordinate of each s-slice of a 2x2x2 Delta_P.
double broja_oracle(const JointDist& p, std::size_t starts, std::uint64_t seed);

}  // namespace pidlab
