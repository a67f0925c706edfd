#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "pidlab/dist.hpp"

namespace pidlab {

struct SolveReport {
  std::string engine;
  std::size_t iterations = 0;
  double objective = 0.0;
  // duality gap, marginal residual or bracket width depending on the engine
  double certificate = 0.0;
  bool converged = false;
  double tolerance_used = 0.0;
};

struct Tolerances {
  double gap = 1e-9;
  double residual = 1e-10;
  double scalar = 1e-10;
  std::size_t max_iter = 100'000;

  // gap = g, the other two tolerances one decade tighter
  static Tolerances from_gap(double g);
};

struct Interval {
  double lo;
  double hi;
};

struct ScalarResult {
  double argmin = 0.0;
  double value = 0.0;
  SolveReport report;
};

ScalarResult minimize_scalar_convex(const std::function<double(double)>& f, Interval bracket_init = {-10.0, 10.0},
                                    double tol = 1e-10, int max_expand = 40);

struct MixtureResult {
  std::vector<double> weights;
  std::vector<double> mixture;
  SolveReport report;
};

// Called after every iteration with (iteration, objective, gap).
using IterationObserver = std::function<void(std::size_t, double, double)>;

MixtureResult fw_kl_mixture(const std::vector<double>& target, const std::vector<std::vector<double>>& atoms,
                            double tol = 1e-9, std::size_t max_iter = 100'000,
                            const IterationObserver& observer = {});

// Joint distributions over (S,Y,Z) with prescribed (S,Y) and (S,Z) marginals.
class DeltaPolytope {
 public:
  DeltaPolytope(JointDist sy, JointDist sz);
  // Uses variables 0,1,2 of p as S,Y,Z.
  static DeltaPolytope of(const JointDist& p);

  const JointDist& sy_marginal() const { return sy_; }
  const JointDist& sz_marginal() const { return sz_; }
  const std::vector<double>& s_marginal() const { return s_; }
  std::size_t ns() const { return sy_.dim(0); }
  std::size_t ny() const { return sy_.dim(1); }
  std::size_t nz() const { return sz_.dim(1); }
  std::vector<Variable> variables() const;

  // Same polytope with the roles of Y and Z exchanged.
  DeltaPolytope swapped() const { return DeltaPolytope(sz_, sy_); }
  double max_residual(const JointDist& q) const;

 private:
  JointDist sy_;
  JointDist sz_;
  std::vector<double> s_;
};

struct CmiResult {
  JointDist q;
  SolveReport report;
};

CmiResult minimize_cmi_over_delta(const DeltaPolytope& poly, double tol = 1e-9, std::size_t max_iter = 100'000);

struct IpfSweep {
  std::size_t sweep = 0;
  double residual = 0.0;
  double entropy = 0.0;
  // -sum P log2 Q_k for any P meeting the constraints; non-increasing in k.
  double cross_entropy = 0.0;
  bool restarted = false;
};

using IpfObserver = std::function<void(const IpfSweep&)>;

struct IpfResult {
  JointDist q;
  SolveReport report;
  std::size_t forced_zero_cells = 0;
};

IpfResult ipf_fit(const std::vector<Variable>& shape, const std::vector<JointDist>& constraints, double tol = 1e-10,
                  std::size_t max_iter = 100'000, const IpfObserver& observer = {});

}  // namespace pidlab
