#include "pidlab/harness.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "pidlab/info.hpp"

namespace pidlab {

int worker_threads() { return omp_get_max_threads(); }

double Residuals::max_abs() const { return std::max({std::abs(total), std::abs(y), std::abs(z)}); }

Residuals consistency_check(const JointDist& p, const PidResult& r) {
  const BaseInformation b = BaseInformation::of(p);
  return {r.si + r.ui_y + r.ui_z + r.ci - b.i_syz, r.si + r.ui_y - b.i_sy, r.si + r.ui_z - b.i_sz};
}

std::string_view to_string(Component c) {
  switch (c) {
    case Component::Si: return "si";
    case Component::UiY: return "ui_y";
    case Component::UiZ: return "ui_z";
    case Component::Ci: return "ci";
  }
  return "?";
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Continuous: return "CONTINUOUS";
    case Verdict::Discontinuous: return "DISCONTINUOUS";
    case Verdict::Inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

namespace {

std::vector<DefectReport> defects(MeasureId id, const PidResult& whole, const PidResult& a, const PidResult& b,
                                  const std::string& inputs) {
  return {
      {id, Component::Si, whole.si - a.si - b.si, inputs},
      {id, Component::UiY, whole.ui_y - a.ui_y - b.ui_y, inputs},
      {id, Component::UiZ, whole.ui_z - a.ui_z - b.ui_z, inputs},
      {id, Component::Ci, whole.ci - a.ci - b.ci, inputs},
  };
}

}  // namespace

std::vector<DefectReport> additivity_defect(MeasureId id, const JointDist& p1, const JointDist& p2,
                                            const Tolerances& tol, const std::string& inputs) {
  const JointDist prod = tensor_product(p1, p2);
  return defects(id, compute_measure(id, prod, tol), compute_measure(id, p1, tol), compute_measure(id, p2, tol),
                 inputs);
}

std::vector<DefectReport> iid_additivity_check(MeasureId id, const JointDist& p, const Tolerances& tol,
                                               const std::string& inputs) {
  const PidResult one = compute_measure(id, p, tol);
  return defects(id, compute_measure(id, tensor_product(p, p), tol), one, one, inputs);
}

double defect_of(const std::vector<DefectReport>& reports, Component c) {
  for (const auto& r : reports) {
    if (r.component == c) return r.defect;
  }
  throw Error(ErrorCode::InvalidArgument, "component missing from defect report");
}

std::vector<double> default_probe_sequence() { return {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}; }

ContinuityProbe continuity_probe(MeasureId id, const std::function<FamilySpec(double)>& curve,
                                 const std::vector<double>& a_sequence, const Tolerances& tol) {
  if (a_sequence.size() < 2) throw Error(ErrorCode::InvalidArgument, "probe needs at least two parameters");
  ContinuityProbe probe{};
  probe.a_values = a_sequence;
  for (double a : a_sequence) probe.si_values.push_back(compute_measure(id, generate(curve(a)), tol).si);
  probe.boundary_value = compute_measure(id, generate(curve(0.0)), tol).si;
  const std::size_t n = a_sequence.size();
  const double last = probe.si_values[n - 1], prev = probe.si_values[n - 2];
  const double an = a_sequence[n - 1], ap = a_sequence[n - 2];
  probe.limit_estimate = last;
  probe.jump = probe.limit_estimate - probe.boundary_value;
  // error linear in a: extrapolate the last two probes to a = 0
  probe.richardson = last + (last - prev) * an / (ap - an);
  const double mag = std::abs(probe.jump);
  if (mag > 0.05) {
    probe.verdict = Verdict::Discontinuous;
  } else if (mag < 1e-4 && std::abs(probe.richardson - last) < 1e-4) {
    probe.verdict = Verdict::Continuous;
  } else {
    probe.verdict = Verdict::Inconclusive;
  }
  return probe;
}

LockingReport locking_check(const JointDist& p4, const Tolerances& tol) {
  const JointDist p = reorder(p4, {"S", "Y", "Z", "U"});
  const JointDist merged = combine_variables(p, {"Z", "U"}, "ZU");
  const JointDist triple = marginal(p, {"S", "Y", "Z"});
  const CmiResult lhs = minimize_cmi_over_delta(DeltaPolytope::of(merged), tol.gap, tol.max_iter);
  const CmiResult rhs = minimize_cmi_over_delta(DeltaPolytope::of(triple), tol.gap, tol.max_iter);
  if (!lhs.report.converged || !rhs.report.converged) {
    throw Error(ErrorCode::MaxIterExceeded, "unique-information program did not converge");
  }
  LockingReport r;
  r.lhs = lhs.report.objective;
  r.rhs = rhs.report.objective - entropy(p, {"U"});
  r.slack = r.lhs - r.rhs;
  return r;
}

BoundSweep mmi_bound_sweep(const std::vector<MeasureId>& measures, const DirichletRandom& ensemble,
                           std::size_t trials, std::uint64_t seed, Execution exec, const Tolerances& tol) {
  struct Worst {
    double v = -std::numeric_limits<double>::infinity();
    MeasureId m = MeasureId::Mmi;
  };
  auto per_trial = run_trials<Worst>(
      trials,
      [&](std::size_t t) {
        DirichletRandom d = ensemble;
        d.seed = trial_seed(seed, t);
        const JointDist p = generate(d);
        const double mmi = si_mmi(p).si;
        Worst w;
        for (auto id : measures) {
          const double v = compute_measure(id, p, tol).si - mmi;
          if (v > w.v) {
            w.v = v;
            w.m = id;
          }
        }
        return w;
      },
      exec);
  BoundSweep out{-std::numeric_limits<double>::infinity(), MeasureId::Mmi, 0};
  for (std::size_t t = 0; t < per_trial.size(); ++t) {
    if (per_trial[t].v > out.worst) out = {per_trial[t].v, per_trial[t].m, t};
  }
  return out;
}

namespace {

// The 2x2x2 polytope: Q(s,0,0) = x_s, the rest of slice s follows from its row and column sums.
struct OracleSlices {
  double r0[2], r1[2], c0[2], c1[2], lo[2], hi[2];

  void fill(const double x[2], double q[8]) const {
    for (int s = 0; s < 2; ++s) {
      q[s * 4 + 0] = x[s];
      q[s * 4 + 1] = std::max(0.0, r0[s] - x[s]);
      q[s * 4 + 2] = std::max(0.0, c0[s] - x[s]);
      q[s * 4 + 3] = std::max(0.0, r1[s] - c0[s] + x[s]);
    }
  }
};

// I_Q(S;Y|Z) from its definition, cells ordered (s,y,z)
double cmi_direct(const double q[8]) {
  double qz[2] = {0, 0}, qsz[2][2] = {{0, 0}, {0, 0}}, qyz[2][2] = {{0, 0}, {0, 0}};
  for (int s = 0; s < 2; ++s) {
    for (int y = 0; y < 2; ++y) {
      for (int z = 0; z < 2; ++z) {
        const double v = q[s * 4 + y * 2 + z];
        qz[z] += v;
        qsz[s][z] += v;
        qyz[y][z] += v;
      }
    }
  }
  double total = 0.0;
  for (int s = 0; s < 2; ++s) {
    for (int y = 0; y < 2; ++y) {
      for (int z = 0; z < 2; ++z) {
        const double v = q[s * 4 + y * 2 + z];
        if (v <= 0.0) continue;
        total += v * std::log2(v * qz[z] / (qsz[s][z] * qyz[y][z]));
      }
    }
  }
  return total;
}

}  // namespace

double broja_oracle(const JointDist& p, std::size_t starts, std::uint64_t seed) {
  if (p.arity() != 3 || p.dim(0) != 2 || p.dim(1) != 2 || p.dim(2) != 2) {
    throw Error(ErrorCode::ShapeMismatch, "broja_oracle handles 2x2x2 inputs only");
  }
  OracleSlices sl{};
  for (int s = 0; s < 2; ++s) {
    auto m = [&](int y, int z) { return p[static_cast<std::size_t>(s * 4 + y * 2 + z)]; };
    sl.r0[s] = m(0, 0) + m(0, 1);
    sl.r1[s] = m(1, 0) + m(1, 1);
    sl.c0[s] = m(0, 0) + m(1, 0);
    sl.c1[s] = m(0, 1) + m(1, 1);
    sl.lo[s] = std::max(0.0, sl.r0[s] - sl.c1[s]);
    sl.hi[s] = std::max(sl.lo[s], std::min(sl.r0[s], sl.c0[s]));
  }
  auto objective = [&](const double x[2]) {
    double q[8];
    sl.fill(x, q);
    return cmi_direct(q);
  };
  // golden section on coordinate k within [a, b]
  auto refine = [&](double x[2], int k, double a, double b) {
    const double g = 0.6180339887498949;
    double c = b - g * (b - a), d = a + g * (b - a);
    double xc[2] = {x[0], x[1]}, xd[2] = {x[0], x[1]};
    xc[k] = c;
    xd[k] = d;
    double fc = objective(xc), fd = objective(xd);
    for (int it = 0; it < 200 && b - a > 1e-13; ++it) {
      if (fc <= fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - g * (b - a);
        xc[k] = c;
        fc = objective(xc);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + g * (b - a);
        xd[k] = d;
        fd = objective(xd);
      }
    }
    double cand[2] = {x[0], x[1]};
    for (double t : {a, b, 0.5 * (a + b)}) {
      cand[k] = t;
      if (objective(cand) < objective(x)) x[k] = t;
    }
  };

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t st = 0; st < std::max<std::size_t>(starts, 1); ++st) {
    double x[2];
    for (int s = 0; s < 2; ++s) {
      // first start at the product coupling, the rest uniform in the slice interval
      x[s] = st == 0 ? std::clamp(sl.r0[s] * sl.c0[s] / std::max(sl.r0[s] + sl.r1[s], 1e-300), sl.lo[s], sl.hi[s])
                     : sl.lo[s] + unit(rng) * (sl.hi[s] - sl.lo[s]);
    }
    double f = objective(x);
    for (int cycle = 0; cycle < 2000; ++cycle) {
      const double before = f;
      for (int k = 0; k < 2; ++k) {
        const double width = sl.hi[k] - sl.lo[k];
        if (width <= 0.0) continue;
        double a = sl.lo[k], b = sl.hi[k];
        if (cycle == 0) {
          // grid scan at step 1e-4, then refine around the best grid point
          const auto steps = static_cast<std::size_t>(std::ceil(width / 1e-4));
          double arg = x[k], val = objective(x), probe[2] = {x[0], x[1]};
          for (std::size_t i = 0; i <= steps; ++i) {
            probe[k] = std::min(sl.hi[k], sl.lo[k] + static_cast<double>(i) * 1e-4);
            const double v = objective(probe);
            if (v < val) {
              val = v;
              arg = probe[k];
            }
          }
          x[k] = arg;
          a = std::max(sl.lo[k], arg - 1e-4);
          b = std::min(sl.hi[k], arg + 1e-4);
        }
        refine(x, k, a, b);
      }
      f = objective(x);
      if (cycle > 0 && before - f < 1e-15) break;
    }
    best = std::min(best, f);
  }
  return best;
}

}  // namespace pidlab
