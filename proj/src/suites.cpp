#include "pidlab/suites.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "pidlab/info.hpp"

namespace pidlab {

std::string_view to_string(Comparator c) {
  switch (c) {
    case Comparator::AtMost: return "<=";
    case Comparator::AtLeast: return ">=";
    case Comparator::Report: return "report";
  }
  return "?";
}

PropertyResult check(std::string name, double value, Comparator cmp, double threshold, std::string detail) {
  PropertyResult r{std::move(name), true, value, threshold, cmp, std::move(detail)};
  if (cmp == Comparator::AtMost) r.passed = value <= threshold;
  if (cmp == Comparator::AtLeast) r.passed = value >= threshold;
  return r;
}

bool SuiteReport::passed() const {
  return std::all_of(properties.begin(), properties.end(), [](const PropertyResult& p) { return p.passed; });
}

const PropertyResult& SuiteReport::property(const std::string& name) const {
  for (const auto& p : properties) {
    if (p.name == name) return p;
  }
  throw Error(ErrorCode::InvalidArgument, "no property '" + name + "' in suite " + suite);
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"consistency", "additivity", "iid",    "continuity",
                                              "locking",     "mmi-bound",  "oracle"};
  return names;
}

const std::vector<WitnessPair>& superadditivity_witnesses() {
  // pinned from a seeded search over Dirichlet(1) seeds 1..30
  static const std::vector<WitnessPair> pairs{
      {MeasureId::Min, 9, 13}, {MeasureId::Mmi, 9, 13}, {MeasureId::Red, 13, 14},
      {MeasureId::Dep, 14, 17}, {MeasureId::Ig, 9, 13},
  };
  return pairs;
}

std::uint64_t iid_min_witness() { return 155; }

namespace {

JointDist dirichlet(std::vector<std::size_t> shape, std::uint64_t seed) {
  DirichletRandom d;
  d.shape = std::move(shape);
  d.seed = seed;
  return generate(d);
}

JointDist seeded(std::uint64_t seed) { return dirichlet({2, 2, 2}, seed); }

std::string name_of(MeasureId id) { return std::string(to_string(id)); }

std::string at_trial(std::size_t trial, std::uint64_t seed) {
  return "worst at trial " + std::to_string(trial) + " (seed " + std::to_string(seed) + ")";
}

double max_abs_defect(const std::vector<DefectReport>& r) {
  double m = 0.0;
  for (const auto& d : r) m = std::max(m, std::abs(d.defect));
  return m;
}

double binary_entropy(double p) { return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p); }

// worst value over trials, remembering where
struct Extreme {
  double value;
  std::size_t trial = 0;
  bool maximum = true;

  void offer(double v, std::size_t t) {
    if (maximum ? v > value : v < value) {
      value = v;
      trial = t;
    }
  }
};

Extreme largest() { return {-std::numeric_limits<double>::infinity(), 0, true}; }
Extreme smallest() { return {std::numeric_limits<double>::infinity(), 0, false}; }

SuiteReport consistency_suite(std::size_t trials, std::uint64_t seed, const Tolerances& tol, Execution exec) {
  const auto& ids = catalogue();
  struct Row {
    std::vector<double> residual, floor;
  };
  auto rows = run_trials<Row>(
      trials,
      [&](std::size_t t) {
        const JointDist p = dirichlet(t % 2 == 0 ? std::vector<std::size_t>{2, 2, 2} : std::vector<std::size_t>{3, 3, 3},
                                      trial_seed(seed, t));
        Row row;
        for (auto id : ids) {
          const PidResult r = compute_measure(id, p, tol);
          row.residual.push_back(consistency_check(p, r).max_abs());
          row.floor.push_back(std::min({r.si, r.ui_y, r.ui_z, r.ci}));
        }
        return row;
      },
      exec);
  SuiteReport rep{"consistency", trials, seed, {}};
  for (std::size_t k = 0; k < ids.size(); ++k) {
    Extreme res = largest(), low = smallest();
    for (std::size_t t = 0; t < rows.size(); ++t) {
      res.offer(rows[t].residual[k], t);
      low.offer(rows[t].floor[k], t);
    }
    rep.properties.push_back(check("consistency." + name_of(ids[k]) + ".residual", res.value, Comparator::AtMost,
                                   1e-7, at_trial(res.trial, trial_seed(seed, res.trial))));
    rep.properties.push_back(check("consistency." + name_of(ids[k]) + ".min_component", low.value,
                                   Comparator::AtLeast, -1e-7, at_trial(low.trial, trial_seed(seed, low.trial))));
  }
  return rep;
}

SuiteReport oracle_suite(std::size_t trials, std::uint64_t seed, const Tolerances& tol, Execution exec) {
  auto diffs = run_trials<double>(
      trials,
      [&](std::size_t t) {
        const JointDist p = seeded(trial_seed(seed, t));
        const CmiResult engine = minimize_cmi_over_delta(DeltaPolytope::of(p), tol.gap, tol.max_iter);
        if (!engine.report.converged) throw Error(ErrorCode::MaxIterExceeded, "unique-information program did not converge");
        return std::abs(engine.report.objective - broja_oracle(p, 4, trial_seed(seed ^ 0x5eedULL, t)));
      },
      exec);
  Extreme worst = largest();
  for (std::size_t t = 0; t < diffs.size(); ++t) worst.offer(diffs[t], t);
  SuiteReport rep{"oracle", trials, seed, {}};
  rep.properties.push_back(check("oracle.engine_vs_oracle", trials ? worst.value : 0.0, Comparator::AtMost, 1e-4,
                                 at_trial(worst.trial, trial_seed(seed, worst.trial))));

  const PidResult a = ui_broja(generate(AndGate{}), tol);
  const double and_si = binary_entropy(0.25) - 0.5;
  rep.properties.push_back(check("oracle.and.ui", std::max(std::abs(a.ui_y), std::abs(a.ui_z)), Comparator::AtMost, 1e-4));
  rep.properties.push_back(check("oracle.and.si", std::abs(a.si - and_si), Comparator::AtMost, 1e-4,
                                 "si = " + std::to_string(a.si)));
  rep.properties.push_back(check("oracle.and.ci", std::abs(a.ci - 0.5), Comparator::AtMost, 1e-4,
                                 "ci = " + std::to_string(a.ci)));
  const PidResult x = ui_broja(generate(XorGate{}), tol);
  rep.properties.push_back(check("oracle.xor", std::max({std::abs(x.si), std::abs(x.ui_y), std::abs(x.ui_z), std::abs(x.ci - 1.0)}),
                                 Comparator::AtMost, 1e-6));
  return rep;
}

SuiteReport continuity_suite(std::size_t trials, std::uint64_t seed, const Tolerances& tol, Execution exec) {
  SuiteReport rep{"continuity", trials, seed, {}};

  // SI_red along the family equals I(S;Y) for a > 0
  double worst_eq = 0.0;
  for (double a : {0.5, 0.1, 1e-3, 1e-6}) {
    const JointDist p = generate(RedDiscontinuity{a});
    worst_eq = std::max(worst_eq, std::abs(si_red(p, tol).si - mutual_information(p, {"S"}, {"Y"})));
  }
  rep.properties.push_back(check("continuity.red.si_equals_isy", worst_eq, Comparator::AtMost, 1e-6,
                                 "a in {0.5, 0.1, 1e-3, 1e-6}"));
  const double boundary = 0.75 * (1.0 - binary_entropy(1.0 / 3.0)) + 0.25 * (1.0 - std::log2(1.5));
  const double limit = binary_entropy(0.25) - 0.5;
  const ContinuityProbe red = continuity_probe(MeasureId::Red, [](double a) { return RedDiscontinuity{a}; },
                                               default_probe_sequence(), tol);
  rep.properties.push_back(check("continuity.red.boundary", std::abs(red.boundary_value - boundary), Comparator::AtMost,
                                 1e-4, "si_red(P_0) = " + std::to_string(red.boundary_value)));
  rep.properties.push_back(check("continuity.red.jump", std::abs(red.jump - (limit - boundary)), Comparator::AtMost,
                                 1e-3, "jump = " + std::to_string(red.jump)));
  rep.properties.push_back(check("continuity.red.verdict", red.verdict == Verdict::Discontinuous ? 1.0 : 0.0,
                                 Comparator::AtLeast, 1.0, std::string(to_string(red.verdict))));

  // the Gacs-Korner family, S = (Y,Z)
  const double gk0 = si_cap_wedge(generate(GkDiscontinuity{0.0})).si;
  double gk_eps = 0.0;
  for (double e : {1e-2, 1e-6}) gk_eps = std::max(gk_eps, std::abs(si_cap_wedge(generate(GkDiscontinuity{e})).si));
  rep.properties.push_back(check("continuity.cap_wedge.at_zero", std::abs(gk0 - 1.0), Comparator::AtMost, 1e-12,
                                 "si = " + std::to_string(gk0)));
  rep.properties.push_back(check("continuity.cap_wedge.off_zero", gk_eps, Comparator::AtMost, 1e-12,
                                 "eps in {1e-2, 1e-6}"));
  const ContinuityProbe gk = continuity_probe(MeasureId::CapWedge, [](double e) { return GkDiscontinuity{e}; },
                                              default_probe_sequence(), tol);
  rep.properties.push_back(check("continuity.cap_wedge.verdict", gk.verdict == Verdict::Discontinuous ? 1.0 : 0.0,
                                 Comparator::AtLeast, 1.0,
                                 std::string(to_string(gk.verdict)) + ", jump = " + std::to_string(gk.jump)));

  const ContinuityProbe broja = continuity_probe(MeasureId::Broja, [](double a) { return RedDiscontinuity{a}; },
                                                 default_probe_sequence(), tol);
  rep.properties.push_back(check("continuity.broja.jump", std::abs(broja.jump), Comparator::AtMost, 1e-4,
                                 std::string(to_string(broja.verdict))));

  // small perturbations of full-support inputs
  const std::vector<MeasureId> ids{MeasureId::Min, MeasureId::Mmi, MeasureId::Red,
                                   MeasureId::Broja, MeasureId::Dep, MeasureId::Ig};
  auto moves = run_trials<std::vector<double>>(
      trials,
      [&](std::size_t t) {
        const std::vector<std::size_t> shape = t % 2 == 0 ? std::vector<std::size_t>{2, 2, 2}
                                                          : std::vector<std::size_t>{3, 3, 3};
        const JointDist p = full_support_draw(shape, trial_seed(seed, 2 * t));
        const JointDist q = perturb(p, 1e-6, trial_seed(seed, 2 * t + 1));
        std::vector<double> out;
        for (auto id : ids) {
          const PidResult a = compute_measure(id, p, tol), b = compute_measure(id, q, tol);
          out.push_back(std::max({std::abs(a.si - b.si), std::abs(a.ui_y - b.ui_y), std::abs(a.ui_z - b.ui_z),
                                  std::abs(a.ci - b.ci)}));
        }
        return out;
      },
      exec);
  for (std::size_t k = 0; k < ids.size(); ++k) {
    Extreme worst = largest();
    for (std::size_t t = 0; t < moves.size(); ++t) worst.offer(moves[t][k], t);
    rep.properties.push_back(check("continuity." + name_of(ids[k]) + ".perturbation", trials ? worst.value : 0.0,
                                   Comparator::AtMost, 1e-4, at_trial(worst.trial, trial_seed(seed, 2 * worst.trial))));
  }
  return rep;
}

SuiteReport additivity_suite(std::size_t trials, std::uint64_t seed, const Tolerances& tol, Execution exec) {
  const std::vector<MeasureId> superadditive{MeasureId::Min, MeasureId::Mmi, MeasureId::Red, MeasureId::Dep,
                                             MeasureId::Ig};
  struct Row {
    double broja = 0.0, cap_random = 0.0, cap_block = 0.0;
    std::vector<double> si;
  };
  auto rows = run_trials<Row>(
      trials,
      [&](std::size_t t) {
        const JointDist p1 = seeded(trial_seed(seed, 2 * t)), p2 = seeded(trial_seed(seed, 2 * t + 1));
        Row row;
        row.broja = max_abs_defect(additivity_defect(MeasureId::Broja, p1, p2, tol));
        row.cap_random = max_abs_defect(additivity_defect(MeasureId::CapWedge, p1, p2, tol));
        row.cap_block = max_abs_defect(additivity_defect(MeasureId::CapWedge, block_draw(trial_seed(seed, 2 * t)),
                                                         block_draw(trial_seed(seed, 2 * t + 1)), tol));
        for (auto id : superadditive) row.si.push_back(defect_of(additivity_defect(id, p1, p2, tol), Component::Si));
        return row;
      },
      exec);
  SuiteReport rep{"additivity", trials, seed, {}};
  Extreme b = largest(), cr = largest(), cb = largest();
  for (std::size_t t = 0; t < rows.size(); ++t) {
    b.offer(rows[t].broja, t);
    cr.offer(rows[t].cap_random, t);
    cb.offer(rows[t].cap_block, t);
  }
  const auto v = [&](const Extreme& e) { return trials ? e.value : 0.0; };
  rep.properties.push_back(check("additivity.broja.additive", v(b), Comparator::AtMost, 1e-6,
                                 at_trial(b.trial, trial_seed(seed, 2 * b.trial))));
  rep.properties.push_back(check("additivity.cap_wedge.additive", std::max(v(cr), v(cb)), Comparator::AtMost, 1e-6,
                                 "random pairs " + std::to_string(v(cr)) + ", block pairs " + std::to_string(v(cb))));
  for (std::size_t k = 0; k < superadditive.size(); ++k) {
    Extreme low = smallest();
    for (std::size_t t = 0; t < rows.size(); ++t) low.offer(rows[t].si[k], t);
    rep.properties.push_back(check("additivity." + name_of(superadditive[k]) + ".superadditive",
                                   trials ? low.value : 0.0, Comparator::AtLeast, -1e-7,
                                   at_trial(low.trial, trial_seed(seed, 2 * low.trial))));
  }
  for (const auto& w : superadditivity_witnesses()) {
    const double d = defect_of(additivity_defect(w.measure, seeded(w.seed_a), seeded(w.seed_b), tol), Component::Si);
    rep.properties.push_back(check("additivity." + name_of(w.measure) + ".witness", d, Comparator::AtLeast, 1e-3,
                                   "seeds " + std::to_string(w.seed_a) + "," + std::to_string(w.seed_b)));
  }

  // UI construction with delta = 0 and delta = UI_BROJA / 2 on the witness pairs
  double si_low = std::numeric_limits<double>::infinity(), ui_high = -std::numeric_limits<double>::infinity();
  for (const auto& w : superadditivity_witnesses()) {
    const JointDist p1 = seeded(w.seed_a), p2 = seeded(w.seed_b), pp = tensor_product(p1, p2);
    const PidResult b1 = ui_broja(p1, tol), b2 = ui_broja(p2, tol), bp = ui_broja(pp, tol);
    for (double f : {0.0, 0.5}) {
      const PidResult r1 = ui_construction(p1, f * b1.ui_y, f * b1.ui_z);
      const PidResult r2 = ui_construction(p2, f * b2.ui_y, f * b2.ui_z);
      const PidResult rp = ui_construction(pp, f * bp.ui_y, f * bp.ui_z);
      si_low = std::min(si_low, rp.si - r1.si - r2.si);
      ui_high = std::max({ui_high, rp.ui_y - r1.ui_y - r2.ui_y, rp.ui_z - r1.ui_z - r2.ui_z});
    }
  }
  rep.properties.push_back(check("additivity.ui_construction.si_superadditive", si_low, Comparator::AtLeast, -1e-7,
                                 "delta in {0, UI_BROJA/2} on witness pairs"));
  rep.properties.push_back(check("additivity.ui_construction.ui_subadditive", ui_high, Comparator::AtMost, 1e-7,
                                 "delta in {0, UI_BROJA/2} on witness pairs"));
  return rep;
}

SuiteReport iid_suite(std::size_t trials, std::uint64_t seed, const Tolerances& tol, Execution exec) {
  const std::vector<MeasureId> ids{MeasureId::Mmi, MeasureId::Red, MeasureId::Dep, MeasureId::Ig, MeasureId::Broja,
                                   MeasureId::Min, MeasureId::CapWedge};
  auto rows = run_trials<std::vector<double>>(
      trials,
      [&](std::size_t t) {
        const JointDist p = seeded(trial_seed(seed, t));
        std::vector<double> out;
        for (auto id : ids) out.push_back(max_abs_defect(iid_additivity_check(id, p, tol)));
        return out;
      },
      exec);
  SuiteReport rep{"iid", trials, seed, {}};
  for (std::size_t k = 0; k < ids.size(); ++k) {
    Extreme worst = largest();
    for (std::size_t t = 0; t < rows.size(); ++t) worst.offer(rows[t][k], t);
    // I_min is not iid additive and nothing is claimed for cap_wedge: report only
    const bool asserted = ids[k] != MeasureId::Min && ids[k] != MeasureId::CapWedge;
    rep.properties.push_back(check("iid." + name_of(ids[k]) + ".defect", trials ? worst.value : 0.0,
                                   asserted ? Comparator::AtMost : Comparator::Report, 1e-6,
                                   at_trial(worst.trial, trial_seed(seed, worst.trial))));
  }
  const double w = defect_of(iid_additivity_check(MeasureId::Min, seeded(iid_min_witness()), tol), Component::Si);
  rep.properties.push_back(check("iid.min.witness", w, Comparator::AtLeast, 1e-3,
                                 "seed " + std::to_string(iid_min_witness())));
  return rep;
}

JointDist with_side_variable(const JointDist& p, std::size_t nu, const std::function<std::size_t(std::size_t)>& u_of) {
  std::vector<Variable> vars = p.variables();
  vars.push_back({"U", Alphabet::range(nu)});
  std::vector<double> m(p.size() * nu, 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) m[i * nu + u_of(i)] = p[i];
  return JointDist(std::move(vars), std::move(m));
}

SuiteReport locking_suite(std::size_t trials, std::uint64_t seed, const Tolerances& tol, Execution exec) {
  auto slack = run_trials<double>(
      trials,
      [&](std::size_t t) { return locking_check(dirichlet({2, 2, 2, 2}, trial_seed(seed, t)), tol).slack; }, exec);
  Extreme low = smallest();
  for (std::size_t t = 0; t < slack.size(); ++t) low.offer(slack[t], t);
  SuiteReport rep{"locking", trials, seed, {}};
  rep.properties.push_back(check("locking.slack", trials ? low.value : 0.0, Comparator::AtLeast, -1e-6,
                                 at_trial(low.trial, trial_seed(seed, low.trial))));
  double flat = 0.0, copy_lhs = 0.0;
  for (std::size_t t = 0; t < 10; ++t) {
    const JointDist p = seeded(trial_seed(seed ^ 0x10cULL, t));
    flat = std::max(flat, std::abs(locking_check(with_side_variable(p, 1, [](std::size_t) { return 0; }), tol).slack));
    // U = Y: Y is a function of (Z,U)
    const JointDist uy = with_side_variable(p, 2, [&](std::size_t i) { return p.unravel(i)[1]; });
    copy_lhs = std::max(copy_lhs, std::abs(locking_check(uy, tol).lhs));
  }
  rep.properties.push_back(check("locking.constant_u", flat, Comparator::AtMost, 1e-9));
  rep.properties.push_back(check("locking.u_equals_y.lhs", copy_lhs, Comparator::AtMost, 1e-7));
  return rep;
}

SuiteReport mmi_bound_suite(std::size_t trials, std::uint64_t seed, const Tolerances& tol, Execution exec) {
  SuiteReport rep{"mmi-bound", trials, seed, {}};
  const BoundSweep s = mmi_bound_sweep(catalogue(), DirichletRandom{}, trials, seed, exec, tol);
  rep.properties.push_back(check("mmi-bound.worst", trials ? s.worst : 0.0, Comparator::AtMost, 1e-7,
                                 "measure " + name_of(s.measure) + ", " + at_trial(s.trial, trial_seed(seed, s.trial))));
  const JointDist copy = generate(CopyGate{});
  double top = -std::numeric_limits<double>::infinity();
  for (auto id : catalogue()) {
    if (id == MeasureId::Ig) continue;  // needs full support
    top = std::max(top, compute_measure(id, copy, tol).si);
  }
  rep.properties.push_back(check("mmi-bound.copy", top, Comparator::AtMost, 1.0 + 1e-9));
  return rep;
}

}  // namespace

JointDist full_support_draw(std::vector<std::size_t> shape, std::uint64_t seed, double floor) {
  for (std::size_t k = 0;; ++k) {
    JointDist p = dirichlet(shape, k == 0 ? seed : trial_seed(seed, k));
    if (*std::min_element(p.mass().begin(), p.mass().end()) > floor) return p;
  }
}

JointDist perturb(const JointDist& p, double eps, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::vector<double> d(p.size());
  double mean = 0.0;
  for (auto& v : d) {
    v = gauss(rng);
    mean += v;
  }
  mean /= static_cast<double>(d.size());
  double l1 = 0.0;
  for (auto& v : d) {
    v -= mean;
    l1 += std::abs(v);
  }
  std::vector<double> m(p.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    m[i] = p[i] + eps * d[i] / l1;
    if (!(m[i] > 0.0)) throw Error(ErrorCode::InvalidArgument, "perturbation leaves the simplex");
  }
  return validate(with_mass(p, std::move(m)));
}

JointDist block_draw(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::gamma_distribution<double> gamma(1.0, 1.0);
  std::vector<double> m(2 * 4 * 4, 0.0);
  double total = 0.0;
  for (std::size_t s = 0; s < 2; ++s) {
    for (std::size_t y = 0; y < 4; ++y) {
      for (std::size_t z = 0; z < 4; ++z) {
        if (y / 2 != z / 2) continue;
        m[(s * 4 + y) * 4 + z] = gamma(rng);
        total += m[(s * 4 + y) * 4 + z];
      }
    }
  }
  for (auto& v : m) v /= total;
  return validate(JointDist({{"S", Alphabet::range(2)}, {"Y", Alphabet::range(4)}, {"Z", Alphabet::range(4)}},
                            std::move(m)));
}

SuiteReport run_suite(const std::string& name, std::size_t trials, std::uint64_t seed, const Tolerances& tol,
                      Execution exec) {
  auto count = [&](std::size_t fallback) { return trials == 0 ? fallback : trials; };
  if (name == "consistency") return consistency_suite(count(500), seed, tol, exec);
  if (name == "oracle") return oracle_suite(count(200), seed, tol, exec);
  if (name == "continuity") return continuity_suite(count(100), seed, tol, exec);
  if (name == "additivity") return additivity_suite(count(100), seed, tol, exec);
  if (name == "iid") return iid_suite(count(100), seed, tol, exec);
  if (name == "locking") return locking_suite(count(200), seed, tol, exec);
  if (name == "mmi-bound") return mmi_bound_suite(count(500), seed, tol, exec);
  throw Error(ErrorCode::InvalidArgument, "unknown suite '" + name + "'");
}

}  // namespace pidlab
