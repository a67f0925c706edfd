#include <algorithm>
#include <cmath>
#include <numbers>

#include "pidlab/info.hpp"
#include "pidlab/measures.hpp"

namespace pidlab {

namespace {

void require_triple(const JointDist& p) {
  if (p.arity() != 3) throw Error(ErrorCode::ShapeMismatch, "expected a distribution over (S,Y,Z)");
}

void require_converged(const SolveReport& r, std::string_view what) {
  if (!r.converged) {
    throw Error(ErrorCode::MaxIterExceeded, std::string(what) + " did not converge (" + r.engine + ", certificate " +
                                                std::to_string(r.certificate) + " after " +
                                                std::to_string(r.iterations) + " iterations)");
  }
}

}  // namespace

ProjectionValue i_searrow(const JointDist& p, const std::string& from, const std::string& onto, const Tolerances& tol) {
  const std::string& s = p.name(0);
  const Channel rows = conditional(p, s, from);
  const Channel hull = conditional(p, s, onto);
  const JointDist prior = marginal(p, {s});
  ProjectionValue out{0.0, {}};
  out.report.engine = "away-step-fw";
  out.report.tolerance_used = tol.gap;
  out.report.converged = true;
  for (std::size_t k = 0; k < rows.rows.size(); ++k) {
    const auto& row = rows.rows[k];
    MixtureResult proj = fw_kl_mixture(row, hull.rows, tol.gap, tol.max_iter);
    out.value += rows.given_mass[k] * (kl_divergence(row, prior.mass()) - proj.report.objective);
    out.report.iterations += proj.report.iterations;
    out.report.certificate = std::max(out.report.certificate, proj.report.certificate);
    out.report.converged = out.report.converged && proj.report.converged;
  }
  out.report.objective = out.value;
  return out;
}

PidResult si_red(const JointDist& p, const Tolerances& tol) {
  require_triple(p);
  const ProjectionValue a = i_searrow(p, p.name(1), p.name(2), tol);
  const ProjectionValue b = i_searrow(p, p.name(2), p.name(1), tol);
  require_converged(a.report, "I_S(Y->Z) projection");
  require_converged(b.report, "I_S(Z->Y) projection");
  const bool y_side = a.value <= b.value;
  PidResult r = complete_decomposition(p, SharedAnchor{y_side ? a.value : b.value}, MeasureId::Red);
  r.diagnostics = {a.report, b.report};
  r.extras.emplace_back("i_searrow_y", a.value);
  r.extras.emplace_back("i_searrow_z", b.value);
  return r;
}

PidResult ui_broja(const JointDist& p, const Tolerances& tol) {
  require_triple(p);
  const DeltaPolytope poly = DeltaPolytope::of(p);
  const CmiResult y = minimize_cmi_over_delta(poly, tol.gap, tol.max_iter);
  const CmiResult z = minimize_cmi_over_delta(poly.swapped(), tol.gap, tol.max_iter);
  require_converged(y.report, "UI(S;Y\\Z) program");
  require_converged(z.report, "UI(S;Z\\Y) program");
  PidResult r = complete_decomposition(p, UniqueAnchor{y.report.objective, z.report.objective}, MeasureId::Broja);
  r.diagnostics = {y.report, z.report};
  return r;
}

PidResult ui_dep(const JointDist& p, const Tolerances& tol) {
  require_triple(p);
  const std::string s = p.name(0), y = p.name(1), z = p.name(2);
  const JointDist sy = marginal(p, {s, y}), sz = marginal(p, {s, z}), yz = marginal(p, {y, z});
  const std::size_t ns = p.dim(0), ny = p.dim(1), nz = p.dim(2);

  std::vector<double> chain(p.size(), 0.0);
  for (std::size_t a = 0; a < ns; ++a) {
    double ps = 0.0;
    for (std::size_t b = 0; b < ny; ++b) ps += sy[a * ny + b];
    if (ps <= 0.0) continue;
    for (std::size_t b = 0; b < ny; ++b) {
      for (std::size_t c = 0; c < nz; ++c) chain[(a * ny + b) * nz + c] = sy[a * ny + b] * sz[a * nz + c] / ps;
    }
  }
  const JointDist markov = with_mass(p, std::move(chain));
  const IpfResult fit = ipf_fit(p.variables(), {sy, sz, yz}, tol.residual, tol.max_iter);
  require_converged(fit.report, "maximum-entropy fit");

  const double cy_markov = conditional_mutual_information(markov, {s}, {y}, {z});
  const double cy_fit = conditional_mutual_information(fit.q, {s}, {y}, {z});
  const bool markov_side = cy_markov <= cy_fit;
  const JointDist& chosen = markov_side ? markov : fit.q;
  const double ui_y = markov_side ? cy_markov : cy_fit;
  const double ui_z = conditional_mutual_information(chosen, {s}, {z}, {y});
  PidResult r = complete_decomposition(p, UniqueAnchor{ui_y, ui_z}, MeasureId::Dep);
  r.diagnostics = {fit.report};
  r.extras.emplace_back("candidate", markov_side ? 0.0 : 1.0);
  return r;
}

namespace {

struct IgFamily {
  std::vector<double> p, log_base, l;
  double a;  // sum P ln(P / base), nats
  double m;  // sum P L

  double log_c(double t) const {
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < p.size(); ++i) top = std::max(top, log_base[i] + t * l[i]);
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) acc += std::exp(log_base[i] + t * l[i] - top);
    return top + std::log(acc);
  }
  // D(P || P^(t)) in nats
  double divergence(double t) const { return a - t * m + log_c(t); }
  std::vector<double> member(double t) const {
    const double lc = log_c(t);
    std::vector<double> q(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) q[i] = std::exp(log_base[i] + t * l[i] - lc);
    return q;
  }
  // first and second derivative of the divergence
  std::pair<double, double> slope(double t) const {
    const auto q = member(t);
    double mean = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
      mean += q[i] * l[i];
      sq += q[i] * l[i] * l[i];
    }
    return {mean - m, std::max(0.0, sq - mean * mean)};
  }
};

IgFamily ig_family(const JointDist& p) {
  require_triple(p);
  if (!has_full_support(p)) {
    throw Error(ErrorCode::NotFullSupport, "the IG decomposition is only defined for full-support distributions");
  }
  const std::string s = p.name(0), y = p.name(1), z = p.name(2);
  const JointDist sy = marginal(p, {s, y}), sz = marginal(p, {s, z}), yz = marginal(p, {y, z});
  const JointDist py = marginal(p, {y}), pz = marginal(p, {z});
  const std::size_t ns = p.dim(0), ny = p.dim(1), nz = p.dim(2);
  IgFamily f;
  f.p = p.mass();
  f.log_base.resize(p.size());
  f.l.resize(p.size());
  f.a = 0.0;
  f.m = 0.0;
  for (std::size_t a = 0; a < ns; ++a) {
    for (std::size_t b = 0; b < ny; ++b) {
      for (std::size_t c = 0; c < nz; ++c) {
        const std::size_t i = (a * ny + b) * nz + c;
        const double s_given_y = sy[a * ny + b] / py[b];
        const double s_given_z = sz[a * nz + c] / pz[c];
        f.log_base[i] = std::log(yz[b * nz + c]) + std::log(s_given_z);
        f.l[i] = std::log(s_given_y) - std::log(s_given_z);
        f.a += f.p[i] * (std::log(f.p[i]) - f.log_base[i]);
        f.m += f.p[i] * f.l[i];
      }
    }
  }
  return f;
}

}  // namespace

JointDist ig_member(const JointDist& p, double t) { return with_mass(p, ig_family(p).member(t)); }

PidResult decomp_ig(const JointDist& p, const Tolerances& tol) {
  const IgFamily fam = ig_family(p);
  ScalarResult opt = minimize_scalar_convex([&](double t) { return fam.divergence(t) / std::numbers::ln2; },
                                            {-10.0, 10.0}, tol.scalar, 40);
  require_converged(opt.report, "IG scalar search");
  // Newton polish on the stationarity condition; function values are too flat to resolve t further
  double t = opt.argmin;
  if (opt.report.certificate > 0.0) {
    auto [g, h] = fam.slope(t);
    for (int k = 0; k < 30 && h > 0.0 && std::abs(g) > 1e-16; ++k) {
      const double cand = t - g / h;
      auto [g2, h2] = fam.slope(cand);
      if (!(std::abs(g2) < std::abs(g))) break;
      t = cand;
      g = g2;
      h = h2;
    }
  }
  const std::vector<double> star = fam.member(t);
  const std::vector<double> at0 = fam.member(0.0), at1 = fam.member(1.0);
  const BaseInformation b = BaseInformation::of(p);
  PidResult r;
  r.measure = MeasureId::Ig;
  r.ci = kl_divergence(fam.p, star);
  r.ui_y = kl_divergence(star, at0);
  r.ui_z = kl_divergence(star, at1);
  r.si = b.i_sy - r.ui_y;
  opt.report.objective = r.ci;
  r.diagnostics = {opt.report};
  r.extras.emplace_back("t_star", t);
  return r;
}

}  // namespace pidlab
