#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "pidlab/opt.hpp"

namespace pidlab {

namespace {

double objective(const std::vector<double>& p, const std::vector<double>& q) {
  double f = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) f += p[i] * std::log2(p[i] / q[i]);
  }
  return f;
}

// Derivative of gamma -> D(p || q + gamma*dq), in nats.
double slope(const std::vector<double>& p, const std::vector<double>& q, const std::vector<double>& dq, double g) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    const double qi = q[i] + g * dq[i];
    if (qi <= 0.0) return std::numeric_limits<double>::infinity();
    s -= p[i] * dq[i] / qi;
  }
  return s;
}

}  // namespace

MixtureResult fw_kl_mixture(const std::vector<double>& target, const std::vector<std::vector<double>>& atoms,
                            double tol, std::size_t max_iter, const IterationObserver& observer) {
  if (atoms.empty()) throw Error(ErrorCode::InvalidArgument, "fw_kl_mixture needs at least one atom");
  const std::size_t n = target.size(), k = atoms.size();
  for (const auto& a : atoms) {
    if (a.size() != n) throw Error(ErrorCode::ShapeMismatch, "atom and target dimensions differ");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (target[i] <= 0.0) continue;
    bool covered = std::any_of(atoms.begin(), atoms.end(), [&](const auto& a) { return a[i] > 0.0; });
    if (!covered) throw Error(ErrorCode::InfeasibleSupport, "target support not covered by atoms");
  }

  std::vector<double> w(k, 1.0 / static_cast<double>(k));
  std::vector<double> q(n, 0.0), grad(k), d(k), dq(n);
  auto mix = [&] {
    std::fill(q.begin(), q.end(), 0.0);
    for (std::size_t j = 0; j < k; ++j) {
      if (w[j] == 0.0) continue;
      for (std::size_t i = 0; i < n; ++i) q[i] += w[j] * atoms[j][i];
    }
  };

  MixtureResult res;
  res.report.engine = "away-step-fw";
  res.report.tolerance_used = tol;
  mix();
  double gap = std::numeric_limits<double>::infinity();
  std::size_t it = 0;
  for (;; ++it) {
    for (std::size_t j = 0; j < k; ++j) {
      double g = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (target[i] > 0.0) g -= target[i] * atoms[j][i] / q[i];
      }
      grad[j] = g / std::numbers::ln2;
    }
    double wg = 0.0;
    std::size_t fw = 0, away = k;
    for (std::size_t j = 0; j < k; ++j) {
      wg += w[j] * grad[j];
      if (grad[j] < grad[fw]) fw = j;
      if (w[j] > 0.0 && (away == k || grad[j] > grad[away])) away = j;
    }
    gap = wg - grad[fw];
    if (observer) observer(it, objective(target, q), gap);
    if (gap <= tol || it >= max_iter) break;

    double gmax;
    if (gap >= grad[away] - wg) {
      for (std::size_t j = 0; j < k; ++j) d[j] = -w[j];
      d[fw] += 1.0;
      gmax = 1.0;
    } else {
      for (std::size_t j = 0; j < k; ++j) d[j] = w[j];
      d[away] -= 1.0;
      gmax = w[away] < 1.0 ? w[away] / (1.0 - w[away]) : 1e10;
    }
    std::fill(dq.begin(), dq.end(), 0.0);
    for (std::size_t j = 0; j < k; ++j) {
      if (d[j] == 0.0) continue;
      for (std::size_t i = 0; i < n; ++i) dq[i] += d[j] * atoms[j][i];
    }
    // exact line search: the objective is convex along the segment, bisect on its slope
    double step;
    if (slope(target, q, dq, gmax) <= 0.0) {
      step = gmax;
    } else {
      double lo = 0.0, hi = gmax;
      for (int b = 0; b < 100 && hi - lo > 1e-17 * gmax; ++b) {
        const double m = 0.5 * (lo + hi);
        if (slope(target, q, dq, m) < 0.0) lo = m; else hi = m;
      }
      step = 0.5 * (lo + hi);
    }
    double total = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      w[j] += step * d[j];
      if (w[j] < 1e-18) w[j] = 0.0;
      total += w[j];
    }
    for (double& x : w) x /= total;
    mix();
  }

  res.report.iterations = it;
  res.report.objective = objective(target, q);
  res.report.certificate = std::max(gap, 0.0);
  res.report.converged = gap <= tol;
  res.weights = std::move(w);
  res.mixture = std::move(q);
  return res;
}

}  // namespace pidlab
