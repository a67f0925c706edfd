#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "pidlab/info.hpp"
#include "pidlab/lp.hpp"
#include "pidlab/opt.hpp"

namespace pidlab {

namespace {

struct Fitted {
  std::vector<double> target;
  std::vector<std::size_t> image;  // full cell -> constraint cell
  std::vector<double> phi;         // accumulated log scaling per constraint cell
};

constexpr std::size_t kSlowSweeps = 200;
constexpr std::size_t kStallSweeps = 100;
constexpr std::size_t kMaxLpCells = 5000;

}  // namespace

IpfResult ipf_fit(const std::vector<Variable>& shape, const std::vector<JointDist>& constraints, double tol,
                  std::size_t max_iter, const IpfObserver& observer) {
  if (constraints.empty()) throw Error(ErrorCode::InvalidArgument, "ipf_fit needs at least one constraint");
  std::size_t cells = 1;
  for (const auto& v : shape) cells *= v.alphabet.size();
  JointDist frame(shape, std::vector<double>(cells, 0.0));

  std::vector<Fitted> fit;
  for (const auto& c : constraints) {
    Fitted f;
    f.target = c.mass();
    std::vector<std::size_t> pos;
    for (std::size_t k = 0; k < c.arity(); ++k) {
      const std::size_t i = frame.index_of(c.name(k));
      if (frame.variable(i).alphabet != c.variable(k).alphabet) {
        throw Error(ErrorCode::ShapeMismatch, "constraint alphabet for '" + c.name(k) + "' differs");
      }
      pos.push_back(i);
    }
    f.image.resize(cells);
    for (std::size_t flat = 0; flat < cells; ++flat) {
      std::size_t o = 0;
      for (std::size_t k = 0; k < pos.size(); ++k) o += ((flat / frame.strides()[pos[k]]) % frame.dim(pos[k])) * c.strides()[k];
      f.image[flat] = o;
    }
    f.phi.assign(c.size(), 0.0);
    fit.push_back(std::move(f));
  }
  // shared sub-marginals must agree
  for (std::size_t a = 0; a < constraints.size(); ++a) {
    for (std::size_t b = a + 1; b < constraints.size(); ++b) {
      Names shared;
      for (const auto& n : constraints[a].names()) {
        if (constraints[b].has(n)) shared.push_back(n);
      }
      if (shared.empty()) continue;
      JointDist ma = marginal(constraints[a], shared), mb = marginal(constraints[b], shared);
      for (std::size_t i = 0; i < ma.size(); ++i) {
        if (std::abs(ma[i] - mb[i]) > 1e-9) {
          throw Error(ErrorCode::InconsistentConstraints, "constraints disagree on a shared marginal");
        }
      }
    }
  }

  std::vector<char> support(cells, 1);
  for (const auto& f : fit) {
    for (std::size_t i = 0; i < cells; ++i) {
      if (f.target[f.image[i]] <= kSupportThreshold) support[i] = 0;
    }
  }

  std::vector<double> q(cells, 0.0);
  double log_base = 0.0;
  auto reset = [&] {
    const auto n = static_cast<double>(std::count(support.begin(), support.end(), 1));
    if (n == 0) throw Error(ErrorCode::InconsistentConstraints, "constraints leave no admissible cell");
    for (std::size_t i = 0; i < cells; ++i) q[i] = support[i] ? 1.0 / n : 0.0;
    log_base = -std::log(n);
    for (auto& f : fit) std::fill(f.phi.begin(), f.phi.end(), 0.0);
  };
  reset();

  auto margin = [&](const Fitted& f) {
    std::vector<double> m(f.target.size(), 0.0);
    for (std::size_t i = 0; i < cells; ++i) m[f.image[i]] += q[i];
    return m;
  };
  auto residual = [&] {
    double r = 0.0;
    for (const auto& f : fit) {
      auto m = margin(f);
      for (std::size_t a = 0; a < m.size(); ++a) r = std::max(r, std::abs(m[a] - f.target[a]));
    }
    return r;
  };

  IpfResult res{frame, {}, 0};
  res.report.engine = "ipf";
  res.report.tolerance_used = tol;
  double best = std::numeric_limits<double>::infinity();
  std::size_t last_progress = 0;
  bool support_checked = false, restarted = false;
  double r = residual();
  std::size_t sweep = 0;
  while (r > tol && sweep < max_iter) {
    ++sweep;
    for (auto& f : fit) {
      auto m = margin(f);
      std::vector<double> ratio(m.size(), 0.0);
      for (std::size_t a = 0; a < m.size(); ++a) {
        if (m[a] > 0.0 && f.target[a] > 0.0) {
          ratio[a] = f.target[a] / m[a];
          f.phi[a] += std::log(ratio[a]);
        }
      }
      for (std::size_t i = 0; i < cells; ++i) q[i] *= ratio[f.image[i]];
    }
    r = residual();

    if (observer) {
      double ce = log_base;
      for (const auto& f : fit) {
        for (std::size_t a = 0; a < f.target.size(); ++a) {
          if (f.target[a] > 0.0) ce += f.target[a] * f.phi[a];
        }
      }
      observer(IpfSweep{sweep, r, entropy(q), -ce / std::numbers::ln2, restarted});
    }
    restarted = false;

    if (r < best * (1.0 - 1e-9)) {
      best = r;
      last_progress = sweep;
    }
    const bool slow = sweep >= kSlowSweeps;
    const bool stalled = sweep - last_progress >= kStallSweeps;
    if (r > tol && (slow || stalled) && !support_checked) {
      support_checked = true;
      std::vector<std::size_t> vars;
      for (std::size_t i = 0; i < cells; ++i) {
        if (support[i]) vars.push_back(i);
      }
      if (vars.size() <= kMaxLpCells) {
        std::vector<std::vector<double>> rows;
        std::vector<double> rhs;
        for (const auto& f : fit) {
          std::vector<std::vector<double>> block(f.target.size(), std::vector<double>(vars.size(), 0.0));
          for (std::size_t j = 0; j < vars.size(); ++j) block[f.image[vars[j]]][j] = 1.0;
          for (std::size_t a = 0; a < f.target.size(); ++a) {
            if (f.target[a] <= kSupportThreshold) continue;
            rows.push_back(std::move(block[a]));
            rhs.push_back(f.target[a]);
          }
        }
        auto pos = maximal_support(rows, rhs);
        if (!pos) throw Error(ErrorCode::InconsistentConstraints, "no distribution meets all constraints");
        std::size_t forced = 0;
        for (std::size_t j = 0; j < vars.size(); ++j) {
          if (!(*pos)[j]) {
            support[vars[j]] = 0;
            ++forced;
          }
        }
        if (forced > 0) {
          res.forced_zero_cells = forced;
          reset();
          restarted = true;
          best = std::numeric_limits<double>::infinity();
          last_progress = sweep;
          r = residual();
          continue;
        }
      }
    }
    if (r > tol && stalled) {
      if (r <= 1e-13) break;  // rounding floor, tolerance below machine reach
      throw Error(ErrorCode::InconsistentConstraints,
                  "marginal residual stalled at " + std::to_string(r) + " for " + std::to_string(kStallSweeps) +
                      " sweeps");
    }
  }

  res.q = JointDist(shape, std::move(q));
  res.report.iterations = sweep;
  res.report.certificate = r;
  res.report.objective = entropy(res.q);
  res.report.converged = r <= tol;
  return res;
}

}  // namespace pidlab
