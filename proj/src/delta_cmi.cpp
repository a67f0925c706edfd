#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "pidlab/info.hpp"
#include "pidlab/opt.hpp"
#include "pidlab/transport.hpp"

namespace pidlab {

DeltaPolytope::DeltaPolytope(JointDist sy, JointDist sz) : sy_(std::move(sy)), sz_(std::move(sz)) {
  if (sy_.arity() != 2 || sz_.arity() != 2) throw Error(ErrorCode::ShapeMismatch, "pair marginals must have two variables");
  if (sy_.variable(0) != sz_.variable(0)) throw Error(ErrorCode::ShapeMismatch, "pair marginals disagree on S");
  if (sy_.name(1) == sz_.name(1)) throw Error(ErrorCode::InvalidArgument, "Y and Z need distinct names");
  const std::size_t ns = sy_.dim(0), ny = sy_.dim(1), nz = sz_.dim(1);
  s_.assign(ns, 0.0);
  for (std::size_t s = 0; s < ns; ++s) {
    double a = 0.0, b = 0.0;
    for (std::size_t y = 0; y < ny; ++y) a += sy_[s * ny + y];
    for (std::size_t z = 0; z < nz; ++z) b += sz_[s * nz + z];
    if (std::abs(a - b) > 1e-12) {
      throw Error(ErrorCode::InconsistentConstraints, "pair marginals give different S marginals");
    }
    s_[s] = a;
  }
}

DeltaPolytope DeltaPolytope::of(const JointDist& p) {
  if (p.arity() != 3) throw Error(ErrorCode::ShapeMismatch, "expected a distribution over (S,Y,Z)");
  return DeltaPolytope(marginal(p, {p.name(0), p.name(1)}), marginal(p, {p.name(0), p.name(2)}));
}

std::vector<Variable> DeltaPolytope::variables() const {
  return {sy_.variable(0), sy_.variable(1), sz_.variable(1)};
}

double DeltaPolytope::max_residual(const JointDist& q) const {
  const auto vars = variables();
  double r = 0.0;
  JointDist qsy = marginal(q, {vars[0].name, vars[1].name});
  JointDist qsz = marginal(q, {vars[0].name, vars[2].name});
  for (std::size_t i = 0; i < qsy.size(); ++i) r = std::max(r, std::abs(qsy[i] - sy_[i]));
  for (std::size_t i = 0; i < qsz.size(); ++i) r = std::max(r, std::abs(qsz[i] - sz_[i]));
  return r;
}

namespace {

struct Slice {
  std::size_t s;
  std::vector<std::size_t> ys, zs;
  std::vector<double> r, c;
  std::vector<std::size_t> cell;  // |ys| x |zs|, index into the allowed-cell list
};

struct Problem {
  std::size_t ns, ny, nz;
  std::vector<std::size_t> flat;                 // allowed cell -> flat (s,y,z)
  std::vector<std::size_t> col;                  // allowed cell -> column y*nz+z
  std::vector<std::vector<std::size_t>> cols;    // column -> allowed cells
  std::vector<Slice> slices;
};

Problem build(const DeltaPolytope& poly) {
  Problem pr{poly.ns(), poly.ny(), poly.nz(), {}, {}, {}, {}};
  pr.cols.assign(pr.ny * pr.nz, {});
  const auto& sy = poly.sy_marginal();
  const auto& sz = poly.sz_marginal();
  for (std::size_t s = 0; s < pr.ns; ++s) {
    if (poly.s_marginal()[s] <= kSupportThreshold) continue;
    Slice sl;
    sl.s = s;
    for (std::size_t y = 0; y < pr.ny; ++y) {
      if (sy[s * pr.ny + y] > kSupportThreshold) {
        sl.ys.push_back(y);
        sl.r.push_back(sy[s * pr.ny + y]);
      }
    }
    for (std::size_t z = 0; z < pr.nz; ++z) {
      if (sz[s * pr.nz + z] > kSupportThreshold) {
        sl.zs.push_back(z);
        sl.c.push_back(sz[s * pr.nz + z]);
      }
    }
    if (sl.ys.empty() || sl.zs.empty()) continue;
    double rs = 0.0, cs = 0.0;
    for (double v : sl.r) rs += v;
    for (double v : sl.c) cs += v;
    for (double& v : sl.c) v *= rs / cs;
    for (std::size_t y : sl.ys) {
      for (std::size_t z : sl.zs) {
        const std::size_t id = pr.flat.size();
        pr.flat.push_back((s * pr.ny + y) * pr.nz + z);
        pr.col.push_back(y * pr.nz + z);
        pr.cols[y * pr.nz + z].push_back(id);
        sl.cell.push_back(id);
      }
    }
    pr.slices.push_back(std::move(sl));
  }
  return pr;
}

// d/da of the barrier objective at x + a d
double barrier_slope(const Problem& pr, const Eigen::VectorXd& x, const Eigen::VectorXd& d, double mu, double a) {
  const Eigen::VectorXd y = x + a * d;
  std::vector<double> col(pr.cols.size(), 0.0);
  for (Eigen::Index c = 0; c < y.size(); ++c) col[pr.col[c]] += y[c];
  double s = 0.0;
  for (Eigen::Index c = 0; c < y.size(); ++c) s += d[c] * (std::log(y[c] / col[pr.col[c]]) - mu / y[c]);
  return s;
}

struct Certificate {
  double gap;
  Eigen::VectorXd zeroed;
};

// Frank-Wolfe gap at x with columns of mass <= vanish set to zero. On such columns any h with
// sum_s 2^h_s <= 1 is a subgradient; h is tuned there from the LMO potentials.
Certificate certify(const Problem& pr, const Eigen::VectorXd& x, double vanish) {
  Certificate cert{std::numeric_limits<double>::infinity(), x};
  const std::size_t ncol = pr.cols.size();
  std::vector<double> colmass(ncol, 0.0);
  std::vector<char> vanished(ncol, 0);
  for (std::size_t k = 0; k < ncol; ++k) {
    for (auto c : pr.cols[k]) colmass[k] += x[c];
    if (!pr.cols[k].empty() && colmass[k] <= vanish) {
      vanished[k] = 1;
      for (auto c : pr.cols[k]) cert.zeroed[c] = 0.0;
    }
  }
  Eigen::VectorXd h(x.size());
  for (std::size_t k = 0; k < ncol; ++k) {
    const auto& cells = pr.cols[k];
    for (auto c : cells) {
      h[c] = vanished[k] ? -std::log2(static_cast<double>(cells.size()))
                         : std::log2(std::max(cert.zeroed[c], 1e-300) / colmass[k]);
    }
  }
  Eigen::VectorXd pot(x.size());
  const bool any_vanished = std::any_of(vanished.begin(), vanished.end(), [](char v) { return v != 0; });
  const int rounds = any_vanished ? 4 : 1;
  for (int round = 0; round < rounds; ++round) {
    double total = 0.0;
    for (const auto& sl : pr.slices) {
      const std::size_t m = sl.ys.size(), n = sl.zs.size();
      std::vector<double> cost(m * n);
      for (std::size_t i = 0; i < m * n; ++i) cost[i] = h[sl.cell[i]];
      TransportSolution lmo = solve_transport(cost, sl.r, sl.c);
      double inner = 0.0;
      for (std::size_t i = 0; i < m * n; ++i) inner += cost[i] * cert.zeroed[sl.cell[i]];
      total += inner - lmo.cost;
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) pot[sl.cell[i * n + j]] = lmo.u[i] + lmo.v[j];
      }
    }
    cert.gap = std::min(cert.gap, total);
    if (round + 1 == rounds) break;
    for (std::size_t k = 0; k < ncol; ++k) {
      if (!vanished[k]) continue;
      double acc = 0.0;
      for (auto c : pr.cols[k]) acc += std::exp2(pot[c]);
      const double lam = std::max(0.0, std::log2(acc));
      for (auto c : pr.cols[k]) h[c] = pot[c] - lam;
    }
  }
  return cert;
}

// The iterate itself, or the iterate with near-empty columns cleared, whichever certifies better.
Certificate certify(const Problem& pr, const Eigen::VectorXd& x) {
  Certificate zeroed = certify(pr, x, 1e-12);
  Certificate plain = certify(pr, x, 0.0);
  return plain.gap <= zeroed.gap ? plain : zeroed;
}

}  // namespace

CmiResult minimize_cmi_over_delta(const DeltaPolytope& poly, double tol, std::size_t max_iter) {
  const Problem pr = build(poly);
  const Eigen::Index ncells = static_cast<Eigen::Index>(pr.flat.size());

  // interior start: the product coupling in every slice
  Eigen::VectorXd x(ncells);
  std::vector<Eigen::Triplet<double>> zt;
  Eigen::Index nbasis = 0;
  for (const auto& sl : pr.slices) {
    const std::size_t m = sl.ys.size(), n = sl.zs.size();
    double mass = 0.0;
    for (double v : sl.r) mass += v;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) x[sl.cell[i * n + j]] = sl.r[i] * sl.c[j] / mass;
    }
    for (std::size_t i = 0; i + 1 < m; ++i) {
      for (std::size_t j = 0; j + 1 < n; ++j) {
        zt.emplace_back(sl.cell[i * n + j], nbasis, 1.0);
        zt.emplace_back(sl.cell[i * n + n - 1], nbasis, -1.0);
        zt.emplace_back(sl.cell[(m - 1) * n + j], nbasis, -1.0);
        zt.emplace_back(sl.cell[(m - 1) * n + n - 1], nbasis, 1.0);
        ++nbasis;
      }
    }
  }
  Eigen::SparseMatrix<double> zmat(ncells, nbasis);
  zmat.setFromTriplets(zt.begin(), zt.end());
  std::vector<Eigen::Triplet<double>> ct;
  for (Eigen::Index c = 0; c < ncells; ++c) ct.emplace_back(static_cast<Eigen::Index>(pr.col[c]), c, 1.0);
  Eigen::SparseMatrix<double> incidence(static_cast<Eigen::Index>(pr.cols.size()), ncells);
  incidence.setFromTriplets(ct.begin(), ct.end());
  const Eigen::SparseMatrix<double> mmat = incidence * zmat;

  SolveReport report;
  report.engine = "barrier-newton/fw-gap";
  report.tolerance_used = tol;
  Certificate best = certify(pr, x);
  std::size_t iters = 0;
  double mu = 1e-2;
  while (nbasis > 0 && best.gap > tol && iters < max_iter) {
    for (int k = 0; k < 100 && iters < max_iter; ++k, ++iters) {
      const Eigen::VectorXd colsum = incidence * x;
      Eigen::VectorXd g(ncells), dvec(ncells);
      for (Eigen::Index c = 0; c < ncells; ++c) {
        g[c] = std::log(x[c] / colsum[pr.col[c]]) - mu / x[c];
        dvec[c] = 1.0 / x[c] + mu / (x[c] * x[c]);
      }
      Eigen::VectorXd inv_col = colsum.cwiseInverse();
      for (Eigen::Index k2 = 0; k2 < inv_col.size(); ++k2) {
        if (!std::isfinite(inv_col[k2])) inv_col[k2] = 0.0;
      }
      const Eigen::SparseMatrix<double> zdz = zmat.transpose() * dvec.asDiagonal() * zmat;
      const Eigen::SparseMatrix<double> mxm = mmat.transpose() * inv_col.asDiagonal() * mmat;
      const Eigen::MatrixXd hr = Eigen::MatrixXd(zdz) - Eigen::MatrixXd(mxm);
      const Eigen::VectorXd gr = zmat.transpose() * g;
      // Jacobi scaling first: cell masses can span many decades
      const Eigen::VectorXd scale = hr.diagonal().cwiseAbs().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
      const Eigen::MatrixXd hs = scale.asDiagonal() * hr * scale.asDiagonal();
      const Eigen::VectorXd gs = scale.cwiseProduct(gr);
      Eigen::VectorXd p;
      Eigen::LLT<Eigen::MatrixXd> llt(hs);
      if (llt.info() == Eigen::Success) {
        p = scale.cwiseProduct(llt.solve(-gs));
      } else {
        p = scale.cwiseProduct(hs.ldlt().solve(-gs));
      }
      const double dec = -gr.dot(p);
      if (!(dec > 1e-22)) break;
      const Eigen::VectorXd d = zmat * p;
      double amax = std::numeric_limits<double>::infinity();
      for (Eigen::Index c = 0; c < ncells; ++c) {
        if (d[c] < 0.0) amax = std::min(amax, -x[c] / d[c]);
      }
      // the barrier is convex along d, so bisect on its slope; value differences drown in rounding near the optimum
      double hi = std::min(1.0, 0.99 * amax);
      double a = hi;
      if (barrier_slope(pr, x, d, mu, hi) > 0.0) {
        double lo = 0.0;
        for (int b = 0; b < 60; ++b) {
          const double mid = 0.5 * (lo + hi);
          (barrier_slope(pr, x, d, mu, mid) > 0.0 ? hi : lo) = mid;
        }
        a = lo;
      }
      if (!(a > 0.0)) break;
      x += a * d;
    }
    Certificate cert = certify(pr, x);
    if (cert.gap < best.gap) best = std::move(cert);
    if (mu < 1e-20) break;
    mu *= 0.1;
  }

  std::vector<Variable> vars = poly.variables();
  std::vector<double> mass(poly.ns() * poly.ny() * poly.nz(), 0.0);
  for (Eigen::Index c = 0; c < ncells; ++c) mass[pr.flat[c]] = best.zeroed[c];
  JointDist q(vars, std::move(mass));
  report.iterations = iters;
  report.objective = conditional_mutual_information(q, {vars[0].name}, {vars[1].name}, {vars[2].name});
  report.certificate = std::max(0.0, best.gap);
  report.converged = report.certificate <= tol;
  return {std::move(q), report};
}

}  // namespace pidlab
