#include "pidlab/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pidlab/error.hpp"

namespace pidlab {

namespace {

struct Tree {
  std::vector<std::vector<std::size_t>> row_cells;
  std::vector<std::vector<std::size_t>> col_cells;
};

}  // namespace

TransportSolution solve_transport(const std::vector<double>& cost, const std::vector<double>& supply,
                                  const std::vector<double>& demand) {
  const std::size_t m = supply.size(), n = demand.size();
  if (m == 0 || n == 0 || cost.size() != m * n) throw Error(ErrorCode::ShapeMismatch, "transport problem shape");
  const double s_total = std::accumulate(supply.begin(), supply.end(), 0.0);
  const double d_total = std::accumulate(demand.begin(), demand.end(), 0.0);
  if (!(s_total > 0.0) || !(d_total > 0.0)) throw Error(ErrorCode::InvalidArgument, "transport problem has no mass");

  std::vector<double> rs = supply, rd(n);
  for (std::size_t j = 0; j < n; ++j) rd[j] = demand[j] * (s_total / d_total);

  std::vector<double> x(m * n, 0.0);
  std::vector<char> basic(m * n, 0);
  std::vector<std::size_t> basis;
  basis.reserve(m + n - 1);

  // least-cost starting basis, crossing out exactly one line per allocation
  std::vector<char> row_done(m, 0), col_done(n, 0);
  std::size_t rows_left = m, cols_left = n;
  while (basis.size() < m + n - 1) {
    std::size_t best = m * n;
    for (std::size_t i = 0; i < m; ++i) {
      if (row_done[i]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (col_done[j]) continue;
        if (best == m * n || cost[i * n + j] < cost[best]) best = i * n + j;
      }
    }
    const std::size_t i = best / n, j = best % n;
    const double a = std::min(rs[i], rd[j]);
    x[best] = a;
    basic[best] = 1;
    basis.push_back(best);
    rs[i] -= a;
    rd[j] -= a;
    if (basis.size() == m + n - 1) break;
    const bool cross_row = (rs[i] <= rd[j] && rows_left > 1) || cols_left == 1;
    if (cross_row) {
      row_done[i] = 1;
      --rows_left;
    } else {
      col_done[j] = 1;
      --cols_left;
    }
  }

  double cmax = 0.0;
  for (double c : cost) cmax = std::max(cmax, std::abs(c));
  const double eps = 1e-12 * (1.0 + cmax);

  std::vector<double> u(m), v(n);
  std::vector<char> seen_r(m), seen_c(n);
  std::vector<std::size_t> parent_r(m), parent_c(n);
  const std::size_t bland_after = 20 * m * n + 100;
  std::size_t pivots = 0;
  Tree tree;

  for (;;) {
    tree.row_cells.assign(m, {});
    tree.col_cells.assign(n, {});
    for (auto c : basis) {
      tree.row_cells[c / n].push_back(c);
      tree.col_cells[c % n].push_back(c);
    }
    // potentials from u[0] = 0 over the spanning tree
    std::fill(seen_r.begin(), seen_r.end(), 0);
    std::fill(seen_c.begin(), seen_c.end(), 0);
    std::vector<std::size_t> stack_r{0}, stack_c;
    u[0] = 0.0;
    seen_r[0] = 1;
    while (!stack_r.empty() || !stack_c.empty()) {
      if (!stack_r.empty()) {
        std::size_t i = stack_r.back();
        stack_r.pop_back();
        for (auto c : tree.row_cells[i]) {
          std::size_t j = c % n;
          if (seen_c[j]) continue;
          v[j] = cost[c] - u[i];
          seen_c[j] = 1;
          stack_c.push_back(j);
        }
      } else {
        std::size_t j = stack_c.back();
        stack_c.pop_back();
        for (auto c : tree.col_cells[j]) {
          std::size_t i = c / n;
          if (seen_r[i]) continue;
          u[i] = cost[c] - v[j];
          seen_r[i] = 1;
          stack_r.push_back(i);
        }
      }
    }

    const bool bland = pivots >= bland_after;
    std::size_t enter = m * n;
    double best_rc = -eps;
    for (std::size_t c = 0; c < m * n; ++c) {
      if (basic[c]) continue;
      const double rc = cost[c] - u[c / n] - v[c % n];
      if (rc < best_rc) {
        best_rc = rc;
        enter = c;
        if (bland) break;
      }
    }
    if (enter == m * n) break;
    if (pivots > 1'000'000) throw Error(ErrorCode::MaxIterExceeded, "transportation simplex did not terminate");

    // tree path from row ei to column ej
    const std::size_t ei = enter / n, ej = enter % n;
    std::fill(seen_r.begin(), seen_r.end(), 0);
    std::fill(seen_c.begin(), seen_c.end(), 0);
    stack_r.assign(1, ei);
    stack_c.clear();
    seen_r[ei] = 1;
    while (!seen_c[ej]) {
      if (!stack_r.empty()) {
        std::size_t i = stack_r.back();
        stack_r.pop_back();
        for (auto c : tree.row_cells[i]) {
          std::size_t j = c % n;
          if (seen_c[j]) continue;
          seen_c[j] = 1;
          parent_c[j] = c;
          stack_c.push_back(j);
        }
      } else {
        std::size_t j = stack_c.back();
        stack_c.pop_back();
        for (auto c : tree.col_cells[j]) {
          std::size_t i = c / n;
          if (seen_r[i]) continue;
          seen_r[i] = 1;
          parent_r[i] = c;
          stack_r.push_back(i);
        }
      }
    }
    // walk back from column ej; edges alternate minus, plus, ...
    std::vector<std::size_t> minus, plus;
    bool at_col = true;
    std::size_t node = ej;
    bool sign_minus = true;
    while (at_col || node != ei) {
      const std::size_t c = at_col ? parent_c[node] : parent_r[node];
      (sign_minus ? minus : plus).push_back(c);
      sign_minus = !sign_minus;
      node = at_col ? c / n : c % n;
      at_col = !at_col;
    }
    std::size_t leave = minus.front();
    for (auto c : minus) {
      if (x[c] < x[leave] || (x[c] == x[leave] && c < leave)) leave = c;
    }
    const double theta = x[leave];
    for (auto c : minus) x[c] -= theta;
    for (auto c : plus) x[c] += theta;
    x[enter] = theta;
    x[leave] = 0.0;
    basic[leave] = 0;
    basic[enter] = 1;
    *std::find(basis.begin(), basis.end(), leave) = enter;
    ++pivots;
  }

  TransportSolution sol;
  for (double& xi : x) xi = std::max(xi, 0.0);
  sol.cost = 0.0;
  for (std::size_t c = 0; c < m * n; ++c) sol.cost += cost[c] * x[c];
  sol.plan = std::move(x);
  sol.u = std::move(u);
  sol.v = std::move(v);
  sol.pivots = pivots;
  return sol;
}

}  // namespace pidlab
