#include "pidlab/lp.hpp"

#include <algorithm>
#include <cmath>

#include "pidlab/error.hpp"

namespace pidlab {

namespace {

constexpr double kPivotEps = 1e-11;

class Tableau {
 public:
  Tableau(const std::vector<std::vector<double>>& a, const std::vector<double>& b)
      : rows_(a.size()), nvar_(a.empty() ? 0 : a[0].size()), cols_(nvar_ + rows_ + 1),
        t_((rows_ + 1) * cols_, 0.0), basis_(rows_) {
    for (std::size_t i = 0; i < rows_; ++i) {
      if (a[i].size() != nvar_) throw Error(ErrorCode::ShapeMismatch, "ragged constraint matrix");
      const double sign = b[i] < 0.0 ? -1.0 : 1.0;
      for (std::size_t j = 0; j < nvar_; ++j) at(i, j) = sign * a[i][j];
      at(i, nvar_ + i) = 1.0;
      at(i, cols_ - 1) = sign * b[i];
      basis_[i] = nvar_ + i;
    }
  }

  double& at(std::size_t i, std::size_t j) { return t_[i * cols_ + j]; }
  double at(std::size_t i, std::size_t j) const { return t_[i * cols_ + j]; }
  std::size_t rows() const { return rows_; }
  std::size_t nvar() const { return nvar_; }

  // Objective row holds reduced costs c_j - c_B B^-1 A_j for a maximization.
  void set_objective(const std::vector<double>& c) {
    for (std::size_t j = 0; j < cols_; ++j) obj(j) = j < c.size() ? c[j] : 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
      const double cb = basis_[i] < c.size() ? c[basis_[i]] : 0.0;
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j < cols_; ++j) obj(j) -= cb * at(i, j);
    }
  }

  // Bland's rule; columns with allowed[j] == false never enter. Returns the objective value.
  double maximize(const std::vector<bool>& allowed) {
    for (std::size_t guard = 0;; ++guard) {
      if (guard > 1'000'000) throw Error(ErrorCode::MaxIterExceeded, "simplex did not terminate");
      std::size_t enter = cols_;
      for (std::size_t j = 0; j + 1 < cols_; ++j) {
        if (allowed[j] && obj(j) > kPivotEps) {
          enter = j;
          break;
        }
      }
      if (enter == cols_) break;
      std::size_t leave = rows_;
      double best = 0.0;
      for (std::size_t i = 0; i < rows_; ++i) {
        const double aij = at(i, enter);
        if (aij <= kPivotEps) continue;
        const double ratio = at(i, cols_ - 1) / aij;
        if (leave == rows_ || ratio < best - 1e-15 || (ratio <= best + 1e-15 && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == rows_) throw Error(ErrorCode::InvalidArgument, "unbounded linear program");
      pivot(leave, enter);
    }
    return -obj(cols_ - 1);
  }

  void pivot(std::size_t r, std::size_t c) {
    const double p = at(r, c);
    for (std::size_t j = 0; j < cols_; ++j) at(r, j) /= p;
    for (std::size_t i = 0; i <= rows_; ++i) {
      if (i == r) continue;
      double* row = &t_[i * cols_];
      const double f = row[c];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < cols_; ++j) row[j] -= f * at(r, j);
      row[c] = 0.0;
    }
    basis_[r] = c;
  }

  std::vector<double> primal() const {
    std::vector<double> x(nvar_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
      if (basis_[i] < nvar_) x[basis_[i]] = std::max(0.0, at(i, cols_ - 1));
    }
    return x;
  }

  // Pivot basic artificials out where a structural column allows it.
  void expel_artificials() {
    for (std::size_t i = 0; i < rows_; ++i) {
      if (basis_[i] < nvar_) continue;
      for (std::size_t j = 0; j < nvar_; ++j) {
        if (std::abs(at(i, j)) > 1e-9) {
          pivot(i, j);
          break;
        }
      }
    }
  }

 private:
  double& obj(std::size_t j) { return t_[rows_ * cols_ + j]; }

  std::size_t rows_, nvar_, cols_;
  std::vector<double> t_;
  std::vector<std::size_t> basis_;
};

}  // namespace

std::optional<std::vector<bool>> maximal_support(const std::vector<std::vector<double>>& a,
                                                 const std::vector<double>& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::ShapeMismatch, "constraint rows and rhs differ");
  if (a.empty()) throw Error(ErrorCode::InvalidArgument, "no constraints");
  Tableau tab(a, b);
  const std::size_t nv = tab.nvar(), rows = tab.rows();

  double scale = 0.0;
  for (double bi : b) scale = std::max(scale, std::abs(bi));
  const double zero = 1e-12 * std::max(scale, 1e-300);

  std::vector<double> c1(nv + rows, 0.0);
  for (std::size_t i = 0; i < rows; ++i) c1[nv + i] = -1.0;
  tab.set_objective(c1);
  std::vector<bool> allowed(nv + rows, true);
  const double phase1 = tab.maximize(allowed);
  if (phase1 < -1e-9 * std::max(scale, 1.0)) return std::nullopt;
  tab.expel_artificials();
  for (std::size_t i = 0; i < rows; ++i) allowed[nv + i] = false;

  std::vector<bool> positive(nv, false);
  for (;;) {
    auto x = tab.primal();
    for (std::size_t j = 0; j < nv; ++j) {
      if (x[j] > zero) positive[j] = true;
    }
    std::vector<double> c(nv, 0.0);
    bool any_unknown = false;
    for (std::size_t j = 0; j < nv; ++j) {
      if (!positive[j]) {
        c[j] = 1.0;
        any_unknown = true;
      }
    }
    if (!any_unknown) break;
    tab.set_objective(c);
    const double best = tab.maximize(allowed);
    if (best <= zero) break;
  }
  return positive;
}

}  // namespace pidlab
