#include <cmath>
#include <limits>

#include "pidlab/opt.hpp"

namespace pidlab {

Tolerances Tolerances::from_gap(double g) {
  if (!(g > 0.0) || !std::isfinite(g)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
  Tolerances t;
  t.gap = g;
  t.residual = g / 10.0;
  t.scalar = g / 10.0;
  return t;
}

namespace {

double eval(const std::function<double(double)>& f, double t) {
  double v = f(t);
  if (std::isnan(v) || v == -std::numeric_limits<double>::infinity()) {
    throw Error(ErrorCode::BracketFailure, "objective not finite at t=" + std::to_string(t));
  }
  return v;
}

}  // namespace

ScalarResult minimize_scalar_convex(const std::function<double(double)>& f, Interval bracket_init, double tol,
                                    int max_expand) {
  if (!(bracket_init.lo < bracket_init.hi)) throw Error(ErrorCode::InvalidArgument, "empty initial bracket");
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");

  double lo = bracket_init.lo, hi = bracket_init.hi;
  double mid = 0.5 * (lo + hi);
  double flo = eval(f, lo), fhi = eval(f, hi), fmid = eval(f, mid);
  int expansions = 0;
  std::size_t evals = 3;
  while (!(fmid <= flo && fmid <= fhi)) {
    if (flo < fmid && fhi < fmid) throw Error(ErrorCode::BracketFailure, "objective is not convex on the bracket");
    if (expansions == max_expand) {
      throw Error(ErrorCode::BracketFailure, "no enclosing bracket after " + std::to_string(max_expand) + " expansions");
    }
    const double w = hi - lo;
    if (flo < fmid) {
      hi = mid;
      fhi = fmid;
      lo = hi - 3.0 * w;
      flo = eval(f, lo);
    } else {
      lo = mid;
      flo = fmid;
      hi = lo + 3.0 * w;
      fhi = eval(f, hi);
    }
    mid = 0.5 * (lo + hi);
    fmid = eval(f, mid);
    evals += 2;
    ++expansions;
  }

  ScalarResult res;
  res.report.engine = "brent";
  res.report.tolerance_used = tol;

  const double flat_eps = 1e-15 * std::max(1.0, std::abs(fmid));
  if (std::abs(flo - fmid) <= flat_eps && std::abs(fhi - fmid) <= flat_eps) {
    res.argmin = mid;
    res.value = fmid;
    res.report.iterations = evals;
    res.report.objective = fmid;
    res.report.certificate = 0.0;
    res.report.converged = true;
    return res;
  }

  // Brent's localmin on [lo, hi] seeded with the interior point mid.
  const double cgold = 0.3819660112501051;
  double a = lo, b = hi;
  double x = mid, w = mid, v = mid;
  double fx = fmid, fw = fmid, fv = fmid;
  double d = 0.0, e = 0.0;
  for (int it = 0; it < 500; ++it) {
    const double xm = 0.5 * (a + b);
    const double tol1 = std::max(tol / 4.0, 4.0 * std::numeric_limits<double>::epsilon() * std::abs(x));
    const double tol2 = 2.0 * tol1;
    if (std::abs(x - xm) <= tol2 - 0.5 * (b - a)) break;
    bool golden = true;
    if (std::abs(e) > tol1) {
      double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      const double etemp = e;
      e = d;
      if (std::abs(p) < std::abs(0.5 * q * etemp) && p > q * (a - x) && p < q * (b - x)) {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = xm - x >= 0 ? tol1 : -tol1;
        golden = false;
      }
    }
    if (golden) {
      e = (x >= xm) ? a - x : b - x;
      d = cgold * e;
    }
    const double u = std::abs(d) >= tol1 ? x + d : x + (d >= 0 ? tol1 : -tol1);
    const double fu = eval(f, u);
    ++evals;
    if (fu <= fx) {
      if (u >= x) a = x; else b = x;
      v = w; fv = fw;
      w = x; fw = fx;
      x = u; fx = fu;
    } else {
      if (u < x) a = u; else b = u;
      if (fu <= fw || w == x) {
        v = w; fv = fw;
        w = u; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
  }

  res.argmin = x;
  res.value = fx;
  res.report.iterations = evals;
  res.report.objective = fx;
  res.report.certificate = b - a;
  res.report.converged = b - a <= tol;
  return res;
}

}  // namespace pidlab
