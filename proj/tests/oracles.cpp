#include "oracles.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace oracle {

namespace {

double xlog(double num, double den) { return num > 0.0 ? num * std::log2(num / den) : 0.0; }

}  // namespace

Cube from(const pidlab::JointDist& p) {
  Cube c{p.dim(0), p.dim(1), p.dim(2), p.mass()};
  return c;
}

pidlab::JointDist to_dist(const Cube& c) {
  using pidlab::Alphabet;
  return pidlab::JointDist({{"S", Alphabet::range(c.ns)}, {"Y", Alphabet::range(c.ny)}, {"Z", Alphabet::range(c.nz)}},
                           c.m);
}

Cube make(std::size_t ns, std::size_t ny, std::size_t nz, std::vector<double> m) { return {ns, ny, nz, std::move(m)}; }

double binary_entropy(double p) {
  double h = 0.0;
  for (double q : {p, 1.0 - p}) {
    if (q > 0.0) h -= q * std::log2(q);
  }
  return h;
}

double entropy(const std::vector<double>& p) {
  double h = 0.0;
  for (double q : p) {
    if (q > 0.0) h -= q * std::log2(q);
  }
  return h;
}

namespace {

struct Margins {
  std::vector<double> s, y, z, sy, sz, yz;
};

Margins margins(const Cube& c) {
  Margins g{std::vector<double>(c.ns), std::vector<double>(c.ny), std::vector<double>(c.nz),
            std::vector<double>(c.ns * c.ny), std::vector<double>(c.ns * c.nz), std::vector<double>(c.ny * c.nz)};
  for (std::size_t s = 0; s < c.ns; ++s) {
    for (std::size_t y = 0; y < c.ny; ++y) {
      for (std::size_t z = 0; z < c.nz; ++z) {
        const double v = c(s, y, z);
        g.s[s] += v;
        g.y[y] += v;
        g.z[z] += v;
        g.sy[s * c.ny + y] += v;
        g.sz[s * c.nz + z] += v;
        g.yz[y * c.nz + z] += v;
      }
    }
  }
  return g;
}

}  // namespace

double i_sy(const Cube& c) {
  const Margins g = margins(c);
  double t = 0.0;
  for (std::size_t s = 0; s < c.ns; ++s) {
    for (std::size_t y = 0; y < c.ny; ++y) t += xlog(g.sy[s * c.ny + y], g.s[s] * g.y[y]);
  }
  return t;
}

double i_sz(const Cube& c) {
  const Margins g = margins(c);
  double t = 0.0;
  for (std::size_t s = 0; s < c.ns; ++s) {
    for (std::size_t z = 0; z < c.nz; ++z) t += xlog(g.sz[s * c.nz + z], g.s[s] * g.z[z]);
  }
  return t;
}

double i_syz(const Cube& c) {
  const Margins g = margins(c);
  double t = 0.0;
  for (std::size_t s = 0; s < c.ns; ++s) {
    for (std::size_t y = 0; y < c.ny; ++y) {
      for (std::size_t z = 0; z < c.nz; ++z) t += xlog(c(s, y, z), g.s[s] * g.yz[y * c.nz + z]);
    }
  }
  return t;
}

double i_sy_given_z(const Cube& c) {
  const Margins g = margins(c);
  double t = 0.0;
  for (std::size_t s = 0; s < c.ns; ++s) {
    for (std::size_t y = 0; y < c.ny; ++y) {
      for (std::size_t z = 0; z < c.nz; ++z) {
        const double v = c(s, y, z);
        if (v > 0.0) t += v * std::log2(v * g.z[z] / (g.sz[s * c.nz + z] * g.yz[y * c.nz + z]));
      }
    }
  }
  return t;
}

double i_sz_given_y(const Cube& c) {
  const Margins g = margins(c);
  double t = 0.0;
  for (std::size_t s = 0; s < c.ns; ++s) {
    for (std::size_t y = 0; y < c.ny; ++y) {
      for (std::size_t z = 0; z < c.nz; ++z) {
        const double v = c(s, y, z);
        if (v > 0.0) t += v * std::log2(v * g.y[y] / (g.sy[s * c.ny + y] * g.yz[y * c.nz + z]));
      }
    }
  }
  return t;
}

double kl(const std::vector<double>& p, const std::vector<double>& q) {
  double t = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) return std::numeric_limits<double>::infinity();
    t += p[i] * std::log2(p[i] / q[i]);
  }
  return t;
}

Cube markov_chain(const Cube& c) {
  const Margins g = margins(c);
  Cube out = c;
  for (std::size_t s = 0; s < c.ns; ++s) {
    for (std::size_t y = 0; y < c.ny; ++y) {
      for (std::size_t z = 0; z < c.nz; ++z) {
        out.at(s, y, z) = g.s[s] > 0.0 ? g.sy[s * c.ny + y] * g.sz[s * c.nz + z] / g.s[s] : 0.0;
      }
    }
  }
  return out;
}

Cube ig_member(const Cube& c, double t) {
  const Margins g = margins(c);
  Cube out = c;
  double total = 0.0;
  for (std::size_t s = 0; s < c.ns; ++s) {
    for (std::size_t y = 0; y < c.ny; ++y) {
      for (std::size_t z = 0; z < c.nz; ++z) {
        const double sy = g.sy[s * c.ny + y] / g.y[y], sz = g.sz[s * c.nz + z] / g.z[z];
        const double v = g.yz[y * c.nz + z] * std::pow(sy, t) * std::pow(sz, 1.0 - t);
        out.at(s, y, z) = v;
        total += v;
      }
    }
  }
  for (auto& v : out.m) v /= total;
  return out;
}

double ig_divergence(const Cube& c, double t) { return kl(c.m, ig_member(c, t).m); }

ArgMin grid_argmin(const std::function<double(double)>& f, double lo, double hi, double step) {
  ArgMin best{lo, f(lo)};
  const auto n = static_cast<long>(std::llround((hi - lo) / step));
  for (long i = 1; i <= n; ++i) {
    const double x = lo + static_cast<double>(i) * step;
    const double v = f(x);
    if (v < best.value) best = {x, v};
  }
  return best;
}

ArgMin golden(const std::function<double(double)>& f, double lo, double hi, double tol) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
  double fc = f(c), fd = f(d);
  while (hi - lo > tol) {
    if (fc <= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - g * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + g * (hi - lo);
      fd = f(d);
    }
  }
  ArgMin best{0.5 * (lo + hi), f(0.5 * (lo + hi))};
  for (double x : {lo, hi}) {
    const double v = f(x);
    if (v < best.value) best = {x, v};
  }
  return best;
}

double specific_information(const Cube& c, std::size_t s, bool onto_y) {
  const Margins g = margins(c);
  const std::size_t n = onto_y ? c.ny : c.nz;
  double t = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double joint = onto_y ? g.sy[s * c.ny + k] : g.sz[s * c.nz + k];
    const double other = onto_y ? g.y[k] : g.z[k];
    if (joint <= 0.0) continue;
    // P(k|s) log P(s|k)/P(s)
    t += joint / g.s[s] * std::log2(joint / other / g.s[s]);
  }
  return t;
}

double si_min(const Cube& c) {
  const Margins g = margins(c);
  double t = 0.0;
  for (std::size_t s = 0; s < c.ns; ++s) {
    if (g.s[s] <= 0.0) continue;
    t += g.s[s] * std::min(specific_information(c, s, true), specific_information(c, s, false));
  }
  return t;
}

ArgMin segment_projection(const std::vector<double>& target, const std::vector<double>& a0,
                          const std::vector<double>& a1) {
  auto f = [&](double w) {
    std::vector<double> q(target.size());
    for (std::size_t i = 0; i < q.size(); ++i) q[i] = w * a0[i] + (1.0 - w) * a1[i];
    return kl(target, q);
  };
  const ArgMin coarse = grid_argmin(f, 0.0, 1.0, 1e-3);
  return golden(f, std::max(0.0, coarse.x - 1e-3), std::min(1.0, coarse.x + 1e-3));
}

Cube dirichlet(std::size_t ns, std::size_t ny, std::size_t nz, unsigned seed, double floor) {
  std::minstd_rand rng(seed + 1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    Cube c{ns, ny, nz, std::vector<double>(ns * ny * nz)};
    double total = 0.0;
    for (auto& v : c.m) {
      v = -std::log(1.0 - u(rng));
      total += v;
    }
    bool ok = true;
    for (auto& v : c.m) {
      v /= total;
      ok = ok && v > floor;
    }
    if (ok) return c;
  }
}

Cube red_family(double a) {
  // P(s,y), P(s,z) tables; S in {0,1}, Y and Z in {0,1,2}
  const double sy[2][3] = {{0.0, 0.25, 0.25}, {a / 2.0, 0.5 - a / 2.0, 0.0}};
  const double sz[2][3] = {{a / 2.0, 0.5 - a / 2.0, 0.0}, {0.0, 0.25, 0.25}};
  Cube c{2, 3, 3, std::vector<double>(18)};
  for (std::size_t s = 0; s < 2; ++s) {
    for (std::size_t y = 0; y < 3; ++y) {
      for (std::size_t z = 0; z < 3; ++z) c.at(s, y, z) = sy[s][y] * sz[s][z] / 0.5;
    }
  }
  return c;
}

}  // namespace oracle

namespace oracle {

double broja_2x2x2(const Cube& c, double step) {
  // slice s: Q(s,0,0) = x, Q(s,0,1) = r0 - x, Q(s,1,0) = c0 - x, Q(s,1,1) = r1 - c0 + x
  double r0[2], r1[2], c0[2], lo[2], hi[2];
  for (std::size_t s = 0; s < 2; ++s) {
    r0[s] = c(s, 0, 0) + c(s, 0, 1);
    r1[s] = c(s, 1, 0) + c(s, 1, 1);
    c0[s] = c(s, 0, 0) + c(s, 1, 0);
    lo[s] = std::max(0.0, c0[s] - r1[s]);
    hi[s] = std::min(r0[s], c0[s]);
  }
  auto value = [&](double x0, double x1) {
    Cube q{2, 2, 2, std::vector<double>(8)};
    const double x[2] = {x0, x1};
    for (std::size_t s = 0; s < 2; ++s) {
      q.at(s, 0, 0) = x[s];
      q.at(s, 0, 1) = std::max(0.0, r0[s] - x[s]);
      q.at(s, 1, 0) = std::max(0.0, c0[s] - x[s]);
      q.at(s, 1, 1) = std::max(0.0, r1[s] - c0[s] + x[s]);
    }
    return i_sy_given_z(q);
  };
  double bx[2] = {lo[0], lo[1]}, best = value(lo[0], lo[1]);
  const auto n0 = static_cast<long>(std::ceil((hi[0] - lo[0]) / step));
  const auto n1 = static_cast<long>(std::ceil((hi[1] - lo[1]) / step));
  for (long i = 0; i <= n0; ++i) {
    const double x0 = std::min(hi[0], lo[0] + static_cast<double>(i) * step);
    for (long j = 0; j <= n1; ++j) {
      const double x1 = std::min(hi[1], lo[1] + static_cast<double>(j) * step);
      const double v = value(x0, x1);
      if (v < best) {
        best = v;
        bx[0] = x0;
        bx[1] = x1;
      }
    }
  }
  for (int cycle = 0; cycle < 500; ++cycle) {
    const double before = best;
    if (hi[0] > lo[0]) bx[0] = golden([&](double t) { return value(t, bx[1]); }, lo[0], hi[0]).x;
    if (hi[1] > lo[1]) bx[1] = golden([&](double t) { return value(bx[0], t); }, lo[1], hi[1]).x;
    best = std::min(best, value(bx[0], bx[1]));
    if (before - best < 1e-15) break;
  }
  return best;
}

}  // namespace oracle
