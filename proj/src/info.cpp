#include "pidlab/info.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace pidlab {

namespace {

void check_disjoint(const std::vector<const Names*>& groups) {
  std::set<std::string> seen;
  for (const Names* g : groups) {
    for (const auto& n : *g) {
      if (!seen.insert(n).second) throw Error(ErrorCode::OverlappingGroups, "variable '" + n + "' in two groups");
    }
  }
}

Names join(const Names& a, const Names& b) {
  Names out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace

double entropy(std::span<const double> p) {
  double h = 0.0;
  for (double x : p) {
    if (x > 0.0) h -= x * std::log2(x);
  }
  return h;
}

double entropy(const JointDist& p) { return entropy(p.mass()); }

double entropy(const JointDist& p, const Names& vars) {
  if (vars.empty()) return 0.0;
  return entropy(marginal(p, vars).mass());
}

double mutual_information(const JointDist& p, const Names& a, const Names& b) {
  return conditional_mutual_information(p, a, b, {});
}

double conditional_mutual_information(const JointDist& p, const Names& a, const Names& b, const Names& c) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::InvalidArgument, "information groups must be nonempty");
  check_disjoint({&a, &b, &c});
  for (const Names* g : {&a, &b, &c}) {
    for (const auto& n : *g) p.index_of(n);
  }
  const Names ac = join(a, c), bc = join(b, c), abc = join(ac, b);
  return entropy(p, ac) + entropy(p, bc) - entropy(p, abc) - entropy(p, c);
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw Error(ErrorCode::ShapeMismatch, "kl_divergence needs equal lengths");
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) return kDivergenceInfinite;
    d += p[i] * std::log2(p[i] / q[i]);
  }
  return std::max(d, 0.0);
}

double kl_divergence(const JointDist& p, const JointDist& q) {
  if (!p.same_shape(q)) throw Error(ErrorCode::ShapeMismatch, "kl_divergence needs equal shapes");
  return kl_divergence(p.mass(), q.mass());
}

}  // namespace pidlab
