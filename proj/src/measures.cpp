#include "pidlab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pidlab/info.hpp"

namespace pidlab {

std::string_view to_string(MeasureId id) {
  switch (id) {
    case MeasureId::Min: return "min";
    case MeasureId::Mmi: return "mmi";
    case MeasureId::Red: return "red";
    case MeasureId::Broja: return "broja";
    case MeasureId::Dep: return "dep";
    case MeasureId::Ig: return "ig";
    case MeasureId::CapWedge: return "cap_wedge";
    case MeasureId::UiConstruction: return "ui_construction";
  }
  return "unknown";
}

MeasureId parse_measure(std::string_view name) {
  for (auto id : {MeasureId::Min, MeasureId::Mmi, MeasureId::Red, MeasureId::Broja, MeasureId::Dep, MeasureId::Ig,
                  MeasureId::CapWedge, MeasureId::UiConstruction}) {
    if (to_string(id) == name) return id;
  }
  if (name == "cap-wedge") return MeasureId::CapWedge;
  if (name == "ui-construction") return MeasureId::UiConstruction;
  throw Error(ErrorCode::InvalidArgument, "unknown measure '" + std::string(name) + "'");
}

const std::vector<MeasureId>& catalogue() {
  static const std::vector<MeasureId> ids{MeasureId::Min,   MeasureId::Mmi, MeasureId::Red,     MeasureId::Broja,
                                          MeasureId::Dep,   MeasureId::Ig,  MeasureId::CapWedge};
  return ids;
}

namespace {

void require_triple(const JointDist& p) {
  if (p.arity() != 3) throw Error(ErrorCode::ShapeMismatch, "expected a distribution over (S,Y,Z)");
}

}  // namespace

BaseInformation BaseInformation::of(const JointDist& p) {
  require_triple(p);
  const std::string s = p.name(0), y = p.name(1), z = p.name(2);
  BaseInformation b{};
  const double hs = entropy(p, {s}), hy = entropy(p, {y}), hz = entropy(p, {z});
  const double hsy = entropy(p, {s, y}), hsz = entropy(p, {s, z}), hyz = entropy(p, {y, z});
  const double hsyz = entropy(p);
  b.i_sy = hs + hy - hsy;
  b.i_sz = hs + hz - hsz;
  b.i_syz = hs + hyz - hsyz;
  b.i_sy_given_z = hsz + hyz - hsyz - hz;
  b.i_sz_given_y = hsy + hyz - hsyz - hy;
  return b;
}

JointDist swap_sources(const JointDist& p) {
  require_triple(p);
  return reorder(p, {p.name(0), p.name(2), p.name(1)});
}

PidResult complete_decomposition(const JointDist& p, const Anchor& anchor, MeasureId id, double tol) {
  const BaseInformation b = BaseInformation::of(p);
  PidResult r;
  r.measure = id;
  if (const auto* a = std::get_if<SharedAnchor>(&anchor)) {
    if (!std::isfinite(a->si)) throw Error(ErrorCode::InvalidArgument, "anchor must be finite");
    r.si = a->si;
    r.ui_y = b.i_sy - r.si;
    r.ui_z = b.i_sz - r.si;
  } else if (const auto* a = std::get_if<UniqueAnchor>(&anchor)) {
    if (!std::isfinite(a->ui_y) || !std::isfinite(a->ui_z)) throw Error(ErrorCode::InvalidArgument, "anchor must be finite");
    const double violation = (b.i_sy - a->ui_y) - (b.i_sz - a->ui_z);
    if (std::abs(violation) > tol) {
      throw Error(ErrorCode::InconsistentAnchor,
                  "I(S;Y) + UI_z - I(S;Z) - UI_y = " + std::to_string(violation));
    }
    r.ui_y = a->ui_y;
    r.ui_z = a->ui_z;
    r.si = b.i_sy - r.ui_y;
  } else {
    const double ci = std::get<SynergyAnchor>(anchor).ci;
    if (!std::isfinite(ci)) throw Error(ErrorCode::InvalidArgument, "anchor must be finite");
    r.si = b.i_sy + b.i_sz - (b.i_syz - ci);
    r.ui_y = b.i_sy - r.si;
    r.ui_z = b.i_sz - r.si;
  }
  r.ci = b.i_syz - r.si - r.ui_y - r.ui_z;
  return r;
}

namespace {

// I(S=s; target) for every s, from the pair table (s, target); NaN where P(s) = 0.
std::vector<double> specific_all(const JointDist& pair) {
  const std::size_t ns = pair.dim(0), nt = pair.dim(1);
  std::vector<double> ps(ns, 0.0), pt(nt, 0.0), out(ns, std::nan(""));
  for (std::size_t s = 0; s < ns; ++s) {
    for (std::size_t t = 0; t < nt; ++t) {
      ps[s] += pair[s * nt + t];
      pt[t] += pair[s * nt + t];
    }
  }
  for (std::size_t s = 0; s < ns; ++s) {
    if (ps[s] <= kSupportThreshold) continue;
    double v = 0.0;
    for (std::size_t t = 0; t < nt; ++t) {
      const double joint = pair[s * nt + t];
      if (joint <= 0.0) continue;
      // P(y|s) log P(s|y)/P(s)
      v += (joint / ps[s]) * std::log2(joint / (pt[t] * ps[s]));
    }
    out[s] = v;
  }
  return out;
}

}  // namespace

SpecificInfo specific_information(const JointDist& p, const std::string& s, const std::string& target) {
  const std::string& sname = p.name(0);
  if (target == sname) throw Error(ErrorCode::OverlappingGroups, "target must differ from S");
  auto idx = p.variable(0).alphabet.index_of(s);
  if (!idx) throw Error(ErrorCode::InvalidArgument, "S has no symbol '" + s + "'");
  auto values = specific_all(marginal(p, {sname, target}));
  if (std::isnan(values[*idx])) throw Error(ErrorCode::ZeroProbabilityOutcome, "P(S=" + s + ") = 0");
  return {*idx, values[*idx]};
}

PidResult si_min(const JointDist& p) {
  require_triple(p);
  const JointDist sy = marginal(p, {p.name(0), p.name(1)});
  const JointDist sz = marginal(p, {p.name(0), p.name(2)});
  const auto iy = specific_all(sy), iz = specific_all(sz);
  const JointDist s = marginal(p, {p.name(0)});
  double si = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (std::isnan(iy[k])) continue;
    si += s[k] * std::min(iy[k], iz[k]);
  }
  return complete_decomposition(p, SharedAnchor{si}, MeasureId::Min);
}

PidResult si_mmi(const JointDist& p) {
  const BaseInformation b = BaseInformation::of(p);
  return complete_decomposition(p, SharedAnchor{std::min(b.i_sy, b.i_sz)}, MeasureId::Mmi);
}

GacsKorner gacs_korner_common(const JointDist& p, const std::string& a, const std::string& b) {
  const JointDist ab = marginal(p, {a, b});
  const std::size_t na = ab.dim(0), nb = ab.dim(1);
  std::vector<std::size_t> parent(na + nb);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<double> ma(na, 0.0), mb(nb, 0.0);
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < nb; ++j) {
      const double m = ab[i * nb + j];
      ma[i] += m;
      mb[j] += m;
      if (m > kSupportThreshold) {
        const std::size_t ri = find(i), rj = find(na + j);
        if (ri != rj) parent[std::max(ri, rj)] = std::min(ri, rj);
      }
    }
  }
  GacsKorner gk{0.0, 0, std::vector<int>(na, -1), std::vector<int>(nb, -1)};
  std::vector<int> id_of_root(na + nb, -1);
  std::vector<double> mass;
  auto label = [&](std::size_t node, double m) {
    const std::size_t root = find(node);
    if (id_of_root[root] < 0) {
      id_of_root[root] = static_cast<int>(mass.size());
      mass.push_back(0.0);
    }
    mass[id_of_root[root]] += m;
    return id_of_root[root];
  };
  for (std::size_t i = 0; i < na; ++i) {
    if (ma[i] > kSupportThreshold) gk.a_component[i] = label(i, ma[i]);
  }
  for (std::size_t j = 0; j < nb; ++j) {
    if (mb[j] > kSupportThreshold) gk.b_component[j] = label(na + j, 0.0);
  }
  gk.components = mass.size();
  gk.common_information = gk.components <= 1 ? 0.0 : entropy(mass);
  return gk;
}

PidResult si_cap_wedge(const JointDist& p) {
  require_triple(p);
  const GacsKorner gk = gacs_korner_common(p, p.name(1), p.name(2));
  double si = 0.0;
  if (gk.components > 1) {
    const JointDist sy = marginal(p, {p.name(0), p.name(1)});
    const std::size_t ns = sy.dim(0), ny = sy.dim(1), nq = gk.components;
    std::vector<double> sq(ns * nq, 0.0), s(ns, 0.0), q(nq, 0.0);
    for (std::size_t i = 0; i < ns; ++i) {
      for (std::size_t y = 0; y < ny; ++y) {
        const int c = gk.a_component[y];
        if (c < 0) continue;
        sq[i * nq + c] += sy[i * ny + y];
        s[i] += sy[i * ny + y];
        q[c] += sy[i * ny + y];
      }
    }
    si = entropy(s) + entropy(q) - entropy(sq);
  }
  PidResult r = complete_decomposition(p, SharedAnchor{si}, MeasureId::CapWedge);
  r.extras.emplace_back("components", static_cast<double>(gk.components));
  r.extras.emplace_back("common_information", gk.common_information);
  return r;
}

PidResult ui_construction(const JointDist& p, double delta_y, double delta_z, std::string tag) {
  const BaseInformation b = BaseInformation::of(p);
  const double slack = 1e-9;
  if (!std::isfinite(delta_y) || !std::isfinite(delta_z) || delta_y < -slack || delta_z < -slack ||
      delta_y > std::min(b.i_sy, b.i_sy_given_z) + slack || delta_z > std::min(b.i_sz, b.i_sz_given_y) + slack) {
    throw Error(ErrorCode::DeltaOutOfRange, "need 0 <= delta_y <= min{I(S;Y), I(S;Y|Z)} and likewise for delta_z");
  }
  PidResult r;
  r.measure = MeasureId::UiConstruction;
  r.tag = std::move(tag);
  r.ui_y = std::max(delta_y, delta_z + b.i_sy - b.i_sz);
  r.ui_z = std::max(delta_z, delta_y + b.i_sz - b.i_sy);
  r.si = std::min(b.i_sy - delta_y, b.i_sz - delta_z);
  r.ci = std::min(b.i_sy_given_z - delta_y, b.i_sz_given_y - delta_z);
  r.extras.emplace_back("delta_y", delta_y);
  r.extras.emplace_back("delta_z", delta_z);
  return r;
}

PidResult compute_measure(MeasureId id, const JointDist& p, const Tolerances& tol) {
  switch (id) {
    case MeasureId::Min: return si_min(p);
    case MeasureId::Mmi: return si_mmi(p);
    case MeasureId::Red: return si_red(p, tol);
    case MeasureId::Broja: return ui_broja(p, tol);
    case MeasureId::Dep: return ui_dep(p, tol);
    case MeasureId::Ig: return decomp_ig(p, tol);
    case MeasureId::CapWedge: return si_cap_wedge(p);
    case MeasureId::UiConstruction:
      throw Error(ErrorCode::InvalidArgument, "ui_construction needs delta values; call ui_construction()");
  }
  throw Error(ErrorCode::InvalidArgument, "unknown measure");
}

}  // namespace pidlab
