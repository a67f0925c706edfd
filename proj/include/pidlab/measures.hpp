#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "pidlab/dist.hpp"
#include "pidlab/opt.hpp"

namespace pidlab {

// All measures read variables 0, 1, 2 of the input as S, Y, Z.
enum class MeasureId { Min, Mmi, Red, Broja, Dep, Ig, CapWedge, UiConstruction };

std::string_view to_string(MeasureId id);
MeasureId parse_measure(std::string_view name);
// Every measure that needs nothing beyond P.
const std::vector<MeasureId>& catalogue();

struct PidResult {
  MeasureId measure = MeasureId::Mmi;
  std::string tag;
  double si = 0.0;
  double ui_y = 0.0;
  double ui_z = 0.0;
  double ci = 0.0;
  std::vector<SolveReport> diagnostics;
  std::vector<std::pair<std::string, double>> extras;
};

struct SharedAnchor {
  double si;
};
struct UniqueAnchor {
  double ui_y;
  double ui_z;
};
struct SynergyAnchor {
  double ci;
};
using Anchor = std::variant<SharedAnchor, UniqueAnchor, SynergyAnchor>;

struct BaseInformation {
  double i_sy;
  double i_sz;
  double i_syz;
  double i_sy_given_z;
  double i_sz_given_y;

  static BaseInformation of(const JointDist& p);
};

PidResult complete_decomposition(const JointDist& p, const Anchor& anchor, MeasureId id, double tol = 1e-7);

struct SpecificInfo {
  std::size_t outcome;
  double value;
};

// Specific information I(S=s; target) for the S-symbol labelled s.
SpecificInfo specific_information(const JointDist& p, const std::string& s, const std::string& target);

struct ProjectionValue {
  double value;
  SolveReport report;
};

ProjectionValue i_searrow(const JointDist& p, const std::string& from, const std::string& onto,
                          const Tolerances& tol = {});

PidResult si_min(const JointDist& p);
PidResult si_mmi(const JointDist& p);
PidResult si_red(const JointDist& p, const Tolerances& tol = {});
PidResult ui_broja(const JointDist& p, const Tolerances& tol = {});
PidResult ui_dep(const JointDist& p, const Tolerances& tol = {});
PidResult decomp_ig(const JointDist& p, const Tolerances& tol = {});

// P^(t)(s,y,z) = P(y,z) P(s|y)^t P(s|z)^(1-t) / c_t; needs full support.
JointDist ig_member(const JointDist& p, double t);

struct GacsKorner {
  double common_information;
  std::size_t components;
  // component id per symbol of a and of b; -1 outside the support
  std::vector<int> a_component;
  std::vector<int> b_component;
};

GacsKorner gacs_korner_common(const JointDist& p, const std::string& a, const std::string& b);
PidResult si_cap_wedge(const JointDist& p);
PidResult ui_construction(const JointDist& p, double delta_y, double delta_z, std::string tag = {});

PidResult compute_measure(MeasureId id, const JointDist& p, const Tolerances& tol = {});

// (S,Y,Z) -> (S,Z,Y)
JointDist swap_sources(const JointDist& p);

}  // namespace pidlab
