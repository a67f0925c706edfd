#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pidlab/measures.hpp"
#include "pidlab/suites.hpp"

namespace pidlab {

// DistFile (JSON):
//   {"variables": ["S","Y","Z"],
//    "alphabets": {"S": ["0","1"], ...},
//    "entries":   [[["0","1","1"], "1/4"], ...]}
// Absent states have probability zero. Probabilities are decimal strings, numbers or fractions "a/b".
JointDist parse_dist(const std::string& text);
std::string format_dist(const JointDist& p);
JointDist read_dist_file(const std::string& path);

double parse_probability(const std::string& s);
// 17 significant digits, enough to read back the same double
std::string format_probability(double x);

// Picks target and the two sources out of p, in the order (S,Y,Z); other variables are summed out.
JointDist apply_roles(const JointDist& p, const std::string& target, const std::vector<std::string>& sources);

std::uint64_t fnv1a64(const std::string& bytes);

struct ReportContext {
  std::string input_digest;
  Tolerances tol;
};

std::string compute_report(const ReportContext& ctx, const std::string& target, const std::vector<std::string>& sources,
                           const JointDist& p, const std::vector<PidResult>& results);
std::string verify_report(const Tolerances& tol, const SuiteReport& suite);
std::string ui_construction_report(const ReportContext& ctx, const JointDist& p, const PidResult& result,
                                   double delta_y, double delta_z);

std::string read_text(const std::string& path);
// Writes next to path and renames into place.
void write_text_atomic(const std::string& path, const std::string& text);

}  // namespace pidlab
