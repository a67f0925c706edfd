#include "pidlab/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "pidlab/harness.hpp"

#ifndef PIDLAB_VERSION
#define PIDLAB_VERSION "0.0.0"
#endif

namespace pidlab {

using Json = nlohmann::ordered_json;

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

double parse_decimal(const std::string& s) {
  if (s.empty()) parse_fail("empty number");
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !std::isfinite(v)) parse_fail("not a finite number: '" + s + "'");
  return v;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return {};
  return s.substr(a, s.find_last_not_of(" \t") - a + 1);
}

Json value(double v, double tolerance) { return Json{{"value", v}, {"tolerance", tolerance}}; }

double measure_tolerance(MeasureId id, const Tolerances& tol) {
  switch (id) {
    case MeasureId::Red:
    case MeasureId::Broja: return tol.gap;
    case MeasureId::Dep: return std::max(tol.gap, tol.residual);
    case MeasureId::Ig: return tol.scalar;
    default: return 1e-12;
  }
}

Json tolerances(const Tolerances& tol) {
  return Json{{"gap", tol.gap}, {"residual", tol.residual}, {"scalar", tol.scalar}, {"max_iter", tol.max_iter}};
}

Json header(const std::string& command) {
  return Json{{"tool", "pidlab"}, {"version", PIDLAB_VERSION}, {"command", command}};
}

Json result_json(const JointDist& p, const PidResult& r, double t) {
  Json j;
  j["measure"] = std::string(to_string(r.measure));
  if (!r.tag.empty()) j["tag"] = r.tag;
  j["values"] = Json{{"si", value(r.si, t)}, {"ui_y", value(r.ui_y, t)}, {"ui_z", value(r.ui_z, t)},
                     {"ci", value(r.ci, t)}};
  const Residuals res = consistency_check(p, r);
  j["residuals"] = Json{{"total", value(res.total, 1e-7)}, {"y", value(res.y, 1e-7)}, {"z", value(res.z, 1e-7)}};
  Json diag = Json::array();
  for (const auto& d : r.diagnostics) {
    diag.push_back(Json{{"engine", d.engine},
                        {"iterations", d.iterations},
                        {"objective", d.objective},
                        {"certificate", d.certificate},
                        {"converged", d.converged},
                        {"tolerance_used", d.tolerance_used}});
  }
  j["diagnostics"] = diag;
  Json extras = Json::object();
  for (const auto& [k, v] : r.extras) extras[k] = v;
  j["extras"] = extras;
  return j;
}

Json base_json(const JointDist& p) {
  const BaseInformation b = BaseInformation::of(p);
  return Json{{"i_sy", value(b.i_sy, 1e-12)},
              {"i_sz", value(b.i_sz, 1e-12)},
              {"i_syz", value(b.i_syz, 1e-12)},
              {"i_sy_given_z", value(b.i_sy_given_z, 1e-12)},
              {"i_sz_given_y", value(b.i_sz_given_y, 1e-12)}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace

double parse_probability(const std::string& raw) {
  const std::string s = trim(raw);
  const auto slash = s.find('/');
  if (slash == std::string::npos) return parse_decimal(s);
  const double num = parse_decimal(trim(s.substr(0, slash)));
  const double den = parse_decimal(trim(s.substr(slash + 1)));
  if (den == 0.0) parse_fail("zero denominator in '" + s + "'");
  return num / den;
}

std::string format_probability(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

JointDist parse_dist(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    parse_fail(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("variables") || !j.contains("alphabets") || !j.contains("entries")) {
    parse_fail("a distribution file needs 'variables', 'alphabets' and 'entries'");
  }
  try {
    std::vector<Variable> vars;
    for (const auto& name : j.at("variables")) {
      const std::string n = name.get<std::string>();
      if (!j.at("alphabets").contains(n)) parse_fail("no alphabet for variable '" + n + "'");
      vars.push_back({n, Alphabet(j.at("alphabets").at(n).get<std::vector<std::string>>())});
    }
    if (vars.empty()) parse_fail("no variables");
    std::size_t cells = 1;
    for (const auto& v : vars) {
      cells *= v.alphabet.size();
      if (cells > kMaxCells) throw Error(ErrorCode::TooLarge, "state space too large");
    }
    std::vector<double> mass(cells, 0.0);
    std::vector<char> seen(cells, 0);
    JointDist shape(vars, std::vector<double>(cells, 0.0));
    for (const auto& entry : j.at("entries")) {
      if (!entry.is_array() || entry.size() != 2 || !entry[0].is_array()) {
        parse_fail("each entry must be [[labels...], probability]");
      }
      if (entry[0].size() != vars.size()) parse_fail("entry has the wrong number of labels");
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < vars.size(); ++i) {
        const std::string label = entry[0][i].is_string() ? entry[0][i].get<std::string>() : entry[0][i].dump();
        const auto k = vars[i].alphabet.index_of(label);
        if (!k) parse_fail("label '" + label + "' is not in the alphabet of " + vars[i].name);
        idx.push_back(*k);
      }
      const std::size_t flat = shape.flat_index(idx);
      if (seen[flat]) parse_fail("duplicate state in entries");
      seen[flat] = 1;
      mass[flat] = entry[1].is_string() ? parse_probability(entry[1].get<std::string>())
                   : entry[1].is_number() ? entry[1].get<double>()
                                          : (parse_fail("probability must be a string or number"), 0.0);
    }
    return validate(JointDist(std::move(vars), std::move(mass)));
  } catch (const Json::exception& e) {
    parse_fail(std::string("bad distribution file: ") + e.what());
  }
}

std::string format_dist(const JointDist& p) {
  Json j;
  j["variables"] = p.names();
  Json alph = Json::object();
  for (const auto& v : p.variables()) alph[v.name] = v.alphabet.labels();
  j["alphabets"] = alph;
  Json entries = Json::array();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    Json labels = Json::array();
    const auto idx = p.unravel(i);
    for (std::size_t k = 0; k < idx.size(); ++k) labels.push_back(p.variable(k).alphabet.labels()[idx[k]]);
    entries.push_back(Json::array({labels, format_probability(p[i])}));
  }
  j["entries"] = entries;
  return dump(j);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) parse_fail("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_atomic(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write '" + path + "'");
    out << text;
    if (!out.flush()) throw Error(ErrorCode::InvalidArgument, "cannot write '" + path + "'");
  }
  std::filesystem::rename(tmp, path);
}

JointDist read_dist_file(const std::string& path) { return parse_dist(read_text(path)); }

JointDist apply_roles(const JointDist& p, const std::string& target, const std::vector<std::string>& sources) {
  if (sources.size() != 2) parse_fail("exactly two sources are needed");
  const std::set<std::string> distinct{target, sources[0], sources[1]};
  if (distinct.size() != 3) parse_fail("target and sources must be three different variables");
  for (const auto& n : distinct) {
    if (!p.has(n)) parse_fail("role variable '" + n + "' is not in the file");
  }
  return marginal(p, {target, sources[0], sources[1]});
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string compute_report(const ReportContext& ctx, const std::string& target, const std::vector<std::string>& sources,
                           const JointDist& p, const std::vector<PidResult>& results) {
  Json j = header("compute");
  j["input_digest"] = ctx.input_digest;
  j["roles"] = Json{{"target", target}, {"sources", sources}};
  j["tolerances"] = tolerances(ctx.tol);
  j["base"] = base_json(p);
  Json arr = Json::array();
  for (const auto& r : results) arr.push_back(result_json(p, r, measure_tolerance(r.measure, ctx.tol)));
  j["results"] = arr;
  return dump(j);
}

std::string ui_construction_report(const ReportContext& ctx, const JointDist& p, const PidResult& result,
                                   double delta_y, double delta_z) {
  Json j = header("ui-construction");
  j["input_digest"] = ctx.input_digest;
  j["delta"] = Json{{"y", delta_y}, {"z", delta_z}};
  j["base"] = base_json(p);
  j["results"] = Json::array({result_json(p, result, 1e-12)});
  return dump(j);
}

std::string verify_report(const Tolerances& tol, const SuiteReport& suite) {
  Json j = header("verify");
  j["suite"] = suite.suite;
  j["trials"] = suite.trials;
  j["seed"] = suite.seed;
  j["tolerances"] = tolerances(tol);
  j["passed"] = suite.passed();
  Json props = Json::array();
  for (const auto& p : suite.properties) {
    props.push_back(Json{{"name", p.name},
                         {"passed", p.passed},
                         {"value", p.value},
                         {"comparator", std::string(to_string(p.comparator))},
                         {"threshold", p.threshold},
                         {"detail", p.detail}});
  }
  j["properties"] = props;
  return dump(j);
}

}  // namespace pidlab
