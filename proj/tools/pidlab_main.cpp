#include <cstdlib>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "pidlab/io.hpp"

using namespace pidlab;

namespace {

enum Exit { kOk = 0, kUsage = 1, kParse = 2, kValidation = 3, kSolver = 4, kVerification = 5 };

int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::ParseError: return kParse;
    case ErrorCode::MaxIterExceeded:
    case ErrorCode::BracketFailure:
    case ErrorCode::InfeasibleSupport:
    case ErrorCode::InconsistentConstraints: return kSolver;
    default: return kValidation;
  }
}

Tolerances tolerances_from_env() {
  const char* env = std::getenv("PIDLAB_TOL");
  if (env == nullptr || *env == '\0') return {};
  char* end = nullptr;
  const double g = std::strtod(env, &end);
  if (*end != '\0' || !(g > 0.0) || !std::isfinite(g)) {
    throw Error(ErrorCode::ParseError, std::string("PIDLAB_TOL must be a positive number, got '") + env + "'");
  }
  return Tolerances::from_gap(g);
}

void emit(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    write_text_atomic(out, text);
  }
}

std::string digest_of(const std::string& bytes) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

std::vector<MeasureId> measures_from(const std::vector<std::string>& names) {
  if (names.empty() || (names.size() == 1 && names[0] == "all")) return catalogue();
  std::vector<MeasureId> ids;
  for (const auto& n : names) {
    const MeasureId id = parse_measure(n);
    if (id == MeasureId::UiConstruction) {
      throw Error(ErrorCode::InvalidArgument, "ui_construction needs deltas; use the ui-construction command");
    }
    ids.push_back(id);
  }
  return ids;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pidlab: bivariate partial information decompositions"};
  app.require_subcommand(1);

  std::string input, out, target = "S", family, suite;
  std::vector<std::string> sources{"Y", "Z"}, measures, params;
  std::size_t trials = 0;
  std::uint64_t seed = 1;
  double delta_y = 0.0, delta_z = 0.0;
  bool serial = false;

  auto* compute = app.add_subcommand("compute", "decompose a distribution file");
  compute->add_option("--input", input, "DistFile")->required();
  compute->add_option("--target", target, "variable playing S");
  compute->add_option("--sources", sources, "the two source variables, e.g. Y,Z")->delimiter(',')->expected(2);
  compute->add_option("--measures", measures, "comma list or 'all'")->delimiter(',');
  compute->add_option("--out", out, "report path (stdout if omitted)");

  auto* fam = app.add_subcommand("family", "write a named distribution family member");
  fam->add_option("--name", family, "red-discontinuity, gk-discontinuity, xor, and, copy, unq, rdn, dirichlet-random")
      ->required();
  fam->add_option("--param", params, "k=v, repeatable");
  fam->add_option("--out", out, "DistFile path (stdout if omitted)");

  auto* verify = app.add_subcommand("verify", "run a property suite");
  verify->add_option("--suite", suite, "property suite")->required()->check(CLI::IsMember(suite_names()));
  verify->add_option("--trials", trials, "trial count (0: suite default)");
  verify->add_option("--seed", seed, "base seed");
  verify->add_flag("--serial", serial, "run trials on one thread");
  verify->add_option("--out", out, "report path (stdout if omitted)");

  auto* uic = app.add_subcommand("ui-construction", "decomposition from given unique-information lower bounds");
  uic->add_option("--input", input, "DistFile")->required();
  uic->add_option("--target", target, "variable playing S");
  uic->add_option("--sources", sources, "the two source variables")->delimiter(',')->expected(2);
  uic->add_option("--delta-y", delta_y, "bits")->required();
  uic->add_option("--delta-z", delta_z, "bits")->required();
  uic->add_option("--out", out, "report path (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    const Tolerances tol = tolerances_from_env();
    if (*compute) {
      const std::string text = read_text(input);
      const JointDist p = apply_roles(parse_dist(text), target, sources);
      std::vector<PidResult> results;
      for (auto id : measures_from(measures)) {
        try {
          results.push_back(compute_measure(id, p, tol));
        } catch (const Error& e) {
          throw Error(e.code(), "measure " + std::string(to_string(id)) + ": " + e.what());
        }
      }
      emit(out, compute_report({digest_of(text), tol}, target, sources, p, results));
      return kOk;
    }
    if (*fam) {
      std::map<std::string, std::string> kv;
      for (const auto& item : params) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw Error(ErrorCode::ParseError, "--param expects k=v, got '" + item + "'");
        kv[item.substr(0, eq)] = item.substr(eq + 1);
      }
      emit(out, format_dist(generate(parse_family(family, kv))));
      return kOk;
    }
    if (*verify) {
      const SuiteReport rep = run_suite(suite, trials, seed, tol, serial ? Execution::Serial : Execution::Parallel);
      emit(out, verify_report(tol, rep));
      for (const auto& p : rep.properties) {
        if (!p.passed) std::cerr << "FAIL " << p.name << " = " << p.value << " (" << p.detail << ")\n";
      }
      return rep.passed() ? kOk : kVerification;
    }
    const std::string text = read_text(input);
    const JointDist p = apply_roles(parse_dist(text), target, sources);
    emit(out, ui_construction_report({digest_of(text), tol}, p, ui_construction(p, delta_y, delta_z), delta_y, delta_z));
    return kOk;
  } catch (const Error& e) {
    std::cerr << "pidlab: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "pidlab: " << e.what() << "\n";
    return kValidation;
  }
}
