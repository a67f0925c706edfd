#include <cmath>
#include <random>
#include <sstream>

#include "pidlab/harness.hpp"

namespace pidlab {

namespace {

Variable bit(const std::string& name) { return {name, Alphabet::range(2)}; }

Variable pair_of_bits(const std::string& name) { return {name, Alphabet({"(0,0)", "(0,1)", "(1,0)", "(1,1)"})}; }

// S computed from (y, z) over two uniform bits
JointDist gate(int (*f)(int, int), std::size_t ns) {
  std::vector<Variable> vars{ns == 2 ? bit("S") : pair_of_bits("S"), bit("Y"), bit("Z")};
  std::vector<double> m(ns * 4, 0.0);
  for (int y = 0; y < 2; ++y) {
    for (int z = 0; z < 2; ++z) m[(static_cast<std::size_t>(f(y, z)) * 2 + y) * 2 + z] += 0.25;
  }
  return JointDist(std::move(vars), std::move(m));
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

double number(const std::map<std::string, std::string>& params, const std::string& key, double fallback) {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  try {
    std::size_t used = 0;
    double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::ParameterOutOfRange, "parameter " + key + "='" + it->second + "' is not a number");
  }
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t base, std::size_t trial) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(trial) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

JointDist generate(const FamilySpec& spec) {
  if (const auto* r = std::get_if<RedDiscontinuity>(&spec)) {
    const double a = r->a;
    if (!(a >= 0.0 && a <= 1.0)) throw Error(ErrorCode::ParameterOutOfRange, "red-discontinuity needs 0 <= a <= 1");
    // pair tables P(s,y) and P(s,z); joint completed with Y and Z independent given S
    const double sy[2][3] = {{0.0, 0.25, 0.25}, {a / 2.0, 0.5 - a / 2.0, 0.0}};
    const double sz[2][3] = {{a / 2.0, 0.5 - a / 2.0, 0.0}, {0.0, 0.25, 0.25}};
    std::vector<double> m(18, 0.0);
    for (int s = 0; s < 2; ++s) {
      for (int y = 0; y < 3; ++y) {
        for (int z = 0; z < 3; ++z) m[(s * 3 + y) * 3 + z] = sy[s][y] * sz[s][z] / 0.5;
      }
    }
    return validate(JointDist({bit("S"), {"Y", Alphabet::range(3)}, {"Z", Alphabet::range(3)}}, std::move(m)));
  }
  if (const auto* g = std::get_if<GkDiscontinuity>(&spec)) {
    const double e = g->eps;
    if (!(e >= 0.0 && e <= 1.0)) throw Error(ErrorCode::ParameterOutOfRange, "gk-discontinuity needs 0 <= eps <= 1");
    const double yz[2][2] = {{(1.0 - e) / 2.0, e}, {0.0, (1.0 - e) / 2.0}};
    std::vector<double> m(16, 0.0);
    for (int y = 0; y < 2; ++y) {
      for (int z = 0; z < 2; ++z) m[((y * 2 + z) * 2 + y) * 2 + z] = yz[y][z];
    }
    return validate(JointDist({pair_of_bits("S"), bit("Y"), bit("Z")}, std::move(m)));
  }
  if (std::holds_alternative<XorGate>(spec)) return gate([](int y, int z) { return y ^ z; }, 2);
  if (std::holds_alternative<AndGate>(spec)) return gate([](int y, int z) { return y & z; }, 2);
  if (std::holds_alternative<CopyGate>(spec)) return gate([](int y, int z) { return 2 * y + z; }, 4);
  if (std::holds_alternative<RdnGate>(spec)) {
    std::vector<double> m(8, 0.0);
    m[0] = m[7] = 0.5;
    return JointDist({bit("S"), bit("Y"), bit("Z")}, std::move(m));
  }
  if (std::holds_alternative<UnqGate>(spec)) return gate([](int y, int) { return y; }, 2);

  const auto& d = std::get<DirichletRandom>(spec);
  if (d.shape.empty() || !(d.alpha > 0.0)) {
    throw Error(ErrorCode::ParameterOutOfRange, "dirichlet-random needs a nonempty shape and alpha > 0");
  }
  static const char* names[] = {"S", "Y", "Z", "U"};
  std::vector<Variable> vars;
  std::size_t cells = 1;
  for (std::size_t i = 0; i < d.shape.size(); ++i) {
    if (d.shape[i] == 0) throw Error(ErrorCode::ParameterOutOfRange, "alphabet sizes must be positive");
    vars.push_back({i < 4 ? names[i] : "X" + std::to_string(i), Alphabet::range(d.shape[i])});
    cells *= d.shape[i];
    if (cells > kMaxCells) throw Error(ErrorCode::TooLarge, "random tensor too large");
  }
  std::mt19937_64 rng(d.seed);
  std::gamma_distribution<double> gamma(d.alpha, 1.0);
  std::vector<double> m(cells);
  double total = 0.0;
  for (auto& x : m) {
    x = gamma(rng);
    total += x;
  }
  for (auto& x : m) x /= total;
  return validate(JointDist(std::move(vars), std::move(m)));
}

std::string describe(const FamilySpec& spec) {
  if (const auto* r = std::get_if<RedDiscontinuity>(&spec)) return "red-discontinuity(a=" + fmt(r->a) + ")";
  if (const auto* g = std::get_if<GkDiscontinuity>(&spec)) return "gk-discontinuity(eps=" + fmt(g->eps) + ")";
  if (std::holds_alternative<XorGate>(spec)) return "xor";
  if (std::holds_alternative<AndGate>(spec)) return "and";
  if (std::holds_alternative<CopyGate>(spec)) return "copy";
  if (std::holds_alternative<UnqGate>(spec)) return "unq";
  if (std::holds_alternative<RdnGate>(spec)) return "rdn";
  const auto& d = std::get<DirichletRandom>(spec);
  std::string shape;
  for (std::size_t i = 0; i < d.shape.size(); ++i) shape += (i ? "x" : "") + std::to_string(d.shape[i]);
  return "dirichlet-random(shape=" + shape + ",alpha=" + fmt(d.alpha) + ",seed=" + std::to_string(d.seed) + ")";
}

FamilySpec parse_family(const std::string& name, const std::map<std::string, std::string>& params) {
  if (name == "red-discontinuity") return RedDiscontinuity{number(params, "a", 0.5)};
  if (name == "gk-discontinuity") return GkDiscontinuity{number(params, "eps", 0.0)};
  if (name == "xor") return XorGate{};
  if (name == "and") return AndGate{};
  if (name == "copy") return CopyGate{};
  if (name == "unq") return UnqGate{};
  if (name == "rdn") return RdnGate{};
  if (name == "dirichlet-random") {
    DirichletRandom d;
    d.alpha = number(params, "alpha", 1.0);
    if (auto it = params.find("seed"); it != params.end()) {
      try {
        std::size_t used = 0;
        d.seed = std::stoull(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument("seed");
      } catch (const std::exception&) {
        throw Error(ErrorCode::ParameterOutOfRange, "seed must be a nonnegative integer");
      }
    }
    if (auto it = params.find("shape"); it != params.end()) {
      d.shape.clear();
      std::stringstream ss(it->second);
      std::string part;
      while (std::getline(ss, part, 'x')) {
        try {
          std::size_t used = 0;
          d.shape.push_back(std::stoul(part, &used));
          if (used != part.size()) throw std::invalid_argument("shape");
        } catch (const std::exception&) {
          throw Error(ErrorCode::ParameterOutOfRange, "shape must look like 2x2x2");
        }
      }
    }
    return d;
  }
  throw Error(ErrorCode::ParameterOutOfRange, "unknown family '" + name + "'");
}

}  // namespace pidlab
