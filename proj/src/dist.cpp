#include "pidlab/dist.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

namespace pidlab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NegativeMass: return "NegativeMass";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::UnknownVariable: return "UnknownVariable";
    case ErrorCode::OverlappingGroups: return "OverlappingGroups";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::PairingIncomplete: return "PairingIncomplete";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::BracketFailure: return "BracketFailure";
    case ErrorCode::InfeasibleSupport: return "InfeasibleSupport";
    case ErrorCode::InconsistentConstraints: return "InconsistentConstraints";
    case ErrorCode::MaxIterExceeded: return "MaxIterExceeded";
    case ErrorCode::InconsistentAnchor: return "InconsistentAnchor";
    case ErrorCode::ZeroProbabilityOutcome: return "ZeroProbabilityOutcome";
    case ErrorCode::NotFullSupport: return "NotFullSupport";
    case ErrorCode::DeltaOutOfRange: return "DeltaOutOfRange";
    case ErrorCode::ParameterOutOfRange: return "ParameterOutOfRange";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

Alphabet::Alphabet(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) throw Error(ErrorCode::InvalidArgument, "alphabet must be nonempty");
  std::unordered_set<std::string> seen;
  for (const auto& l : labels_) {
    if (!seen.insert(l).second) throw Error(ErrorCode::InvalidArgument, "duplicate label '" + l + "'");
  }
}

Alphabet Alphabet::range(std::size_t n) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  return Alphabet(std::move(labels));
}

std::optional<std::size_t> Alphabet::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return i;
  }
  return std::nullopt;
}

JointDist::JointDist(std::vector<Variable> variables, std::vector<double> mass)
    : vars_(std::move(variables)), mass_(std::move(mass)) {
  if (vars_.empty()) throw Error(ErrorCode::InvalidArgument, "distribution needs at least one variable");
  std::unordered_set<std::string> names;
  std::size_t cells = 1;
  for (const auto& v : vars_) {
    if (!names.insert(v.name).second) {
      throw Error(ErrorCode::InvalidArgument, "duplicate variable name '" + v.name + "'");
    }
    if (cells > kMaxCells / v.alphabet.size()) {
      throw Error(ErrorCode::TooLarge, "tensor exceeds " + std::to_string(kMaxCells) + " cells");
    }
    cells *= v.alphabet.size();
  }
  if (mass_.size() != cells) {
    throw Error(ErrorCode::ShapeMismatch, "expected " + std::to_string(cells) + " cells, got " +
                                              std::to_string(mass_.size()));
  }
  strides_.assign(vars_.size(), 1);
  for (std::size_t i = vars_.size() - 1; i > 0; --i) strides_[i - 1] = strides_[i] * vars_[i].alphabet.size();
}

Names JointDist::names() const {
  Names out;
  for (const auto& v : vars_) out.push_back(v.name);
  return out;
}

std::size_t JointDist::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (vars_[i].name == name) return i;
  }
  throw Error(ErrorCode::UnknownVariable, "no variable named '" + std::string(name) + "'");
}

bool JointDist::has(std::string_view name) const {
  return std::any_of(vars_.begin(), vars_.end(), [&](const Variable& v) { return v.name == name; });
}

std::vector<std::size_t> JointDist::shape() const {
  std::vector<std::size_t> s;
  for (const auto& v : vars_) s.push_back(v.alphabet.size());
  return s;
}

std::size_t JointDist::flat_index(std::span<const std::size_t> idx) const {
  if (idx.size() != vars_.size()) throw Error(ErrorCode::ShapeMismatch, "index arity mismatch");
  std::size_t flat = 0;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] >= dim(i)) throw Error(ErrorCode::InvalidArgument, "index out of range");
    flat += idx[i] * strides_[i];
  }
  return flat;
}

double JointDist::at(std::span<const std::size_t> idx) const { return mass_[flat_index(idx)]; }

std::vector<std::size_t> JointDist::unravel(std::size_t flat) const {
  std::vector<std::size_t> idx(vars_.size());
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    idx[i] = flat / strides_[i];
    flat %= strides_[i];
  }
  return idx;
}

bool JointDist::same_shape(const JointDist& other) const { return shape() == other.shape(); }

const std::vector<double>* Channel::row_for(std::size_t symbol) const {
  for (std::size_t i = 0; i < given_symbols.size(); ++i) {
    if (given_symbols[i] == symbol) return &rows[i];
  }
  return nullptr;
}

namespace {

// Calls fn(flat_in, flat_out) for every cell, where flat_out uses per-variable output strides.
template <class Fn>
void odometer(const std::vector<std::size_t>& shape, const std::vector<std::size_t>& out_stride, Fn&& fn) {
  const std::size_t n = shape.size();
  std::vector<std::size_t> idx(n, 0);
  std::size_t total = 1;
  for (auto d : shape) total *= d;
  std::size_t out = 0;
  for (std::size_t flat = 0; flat < total; ++flat) {
    fn(flat, out);
    for (std::size_t k = n; k-- > 0;) {
      if (++idx[k] < shape[k]) {
        out += out_stride[k];
        break;
      }
      out -= out_stride[k] * (shape[k] - 1);
      idx[k] = 0;
    }
  }
}

std::vector<std::size_t> resolve(const JointDist& p, const Names& names) {
  std::vector<std::size_t> out;
  for (const auto& n : names) {
    std::size_t i = p.index_of(n);
    if (std::find(out.begin(), out.end(), i) != out.end()) {
      throw Error(ErrorCode::OverlappingGroups, "variable '" + n + "' listed twice");
    }
    out.push_back(i);
  }
  return out;
}

Alphabet product_alphabet(const std::vector<const Alphabet*>& parts) {
  std::vector<std::string> labels{""};
  for (const Alphabet* a : parts) {
    std::vector<std::string> next;
    next.reserve(labels.size() * a->size());
    for (const auto& prefix : labels) {
      for (const auto& l : a->labels()) next.push_back(prefix.empty() ? l : prefix + "," + l);
    }
    labels = std::move(next);
  }
  for (auto& l : labels) l = "(" + l + ")";
  return Alphabet(std::move(labels));
}

double neumaier_sum(const std::vector<double>& xs) {
  double sum = 0.0, c = 0.0;
  for (double x : xs) {
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      c += (sum - t) + x;
    } else {
      c += (x - t) + sum;
    }
    sum = t;
  }
  return sum + c;
}

}  // namespace

JointDist validate(const JointDist& raw, double tol) {
  std::vector<double> m = raw.mass();
  for (double& x : m) {
    if (!std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, "non-finite probability mass");
    if (x < -1e-12) throw Error(ErrorCode::NegativeMass, "cell with mass " + std::to_string(x));
    if (x < kSupportThreshold) x = 0.0;
  }
  double sum = neumaier_sum(m);
  if (!(std::abs(sum - 1.0) <= tol)) {
    throw Error(ErrorCode::NotNormalized, "total mass " + std::to_string(sum));
  }
  // Within a few ulps of 1 already: leave the bits alone so validation is idempotent.
  if (std::abs(sum - 1.0) > 0x1p-50) {
    for (double& x : m) x /= sum;
  }
  return JointDist(raw.variables(), std::move(m));
}

JointDist marginal(const JointDist& p, const Names& keep) {
  if (keep.empty()) throw Error(ErrorCode::InvalidArgument, "marginal needs at least one variable");
  auto idx = resolve(p, keep);
  std::vector<Variable> vars;
  std::vector<std::size_t> out_stride(p.arity(), 0);
  std::size_t stride = 1;
  for (std::size_t k = idx.size(); k-- > 0;) {
    out_stride[idx[k]] = stride;
    stride *= p.dim(idx[k]);
  }
  for (auto i : idx) vars.push_back(p.variable(i));
  std::vector<double> out(stride, 0.0);
  const auto& m = p.mass();
  odometer(p.shape(), out_stride, [&](std::size_t in, std::size_t o) { out[o] += m[in]; });
  return JointDist(std::move(vars), std::move(out));
}

JointDist reorder(const JointDist& p, const Names& order) {
  if (order.size() != p.arity()) throw Error(ErrorCode::InvalidArgument, "reorder must list every variable");
  return marginal(p, order);
}

Channel conditional(const JointDist& p, const std::string& target, const std::string& given) {
  if (target == given) throw Error(ErrorCode::OverlappingGroups, "target and given must differ");
  JointDist pair = marginal(p, {given, target});
  const std::size_t ng = pair.dim(0), nt = pair.dim(1);
  Channel ch{given, target, {}, {}, {}};
  for (std::size_t g = 0; g < ng; ++g) {
    double row_mass = 0.0;
    for (std::size_t t = 0; t < nt; ++t) row_mass += pair[g * nt + t];
    if (row_mass <= kSupportThreshold) continue;
    std::vector<double> row(nt);
    for (std::size_t t = 0; t < nt; ++t) row[t] = pair[g * nt + t] / row_mass;
    ch.given_symbols.push_back(g);
    ch.given_mass.push_back(row_mass);
    ch.rows.push_back(std::move(row));
  }
  return ch;
}

JointDist tensor_product(const JointDist& p1, const JointDist& p2,
                         const std::vector<VariablePairing>& pairing) {
  if (pairing.size() != p1.arity() || pairing.size() != p2.arity()) {
    throw Error(ErrorCode::PairingIncomplete, "pairing must cover every variable of both inputs once");
  }
  Names first, second, names;
  for (const auto& pr : pairing) {
    if (!p1.has(pr.first) || !p2.has(pr.second)) {
      throw Error(ErrorCode::PairingIncomplete, "pairing refers to unknown variable");
    }
    first.push_back(pr.first);
    second.push_back(pr.second);
    names.push_back(pr.name);
  }
  std::unordered_set<std::string> uniq1(first.begin(), first.end()), uniq2(second.begin(), second.end());
  if (uniq1.size() != first.size() || uniq2.size() != second.size()) {
    throw Error(ErrorCode::PairingIncomplete, "a variable is paired twice");
  }
  JointDist a = reorder(p1, first);
  JointDist b = reorder(p2, second);
  const std::size_t n = pairing.size();
  std::vector<Variable> vars;
  std::size_t cells = 1;
  for (std::size_t k = 0; k < n; ++k) {
    vars.push_back({names[k], product_alphabet({&a.variable(k).alphabet, &b.variable(k).alphabet})});
    if (cells > kMaxCells / vars.back().alphabet.size()) throw Error(ErrorCode::TooLarge, "product too large");
    cells *= vars.back().alphabet.size();
  }
  std::vector<std::size_t> out_stride(n, 1);
  for (std::size_t k = n - 1; k > 0; --k) out_stride[k - 1] = out_stride[k] * vars[k].alphabet.size();
  std::vector<std::size_t> sa(n), sb(n);
  for (std::size_t k = 0; k < n; ++k) {
    sa[k] = out_stride[k] * b.dim(k);
    sb[k] = out_stride[k];
  }
  std::vector<std::size_t> offset_a(a.size()), offset_b(b.size());
  odometer(a.shape(), sa, [&](std::size_t in, std::size_t o) { offset_a[in] = o; });
  odometer(b.shape(), sb, [&](std::size_t in, std::size_t o) { offset_b[in] = o; });
  std::vector<double> out(cells, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = a[i];
    if (x == 0.0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[offset_a[i] + offset_b[j]] = x * b[j];
  }
  return JointDist(std::move(vars), std::move(out));
}

JointDist tensor_product(const JointDist& p1, const JointDist& p2) {
  if (p1.arity() != p2.arity()) throw Error(ErrorCode::PairingIncomplete, "arity mismatch");
  std::vector<VariablePairing> pairing;
  for (std::size_t i = 0; i < p1.arity(); ++i) pairing.push_back({p1.name(i), p2.name(i), p1.name(i)});
  return tensor_product(p1, p2, pairing);
}

JointDist combine_variables(const JointDist& p, const Names& merge, const std::string& new_name) {
  if (merge.size() < 2) throw Error(ErrorCode::InvalidArgument, "merge needs at least two variables");
  auto idx = resolve(p, merge);
  const std::size_t pos = *std::min_element(idx.begin(), idx.end());
  Names order;
  for (std::size_t i = 0; i < p.arity(); ++i) {
    if (i == pos) order.insert(order.end(), merge.begin(), merge.end());
    if (std::find(idx.begin(), idx.end(), i) == idx.end()) {
      if (p.name(i) == new_name) throw Error(ErrorCode::InvalidArgument, "name '" + new_name + "' already taken");
      order.push_back(p.name(i));
    }
  }
  JointDist r = reorder(p, order);
  std::vector<Variable> vars;
  std::vector<const Alphabet*> parts;
  for (auto i : idx) parts.push_back(&p.variable(i).alphabet);
  for (std::size_t i = 0; i < r.arity();) {
    if (i == pos) {
      vars.push_back({new_name, product_alphabet(parts)});
      i += merge.size();
    } else {
      vars.push_back(r.variable(i));
      ++i;
    }
  }
  return JointDist(std::move(vars), r.mass());
}

double l1_distance(const JointDist& p1, const JointDist& p2) {
  if (!p1.same_shape(p2)) throw Error(ErrorCode::ShapeMismatch, "l1_distance needs equal shapes");
  double d = 0.0;
  for (std::size_t i = 0; i < p1.size(); ++i) d += std::abs(p1[i] - p2[i]);
  return d;
}

JointDist permute_alphabet(const JointDist& p, const std::string& var, const std::vector<std::size_t>& perm) {
  const std::size_t v = p.index_of(var);
  const std::size_t n = p.dim(v);
  std::vector<bool> seen(n, false);
  if (perm.size() != n) throw Error(ErrorCode::ShapeMismatch, "permutation size mismatch");
  for (auto x : perm) {
    if (x >= n || seen[x]) throw Error(ErrorCode::InvalidArgument, "not a permutation");
    seen[x] = true;
  }
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[perm[i]] = p.variable(v).alphabet.label(i);
  auto vars = p.variables();
  vars[v].alphabet = Alphabet(std::move(labels));
  std::vector<double> out(p.size());
  const std::size_t stride = p.strides()[v];
  for (std::size_t flat = 0; flat < p.size(); ++flat) {
    const std::size_t sym = (flat / stride) % n;
    out[flat - sym * stride + perm[sym] * stride] = p[flat];
  }
  return JointDist(std::move(vars), std::move(out));
}

JointDist with_mass(const JointDist& like, std::vector<double> mass) {
  return JointDist(like.variables(), std::move(mass));
}

JointDist point_mass(const std::vector<Variable>& vars, std::span<const std::size_t> idx) {
  std::size_t cells = 1;
  for (const auto& v : vars) cells *= v.alphabet.size();
  JointDist p(vars, std::vector<double>(cells, 0.0));
  std::vector<double> m(cells, 0.0);
  m[p.flat_index(idx)] = 1.0;
  return JointDist(vars, std::move(m));
}

bool has_full_support(const JointDist& p) {
  return std::all_of(p.mass().begin(), p.mass().end(), [](double x) { return x > kSupportThreshold; });
}

}  // namespace pidlab
