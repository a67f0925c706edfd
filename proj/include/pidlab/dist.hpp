#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pidlab/error.hpp"

namespace pidlab {

// Mass at or below this is treated as structurally zero.
inline constexpr double kSupportThreshold = 1e-15;
inline constexpr std::size_t kMaxCells = 10'000'000;

class Alphabet {
 public:
  explicit Alphabet(std::vector<std::string> labels);
  static Alphabet range(std::size_t n);

  std::size_t size() const { return labels_.size(); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<std::size_t> index_of(std::string_view label) const;

  bool operator==(const Alphabet&) const = default;

 private:
  std::vector<std::string> labels_;
};

struct Variable {
  std::string name;
  Alphabet alphabet;

  bool operator==(const Variable&) const = default;
};

using Names = std::vector<std::string>;

// Dense row-major tensor; the last variable varies fastest.
class JointDist {
 public:
  JointDist(std::vector<Variable> variables, std::vector<double> mass);

  std::size_t arity() const { return vars_.size(); }
  const std::vector<Variable>& variables() const { return vars_; }
  const Variable& variable(std::size_t i) const { return vars_.at(i); }
  const std::string& name(std::size_t i) const { return vars_.at(i).name; }
  Names names() const;
  std::size_t index_of(std::string_view name) const;
  bool has(std::string_view name) const;

  std::vector<std::size_t> shape() const;
  std::size_t dim(std::size_t i) const { return vars_.at(i).alphabet.size(); }
  std::size_t size() const { return mass_.size(); }
  const std::vector<double>& mass() const { return mass_; }
  const std::vector<std::size_t>& strides() const { return strides_; }

  double operator[](std::size_t flat) const { return mass_[flat]; }
  double at(std::span<const std::size_t> idx) const;
  std::size_t flat_index(std::span<const std::size_t> idx) const;
  std::vector<std::size_t> unravel(std::size_t flat) const;

  bool same_shape(const JointDist& other) const;

 private:
  std::vector<Variable> vars_;
  std::vector<double> mass_;
  std::vector<std::size_t> strides_;
};

// Rows exist only for given-symbols with positive mass.
struct Channel {
  std::string given;
  std::string target;
  std::vector<std::size_t> given_symbols;
  std::vector<double> given_mass;
  std::vector<std::vector<double>> rows;

  const std::vector<double>* row_for(std::size_t symbol) const;
};

struct VariablePairing {
  std::string first;
  std::string second;
  std::string name;
};

JointDist validate(const JointDist& raw, double tol = 1e-9);

JointDist marginal(const JointDist& p, const Names& keep);
JointDist reorder(const JointDist& p, const Names& order);
Channel conditional(const JointDist& p, const std::string& target, const std::string& given);
JointDist tensor_product(const JointDist& p1, const JointDist& p2,
                         const std::vector<VariablePairing>& pairing);
// Pairs variable i of p1 with variable i of p2 and keeps p1's names.
JointDist tensor_product(const JointDist& p1, const JointDist& p2);
JointDist combine_variables(const JointDist& p, const Names& merge, const std::string& new_name);
double l1_distance(const JointDist& p1, const JointDist& p2);

// Same tensor with one variable's symbols permuted: new index perm[i] holds old symbol i.
JointDist permute_alphabet(const JointDist& p, const std::string& var,
                           const std::vector<std::size_t>& perm);
JointDist with_mass(const JointDist& like, std::vector<double> mass);
JointDist point_mass(const std::vector<Variable>& vars, std::span<const std::size_t> idx);
bool has_full_support(const JointDist& p);

}  // namespace pidlab
