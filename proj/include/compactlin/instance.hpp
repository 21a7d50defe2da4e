#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "compactlin/types.hpp"

namespace compactlin {

// A pass-through row  sum c_i x_i + sum d_ij y_ij  (sense)  rhs.
struct ExtraConstraint {
  std::map<Index, double> linear;
  std::map<Pair, double> quadratic;
  Sense sense = Sense::kGreaterEqual;
  double rhs = 0.0;

  friend bool operator==(const ExtraConstraint&, const ExtraConstraint&) = default;
};

// Binary quadratic program with assignment constraints
//   sum_{i in A_k} x_i = 1   for all k,
// and bilinear terms y_ij = x_i x_j for (i, j) in E.
//
// Only n, the sets A_k and E drive the linearization; objective and extra
// constraints are carried along for re-emission.
struct BqpInstance {
  int n = 0;
  // A_k, each stored sorted and without duplicates.
  std::map<SetId, std::vector<Index>> assignment_sets;
  // E in file order; pairs are normalized and unique.
  std::vector<Pair> products;
  std::map<Index, double> linear_objective;
  std::map<Pair, double> quadratic_objective;
  std::vector<ExtraConstraint> extra_constraints;

  friend bool operator==(const BqpInstance&, const BqpInstance&) = default;
};

struct Violation {
  std::string code;
  std::string message;
};

struct ValidationReport {
  bool ok = true;
  std::vector<Violation> violations;
  bool is_disjoint = true;
};

// Raised by parse_instance. line/column are 1-based and refer to the input
// text; they are 0 when the error is semantic and located by `path` instead.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line, int column, std::string path = {});

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  const std::string& path() const noexcept { return path_; }

 private:
  int line_;
  int column_;
  std::string path_;
};

// Parses the JSON instance format. Rejects malformed documents, indices
// outside 1..n, unnormalized pairs and duplicate products. Covering is not
// checked here; see validate().
BqpInstance parse_instance(std::string_view text);

// Canonical JSON rendering; parse_instance(serialize_instance(x)) == x.
std::string serialize_instance(const BqpInstance& inst);

ValidationReport validate(const BqpInstance& inst);

// {k : i in A_k}, ascending. Throws std::out_of_range unless 1 <= i <= n.
std::vector<SetId> sets_containing(const BqpInstance& inst, Index i);

struct Substitution {
  enum class Kind {
    kSquare,  // y_ii := x_i
    kZero,    // y_ij := 0, i and j share an assignment set
  };
  Pair pair;
  Kind kind;
};

struct PreprocessResult {
  BqpInstance instance;
  std::vector<Substitution> log;
};

// Drops products that are fixed by the assignment constraints alone and folds
// their coefficients into the linear parts.
PreprocessResult preprocess_trivial(const BqpInstance& inst);

// Dense membership view of the assignment sets, used by the algorithms.
// Sets are addressed by position 0..size()-1 in ascending key order.
class AssignmentIndex {
 public:
  explicit AssignmentIndex(const BqpInstance& inst);

  int n() const noexcept { return n_; }
  int size() const noexcept { return static_cast<int>(keys_.size()); }
  SetId key(int pos) const { return keys_[pos]; }
  int position(SetId k) const;
  const std::vector<Index>& members(int pos) const { return members_[pos]; }
  // Positions of the sets containing i, ascending.
  const std::vector<int>& containing(Index i) const { return containing_[i]; }
  bool contains(int pos, Index i) const {
    return member_[static_cast<std::size_t>(pos) * (n_ + 1) + i];
  }

 private:
  int n_;
  std::vector<SetId> keys_;
  std::vector<std::vector<Index>> members_;
  std::vector<std::vector<int>> containing_;
  std::vector<bool> member_;
};

}  // namespace compactlin
