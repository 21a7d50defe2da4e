#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "compactlin/instance.hpp"
#include "compactlin/linearizer.hpp"
#include "compactlin/milp.hpp"

namespace compactlin {

struct ModelVar {
  enum class Kind { kX, kY };
  Kind kind;
  Pair index;  // x: index.i

  static ModelVar x(Index i) { return {Kind::kX, {i, i}}; }
  static ModelVar y(Pair p) { return {Kind::kY, p}; }

  friend auto operator<=>(const ModelVar&, const ModelVar&) = default;
};

using LinearTerms = std::vector<std::pair<ModelVar, double>>;

struct LinearRow {
  enum class Kind { kAssignment, kLinearization, kPassThrough };
  Kind kind;
  std::string name;
  LinearTerms terms;
  Sense sense;
  double rhs;
};

struct LinearizedModel {
  enum class Variant { kCompact, kStandard };
  Variant variant = Variant::kCompact;
  int n = 0;
  std::vector<Pair> y_vars;  // ascending
  std::vector<LinearRow> rows;
  LinearTerms objective;
  // Set when emitted from a plan that fails the linearization conditions.
  bool unsafe = false;

  int count_rows(LinearRow::Kind kind) const;
};

class UnsafePlanError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct EmitOptions {
  // Emit even if the plan fails check_conditions. The result may admit
  // y values that differ from the true products.
  bool allow_unsafe = false;
};

// One equation per (k, j in B_k):
//   sum_{i in A_k} y_phi(i,j) - x_j = 0.
// Throws UnsafePlanError for a plan failing check_conditions unless allowed.
LinearizedModel emit_compact(const BqpInstance& inst, const LinearizationPlan& plan,
                             const EmitOptions& options = {});

// y_ij <= x_i, y_ij <= x_j, y_ij >= x_i + x_j - 1 for every (i, j) in E.
LinearizedModel emit_standard(const BqpInstance& inst);

struct SizeReport {
  int n = 0;
  int num_sets = 0;
  int num_products = 0;       // |E|
  int num_f = 0;              // |F|
  int total_b = 0;            // sum |B_k|
  int standard_rows = 0;      // 3 |E|
  int compact_rows = 0;       // sum |B_k|
  int standard_vars = 0;      // |E|
  int compact_vars = 0;       // |F|

  friend bool operator==(const SizeReport&, const SizeReport&) = default;
};

SizeReport size_report(const BqpInstance& inst, const LinearizationPlan& plan);

// CPLEX LP format. Output is a pure function of the model.
std::string write_lp(const LinearizedModel& model);
std::string write_lp(const MilpModel& model);

// Shortest round-trip decimal; integral values have no decimal point.
std::string format_number(double value);

}  // namespace compactlin
