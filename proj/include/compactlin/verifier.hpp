#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "compactlin/instance.hpp"
#include "compactlin/linearizer.hpp"

namespace compactlin {

using BinaryVector = std::vector<int>;  // entry [i-1] holds x_i
using YAssignment = std::map<Pair, int>;

struct FeasibleX {
  std::vector<BinaryVector> vectors;  // descending lexicographic order
  bool truncated = false;             // more than `cap` solutions exist
};

// All x in {0,1}^n with sum_{i in A_k} x_i = 1 for every k, at most `cap`.
FeasibleX enumerate_feasible_x(const BqpInstance& inst, std::int64_t cap = 4096);

enum class BoundKind {
  kUpperI,           // y_ij <= x_i
  kUpperJ,           // y_ij <= x_j
  kLower,            // y_ij >= x_i + x_j - 1
  kProductExcluded,  // y = x x violates an equation
};

std::string_view to_string(BoundKind bound);

struct Witness {
  BinaryVector x;
  YAssignment y;
  Pair pair;
  BoundKind bound;
};

struct ConsistencyReport {
  bool consistent = true;
  std::int64_t x_assignments_checked = 0;
  // False when a cap stopped the search; `consistent` then only covers the
  // checked part.
  bool exhaustive = true;
  std::optional<Witness> witness;
};

struct ConsistencyCaps {
  std::int64_t max_x = 4096;
  std::int64_t max_y_nodes = std::int64_t{1} << 20;
};

// The equations  sum_{i in A_k, phi(i,j) in F} y_phi(i,j) = x_j,  j in B_k.
struct CompactEquation {
  SetId set;
  Index j;
  std::vector<Pair> terms;
};

std::vector<CompactEquation> compact_equations(const BqpInstance& inst,
                                               const LinearizationPlan& plan);

struct YSolutions {
  std::vector<YAssignment> solutions;
  bool complete = true;  // false if the node cap was hit
};

// Every binary y over F solving the compact equations for fixed x, by
// exhaustive search.
YSolutions enumerate_y_solutions(const BqpInstance& inst, const LinearizationPlan& plan,
                                 const BinaryVector& x,
                                 std::int64_t max_nodes = std::int64_t{1} << 20);

// Brute force over feasible x and binary y. The reported witness is the one
// whose leading violation is smallest in (bound kind, pair) order.
ConsistencyReport check_consistency(const BqpInstance& inst, const LinearizationPlan& plan,
                                    const ConsistencyCaps& caps = {});

struct PropagationResult {
  enum class Status { kComplete, kIncomplete, kConflict };
  Status status = Status::kComplete;
  YAssignment y;  // forced values only
  std::optional<Pair> conflict;
};

// Unit propagation on the compact equations: rhs 0 forces every term to 0;
// rhs 1 with a single unforced term left forces it to 1.
PropagationResult propagate_y(const BqpInstance& inst, const LinearizationPlan& plan,
                              const BinaryVector& x);

// Inclusion recipe: B_k starts as A_k, each uncovered (i,j) in E puts j
// into B_k for the smallest k with i in A_k; no closure.
LinearizationPlan liberti_plan(const BqpInstance& inst);

}  // namespace compactlin
