#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "compactlin/instance.hpp"
#include "compactlin/linearizer.hpp"

namespace compactlin {

// Size-minimization model over binaries z_ik (i in B_k) and continuous
// f_ij in [0,1] (phi(i,j) in F), i <= j:
//
//   min  w_eqn * sum z + w_var * sum f
//   (fix)    f_ij = 1                          (i,j) in E
//   (link_a) f_ij - z_jk >= 0                  k, i in A_k, j in N, i <= j
//   (link_b) f_ji - z_jk >= 0                  k, i in A_k, j in N, j < i
//   (cond1)  sum_{k: i in A_k} z_jk - f_ij >= 0   i <= j
//   (cond2)  sum_{k: j in A_k} z_ik - f_ij >= 0   i <= j
class MilpModel {
 public:
  enum class ColumnKind { kZ, kF };
  struct Column {
    ColumnKind kind;
    // z: (i, k);  f: (i, j)
    int first;
    int second;
  };

  enum class RowOrigin { kFix, kLinkA, kLinkB, kCond1, kCond2 };
  struct Row {
    RowOrigin origin;
    std::vector<std::pair<int, int>> terms;  // (column, coefficient)
    Sense sense;
    int rhs;
  };

  MilpModel() = default;

  int n() const noexcept { return n_; }
  const std::vector<SetId>& set_keys() const noexcept { return set_keys_; }
  const std::vector<Column>& columns() const noexcept { return columns_; }
  const std::vector<Row>& rows() const noexcept { return rows_; }
  double w_eqn() const noexcept { return w_eqn_; }
  double w_var() const noexcept { return w_var_; }

  int num_z() const noexcept { return static_cast<int>(set_keys_.size()) * n_; }
  int num_f() const noexcept { return n_ * (n_ + 1) / 2; }
  // Column layout: all z (i-major, then set position), then all f (row-major
  // upper triangle).
  int z_column(Index i, int set_pos) const;
  int f_column(Pair p) const;
  int count_rows(RowOrigin origin) const;

 private:
  friend MilpModel build_min_milp(const BqpInstance&, double, double);

  int n_ = 0;
  std::vector<SetId> set_keys_;
  std::vector<Column> columns_;
  std::vector<Row> rows_;
  double w_eqn_ = 1.0;
  double w_var_ = 1.0;
};

MilpModel build_min_milp(const BqpInstance& inst, double w_eqn = 1.0, double w_var = 1.0);

struct MilpSolution {
  LinearizationPlan plan;
  double objective_value = 0.0;
  bool optimal = false;
  std::int64_t nodes_explored = 0;
};

struct SolveLimits {
  std::int64_t node_budget = 2'000'000;
};

// Exact branch and bound over z. f is never branched on: for fixed z its
// cheapest feasible value is the closure of (fix)/(link) rows. Ties in the
// weighted objective are broken towards smaller sum z, then smaller sum f.
MilpSolution solve_exact(const MilpModel& model, const SolveLimits& limits = {});

struct TuReport {
  bool structural_ok = true;
  int rows_checked = 0;
  bool sampled_determinants_ok = true;
  int samples = 0;
  // Human readable description of a sampled submatrix with |det| > 1.
  std::optional<std::string> counterexample;
};

struct TuOptions {
  int samples = 1000;
  int max_order = 6;
  std::uint64_t seed = 0;
};

// Checks the two-nonzeros-summing-to-zero pattern on the link/cond rows with
// fixed f columns removed, and samples square submatrices for determinants
// outside {-1, 0, 1}.
TuReport check_tu_structure(const MilpModel& model, const TuOptions& options = {});

// Exact integer determinant (fraction-free elimination).
std::int64_t integer_determinant(std::vector<std::vector<std::int64_t>> m);

std::string to_string(MilpModel::RowOrigin origin);

}  // namespace compactlin
