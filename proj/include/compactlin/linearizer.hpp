#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "compactlin/instance.hpp"

namespace compactlin {

// How a pair entered F.
struct Provenance {
  enum class Origin {
    kProduct,     // listed in E
    kCondition1,  // induced by adding `trigger.j` to B_set
    kCondition2,  // induced by adding `trigger.i` to B_set
    kInclusion,   // induced by the A_k subset-of B_k recipe
  };
  Origin origin = Origin::kProduct;
  Pair trigger;
  SetId set = 0;
};

// The sets B_k and the induced product set
//   F = { phi(i, j) : (i, j) in A_k x B_k for some k }.
struct LinearizationPlan {
  std::map<SetId, std::set<Index>> b_sets;
  std::set<Pair> f_set;
  std::map<Pair, Provenance> provenance;

  int total_b_size() const;
};

// Equality of B_k and F; provenance is diagnostic only.
bool same_sets(const LinearizationPlan& a, const LinearizationPlan& b);

// phi-image of the union of A_k x B_k.
std::set<Pair> induced_products(const BqpInstance& inst,
                                const std::map<SetId, std::set<Index>>& b_sets);

struct ConditionViolation {
  enum class Kind {
    kCondition1,      // no k with i in A_k and j in B_k
    kCondition2,      // no l with j in A_l and i in B_l
    kMissingProduct,  // pair of E not in F
    kNotInduced,      // pair of F outside the induced set
    kMissingInduced,  // induced pair absent from F
  };
  Pair pair;
  Kind kind;
};

struct ConditionReport {
  bool ok = true;
  std::vector<ConditionViolation> violations;
};

ConditionReport check_conditions(const BqpInstance& inst, const LinearizationPlan& plan);

// c(i,k): number of products (u, i), u in A_k, that would be newly created by
// adding i to B_k given the current plan.
int heuristic_cost(const BqpInstance& inst, const LinearizationPlan& plan, Index i, SetId k);

// Set receiving j so that pair (i, j) meets Condition 1. A candidate already
// holding j wins outright; otherwise argmin of heuristic_cost(j, .), ties to
// the smallest key.
SetId select_k_star(const BqpInstance& inst, const LinearizationPlan& plan, Index i, Index j);

// Mirror of select_k_star for Condition 2: the set receiving i.
SetId select_l_star(const BqpInstance& inst, const LinearizationPlan& plan, Index i, Index j);

struct ClosureOptions {
  // When set, each round's worklist is shuffled with this seed instead of
  // being processed in discovery order.
  std::optional<std::uint64_t> shuffle_seed;
};

// Grows B_k and F from F = E until Conditions 1 and 2 hold for every pair
// of F. Exact and inclusion-minimal for disjoint A_k; heuristic otherwise.
LinearizationPlan construct_sets(const BqpInstance& inst, const ClosureOptions& options = {});

// w_eqn * sum |B_k| + w_var * |F|
double plan_objective(const LinearizationPlan& plan, double w_eqn, double w_var);

}  // namespace compactlin
