#pragma once

#include <initializer_list>
#include <map>
#include <set>
#include <vector>

#include "compactlin/instance.hpp"
#include "compactlin/linearizer.hpp"

namespace compactlin::testing {

inline BqpInstance make_instance(int n, std::map<SetId, std::vector<Index>> sets, std::vector<Pair> products) {
  BqpInstance inst;
  inst.n = n;
  inst.assignment_sets = std::move(sets);
  inst.products = std::move(products);
  return inst;
}

// A_1 = {1,2}, A_2 = {3,4}, E = {(1,3)}
inline BqpInstance ex1() { return make_instance(4, {{1, {1, 2}}, {2, {3, 4}}}, {{1, 3}}); }

// 2x2 assignment: rows A_1, A_2 and columns A_3, A_4 over x_11 x_12 x_21 x_22.
inline BqpInstance qap2(std::vector<Pair> products = {}) {
  return make_instance(4, {{1, {1, 2}}, {2, {3, 4}}, {3, {1, 3}}, {4, {2, 4}}}, std::move(products));
}

inline LinearizationPlan make_plan(std::map<SetId, std::set<Index>> b_sets, std::set<Pair> f_set) {
  LinearizationPlan plan;
  plan.b_sets = std::move(b_sets);
  plan.f_set = std::move(f_set);
  return plan;
}

inline LinearizationPlan ex1_closure_plan() {
  return make_plan({{1, {3, 4}}, {2, {1, 2}}}, {{1, 3}, {2, 3}, {1, 4}, {2, 4}});
}

// B_1 = {1,2,3}, B_2 = {3,4} with its induced F.
inline LinearizationPlan ex1_liberti_plan() {
  return make_plan({{1, {1, 2, 3}}, {2, {3, 4}}},
                   {{1, 1}, {1, 2}, {1, 3}, {2, 2}, {2, 3}, {3, 3}, {3, 4}, {4, 4}});
}

inline const char* kEx1Json = R"({
  "n": 4,
  "assignment_sets": {"1": [1, 2], "2": [3, 4]},
  "products": [[1, 3]]
})";

}  // namespace compactlin::testing
