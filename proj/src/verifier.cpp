#include "compactlin/verifier.hpp"

#include <algorithm>
#include <set>
#include <tuple>

namespace compactlin {

std::string_view to_string(BoundKind bound) {
  switch (bound) {
    case BoundKind::kUpperI:
      return "y <= x_i";
    case BoundKind::kUpperJ:
      return "y <= x_j";
    case BoundKind::kLower:
      return "y >= x_i + x_j - 1";
    case BoundKind::kProductExcluded:
      return "product excluded";
  }
  return "?";
}

FeasibleX enumerate_feasible_x(const BqpInstance& inst, std::int64_t cap) {
  const AssignmentIndex index(inst);
  const int n = index.n();
  std::vector<int> sum(index.size(), 0);
  std::vector<int> open(index.size(), 0);
  for (int pos = 0; pos < index.size(); ++pos) open[pos] = static_cast<int>(index.members(pos).size());

  FeasibleX out;
  BinaryVector x(n, 0);
  // Depth-first with x_i = 1 tried before x_i = 0 gives descending
  // lexicographic order.
  auto dfs = [&](auto&& self, Index i) -> void {
    if (out.truncated) return;
    if (i > n) {
      if (static_cast<std::int64_t>(out.vectors.size()) >= cap) {
        out.truncated = true;
        return;
      }
      out.vectors.push_back(x);
      return;
    }
    for (int value : {1, 0}) {
      bool viable = true;
      for (int pos : index.containing(i)) {
        --open[pos];
        sum[pos] += value;
        if (sum[pos] > 1 || (open[pos] == 0 && sum[pos] == 0)) viable = false;
      }
      if (viable) {
        x[i - 1] = value;
        self(self, i + 1);
        x[i - 1] = 0;
      }
      for (int pos : index.containing(i)) {
        ++open[pos];
        sum[pos] -= value;
      }
    }
  };
  if (n >= 1) dfs(dfs, 1);
  return out;
}

std::vector<CompactEquation> compact_equations(const BqpInstance& inst, const LinearizationPlan& plan) {
  std::vector<CompactEquation> out;
  for (const auto& [k, members] : plan.b_sets) {
    const auto set = inst.assignment_sets.find(k);
    if (set == inst.assignment_sets.end()) continue;
    for (Index j : members) {
      std::set<Pair> terms;
      for (Index i : set->second) {
        const Pair q = normalize_pair(i, j);
        if (plan.f_set.contains(q)) terms.insert(q);
      }
      out.push_back({k, j, {terms.begin(), terms.end()}});
    }
  }
  return out;
}

YSolutions enumerate_y_solutions(const BqpInstance& inst, const LinearizationPlan& plan, const BinaryVector& x,
                                 std::int64_t max_nodes) {
  const std::vector<Pair> vars(plan.f_set.begin(), plan.f_set.end());
  const auto equations = compact_equations(inst, plan);
  std::map<Pair, int> position;
  for (std::size_t v = 0; v < vars.size(); ++v) position[vars[v]] = static_cast<int>(v);

  std::vector<std::vector<int>> occurs(vars.size());
  std::vector<int> rhs(equations.size());
  std::vector<int> sum(equations.size(), 0);
  std::vector<int> open(equations.size(), 0);
  for (std::size_t e = 0; e < equations.size(); ++e) {
    rhs[e] = x.at(equations[e].j - 1);
    open[e] = static_cast<int>(equations[e].terms.size());
    for (const Pair& p : equations[e].terms) occurs[position[p]].push_back(static_cast<int>(e));
  }

  YSolutions out;
  // An equation without terms can only hold for rhs 0.
  for (std::size_t e = 0; e < equations.size(); ++e) {
    if (open[e] == 0 && rhs[e] != 0) return out;
  }

  std::vector<int> y(vars.size(), 0);
  std::int64_t nodes = 0;
  auto dfs = [&](auto&& self, std::size_t v) -> void {
    if (!out.complete) return;
    if (++nodes > max_nodes) {
      out.complete = false;
      return;
    }
    if (v == vars.size()) {
      YAssignment solution;
      for (std::size_t u = 0; u < vars.size(); ++u) solution[vars[u]] = y[u];
      out.solutions.push_back(std::move(solution));
      return;
    }
    for (int value : {0, 1}) {
      bool viable = true;
      for (int e : occurs[v]) {
        --open[e];
        sum[e] += value;
        if (sum[e] > rhs[e] || sum[e] + open[e] < rhs[e]) viable = false;
      }
      if (viable) {
        y[v] = value;
        self(self, v + 1);
        y[v] = 0;
      }
      for (int e : occurs[v]) {
        ++open[e];
        sum[e] -= value;
      }
    }
  };
  dfs(dfs, 0);
  return out;
}

namespace {

using ViolationKey = std::tuple<int, Pair>;

std::optional<ViolationKey> leading_violation(const YAssignment& y, const BinaryVector& x) {
  std::optional<ViolationKey> best;
  for (const auto& [p, value] : y) {
    const int xi = x[p.i - 1];
    const int xj = x[p.j - 1];
    std::optional<BoundKind> bound;
    if (value > xi) {
      bound = BoundKind::kUpperI;
    } else if (value > xj) {
      bound = BoundKind::kUpperJ;
    } else if (value < xi + xj - 1) {
      bound = BoundKind::kLower;
    }
    if (!bound) continue;
    const ViolationKey key{static_cast<int>(*bound), p};
    if (!best || key < *best) best = key;
  }
  return best;
}

YAssignment products_over(const std::set<Pair>& f_set, const BinaryVector& x) {
  YAssignment y;
  for (const Pair& p : f_set) y[p] = x[p.i - 1] * x[p.j - 1];
  return y;
}

// A pair phi(a, j) missing from an equation that the product vector needs.
std::optional<Pair> excluded_by(const BqpInstance& inst, const LinearizationPlan& plan, const BinaryVector& x) {
  for (const auto& eq : compact_equations(inst, plan)) {
    int lhs = 0;
    for (const Pair& p : eq.terms) lhs += x[p.i - 1] * x[p.j - 1];
    if (lhs == x[eq.j - 1]) continue;
    for (Index a : inst.assignment_sets.at(eq.set)) {
      const Pair q = normalize_pair(a, eq.j);
      if (x[a - 1] == 1 && !plan.f_set.contains(q)) return q;
    }
    return Pair{eq.j, eq.j};
  }
  return std::nullopt;
}

}  // namespace

ConsistencyReport check_consistency(const BqpInstance& inst, const LinearizationPlan& plan,
                                    const ConsistencyCaps& caps) {
  ConsistencyReport report;
  const FeasibleX feasible = enumerate_feasible_x(inst, caps.max_x);
  report.exhaustive = !feasible.truncated;

  std::optional<ViolationKey> best;
  for (const BinaryVector& x : feasible.vectors) {
    ++report.x_assignments_checked;
    const YSolutions ys = enumerate_y_solutions(inst, plan, x, caps.max_y_nodes);
    if (!ys.complete) report.exhaustive = false;
    const YAssignment expected = products_over(plan.f_set, x);

    bool expected_found = false;
    for (const YAssignment& y : ys.solutions) {
      if (y == expected) {
        expected_found = true;
        continue;
      }
      const auto key = leading_violation(y, x);
      if (key && (!best || *key < *best)) {
        best = key;
        report.witness = Witness{x, y, std::get<1>(*key), static_cast<BoundKind>(std::get<0>(*key))};
      }
    }
    if (!expected_found && ys.complete) {
      const Pair pair = excluded_by(inst, plan, x).value_or(Pair{});
      const ViolationKey key{static_cast<int>(BoundKind::kProductExcluded), pair};
      if (!best || key < *best) {
        best = key;
        report.witness = Witness{x, expected, pair, BoundKind::kProductExcluded};
      }
    }
  }
  report.consistent = !report.witness.has_value();
  return report;
}

PropagationResult propagate_y(const BqpInstance& inst, const LinearizationPlan& plan, const BinaryVector& x) {
  const auto equations = compact_equations(inst, plan);
  std::map<Pair, int> value;  // -1 unknown
  for (const Pair& p : plan.f_set) value[p] = -1;

  PropagationResult result;
  auto force = [&](const Pair& p, int v) {
    int& slot = value[p];
    if (slot == -1) {
      slot = v;
      return true;
    }
    if (slot != v && !result.conflict) {
      result.status = PropagationResult::Status::kConflict;
      result.conflict = p;
    }
    return false;
  };

  bool changed = true;
  while (changed && !result.conflict) {
    changed = false;
    for (const auto& eq : equations) {
      const int rhs = x.at(eq.j - 1);
      if (rhs == 0) {
        for (const Pair& p : eq.terms) changed |= force(p, 0);
        continue;
      }
      int ones = 0;
      const Pair* unknown = nullptr;
      int unknowns = 0;
      for (const Pair& p : eq.terms) {
        const int v = value[p];
        if (v == 1) ++ones;
        if (v == -1) {
          ++unknowns;
          unknown = &p;
        }
      }
      if (ones > 1 || (ones == 0 && unknowns == 0)) {
        result.status = PropagationResult::Status::kConflict;
        result.conflict = eq.terms.empty() ? Pair{eq.j, eq.j} : eq.terms.front();
        break;
      }
      if (ones == 0 && unknowns == 1) changed |= force(*unknown, 1);
    }
  }

  for (const auto& [p, v] : value) {
    if (v != -1) result.y[p] = v;
  }
  if (!result.conflict && result.y.size() != value.size()) result.status = PropagationResult::Status::kIncomplete;
  return result;
}

LinearizationPlan liberti_plan(const BqpInstance& inst) {
  const AssignmentIndex index(inst);
  LinearizationPlan plan;
  for (const auto& [k, members] : inst.assignment_sets) plan.b_sets[k].insert(members.begin(), members.end());

  auto covered = [&](Index i, Index j) {
    for (int pos : index.containing(i)) {
      if (plan.b_sets[index.key(pos)].contains(j)) return true;
    }
    return false;
  };
  for (const Pair& p : inst.products) {
    if (covered(p.i, p.j) || covered(p.j, p.i)) continue;
    if (!index.containing(p.i).empty()) {
      plan.b_sets[index.key(index.containing(p.i).front())].insert(p.j);
    } else if (!index.containing(p.j).empty()) {
      plan.b_sets[index.key(index.containing(p.j).front())].insert(p.i);
    }
  }

  plan.f_set = induced_products(inst, plan.b_sets);
  for (const Pair& p : plan.f_set) plan.provenance[p] = {Provenance::Origin::kInclusion, p, 0};
  for (const Pair& p : inst.products) {
    if (plan.f_set.contains(p)) plan.provenance[p] = {Provenance::Origin::kProduct, p, 0};
  }
  return plan;
}

}  // namespace compactlin
