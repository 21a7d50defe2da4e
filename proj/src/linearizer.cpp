#include "compactlin/linearizer.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace compactlin {
namespace {

// b(i, k) as a dense bit matrix over set positions.
class BMatrix {
 public:
  explicit BMatrix(const AssignmentIndex& index)
      : stride_(index.n() + 1), bits_(static_cast<std::size_t>(index.size()) * stride_, false) {}

  BMatrix(const AssignmentIndex& index, const LinearizationPlan& plan) : BMatrix(index) {
    for (const auto& [k, members] : plan.b_sets) {
      int pos;
      try {
        pos = index.position(k);
      } catch (const std::out_of_range&) {
        continue;
      }
      for (Index i : members) {
        if (i >= 1 && i < stride_) set(pos, i);
      }
    }
  }

  bool test(int pos, Index i) const { return bits_[static_cast<std::size_t>(pos) * stride_ + i]; }
  void set(int pos, Index i) { bits_[static_cast<std::size_t>(pos) * stride_ + i] = true; }

 private:
  int stride_;
  std::vector<bool> bits_;
};

int cost(const AssignmentIndex& index, const BMatrix& b, Index i, int pos) {
  int total = 0;
  for (Index u : index.members(pos)) {
    int summand = 1;
    for (int l = 0; l < index.size() && summand != 0; ++l) {
      if ((index.contains(l, u) && b.test(l, i)) || (index.contains(l, i) && b.test(l, u))) summand = 0;
    }
    total += summand;
  }
  return total;
}

// Position of the set that receives `target` so that some A_k holding
// `anchor` has `target` in B_k.
int select(const AssignmentIndex& index, const BMatrix& b, Index anchor, Index target) {
  const auto& candidates = index.containing(anchor);
  if (candidates.empty()) {
    throw std::invalid_argument("variable " + std::to_string(anchor) + " is in no assignment set");
  }
  if (candidates.size() == 1) return candidates.front();
  for (int pos : candidates) {
    if (b.test(pos, target)) return pos;
  }
  int best = candidates.front();
  int best_cost = cost(index, b, target, best);
  for (std::size_t c = 1; c < candidates.size(); ++c) {
    const int value = cost(index, b, target, candidates[c]);
    if (value < best_cost) {
      best = candidates[c];
      best_cost = value;
    }
  }
  return best;
}

void check_index(const BqpInstance& inst, Index i) {
  if (i < 1 || i > inst.n) {
    throw std::out_of_range("variable index " + std::to_string(i) + " outside 1.." + std::to_string(inst.n));
  }
}

}  // namespace

int LinearizationPlan::total_b_size() const {
  int total = 0;
  for (const auto& [k, members] : b_sets) total += static_cast<int>(members.size());
  return total;
}

bool same_sets(const LinearizationPlan& a, const LinearizationPlan& b) {
  auto nonempty = [](const LinearizationPlan& p) {
    std::map<SetId, std::set<Index>> out;
    for (const auto& [k, members] : p.b_sets) {
      if (!members.empty()) out.emplace(k, members);
    }
    return out;
  };
  return a.f_set == b.f_set && nonempty(a) == nonempty(b);
}

std::set<Pair> induced_products(const BqpInstance& inst, const std::map<SetId, std::set<Index>>& b_sets) {
  std::set<Pair> out;
  for (const auto& [k, members] : b_sets) {
    const auto set = inst.assignment_sets.find(k);
    if (set == inst.assignment_sets.end()) continue;
    for (Index a : set->second) {
      for (Index j : members) out.insert(normalize_pair(a, j));
    }
  }
  return out;
}

ConditionReport check_conditions(const BqpInstance& inst, const LinearizationPlan& plan) {
  const AssignmentIndex index(inst);
  const BMatrix b(index, plan);
  ConditionReport report;
  auto in_range = [&](Index i) { return i >= 1 && i <= inst.n; };
  auto holds = [&](Index anchor, Index target) {
    if (!in_range(anchor) || !in_range(target)) return false;
    for (int pos : index.containing(anchor)) {
      if (b.test(pos, target)) return true;
    }
    return false;
  };

  for (const auto& p : plan.f_set) {
    if (!holds(p.i, p.j)) report.violations.push_back({p, ConditionViolation::Kind::kCondition1});
    if (!holds(p.j, p.i)) report.violations.push_back({p, ConditionViolation::Kind::kCondition2});
  }
  for (const auto& p : inst.products) {
    if (!plan.f_set.contains(p)) report.violations.push_back({p, ConditionViolation::Kind::kMissingProduct});
  }
  const auto induced = induced_products(inst, plan.b_sets);
  for (const auto& p : plan.f_set) {
    if (!induced.contains(p)) report.violations.push_back({p, ConditionViolation::Kind::kNotInduced});
  }
  for (const auto& p : induced) {
    if (!plan.f_set.contains(p)) report.violations.push_back({p, ConditionViolation::Kind::kMissingInduced});
  }
  report.ok = report.violations.empty();
  return report;
}

int heuristic_cost(const BqpInstance& inst, const LinearizationPlan& plan, Index i, SetId k) {
  check_index(inst, i);
  const AssignmentIndex index(inst);
  return cost(index, BMatrix(index, plan), i, index.position(k));
}

SetId select_k_star(const BqpInstance& inst, const LinearizationPlan& plan, Index i, Index j) {
  check_index(inst, i);
  check_index(inst, j);
  const AssignmentIndex index(inst);
  return index.key(select(index, BMatrix(index, plan), i, j));
}

SetId select_l_star(const BqpInstance& inst, const LinearizationPlan& plan, Index i, Index j) {
  return select_k_star(inst, plan, j, i);
}

LinearizationPlan construct_sets(const BqpInstance& inst, const ClosureOptions& options) {
  const AssignmentIndex index(inst);
  BMatrix b(index);
  LinearizationPlan plan;
  for (int pos = 0; pos < index.size(); ++pos) plan.b_sets[index.key(pos)];

  std::vector<Pair> worklist;
  for (const auto& p : inst.products) {
    if (plan.f_set.insert(p).second) {
      plan.provenance[p] = {Provenance::Origin::kProduct, p, 0};
      worklist.push_back(p);
    }
  }

  std::mt19937_64 rng(options.shuffle_seed.value_or(0));
  // Adds `target` to B at `pos` and records the products it induces.
  auto extend = [&](int pos, Index target, Pair trigger, Provenance::Origin origin, std::vector<Pair>& added) {
    if (b.test(pos, target)) return;
    b.set(pos, target);
    plan.b_sets[index.key(pos)].insert(target);
    for (Index a : index.members(pos)) {
      const Pair q = normalize_pair(a, target);
      if (plan.f_set.insert(q).second) {
        plan.provenance[q] = {origin, trigger, index.key(pos)};
        added.push_back(q);
      }
    }
  };

  while (!worklist.empty()) {
    if (options.shuffle_seed) std::shuffle(worklist.begin(), worklist.end(), rng);
    std::vector<Pair> added;
    for (const Pair p : worklist) {
      extend(select(index, b, p.i, p.j), p.j, p, Provenance::Origin::kCondition1, added);
      extend(select(index, b, p.j, p.i), p.i, p, Provenance::Origin::kCondition2, added);
    }
    worklist = std::move(added);
  }
  return plan;
}

double plan_objective(const LinearizationPlan& plan, double w_eqn, double w_var) {
  return w_eqn * plan.total_b_size() + w_var * static_cast<double>(plan.f_set.size());
}

}  // namespace compactlin
