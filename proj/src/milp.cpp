#include "compactlin/milp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace compactlin {

int MilpModel::z_column(Index i, int set_pos) const {
  return (i - 1) * static_cast<int>(set_keys_.size()) + set_pos;
}

int MilpModel::f_column(Pair p) const {
  const int before = (p.i - 1) * (n_ + 1) - (p.i - 1) * p.i / 2;
  return num_z() + before + (p.j - p.i);
}

int MilpModel::count_rows(RowOrigin origin) const {
  return static_cast<int>(std::count_if(rows_.begin(), rows_.end(),
                                        [&](const Row& r) { return r.origin == origin; }));
}

std::string to_string(MilpModel::RowOrigin origin) {
  switch (origin) {
    case MilpModel::RowOrigin::kFix:
      return "fix";
    case MilpModel::RowOrigin::kLinkA:
      return "link_a";
    case MilpModel::RowOrigin::kLinkB:
      return "link_b";
    case MilpModel::RowOrigin::kCond1:
      return "cond1";
    case MilpModel::RowOrigin::kCond2:
      return "cond2";
  }
  return "?";
}

MilpModel build_min_milp(const BqpInstance& inst, double w_eqn, double w_var) {
  if (w_eqn < 0 || w_var < 0) throw std::invalid_argument("weights must be nonnegative");
  const AssignmentIndex index(inst);
  MilpModel m;
  m.n_ = index.n();
  m.w_eqn_ = w_eqn;
  m.w_var_ = w_var;
  for (int pos = 0; pos < index.size(); ++pos) m.set_keys_.push_back(index.key(pos));

  const int n = m.n_;
  for (Index i = 1; i <= n; ++i) {
    for (int pos = 0; pos < index.size(); ++pos) m.columns_.push_back({MilpModel::ColumnKind::kZ, i, index.key(pos)});
  }
  for (Index i = 1; i <= n; ++i) {
    for (Index j = i; j <= n; ++j) m.columns_.push_back({MilpModel::ColumnKind::kF, i, j});
  }

  using RO = MilpModel::RowOrigin;
  for (const auto& p : inst.products) {
    m.rows_.push_back({RO::kFix, {{m.f_column(p), 1}}, Sense::kEqual, 1});
  }
  for (int pos = 0; pos < index.size(); ++pos) {
    for (Index i : index.members(pos)) {
      for (Index j = 1; j <= n; ++j) {
        const RO origin = i <= j ? RO::kLinkA : RO::kLinkB;
        m.rows_.push_back({origin,
                           {{m.f_column(normalize_pair(i, j)), 1}, {m.z_column(j, pos), -1}},
                           Sense::kGreaterEqual,
                           0});
      }
    }
  }
  for (RO origin : {RO::kCond1, RO::kCond2}) {
    for (Index i = 1; i <= n; ++i) {
      for (Index j = i; j <= n; ++j) {
        // cond1: some k with i in A_k has j in B_k; cond2 mirrored.
        const Index anchor = origin == RO::kCond1 ? i : j;
        const Index target = origin == RO::kCond1 ? j : i;
        MilpModel::Row row{origin, {}, Sense::kGreaterEqual, 0};
        for (int pos : index.containing(anchor)) row.terms.push_back({m.z_column(target, pos), 1});
        row.terms.push_back({m.f_column({i, j}), -1});
        m.rows_.push_back(std::move(row));
      }
    }
  }
  return m;
}

namespace {

// (weighted objective, sum z, sum f); compared lexicographically.
struct Score {
  double objective;
  int z_count;
  int f_count;

  bool at_least(const Score& o) const {
    constexpr double kEps = 1e-9;
    if (objective > o.objective + kEps) return true;
    if (objective < o.objective - kEps) return false;
    if (z_count != o.z_count) return z_count > o.z_count;
    return f_count >= o.f_count;
  }
};

class BranchAndBound {
 public:
  BranchAndBound(const MilpModel& model, const SolveLimits& limits)
      : model_(model),
        budget_(limits.node_budget),
        num_cols_(static_cast<int>(model.columns().size())),
        forces_(num_cols_),
        requirements_(num_cols_),
        fixed_(num_cols_, false),
        chosen_(num_cols_, false),
        forbidden_(num_cols_, 0),
        f_support_(num_cols_, 0) {
    using RO = MilpModel::RowOrigin;
    for (const auto& row : model.rows()) {
      switch (row.origin) {
        case RO::kFix:
          fixed_[row.terms.front().first] = true;
          break;
        case RO::kLinkA:
        case RO::kLinkB: {
          int f = -1;
          int z = -1;
          for (const auto& [col, coef] : row.terms) (coef > 0 ? f : z) = col;
          forces_[z].push_back(f);
          break;
        }
        case RO::kCond1:
        case RO::kCond2: {
          std::vector<int> zs;
          int f = -1;
          for (const auto& [col, coef] : row.terms) {
            if (coef > 0) {
              zs.push_back(col);
            } else {
              f = col;
            }
          }
          requirements_[f].push_back(std::move(zs));
          break;
        }
      }
    }
    for (int c = 0; c < num_cols_; ++c) {
      if (fixed_[c]) {
        ++f_support_[c];
        ++f_count_;
      }
    }
  }

  MilpSolution run() {
    seed_incumbent();
    search();
    MilpSolution out;
    out.optimal = !budget_hit_ && has_incumbent_;
    out.nodes_explored = nodes_;
    if (has_incumbent_) {
      out.objective_value = best_.objective;
      out.plan = decode(best_chosen_);
    }
    return out;
  }

 private:
  bool is_z(int c) const { return model_.columns()[c].kind == MilpModel::ColumnKind::kZ; }

  Score score() const {
    return {model_.w_eqn() * z_count_ + model_.w_var() * f_count_, z_count_, f_count_};
  }

  void choose(int z) {
    chosen_[z] = true;
    ++z_count_;
    for (int f : forces_[z]) {
      if (f_support_[f]++ == 0) ++f_count_;
    }
  }

  void unchoose(int z) {
    chosen_[z] = false;
    --z_count_;
    for (int f : forces_[z]) {
      if (--f_support_[f] == 0) --f_count_;
    }
  }

  // Smallest-branching unmet requirement of an active f; nullptr if none.
  // Sets `dead` when some unmet requirement has no free candidate.
  const std::vector<int>* pick_requirement(bool& dead) const {
    const std::vector<int>* best = nullptr;
    std::size_t best_free = std::numeric_limits<std::size_t>::max();
    dead = false;
    for (int f = 0; f < num_cols_; ++f) {
      if (f_support_[f] == 0) continue;
      for (const auto& zs : requirements_[f]) {
        if (std::any_of(zs.begin(), zs.end(), [&](int z) { return chosen_[z]; })) continue;
        const auto free = static_cast<std::size_t>(
            std::count_if(zs.begin(), zs.end(), [&](int z) { return forbidden_[z] == 0; }));
        if (free == 0) {
          dead = true;
          return nullptr;
        }
        if (free < best_free) {
          best = &zs;
          best_free = free;
        }
      }
    }
    return best;
  }

  void record_incumbent() {
    const Score s = score();
    if (has_incumbent_ && s.at_least(best_)) return;
    best_ = s;
    best_chosen_ = chosen_;
    has_incumbent_ = true;
  }

  void seed_incumbent() {
    for (int c = 0; c < num_cols_; ++c) {
      if (is_z(c)) choose(c);
    }
    bool dead = false;
    if (pick_requirement(dead) == nullptr && !dead) record_incumbent();
    for (int c = 0; c < num_cols_; ++c) {
      if (is_z(c)) unchoose(c);
    }
  }

  void search() {
    if (budget_hit_) return;
    if (++nodes_ > budget_) {
      budget_hit_ = true;
      return;
    }
    if (has_incumbent_ && score().at_least(best_)) return;
    bool dead = false;
    const std::vector<int>* requirement = pick_requirement(dead);
    if (dead) return;
    if (requirement == nullptr) {
      record_incumbent();
      return;
    }
    // Branch t takes the t-th free candidate and forbids the earlier ones,
    // so the branches partition the completions.
    const std::vector<int> candidates = *requirement;
    std::vector<int> forbidden_here;
    for (int z : candidates) {
      if (forbidden_[z] != 0) continue;
      choose(z);
      search();
      unchoose(z);
      ++forbidden_[z];
      forbidden_here.push_back(z);
      if (budget_hit_) break;
    }
    for (int z : forbidden_here) --forbidden_[z];
  }

  LinearizationPlan decode(const std::vector<bool>& chosen) const {
    LinearizationPlan plan;
    for (SetId k : model_.set_keys()) plan.b_sets[k];
    std::vector<int> support(num_cols_, 0);
    for (int c = 0; c < num_cols_; ++c) {
      if (fixed_[c]) support[c] = 1;
    }
    for (int c = 0; c < num_cols_; ++c) {
      if (!chosen[c]) continue;
      const auto& col = model_.columns()[c];
      plan.b_sets[col.second].insert(col.first);
      for (int f : forces_[c]) support[f] = 1;
    }
    for (int c = 0; c < num_cols_; ++c) {
      if (support[c] != 0) {
        const auto& col = model_.columns()[c];
        plan.f_set.insert({col.first, col.second});
      }
    }
    return plan;
  }

  const MilpModel& model_;
  std::int64_t budget_;
  int num_cols_;
  std::vector<std::vector<int>> forces_;                     // z -> f columns
  std::vector<std::vector<std::vector<int>>> requirements_;  // f -> z alternatives
  std::vector<bool> fixed_;
  std::vector<bool> chosen_;
  std::vector<int> forbidden_;
  std::vector<int> f_support_;
  int z_count_ = 0;
  int f_count_ = 0;
  std::int64_t nodes_ = 0;
  bool budget_hit_ = false;
  bool has_incumbent_ = false;
  Score best_{0, 0, 0};
  std::vector<bool> best_chosen_;
};

}  // namespace

MilpSolution solve_exact(const MilpModel& model, const SolveLimits& limits) {
  return BranchAndBound(model, limits).run();
}

std::int64_t integer_determinant(std::vector<std::vector<std::int64_t>> m) {
  const std::size_t size = m.size();
  if (size == 0) return 1;
  std::int64_t sign = 1;
  std::int64_t previous = 1;
  for (std::size_t k = 0; k < size; ++k) {
    if (m[k][k] == 0) {
      std::size_t swap = k + 1;
      while (swap < size && m[swap][k] == 0) ++swap;
      if (swap == size) return 0;
      std::swap(m[k], m[swap]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < size; ++i) {
      for (std::size_t j = k + 1; j < size; ++j) {
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / previous;
      }
      m[i][k] = 0;
    }
    previous = m[k][k];
  }
  return sign * m[size - 1][size - 1];
}

TuReport check_tu_structure(const MilpModel& model, const TuOptions& options) {
  using RO = MilpModel::RowOrigin;
  const int num_cols = static_cast<int>(model.columns().size());
  std::vector<bool> removed(num_cols, false);
  for (const auto& row : model.rows()) {
    if (row.origin == RO::kFix) removed[row.terms.front().first] = true;
  }
  std::vector<int> kept_index(num_cols, -1);
  int kept = 0;
  for (int c = 0; c < num_cols; ++c) {
    if (!removed[c]) kept_index[c] = kept++;
  }

  // Sparse rows of the reduced matrix.
  std::vector<std::map<int, std::int64_t>> matrix;
  TuReport report;
  for (const auto& row : model.rows()) {
    if (row.origin == RO::kFix) continue;
    std::map<int, std::int64_t> entries;
    for (const auto& [col, coef] : row.terms) {
      if (kept_index[col] >= 0) entries[kept_index[col]] += coef;
    }
    std::erase_if(entries, [](const auto& e) { return e.second == 0; });
    ++report.rows_checked;
    std::int64_t sum = 0;
    bool unit = true;
    for (const auto& [col, value] : entries) {
      sum += value;
      unit = unit && std::llabs(value) == 1;
    }
    if (!unit || entries.size() > 2 || (entries.size() == 2 && sum != 0)) report.structural_ok = false;
    matrix.push_back(std::move(entries));
  }

  const int num_rows = static_cast<int>(matrix.size());
  const int max_order = std::min({options.max_order, num_rows, kept});
  if (max_order < 1) return report;

  std::mt19937_64 rng(options.seed);
  std::vector<int> all_rows(num_rows);
  std::iota(all_rows.begin(), all_rows.end(), 0);
  std::vector<int> all_cols(kept);
  std::iota(all_cols.begin(), all_cols.end(), 0);
  for (int s = 0; s < options.samples; ++s) {
    const int order = std::uniform_int_distribution<int>(1, max_order)(rng);
    std::vector<int> rows;
    std::sample(all_rows.begin(), all_rows.end(), std::back_inserter(rows), order, rng);
    std::shuffle(rows.begin(), rows.end(), rng);
    // Prefer columns in the support of the chosen rows so that samples are
    // rarely trivially singular.
    std::set<int> support;
    for (int r : rows) {
      for (const auto& [col, value] : matrix[r]) support.insert(col);
    }
    std::vector<int> cols;
    std::vector<int> pool(support.begin(), support.end());
    std::shuffle(pool.begin(), pool.end(), rng);
    for (int c : pool) {
      if (static_cast<int>(cols.size()) == order) break;
      cols.push_back(c);
    }
    while (static_cast<int>(cols.size()) < order) {
      const int c = std::uniform_int_distribution<int>(0, kept - 1)(rng);
      if (std::find(cols.begin(), cols.end(), c) == cols.end()) cols.push_back(c);
    }

    std::vector<std::vector<std::int64_t>> sub(order, std::vector<std::int64_t>(order, 0));
    for (int a = 0; a < order; ++a) {
      for (int b = 0; b < order; ++b) {
        const auto it = matrix[rows[a]].find(cols[b]);
        if (it != matrix[rows[a]].end()) sub[a][b] = it->second;
      }
    }
    ++report.samples;
    const std::int64_t det = integer_determinant(sub);
    if (std::llabs(det) > 1) {
      report.sampled_determinants_ok = false;
      if (!report.counterexample) {
        std::ostringstream out;
        out << "order " << order << " submatrix with determinant " << det << ", rows";
        for (int r : rows) out << ' ' << r;
        out << ", columns";
        for (int c : cols) out << ' ' << c;
        report.counterexample = out.str();
      }
    }
  }
  return report;
}

}  // namespace compactlin
