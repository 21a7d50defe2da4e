#include "compactlin/emitter.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include "compactlin/io.hpp"

namespace compactlin {
namespace {

// Merges repeated variables, keeping first-occurrence order.
LinearTerms combine(const LinearTerms& terms) {
  LinearTerms out;
  for (const auto& [var, coef] : terms) {
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& t) { return t.first == var; });
    if (it == out.end()) {
      out.emplace_back(var, coef);
    } else {
      it->second += coef;
    }
  }
  return out;
}

void add_assignment_rows(const BqpInstance& inst, LinearizedModel& model) {
  for (const auto& [k, members] : inst.assignment_sets) {
    LinearRow row{LinearRow::Kind::kAssignment, "assign_" + std::to_string(k), {}, Sense::kEqual, 1.0};
    for (Index i : members) row.terms.emplace_back(ModelVar::x(i), 1.0);
    model.rows.push_back(std::move(row));
  }
}

LinearTerms substitute(const std::map<Index, double>& linear, const std::map<Pair, double>& quadratic) {
  LinearTerms out;
  for (const auto& [i, c] : linear) out.emplace_back(ModelVar::x(i), c);
  for (const auto& [p, c] : quadratic) out.emplace_back(ModelVar::y(p), c);
  return out;
}

void add_pass_through(const BqpInstance& inst, LinearizedModel& model, std::set<Pair>& y_vars) {
  int r = 0;
  for (const auto& c : inst.extra_constraints) {
    ++r;
    for (const auto& [p, coef] : c.quadratic) y_vars.insert(p);
    model.rows.push_back({LinearRow::Kind::kPassThrough, "extra_" + std::to_string(r),
                          substitute(c.linear, c.quadratic), c.sense, c.rhs});
  }
  for (const auto& [p, coef] : inst.quadratic_objective) y_vars.insert(p);
  model.objective = substitute(inst.linear_objective, inst.quadratic_objective);
}

std::string var_name(const ModelVar& v) {
  if (v.kind == ModelVar::Kind::kX) return "x" + std::to_string(v.index.i);
  return "y" + std::to_string(v.index.i) + "_" + std::to_string(v.index.j);
}

using NamedTerms = std::vector<std::pair<std::string, double>>;

struct LpRow {
  std::string name;
  NamedTerms terms;
  Sense sense;
  double rhs;
};

struct LpDocument {
  std::vector<std::string> comments;
  NamedTerms objective;
  std::vector<LpRow> rows;
  std::vector<std::string> bounded;  // 0 <= v <= 1
  std::vector<std::string> binaries;
  std::string placeholder;           // used when an expression is empty
};

void render_expression(std::ostringstream& out, const NamedTerms& terms, const std::string& placeholder) {
  bool first = true;
  for (const auto& [name, coef] : terms) {
    if (coef == 0.0) continue;
    const double magnitude = std::fabs(coef);
    if (first) {
      if (coef < 0) out << "- ";
    } else {
      out << (coef < 0 ? " - " : " + ");
    }
    if (magnitude != 1.0) out << format_number(magnitude) << ' ';
    out << name;
    first = false;
  }
  if (first) out << "0 " << placeholder;
}

std::string render(const LpDocument& doc) {
  std::ostringstream out;
  for (const auto& c : doc.comments) out << "\\ " << c << '\n';
  out << "Minimize\n obj: ";
  render_expression(out, doc.objective, doc.placeholder);
  out << "\nSubject To\n";
  for (const auto& row : doc.rows) {
    out << ' ' << row.name << ": ";
    render_expression(out, row.terms, doc.placeholder);
    out << ' ' << to_string(row.sense) << ' ' << format_number(row.rhs) << '\n';
  }
  if (!doc.bounded.empty()) {
    out << "Bounds\n";
    for (const auto& v : doc.bounded) out << " 0 <= " << v << " <= 1\n";
  }
  if (!doc.binaries.empty()) {
    out << "Binary\n";
    for (const auto& v : doc.binaries) out << ' ' << v << '\n';
  }
  out << "End\n";
  return out.str();
}

NamedTerms named(const LinearTerms& terms) {
  NamedTerms out;
  for (const auto& [var, coef] : terms) out.emplace_back(var_name(var), coef);
  return out;
}

}  // namespace

std::string format_number(double value) {
  if (value == 0.0) return "0";
  std::array<char, 64> buffer{};
  auto [ptr, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  return std::string(buffer.data(), ptr);
}

int LinearizedModel::count_rows(LinearRow::Kind kind) const {
  return static_cast<int>(std::count_if(rows.begin(), rows.end(), [&](const LinearRow& r) { return r.kind == kind; }));
}

LinearizedModel emit_compact(const BqpInstance& inst, const LinearizationPlan& plan, const EmitOptions& options) {
  const ConditionReport conditions = check_conditions(inst, plan);
  if (!conditions.ok && !options.allow_unsafe) {
    const auto& v = conditions.violations.front();
    throw UnsafePlanError("plan fails the linearization conditions: pair " + to_string(v.pair) + " " +
                          to_string(v.kind));
  }

  LinearizedModel model;
  model.variant = LinearizedModel::Variant::kCompact;
  model.n = inst.n;
  model.unsafe = !conditions.ok;
  add_assignment_rows(inst, model);

  for (const auto& [k, members] : plan.b_sets) {
    const auto set = inst.assignment_sets.find(k);
    if (set == inst.assignment_sets.end()) continue;
    for (Index j : members) {
      std::set<Pair> lhs;
      for (Index i : set->second) {
        const Pair q = normalize_pair(i, j);
        if (plan.f_set.contains(q)) lhs.insert(q);
      }
      LinearRow row{LinearRow::Kind::kLinearization, "lin_" + std::to_string(k) + "_" + std::to_string(j), {},
                    Sense::kEqual, 0.0};
      for (const Pair& q : lhs) row.terms.emplace_back(ModelVar::y(q), 1.0);
      row.terms.emplace_back(ModelVar::x(j), -1.0);
      model.rows.push_back(std::move(row));
    }
  }

  std::set<Pair> y_vars(plan.f_set.begin(), plan.f_set.end());
  add_pass_through(inst, model, y_vars);
  model.y_vars.assign(y_vars.begin(), y_vars.end());
  return model;
}

LinearizedModel emit_standard(const BqpInstance& inst) {
  LinearizedModel model;
  model.variant = LinearizedModel::Variant::kStandard;
  model.n = inst.n;
  add_assignment_rows(inst, model);

  std::set<Pair> y_vars(inst.products.begin(), inst.products.end());
  for (const Pair& p : y_vars) {
    const std::string base = "std_" + std::to_string(p.i) + "_" + std::to_string(p.j) + "_";
    const ModelVar y = ModelVar::y(p);
    model.rows.push_back({LinearRow::Kind::kLinearization, base + "1",
                          combine({{y, 1.0}, {ModelVar::x(p.i), -1.0}}), Sense::kLessEqual, 0.0});
    model.rows.push_back({LinearRow::Kind::kLinearization, base + "2",
                          combine({{y, 1.0}, {ModelVar::x(p.j), -1.0}}), Sense::kLessEqual, 0.0});
    model.rows.push_back({LinearRow::Kind::kLinearization, base + "3",
                          combine({{y, 1.0}, {ModelVar::x(p.i), -1.0}, {ModelVar::x(p.j), -1.0}}),
                          Sense::kGreaterEqual, -1.0});
  }
  add_pass_through(inst, model, y_vars);
  model.y_vars.assign(y_vars.begin(), y_vars.end());
  return model;
}

SizeReport size_report(const BqpInstance& inst, const LinearizationPlan& plan) {
  SizeReport r;
  r.n = inst.n;
  r.num_sets = static_cast<int>(inst.assignment_sets.size());
  r.num_products = static_cast<int>(inst.products.size());
  r.num_f = static_cast<int>(plan.f_set.size());
  r.total_b = plan.total_b_size();
  r.standard_rows = 3 * r.num_products;
  r.compact_rows = r.total_b;
  r.standard_vars = r.num_products;
  r.compact_vars = r.num_f;
  return r;
}

std::string write_lp(const LinearizedModel& model) {
  LpDocument doc;
  doc.comments.push_back(model.variant == LinearizedModel::Variant::kCompact ? "compact linearization"
                                                                             : "standard linearization");
  if (model.unsafe) {
    doc.comments.push_back("UNSAFE: plan violates the linearization conditions; y may differ from x_i x_j");
  }
  doc.placeholder = model.n >= 1 ? "x1" : "y1_1";
  doc.objective = named(model.objective);
  for (const auto& row : model.rows) doc.rows.push_back({row.name, named(row.terms), row.sense, row.rhs});
  for (const auto& p : model.y_vars) doc.bounded.push_back(var_name(ModelVar::y(p)));
  for (Index i = 1; i <= model.n; ++i) doc.binaries.push_back(var_name(ModelVar::x(i)));
  return render(doc);
}

std::string write_lp(const MilpModel& model) {
  LpDocument doc;
  doc.comments.push_back("size-minimization model");
  auto name = [&](int col) {
    const auto& c = model.columns()[col];
    return std::string(c.kind == MilpModel::ColumnKind::kZ ? "z" : "f") + std::to_string(c.first) + "_" +
           std::to_string(c.second);
  };
  doc.placeholder = model.columns().empty() ? "f1_1" : name(0);
  for (int c = 0; c < static_cast<int>(model.columns().size()); ++c) {
    const bool z = model.columns()[c].kind == MilpModel::ColumnKind::kZ;
    doc.objective.emplace_back(name(c), z ? model.w_eqn() : model.w_var());
    (z ? doc.binaries : doc.bounded).push_back(name(c));
  }
  int serial = 0;
  for (const auto& row : model.rows()) {
    ++serial;
    NamedTerms terms;
    for (const auto& [col, coef] : row.terms) terms.emplace_back(name(col), coef);
    doc.rows.push_back({to_string(row.origin) + "_" + std::to_string(serial), std::move(terms), row.sense,
                        static_cast<double>(row.rhs)});
  }
  return render(doc);
}

}  // namespace compactlin
