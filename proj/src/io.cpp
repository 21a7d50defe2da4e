#include "compactlin/io.hpp"

#include <charconv>
#include <iomanip>
#include <sstream>

namespace compactlin {
namespace {

Json pair_json(const Pair& p) { return Json::array({p.i, p.j}); }

std::string pair_key(const Pair& p) { return std::to_string(p.i) + "," + std::to_string(p.j); }

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ParseError(path.empty() ? message : path + ": " + message, 0, 0, path);
}

Index plan_index(const nlohmann::json& node, const BqpInstance& inst, const std::string& path) {
  if (!node.is_number_integer()) fail(path, "expected an integer index");
  const auto v = node.get<long long>();
  if (v < 1 || v > inst.n) fail(path, "index " + std::to_string(v) + " out of range 1.." + std::to_string(inst.n));
  return static_cast<Index>(v);
}

}  // namespace

std::string to_string(ConditionViolation::Kind kind) {
  switch (kind) {
    case ConditionViolation::Kind::kCondition1:
      return "condition 1";
    case ConditionViolation::Kind::kCondition2:
      return "condition 2";
    case ConditionViolation::Kind::kMissingProduct:
      return "product missing from F";
    case ConditionViolation::Kind::kNotInduced:
      return "not induced by any A_k x B_k";
    case ConditionViolation::Kind::kMissingInduced:
      return "induced pair missing from F";
  }
  return "?";
}

Json plan_to_json(const LinearizationPlan& plan) {
  Json b_sets = Json::object();
  for (const auto& [k, members] : plan.b_sets) b_sets[std::to_string(k)] = Json(std::vector<Index>(members.begin(), members.end()));
  Json f_set = Json::array();
  for (const auto& p : plan.f_set) f_set.push_back(pair_json(p));
  return Json{{"b_sets", b_sets}, {"f_set", f_set}};
}

LinearizationPlan parse_plan(std::string_view text, const BqpInstance& inst) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("plan syntax error: ") + e.what(), 0, 0);
  }
  if (!doc.is_object() || !doc.contains("b_sets") || !doc["b_sets"].is_object()) {
    fail("", "plan must be an object with \"b_sets\"");
  }
  LinearizationPlan plan;
  for (const auto& [key, members] : doc["b_sets"].items()) {
    const std::string path = "b_sets." + key;
    SetId k = 0;
    auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), k);
    if (ec != std::errc() || ptr != key.data() + key.size()) fail(path, "expected an integer set key");
    if (!inst.assignment_sets.contains(k)) fail(path, "unknown assignment set " + key);
    if (!members.is_array()) fail(path, "expected an array of indices");
    auto& set = plan.b_sets[k];
    for (std::size_t p = 0; p < members.size(); ++p) {
      set.insert(plan_index(members[p], inst, path + "[" + std::to_string(p) + "]"));
    }
  }
  if (doc.contains("f_set")) {
    const auto& f = doc["f_set"];
    if (!f.is_array()) fail("f_set", "expected an array of pairs");
    for (std::size_t p = 0; p < f.size(); ++p) {
      const std::string path = "f_set[" + std::to_string(p) + "]";
      if (!f[p].is_array() || f[p].size() != 2) fail(path, "expected a pair [i, j]");
      const Index i = plan_index(f[p][0], inst, path);
      const Index j = plan_index(f[p][1], inst, path);
      if (i > j) fail(path, "pair not normalized (i \xe2\x89\xa4 j required)");
      plan.f_set.insert({i, j});
    }
  } else {
    plan.f_set = induced_products(inst, plan.b_sets);
  }
  return plan;
}

Json to_json(const ValidationReport& report) {
  Json violations = Json::array();
  for (const auto& v : report.violations) violations.push_back({{"code", v.code}, {"message", v.message}});
  return Json{{"ok", report.ok}, {"is_disjoint", report.is_disjoint}, {"violations", violations}};
}

Json to_json(const ConditionReport& report) {
  Json violations = Json::array();
  for (const auto& v : report.violations) {
    Json entry{{"pair", pair_json(v.pair)}, {"kind", to_string(v.kind)}};
    if (v.kind == ConditionViolation::Kind::kCondition1) entry["condition"] = 1;
    if (v.kind == ConditionViolation::Kind::kCondition2) entry["condition"] = 2;
    violations.push_back(std::move(entry));
  }
  return Json{{"ok", report.ok}, {"violations", violations}};
}

Json to_json(const ConsistencyReport& report) {
  Json out{{"consistent", report.consistent},
           {"checked", report.x_assignments_checked},
           {"exhaustive", report.exhaustive}};
  if (report.witness) {
    const Witness& w = *report.witness;
    Json y = Json::object();
    for (const auto& [p, v] : w.y) y[pair_key(p)] = v;
    out["witness"] = Json{{"x", w.x}, {"y", y}, {"pair", pair_json(w.pair)}, {"bound", std::string(to_string(w.bound))}};
  } else {
    out["witness"] = nullptr;
  }
  return out;
}

Json to_json(const SizeReport& r) {
  return Json{{"n", r.n},
              {"num_sets", r.num_sets},
              {"num_products", r.num_products},
              {"num_f", r.num_f},
              {"total_b", r.total_b},
              {"standard_rows", r.standard_rows},
              {"compact_rows", r.compact_rows},
              {"standard_vars", r.standard_vars},
              {"compact_vars", r.compact_vars}};
}

Json to_json(const TuReport& r) {
  Json out{{"structural_ok", r.structural_ok},
           {"rows_checked", r.rows_checked},
           {"sampled_determinants_ok", r.sampled_determinants_ok},
           {"samples", r.samples}};
  out["counterexample"] = r.counterexample ? Json(*r.counterexample) : Json(nullptr);
  return out;
}

Json to_json(const MilpSolution& s) {
  return Json{{"optimal", s.optimal},
              {"objective", s.objective_value},
              {"nodes_explored", s.nodes_explored},
              {"plan", plan_to_json(s.plan)}};
}

Json to_json(const PreprocessResult& result) {
  Json log = Json::array();
  for (const auto& s : result.log) {
    const std::string y = "y" + std::to_string(s.pair.i) + "_" + std::to_string(s.pair.j);
    log.push_back(s.kind == Substitution::Kind::kSquare ? y + " := x" + std::to_string(s.pair.i) : y + " := 0");
  }
  return log;
}

std::string format_size_table(const SizeReport& r) {
  const std::vector<std::pair<std::string, int>> rows = {
      {"variables n", r.n},           {"assignment sets |K|", r.num_sets}, {"products |E|", r.num_products},
      {"products |F|", r.num_f},      {"sum |B_k|", r.total_b},          {"standard rows", r.standard_rows},
      {"compact rows", r.compact_rows}, {"standard vars", r.standard_vars}, {"compact vars", r.compact_vars},
  };
  std::ostringstream out;
  for (const auto& [label, value] : rows) out << std::left << std::setw(22) << label << std::right << std::setw(8) << value << '\n';
  return out.str();
}

std::string format_comparison_table(const SizeReport& r) {
  std::ostringstream out;
  out << std::left << std::setw(16) << "" << std::right << std::setw(10) << "standard" << std::setw(10) << "compact"
      << '\n';
  out << std::left << std::setw(16) << "y variables" << std::right << std::setw(10) << r.standard_vars
      << std::setw(10) << r.compact_vars << '\n';
  out << std::left << std::setw(16) << "rows" << std::right << std::setw(10) << r.standard_rows << std::setw(10)
      << r.compact_rows << '\n';
  return out.str();
}

}  // namespace compactlin
