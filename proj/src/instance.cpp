#include "compactlin/instance.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

#include <json.hpp>

namespace compactlin {

std::string to_string(const Pair& p) {
  return "(" + std::to_string(p.i) + "," + std::to_string(p.j) + ")";
}

std::string_view to_string(Sense sense) {
  switch (sense) {
    case Sense::kLessEqual:
      return "<=";
    case Sense::kGreaterEqual:
      return ">=";
    case Sense::kEqual:
      return "=";
  }
  return "?";
}

ParseError::ParseError(const std::string& what, int line, int column, std::string path)
    : std::runtime_error(what), line_(line), column_(column), path_(std::move(path)) {}

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ParseError(path.empty() ? message : path + ": " + message, 0, 0, path);
}

std::pair<int, int> line_column(std::string_view text, std::size_t byte) {
  int line = 1;
  int column = 1;
  for (std::size_t p = 0; p + 1 < byte && p < text.size(); ++p) {
    if (text[p] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

int parse_int_text(std::string_view s, const std::string& path) {
  int value = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc() || ptr != end) fail(path, "expected an integer, got \"" + std::string(s) + "\"");
  return value;
}

Index parse_index(const json& node, int n, const std::string& path) {
  if (!node.is_number_integer()) fail(path, "expected an integer index");
  const auto v = node.get<long long>();
  if (v < 1 || v > n) {
    fail(path, "index " + std::to_string(v) + " out of range 1.." + std::to_string(n));
  }
  return static_cast<Index>(v);
}

Index parse_index_text(std::string_view s, int n, const std::string& path) {
  const int v = parse_int_text(s, path);
  if (v < 1 || v > n) {
    fail(path, "index " + std::to_string(v) + " out of range 1.." + std::to_string(n));
  }
  return v;
}

Pair checked_pair(Index i, Index j, const std::string& path) {
  if (i > j) fail(path, "pair not normalized (i \xe2\x89\xa4 j required)");
  return {i, j};
}

Pair parse_pair_key(std::string_view key, int n, const std::string& path) {
  const auto comma = key.find(',');
  if (comma == std::string_view::npos) fail(path, "expected a key of the form \"i,j\"");
  auto trim = [](std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    return s;
  };
  const Index i = parse_index_text(trim(key.substr(0, comma)), n, path);
  const Index j = parse_index_text(trim(key.substr(comma + 1)), n, path);
  return checked_pair(i, j, path);
}

double parse_number(const json& node, const std::string& path) {
  if (!node.is_number()) fail(path, "expected a number");
  return node.get<double>();
}

std::map<Index, double> parse_linear(const json& node, int n, const std::string& path) {
  if (!node.is_object()) fail(path, "expected an object");
  std::map<Index, double> out;
  for (const auto& [key, value] : node.items()) {
    const std::string p = path + "." + key;
    out[parse_index_text(key, n, p)] = parse_number(value, p);
  }
  return out;
}

std::map<Pair, double> parse_quadratic(const json& node, int n, const std::set<Pair>& products,
                                       const std::string& path) {
  if (!node.is_object()) fail(path, "expected an object");
  std::map<Pair, double> out;
  for (const auto& [key, value] : node.items()) {
    const std::string p = path + "." + key;
    const Pair pair = parse_pair_key(key, n, p);
    if (!products.contains(pair)) fail(p, "quadratic term " + to_string(pair) + " not in products");
    if (out.contains(pair)) fail(p, "duplicate quadratic term " + to_string(pair));
    out[pair] = parse_number(value, p);
  }
  return out;
}

Sense parse_sense(const json& node, const std::string& path) {
  if (!node.is_string()) fail(path, "expected one of \"<=\", \">=\", \"=\"");
  const auto s = node.get<std::string>();
  if (s == "<=") return Sense::kLessEqual;
  if (s == ">=") return Sense::kGreaterEqual;
  if (s == "=" || s == "==") return Sense::kEqual;
  fail(path, "unknown sense \"" + s + "\"");
}

template <typename Map>
json linear_json(const Map& m) {
  json out = json::object();
  for (const auto& [i, c] : m) out[std::to_string(i)] = c;
  return out;
}

json quadratic_json(const std::map<Pair, double>& m) {
  json out = json::object();
  for (const auto& [p, c] : m) out[std::to_string(p.i) + "," + std::to_string(p.j)] = c;
  return out;
}

}  // namespace

BqpInstance parse_instance(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte);
    throw ParseError("syntax error at line " + std::to_string(line) + ", column " +
                         std::to_string(column) + ": " + e.what(),
                     line, column);
  }
  if (!doc.is_object()) fail("", "instance must be a JSON object");

  BqpInstance inst;
  if (!doc.contains("n")) fail("", "missing field \"n\"");
  if (!doc["n"].is_number_integer() || doc["n"].get<long long>() < 1) {
    fail("n", "expected a positive integer");
  }
  inst.n = doc["n"].get<int>();

  if (!doc.contains("assignment_sets") || !doc["assignment_sets"].is_object()) {
    fail("", "missing object \"assignment_sets\"");
  }
  for (const auto& [key, members] : doc["assignment_sets"].items()) {
    const std::string path = "assignment_sets." + key;
    const SetId k = parse_int_text(key, path);
    if (inst.assignment_sets.contains(k)) fail(path, "duplicate set key");
    if (!members.is_array()) fail(path, "expected an array of indices");
    std::vector<Index> set;
    for (std::size_t p = 0; p < members.size(); ++p) {
      set.push_back(parse_index(members[p], inst.n, path + "[" + std::to_string(p) + "]"));
    }
    std::sort(set.begin(), set.end());
    if (std::adjacent_find(set.begin(), set.end()) != set.end()) {
      fail(path, "duplicate index in assignment set");
    }
    inst.assignment_sets.emplace(k, std::move(set));
  }

  if (!doc.contains("products") || !doc["products"].is_array()) {
    fail("", "missing array \"products\"");
  }
  std::set<Pair> seen;
  const auto& products = doc["products"];
  for (std::size_t p = 0; p < products.size(); ++p) {
    const std::string path = "products[" + std::to_string(p) + "]";
    const auto& node = products[p];
    if (!node.is_array() || node.size() != 2) fail(path, "expected a pair [i, j]");
    const Pair pair = checked_pair(parse_index(node[0], inst.n, path), parse_index(node[1], inst.n, path), path);
    if (!seen.insert(pair).second) fail(path, "duplicate pair " + to_string(pair));
    inst.products.push_back(pair);
  }

  if (doc.contains("objective")) {
    const auto& obj = doc["objective"];
    if (!obj.is_object()) fail("objective", "expected an object");
    if (obj.contains("linear")) inst.linear_objective = parse_linear(obj["linear"], inst.n, "objective.linear");
    if (obj.contains("quadratic")) {
      inst.quadratic_objective = parse_quadratic(obj["quadratic"], inst.n, seen, "objective.quadratic");
    }
  }

  if (doc.contains("constraints")) {
    const auto& rows = doc["constraints"];
    if (!rows.is_array()) fail("constraints", "expected an array");
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const std::string path = "constraints[" + std::to_string(r) + "]";
      const auto& row = rows[r];
      if (!row.is_object()) fail(path, "expected an object");
      ExtraConstraint c;
      if (row.contains("linear")) c.linear = parse_linear(row["linear"], inst.n, path + ".linear");
      if (row.contains("quadratic")) c.quadratic = parse_quadratic(row["quadratic"], inst.n, seen, path + ".quadratic");
      if (!row.contains("sense")) fail(path, "missing \"sense\"");
      c.sense = parse_sense(row["sense"], path + ".sense");
      if (!row.contains("rhs")) fail(path, "missing \"rhs\"");
      c.rhs = parse_number(row["rhs"], path + ".rhs");
      inst.extra_constraints.push_back(std::move(c));
    }
  }
  return inst;
}

std::string serialize_instance(const BqpInstance& inst) {
  nlohmann::ordered_json doc;
  doc["n"] = inst.n;
  auto sets = nlohmann::ordered_json::object();
  for (const auto& [k, members] : inst.assignment_sets) sets[std::to_string(k)] = members;
  doc["assignment_sets"] = sets;
  auto products = nlohmann::ordered_json::array();
  for (const auto& p : inst.products) products.push_back({p.i, p.j});
  doc["products"] = products;
  if (!inst.linear_objective.empty() || !inst.quadratic_objective.empty()) {
    doc["objective"] = {{"linear", linear_json(inst.linear_objective)},
                        {"quadratic", quadratic_json(inst.quadratic_objective)}};
  }
  if (!inst.extra_constraints.empty()) {
    auto rows = nlohmann::ordered_json::array();
    for (const auto& c : inst.extra_constraints) {
      nlohmann::ordered_json row;
      row["linear"] = linear_json(c.linear);
      row["quadratic"] = quadratic_json(c.quadratic);
      row["sense"] = std::string(to_string(c.sense));
      row["rhs"] = c.rhs;
      rows.push_back(std::move(row));
    }
    doc["constraints"] = rows;
  }
  return doc.dump(2) + "\n";
}

ValidationReport validate(const BqpInstance& inst) {
  ValidationReport report;
  auto add = [&](std::string code, std::string message) {
    report.violations.push_back({std::move(code), std::move(message)});
  };
  auto in_range = [&](Index i) { return i >= 1 && i <= inst.n; };

  if (inst.n < 1) add("nonpositive_n", "n must be positive, got " + std::to_string(inst.n));

  std::vector<bool> covered(std::max(inst.n, 0) + 1, false);
  for (const auto& [k, members] : inst.assignment_sets) {
    if (members.empty()) add("empty_set", "assignment set " + std::to_string(k) + " is empty");
    for (Index i : members) {
      if (!in_range(i)) {
        add("index_out_of_range", "assignment set " + std::to_string(k) + " contains index " +
                                      std::to_string(i) + " outside 1.." + std::to_string(inst.n));
      } else {
        covered[i] = true;
      }
    }
  }

  std::set<Pair> seen;
  for (const auto& p : inst.products) {
    if (!in_range(p.i) || !in_range(p.j)) {
      add("index_out_of_range", "product " + to_string(p) + " outside 1.." + std::to_string(inst.n));
    } else if (p.i > p.j) {
      add("pair_not_normalized", "product " + to_string(p) + " not normalized (i <= j required)");
    }
    if (!seen.insert(p).second) add("duplicate_product", "duplicate product " + to_string(p));
  }

  for (Index i = 1; i <= inst.n; ++i) {
    if (!covered[i]) add("uncovered", "variable " + std::to_string(i) + " uncovered");
  }

  for (auto a = inst.assignment_sets.begin(); a != inst.assignment_sets.end() && report.is_disjoint; ++a) {
    for (auto b = std::next(a); b != inst.assignment_sets.end(); ++b) {
      std::vector<Index> common;
      std::set_intersection(a->second.begin(), a->second.end(), b->second.begin(), b->second.end(),
                            std::back_inserter(common));
      if (!common.empty()) {
        report.is_disjoint = false;
        break;
      }
    }
  }

  report.ok = report.violations.empty();
  return report;
}

std::vector<SetId> sets_containing(const BqpInstance& inst, Index i) {
  if (i < 1 || i > inst.n) {
    throw std::out_of_range("variable index " + std::to_string(i) + " outside 1.." + std::to_string(inst.n));
  }
  std::vector<SetId> out;
  for (const auto& [k, members] : inst.assignment_sets) {
    if (std::binary_search(members.begin(), members.end(), i)) out.push_back(k);
  }
  return out;
}

PreprocessResult preprocess_trivial(const BqpInstance& inst) {
  const AssignmentIndex index(inst);
  auto share_set = [&](Index i, Index j) {
    for (int pos : index.containing(i)) {
      if (index.contains(pos, j)) return true;
    }
    return false;
  };

  PreprocessResult result{inst, {}};
  BqpInstance& out = result.instance;
  out.products.clear();
  std::map<Pair, Substitution::Kind> dropped;
  for (const auto& p : inst.products) {
    if (p.i == p.j) {
      dropped[p] = Substitution::Kind::kSquare;
      result.log.push_back({p, Substitution::Kind::kSquare});
    } else if (share_set(p.i, p.j)) {
      dropped[p] = Substitution::Kind::kZero;
      result.log.push_back({p, Substitution::Kind::kZero});
    } else {
      out.products.push_back(p);
    }
  }

  auto fold = [&](std::map<Pair, double>& quadratic, std::map<Index, double>& linear) {
    for (auto it = quadratic.begin(); it != quadratic.end();) {
      const auto found = dropped.find(it->first);
      if (found == dropped.end()) {
        ++it;
        continue;
      }
      if (found->second == Substitution::Kind::kSquare) linear[it->first.i] += it->second;
      it = quadratic.erase(it);
    }
  };
  fold(out.quadratic_objective, out.linear_objective);
  for (auto& c : out.extra_constraints) fold(c.quadratic, c.linear);
  return result;
}

AssignmentIndex::AssignmentIndex(const BqpInstance& inst)
    : n_(std::max(inst.n, 0)), containing_(n_ + 1), member_((inst.assignment_sets.size()) * (n_ + 1), false) {
  for (const auto& [k, members] : inst.assignment_sets) {
    const int pos = static_cast<int>(keys_.size());
    keys_.push_back(k);
    auto& list = members_.emplace_back();
    for (Index i : members) {
      if (i < 1 || i > n_) continue;
      list.push_back(i);
      containing_[i].push_back(pos);
      member_[static_cast<std::size_t>(pos) * (n_ + 1) + i] = true;
    }
  }
}

int AssignmentIndex::position(SetId k) const {
  const auto it = std::lower_bound(keys_.begin(), keys_.end(), k);
  if (it == keys_.end() || *it != k) throw std::out_of_range("unknown assignment set " + std::to_string(k));
  return static_cast<int>(it - keys_.begin());
}

}  // namespace compactlin
