#include "compactlin/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "compactlin/emitter.hpp"
#include "compactlin/instance.hpp"
#include "compactlin/io.hpp"
#include "compactlin/linearizer.hpp"
#include "compactlin/milp.hpp"
#include "compactlin/verifier.hpp"

namespace compactlin {
namespace {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << content;
  if (!out) throw IoError("cannot write " + path);
}

std::string plan_text(const BqpInstance& inst, const LinearizationPlan& plan) {
  std::ostringstream out;
  for (const auto& [k, members] : plan.b_sets) {
    out << "B_" << k << " = {";
    bool first = true;
    for (Index i : members) {
      out << (first ? "" : ",") << i;
      first = false;
    }
    out << "}";
    const auto a = inst.assignment_sets.find(k);
    if (a != inst.assignment_sets.end()) {
      out << "   (A_" << k << " = {";
      for (std::size_t p = 0; p < a->second.size(); ++p) out << (p ? "," : "") << a->second[p];
      out << "})";
    }
    out << '\n';
  }
  out << "F = {";
  bool first = true;
  for (const auto& p : plan.f_set) {
    out << (first ? "" : ",") << to_string(p);
    first = false;
  }
  out << "}\n";
  return out.str();
}

std::string vector_text(const BinaryVector& x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) s += (i ? "," : "") + std::to_string(x[i]);
  return s + ")";
}

struct Loaded {
  BqpInstance instance;
  PreprocessResult preprocess;
};

// Returns an exit code != 0 when the instance cannot be used.
int load(const CliConfig& config, Loaded& loaded, std::ostream& out, std::ostream& err) {
  loaded.instance = parse_instance(read_file(config.input));
  const ValidationReport report = validate(loaded.instance);
  if (!report.ok) {
    if (config.json) {
      out << Json{{"validation", to_json(report)}}.dump(2) << '\n';
    } else {
      for (const auto& v : report.violations) err << "invalid instance: " << v.message << '\n';
    }
    return kExitValidation;
  }
  if (config.simplify_trivial) {
    loaded.preprocess = preprocess_trivial(loaded.instance);
    loaded.instance = loaded.preprocess.instance;
  }
  return kExitOk;
}

LinearizationPlan choose_plan(const CliConfig& config, const BqpInstance& inst) {
  if (!config.plan.empty()) return parse_plan(read_file(config.plan), inst);
  if (config.liberti_mode) return liberti_plan(inst);
  return construct_sets(inst);
}

std::string recipe_name(const CliConfig& config) {
  if (!config.plan.empty()) return "file";
  return config.liberti_mode ? "liberti" : "closure";
}

int run_linearize(const CliConfig& config, const Loaded& loaded, std::ostream& out) {
  const BqpInstance& inst = loaded.instance;
  const LinearizationPlan plan = config.liberti_mode ? liberti_plan(inst) : construct_sets(inst);
  const ConditionReport conditions = check_conditions(inst, plan);
  const SizeReport sizes = size_report(inst, plan);
  std::string lp;
  if (conditions.ok || config.unsafe_emit) {
    lp = write_lp(emit_compact(inst, plan, {.allow_unsafe = config.unsafe_emit}));
  }
  if (!config.output.empty()) {
    if (!lp.empty()) write_file(config.output, lp);
    write_file(config.output + ".plan.json", plan_to_json(plan).dump(2) + "\n");
  }

  if (config.json) {
    Json doc{{"plan", plan_to_json(plan)}, {"conditions", to_json(conditions)}, {"size_report", to_json(sizes)}};
    if (config.simplify_trivial) doc["substitutions"] = to_json(loaded.preprocess);
    if (config.output.empty()) doc["lp"] = lp.empty() ? Json(nullptr) : Json(lp);
    out << doc.dump(2) << '\n';
  } else {
    for (const auto& s : to_json(loaded.preprocess)) out << "substituted " << s.get<std::string>() << '\n';
    out << plan_text(inst, plan) << '\n' << format_size_table(sizes);
    if (!conditions.ok) {
      const auto& v = conditions.violations.front();
      out << "\nplan violates " << to_string(v.kind) << " at pair " << to_string(v.pair) << '\n';
    }
    if (config.output.empty() && !lp.empty()) out << '\n' << lp;
  }
  return conditions.ok ? kExitOk : kExitValidation;
}

int run_minimize(const CliConfig& config, const Loaded& loaded, std::ostream& out) {
  const BqpInstance& inst = loaded.instance;
  const MilpModel model = build_min_milp(inst, config.w_eqn, config.w_var);
  const std::string lp = write_lp(model);
  const MilpSolution solution = solve_exact(model, {.node_budget = config.budget});
  const TuReport tu = check_tu_structure(model, {.seed = config.seed});
  const double closure_objective = plan_objective(construct_sets(inst), config.w_eqn, config.w_var);

  if (!config.output.empty()) {
    write_file(config.output, lp);
    if (solution.optimal) write_file(config.output + ".plan.json", plan_to_json(solution.plan).dump(2) + "\n");
  }
  if (config.json) {
    Json doc{{"solution", to_json(solution)},
             {"closure_objective", closure_objective},
             {"tu", to_json(tu)},
             {"rows", model.rows().size()},
             {"columns", model.columns().size()}};
    if (config.output.empty()) doc["lp"] = lp;
    out << doc.dump(2) << '\n';
  } else {
    out << "model: " << model.num_z() << " z, " << model.num_f() << " f, " << model.rows().size() << " rows\n";
    out << (solution.optimal ? "optimal" : "budget exceeded, best found") << " objective "
        << format_number(solution.objective_value) << " after " << solution.nodes_explored << " nodes\n";
    out << "closure objective " << format_number(closure_objective) << '\n';
    out << plan_text(inst, solution.plan);
    out << "TU structure: " << (tu.structural_ok ? "ok" : "violated") << " (" << tu.rows_checked
        << " rows), sampled determinants: " << (tu.sampled_determinants_ok ? "ok" : "violated") << " ("
        << tu.samples << " samples)\n";
    if (tu.counterexample) out << "  " << *tu.counterexample << '\n';
    if (config.output.empty()) out << '\n' << lp;
  }
  return solution.optimal ? kExitOk : kExitBudget;
}

int run_verify(const CliConfig& config, const Loaded& loaded, std::ostream& out) {
  const BqpInstance& inst = loaded.instance;
  const LinearizationPlan plan = choose_plan(config, inst);
  const ConditionReport conditions = check_conditions(inst, plan);
  const ConsistencyReport report = check_consistency(inst, plan, {.max_x = config.cap_x, .max_y_nodes = config.cap_y});

  Json doc{{"recipe", recipe_name(config)},
           {"plan", plan_to_json(plan)},
           {"conditions", to_json(conditions)},
           {"consistency", to_json(report)}};
  if (!config.output.empty()) write_file(config.output, doc.dump(2) + "\n");
  if (config.json) {
    out << doc.dump(2) << '\n';
  } else {
    out << "recipe: " << recipe_name(config) << '\n' << plan_text(inst, plan);
    out << "conditions: " << (conditions.ok ? "satisfied" : "violated") << '\n';
    for (const auto& v : conditions.violations) out << "  pair " << to_string(v.pair) << ": " << to_string(v.kind) << '\n';
    out << "checked " << report.x_assignments_checked << " feasible x"
        << (report.exhaustive ? "" : " (not exhaustively verified)") << '\n';
    if (report.witness) {
      const Witness& w = *report.witness;
      out << "INCONSISTENT: pair " << to_string(w.pair) << " violates " << to_string(w.bound) << '\n';
      out << "  x = " << vector_text(w.x) << '\n' << "  y:";
      for (const auto& [p, v] : w.y) {
        if (v != 0) out << " y" << p.i << "_" << p.j << "=1";
      }
      out << " (all others 0)\n";
    } else {
      out << "consistent: every solution has y_ij = x_i x_j\n";
    }
  }
  if (report.witness) return kExitWitness;
  return report.exhaustive ? kExitOk : kExitBudget;
}

int run_compare(const CliConfig& config, const Loaded& loaded, std::ostream& out) {
  const BqpInstance& inst = loaded.instance;
  const SizeReport sizes = size_report(inst, construct_sets(inst));
  if (!config.output.empty()) write_file(config.output, to_json(sizes).dump(2) + "\n");
  if (config.json) {
    out << to_json(sizes).dump(2) << '\n';
  } else {
    out << format_comparison_table(sizes);
  }
  return kExitOk;
}

int run_emit(const CliConfig& config, const Loaded& loaded, std::ostream& out, std::ostream& err) {
  const BqpInstance& inst = loaded.instance;
  std::string lp;
  if (config.standard) {
    lp = write_lp(emit_standard(inst));
  } else {
    const LinearizationPlan plan = choose_plan(config, inst);
    try {
      lp = write_lp(emit_compact(inst, plan, {.allow_unsafe = config.unsafe_emit}));
    } catch (const UnsafePlanError& e) {
      err << e.what() << " (use --unsafe-emit to emit anyway)\n";
      return kExitValidation;
    }
  }
  if (config.output.empty()) {
    out << lp;
  } else {
    write_file(config.output, lp);
  }
  return kExitOk;
}

}  // namespace

int run(const CliConfig& config, std::ostream& out, std::ostream& err) {
  try {
    Loaded loaded;
    if (const int code = load(config, loaded, out, err); code != kExitOk) return code;
    switch (config.command) {
      case CliConfig::Command::kLinearize:
        return run_linearize(config, loaded, out);
      case CliConfig::Command::kMinimize:
        return run_minimize(config, loaded, out);
      case CliConfig::Command::kVerify:
        return run_verify(config, loaded, out);
      case CliConfig::Command::kCompare:
        return run_compare(config, loaded, out);
      case CliConfig::Command::kEmit:
        return run_emit(config, loaded, out, err);
    }
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitIo;
}

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Compact linearization of binary quadratic programs with assignment constraints"};
  app.require_subcommand(1);

  CliConfig config;
  std::string weights = "1,1";
  struct Spec {
    CliConfig::Command command;
    const char* name;
    const char* help;
  };
  const Spec specs[] = {
      {CliConfig::Command::kLinearize, "linearize", "Compute B_k and F, emit the compact model"},
      {CliConfig::Command::kMinimize, "minimize", "Build and solve the size-minimization model"},
      {CliConfig::Command::kVerify, "verify", "Brute-force consistency check of a plan"},
      {CliConfig::Command::kCompare, "compare", "Compare compact and standard linearization sizes"},
      {CliConfig::Command::kEmit, "emit", "Write the LP file for a plan"},
  };
  std::vector<std::pair<CLI::App*, CliConfig::Command>> subcommands;
  for (const auto& spec : specs) {
    CLI::App* sub = app.add_subcommand(spec.name, spec.help);
    sub->add_option("input", config.input, "Instance file (JSON)")->required();
    sub->add_option("-o,--output", config.output, "Output path");
    sub->add_option("--weights", weights, "w_eqn,w_var (default 1,1)");
    sub->add_flag("--simplify-trivial", config.simplify_trivial, "Drop products fixed by the assignment rows");
    sub->add_flag("--unsafe-emit", config.unsafe_emit, "Emit plans that fail the conditions");
    sub->add_flag("--liberti-mode", config.liberti_mode, "Use the A_k subset-of B_k recipe");
    sub->add_option("--seed", config.seed, "Seed for determinant sampling");
    sub->add_option("--cap-x", config.cap_x, "Max feasible x vectors to check");
    sub->add_option("--cap-y", config.cap_y, "Max search nodes per x");
    sub->add_option("--budget", config.budget, "Branch-and-bound node budget");
    sub->add_option("--plan", config.plan, "Plan file (JSON) for verify/emit");
    sub->add_flag("--standard", config.standard, "emit: standard linearization");
    sub->add_flag("--json", config.json, "Machine-readable output");
    subcommands.emplace_back(sub, spec.command);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
    const auto comma = weights.find(',');
    if (comma == std::string::npos) throw CLI::ValidationError("--weights", "expected w_eqn,w_var");
    try {
      config.w_eqn = std::stod(weights.substr(0, comma));
      config.w_var = std::stod(weights.substr(comma + 1));
    } catch (const std::exception&) {
      throw CLI::ValidationError("--weights", "expected two numbers");
    }
    if (config.w_eqn < 0 || config.w_var < 0) throw CLI::ValidationError("--weights", "weights must be >= 0");
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kExitIo;
  }
  for (const auto& [sub, command] : subcommands) {
    if (sub->parsed()) config.command = command;
  }
  return run(config, out, err);
}

}  // namespace compactlin
