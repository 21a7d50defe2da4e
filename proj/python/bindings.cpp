#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <functional>
#include <optional>

#include "compactlin/emitter.hpp"
#include "compactlin/instance.hpp"
#include "compactlin/io.hpp"
#include "compactlin/linearizer.hpp"
#include "compactlin/milp.hpp"
#include "compactlin/verifier.hpp"

namespace py = pybind11;
using namespace compactlin;

PYBIND11_MODULE(_compactlin, m) {
  m.doc() = "Compact linearization of binary quadratic programs with assignment constraints";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<UnsafePlanError>(m, "UnsafePlanError", PyExc_ValueError);

  py::class_<Pair>(m, "Pair")
      .def(py::init<Index, Index>())
      .def(py::init([](const std::pair<Index, Index>& p) { return Pair{p.first, p.second}; }))
      .def_readonly("i", &Pair::i)
      .def_readonly("j", &Pair::j)
      .def("__eq__", [](const Pair& a, const Pair& b) { return a == b; })
      .def("__lt__", [](const Pair& a, const Pair& b) { return a < b; })
      .def("__hash__", [](const Pair& p) { return std::hash<long long>{}((static_cast<long long>(p.i) << 32) ^ p.j); })
      .def("__iter__", [](const Pair& p) { return py::iter(py::make_tuple(p.i, p.j)); })
      .def("__repr__", [](const Pair& p) { return "Pair" + to_string(p); });
  py::implicitly_convertible<py::tuple, Pair>();

  m.def("normalize_pair", &normalize_pair, py::arg("i"), py::arg("j"));

  py::class_<BqpInstance>(m, "BqpInstance")
      .def(py::init<>())
      .def_readwrite("n", &BqpInstance::n)
      .def_readwrite("assignment_sets", &BqpInstance::assignment_sets)
      .def_readwrite("products", &BqpInstance::products)
      .def_readwrite("linear_objective", &BqpInstance::linear_objective)
      .def("__eq__", [](const BqpInstance& a, const BqpInstance& b) { return a == b; });

  py::class_<Violation>(m, "Violation")
      .def_readonly("code", &Violation::code)
      .def_readonly("message", &Violation::message);
  py::class_<ValidationReport>(m, "ValidationReport")
      .def_readonly("ok", &ValidationReport::ok)
      .def_readonly("violations", &ValidationReport::violations)
      .def_readonly("is_disjoint", &ValidationReport::is_disjoint);

  m.def("parse_instance", [](const std::string& text) { return parse_instance(text); }, py::arg("text"));
  m.def("serialize_instance", &serialize_instance, py::arg("instance"));
  m.def("validate", &validate, py::arg("instance"));
  m.def("sets_containing", &sets_containing, py::arg("instance"), py::arg("i"));
  m.def(
      "preprocess_trivial",
      [](const BqpInstance& inst) {
        const auto result = preprocess_trivial(inst);
        return py::make_tuple(result.instance, to_json(result).dump());
      },
      py::arg("instance"));

  py::class_<LinearizationPlan>(m, "LinearizationPlan")
      .def(py::init<>())
      .def_readwrite("b_sets", &LinearizationPlan::b_sets)
      .def_readwrite("f_set", &LinearizationPlan::f_set)
      .def("total_b_size", &LinearizationPlan::total_b_size)
      .def("to_json", [](const LinearizationPlan& p) { return plan_to_json(p).dump(); });

  py::class_<ConditionViolation>(m, "ConditionViolation")
      .def_readonly("pair", &ConditionViolation::pair)
      .def_property_readonly("kind", [](const ConditionViolation& v) { return to_string(v.kind); });
  py::class_<ConditionReport>(m, "ConditionReport")
      .def_readonly("ok", &ConditionReport::ok)
      .def_readonly("violations", &ConditionReport::violations);

  m.def(
      "construct_sets",
      [](const BqpInstance& inst, std::optional<std::uint64_t> seed) {
        return construct_sets(inst, {.shuffle_seed = seed});
      },
      py::arg("instance"), py::arg("shuffle_seed") = py::none());
  m.def("check_conditions", &check_conditions, py::arg("instance"), py::arg("plan"));
  m.def("heuristic_cost", &heuristic_cost, py::arg("instance"), py::arg("plan"), py::arg("i"), py::arg("k"));
  m.def("select_k_star", &select_k_star, py::arg("instance"), py::arg("plan"), py::arg("i"), py::arg("j"));
  m.def("select_l_star", &select_l_star, py::arg("instance"), py::arg("plan"), py::arg("i"), py::arg("j"));
  m.def("plan_objective", &plan_objective, py::arg("plan"), py::arg("w_eqn"), py::arg("w_var"));
  m.def("liberti_plan", &liberti_plan, py::arg("instance"));
  m.def(
      "parse_plan", [](const std::string& text, const BqpInstance& inst) { return parse_plan(text, inst); },
      py::arg("text"), py::arg("instance"));

  py::class_<MilpModel>(m, "MilpModel")
      .def_property_readonly("num_z", &MilpModel::num_z)
      .def_property_readonly("num_f", &MilpModel::num_f)
      .def_property_readonly("num_rows", [](const MilpModel& model) { return model.rows().size(); })
      .def("count_rows", [](const MilpModel& model, const std::string& origin) {
        for (auto o : {MilpModel::RowOrigin::kFix, MilpModel::RowOrigin::kLinkA, MilpModel::RowOrigin::kLinkB,
                       MilpModel::RowOrigin::kCond1, MilpModel::RowOrigin::kCond2}) {
          if (to_string(o) == origin) return model.count_rows(o);
        }
        throw py::value_error("unknown row origin " + origin);
      });
  py::class_<MilpSolution>(m, "MilpSolution")
      .def_readonly("plan", &MilpSolution::plan)
      .def_readonly("objective_value", &MilpSolution::objective_value)
      .def_readonly("optimal", &MilpSolution::optimal)
      .def_readonly("nodes_explored", &MilpSolution::nodes_explored);
  py::class_<TuReport>(m, "TuReport")
      .def_readonly("structural_ok", &TuReport::structural_ok)
      .def_readonly("rows_checked", &TuReport::rows_checked)
      .def_readonly("sampled_determinants_ok", &TuReport::sampled_determinants_ok)
      .def_readonly("samples", &TuReport::samples)
      .def_readonly("counterexample", &TuReport::counterexample);

  m.def("build_min_milp", &build_min_milp, py::arg("instance"), py::arg("w_eqn") = 1.0, py::arg("w_var") = 1.0);
  m.def(
      "solve_exact",
      [](const MilpModel& model, std::int64_t budget) { return solve_exact(model, {.node_budget = budget}); },
      py::arg("model"), py::arg("node_budget") = SolveLimits{}.node_budget);
  m.def(
      "check_tu_structure",
      [](const MilpModel& model, int samples, int max_order, std::uint64_t seed) {
        return check_tu_structure(model, {samples, max_order, seed});
      },
      py::arg("model"), py::arg("samples") = 1000, py::arg("max_order") = 6, py::arg("seed") = 0);

  py::class_<LinearizedModel>(m, "LinearizedModel")
      .def_readonly("n", &LinearizedModel::n)
      .def_readonly("y_vars", &LinearizedModel::y_vars)
      .def_readonly("unsafe", &LinearizedModel::unsafe)
      .def_property_readonly("num_rows", [](const LinearizedModel& model) { return model.rows.size(); })
      .def_property_readonly("linearization_rows", [](const LinearizedModel& model) {
        return model.count_rows(LinearRow::Kind::kLinearization);
      });
  py::class_<SizeReport>(m, "SizeReport")
      .def_readonly("n", &SizeReport::n)
      .def_readonly("num_sets", &SizeReport::num_sets)
      .def_readonly("num_products", &SizeReport::num_products)
      .def_readonly("num_f", &SizeReport::num_f)
      .def_readonly("total_b", &SizeReport::total_b)
      .def_readonly("standard_rows", &SizeReport::standard_rows)
      .def_readonly("compact_rows", &SizeReport::compact_rows)
      .def_readonly("standard_vars", &SizeReport::standard_vars)
      .def_readonly("compact_vars", &SizeReport::compact_vars);

  m.def(
      "emit_compact",
      [](const BqpInstance& inst, const LinearizationPlan& plan, bool allow_unsafe) {
        return emit_compact(inst, plan, {.allow_unsafe = allow_unsafe});
      },
      py::arg("instance"), py::arg("plan"), py::arg("allow_unsafe") = false);
  m.def("emit_standard", &emit_standard, py::arg("instance"));
  m.def("size_report", &size_report, py::arg("instance"), py::arg("plan"));
  m.def("write_lp", py::overload_cast<const LinearizedModel&>(&write_lp), py::arg("model"));
  m.def("write_lp", py::overload_cast<const MilpModel&>(&write_lp), py::arg("model"));

  py::class_<Witness>(m, "Witness")
      .def_readonly("x", &Witness::x)
      .def_readonly("y", &Witness::y)
      .def_readonly("pair", &Witness::pair)
      .def_property_readonly("bound", [](const Witness& w) { return std::string(to_string(w.bound)); });
  py::class_<ConsistencyReport>(m, "ConsistencyReport")
      .def_readonly("consistent", &ConsistencyReport::consistent)
      .def_readonly("x_assignments_checked", &ConsistencyReport::x_assignments_checked)
      .def_readonly("exhaustive", &ConsistencyReport::exhaustive)
      .def_readonly("witness", &ConsistencyReport::witness)
      .def("to_json", [](const ConsistencyReport& r) { return to_json(r).dump(); });

  m.def(
      "enumerate_feasible_x",
      [](const BqpInstance& inst, std::int64_t cap) {
        auto result = enumerate_feasible_x(inst, cap);
        return py::make_tuple(result.vectors, result.truncated);
      },
      py::arg("instance"), py::arg("cap") = 4096);
  m.def(
      "check_consistency",
      [](const BqpInstance& inst, const LinearizationPlan& plan, std::int64_t cap_x, std::int64_t cap_y) {
        return check_consistency(inst, plan, {cap_x, cap_y});
      },
      py::arg("instance"), py::arg("plan"), py::arg("cap_x") = 4096, py::arg("cap_y") = std::int64_t{1} << 20);
  m.def(
      "propagate_y",
      [](const BqpInstance& inst, const LinearizationPlan& plan, const BinaryVector& x) {
        const auto result = propagate_y(inst, plan, x);
        const char* status = result.status == PropagationResult::Status::kComplete     ? "complete"
                             : result.status == PropagationResult::Status::kIncomplete ? "incomplete"
                                                                                       : "conflict";
        return py::make_tuple(status, result.y);
      },
      py::arg("instance"), py::arg("plan"), py::arg("x"));
}
