#include <doctest.h>

#include <random>
#include <set>

#include "compactlin/emitter.hpp"
#include "compactlin/verifier.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

using namespace compactlin;
using namespace compactlin::testing;
using RowKind = LinearRow::Kind;

namespace {

std::vector<const LinearRow*> rows_of(const LinearizedModel& m, RowKind kind) {
  std::vector<const LinearRow*> out;
  for (const auto& r : m.rows) {
    if (r.kind == kind) out.push_back(&r);
  }
  return out;
}

// (sorted y pairs, x index) of an equation sum y - x_j = 0.
std::pair<std::set<Pair>, Index> equation_shape(const LinearRow& row) {
  std::set<Pair> ys;
  Index x = 0;
  for (const auto& [var, coef] : row.terms) {
    if (var.kind == ModelVar::Kind::kY) {
      CHECK(coef == 1);
      ys.insert(var.index);
    } else {
      CHECK(coef == -1);
      x = var.index.i;
    }
  }
  return {ys, x};
}

double row_value(const LinearRow& row, const BinaryVector& x) {
  double lhs = 0;
  for (const auto& [var, coef] : row.terms) {
    const int v = var.kind == ModelVar::Kind::kX ? x[var.index.i - 1] : x[var.index.i - 1] * x[var.index.j - 1];
    lhs += coef * v;
  }
  return lhs;
}

}  // namespace

TEST_CASE("emit_compact on EX1 gives the four closure equations") {
  const LinearizedModel m = emit_compact(ex1(), ex1_closure_plan());
  CHECK(m.variant == LinearizedModel::Variant::kCompact);
  CHECK_FALSE(m.unsafe);
  CHECK(m.count_rows(RowKind::kAssignment) == 2);
  const auto lin = rows_of(m, RowKind::kLinearization);
  REQUIRE(lin.size() == 4);
  std::set<std::pair<std::set<Pair>, Index>> shapes;
  for (const auto* r : lin) {
    CHECK(r->sense == Sense::kEqual);
    CHECK(r->rhs == 0);
    shapes.insert(equation_shape(*r));
  }
  const std::set<std::pair<std::set<Pair>, Index>> expected{
      {{{1, 3}, {2, 3}}, 3}, {{{1, 4}, {2, 4}}, 4}, {{{1, 3}, {1, 4}}, 1}, {{{2, 3}, {2, 4}}, 2}};
  CHECK(shapes == expected);
  CHECK(m.y_vars == std::vector<Pair>{{1, 3}, {1, 4}, {2, 3}, {2, 4}});

  const std::string lp = write_lp(m);
  CHECK(lp.find("y1_3 + y2_3 - x3 = 0") != std::string::npos);
  CHECK(lp.rfind("\\ compact linearization\nMinimize\n", 0) == 0);
  CHECK(lp.find("Subject To\n") != std::string::npos);
  CHECK(lp.find("Bounds\n 0 <= y1_3 <= 1\n") != std::string::npos);
  CHECK(lp.find("Binary\n x1\n x2\n x3\n x4\n") != std::string::npos);
  CHECK(lp.substr(lp.size() - 4) == "End\n");
  // Assignment rows come before the linearization rows, which are ordered by (k, j).
  CHECK(lp.find("assign_1") < lp.find("lin_1_3"));
  CHECK(lp.find("lin_1_3") < lp.find("lin_1_4"));
  CHECK(lp.find("lin_1_4") < lp.find("lin_2_1"));
}

TEST_CASE("emit_compact edge cases") {
  SUBCASE("empty E keeps only assignment rows") {
    const auto inst = make_instance(4, {{1, {1, 2}}, {2, {3, 4}}}, {});
    const auto m = emit_compact(inst, construct_sets(inst));
    CHECK(m.rows.size() == 2);
    CHECK(m.count_rows(RowKind::kLinearization) == 0);
    CHECK(write_lp(m).find("Minimize\n obj: 0 x1\n") != std::string::npos);
  }
  SUBCASE("unsafe plan is refused unless allowed") {
    CHECK_THROWS_AS(emit_compact(ex1(), ex1_liberti_plan()), UnsafePlanError);
    const auto m = emit_compact(ex1(), ex1_liberti_plan(), {.allow_unsafe = true});
    CHECK(m.unsafe);
    const auto lin = rows_of(m, RowKind::kLinearization);
    CHECK(lin.size() == 5);
    bool has_13_23 = false;
    for (const auto* r : lin) has_13_23 |= equation_shape(*r) == std::pair<std::set<Pair>, Index>{{{1, 3}, {2, 3}}, 3};
    CHECK(has_13_23);
    const std::string lp = write_lp(m);
    CHECK(lp.find("\n\\ UNSAFE") < lp.find("Minimize"));
    CHECK(write_lp(emit_compact(ex1(), ex1_closure_plan())).find("UNSAFE") == std::string::npos);
  }
  SUBCASE("diagonal term is kept as y_jj") {
    const auto inst = make_instance(2, {{1, {1, 2}}}, {{1, 1}});
    const auto plan = construct_sets(inst);
    const auto lp = write_lp(emit_compact(inst, plan));
    CHECK(lp.find("y1_1") != std::string::npos);
  }
  SUBCASE("objective and pass-through constraints map products onto y") {
    BqpInstance inst = ex1();
    inst.linear_objective = {{2, 1.5}};
    inst.quadratic_objective = {{{1, 3}, -4.0}};
    inst.extra_constraints.push_back({{{4, 1.0}}, {{{1, 3}, 2.0}}, Sense::kLessEqual, 1.0});
    const auto m = emit_compact(inst, construct_sets(inst));
    const auto pass = rows_of(m, RowKind::kPassThrough);
    REQUIRE(pass.size() == 1);
    const std::string lp = write_lp(m);
    CHECK(lp.find("obj: 1.5 x2 - 4 y1_3") != std::string::npos);
    CHECK(lp.find("extra_1: x4 + 2 y1_3 <= 1") != std::string::npos);
  }
}

TEST_CASE("emit_standard") {
  SUBCASE("EX1") {
    const auto m = emit_standard(ex1());
    CHECK(m.count_rows(RowKind::kLinearization) == 3);
    const auto lp = write_lp(m);
    CHECK(lp.find("y1_3 - x1 <= 0") != std::string::npos);
    CHECK(lp.find("y1_3 - x3 <= 0") != std::string::npos);
    CHECK(lp.find("y1_3 - x1 - x3 >= -1") != std::string::npos);
  }
  SUBCASE("five products give fifteen rows") {
    const auto m = emit_standard(make_instance(4, {{1, {1, 2}}, {2, {3, 4}}}, {{1, 3}, {1, 4}, {2, 3}, {2, 4}, {1, 1}}));
    CHECK(m.count_rows(RowKind::kLinearization) == 15);
  }
  SUBCASE("diagonal pair") {
    const auto lp = write_lp(emit_standard(make_instance(2, {{1, {1, 2}}}, {{2, 2}})));
    CHECK(lp.find("y2_2 - x2 <= 0") != std::string::npos);
    CHECK(lp.find("y2_2 - 2 x2 >= -1") != std::string::npos);
  }
}

TEST_CASE("size_report") {
  SUBCASE("EX1 closure") {
    const SizeReport r = size_report(ex1(), ex1_closure_plan());
    CHECK(r.n == 4);
    CHECK(r.num_sets == 2);
    CHECK(r.num_products == 1);
    CHECK(r.num_f == 4);
    CHECK(r.total_b == 4);
    CHECK(r.standard_rows == 3);
    CHECK(r.compact_rows == 4);
    CHECK(r.standard_vars == 1);
    CHECK(r.compact_vars == 4);
  }
  SUBCASE("empty E") {
    const auto inst = make_instance(4, {{1, {1, 2}}, {2, {3, 4}}}, {});
    const SizeReport r = size_report(inst, construct_sets(inst));
    CHECK(r == SizeReport{.n = 4, .num_sets = 2});
  }
  SUBCASE("dense cross products") {
    for (int q = 1; q <= 6; ++q) {
      std::vector<Index> a1;
      std::vector<Index> a2;
      std::vector<Pair> e;
      for (int t = 1; t <= q; ++t) {
        a1.push_back(t);
        a2.push_back(q + t);
      }
      for (Index i : a1) {
        for (Index j : a2) e.push_back({i, j});
      }
      const auto inst = make_instance(2 * q, {{1, a1}, {2, a2}}, e);
      const SizeReport r = size_report(inst, construct_sets(inst));
      CHECK(r.compact_rows == 2 * q);
      CHECK(r.standard_rows == 3 * q * q);
      CHECK(r.compact_rows < r.standard_rows);
    }
  }
}

TEST_CASE("format_number") {
  CHECK(format_number(1) == "1");
  CHECK(format_number(-3) == "-3");
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1e20) == "1e+20");
}

TEST_CASE("write_lp for the minimization model") {
  const std::string lp = write_lp(build_min_milp(ex1()));
  CHECK(lp.find("obj: z1_1 + z1_2") == lp.find("obj: "));
  CHECK(lp.find("fix_1: f1_3 = 1") != std::string::npos);
  CHECK(lp.find("Binary\n z1_1\n") != std::string::npos);
  CHECK(lp.find(" 0 <= f1_1 <= 1\n") != std::string::npos);
  const std::string weighted = write_lp(build_min_milp(ex1(), 2, 0));
  CHECK(weighted.find("obj: 2 z1_1") != std::string::npos);
  CHECK(weighted.find("f1_1", weighted.find("obj:")) > weighted.find("Subject To"));
}

TEST_CASE("property: rows count as formulas, y stays in F or E, true products satisfy rows") {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 120; ++t) {
    const BqpInstance inst = t % 2 ? random_disjoint(rng) : random_overlapping(rng);
    const auto plan = construct_sets(inst);
    const auto compact = emit_compact(inst, plan);
    const auto standard = emit_standard(inst);
    CHECK(compact.count_rows(RowKind::kLinearization) == plan.total_b_size());
    CHECK(standard.count_rows(RowKind::kLinearization) == 3 * static_cast<int>(inst.products.size()));
    for (const auto& row : compact.rows) {
      for (const auto& [var, coef] : row.terms) {
        if (var.kind == ModelVar::Kind::kY) CHECK(plan.f_set.count(var.index));
      }
    }
    const std::set<Pair> e(inst.products.begin(), inst.products.end());
    for (const auto& row : standard.rows) {
      for (const auto& [var, coef] : row.terms) {
        if (var.kind == ModelVar::Kind::kY) CHECK(e.count(var.index));
      }
    }
    CHECK(write_lp(compact) == write_lp(emit_compact(inst, construct_sets(inst))));
    for (const auto& x : enumerate_feasible_x(inst, 64).vectors) {
      for (const auto* row : rows_of(compact, RowKind::kLinearization)) CHECK(row_value(*row, x) == 0);
      for (const auto* row : rows_of(compact, RowKind::kAssignment)) CHECK(row_value(*row, x) == 1);
    }
  }
}
