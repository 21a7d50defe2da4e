#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "compactlin/emitter.hpp"
#include "compactlin/instance.hpp"
#include "compactlin/linearizer.hpp"
#include "compactlin/milp.hpp"
#include "compactlin/verifier.hpp"

namespace compactlin {

using Json = nlohmann::ordered_json;

// {"b_sets": {"k": [...]}, "f_set": [[i, j], ...]}, ascending.
Json plan_to_json(const LinearizationPlan& plan);

// Reads the plan format. A missing "f_set" is filled with the induced
// products of the B sets. Throws ParseError.
LinearizationPlan parse_plan(std::string_view text, const BqpInstance& inst);

Json to_json(const ValidationReport& report);
Json to_json(const ConditionReport& report);
Json to_json(const ConsistencyReport& report);
Json to_json(const SizeReport& report);
Json to_json(const TuReport& report);
Json to_json(const MilpSolution& solution);
Json to_json(const PreprocessResult& result);

std::string to_string(ConditionViolation::Kind kind);

// Aligned two-column table of the size counts.
std::string format_size_table(const SizeReport& report);

// Side-by-side standard vs compact table.
std::string format_comparison_table(const SizeReport& report);

}  // namespace compactlin
