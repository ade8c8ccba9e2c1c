#pragma once

// JSON views of analysis results. Field names are part of the machine
// interface of the command-line tool.

#include <json.hpp>

#include "lmprim/analysis.hpp"
#include "lmprim/goursat.hpp"
#include "lmprim/permgroup.hpp"

namespace lmprim::json {

using nlohmann::ordered_json;

ordered_json bit_strings(const Subspace& s);
ordered_json to_json(const BlockSystem& b);
ordered_json to_json(const GroupVerdict& v);
ordered_json to_json(const ReductionReport& r);
ordered_json to_json(const GoursatTriple& t);
ordered_json to_json(const LemmaConditions& c);
ordered_json to_json(const SurveyRecord& r);
ordered_json to_json(const AttackReport& r);
/// elapsed_seconds is written as 0 when include_timing is false so that
/// repeated runs produce byte-identical output.
ordered_json to_json(const SearchReport& r, bool include_timing);

}  // namespace lmprim::json
