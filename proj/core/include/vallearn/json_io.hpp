#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vallearn/harness.hpp"
#include "vallearn/hypothesis.hpp"
#include "vallearn/instances.hpp"
#include "vallearn/learners.hpp"
#include "vallearn/price_learning.hpp"
#include "vallearn/valuation.hpp"

namespace vallearn {

// Valuations travel as {"n": ..., "kind": ..., "payload": {...}}.
// Payload fields by kind:
//   linear, unit_demand  "weights": [w_0 ... w_{n-1}]
//   xos, oxs             "trees": [[[item, weight], ...], ...]
//   budgeted_additive    "rset": [indices], "budget": int
//   goemans_rank         "rset": [indices], "alpha": int, "beta": int
//   table                "values": [2^n values, mask order]
nlohmann::json to_json(const Valuation& v);
Valuation valuation_from_json(const nlohmann::json& j);

// Hypotheses carry a "type" tag: rooted_linear, unit_demand, item_based,
// or meta_unit_demand.
nlohmann::json to_json(const Hypothesis& h);
Hypothesis hypothesis_from_json(const nlohmann::json& j);

// Training samples as JSONL: one {"set": [indices], "value": v} per line.
std::string to_jsonl(const std::vector<Sample>& samples, std::uint32_t n);
std::vector<Sample> samples_from_jsonl(const std::string& text, std::uint32_t n);

nlohmann::json to_json(const IntersectionFamily& family);
IntersectionFamily family_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ExperimentReport& report);
ExperimentReport report_from_json(const nlohmann::json& j);

nlohmann::json to_json(const AdversarialDemoReport& report);

// Experiment configs are parse-only; see the fields of ExperimentConfig.
// "dist" accepts {"type": "uniform_subsets"}, {"type": "product",
// "probs": [...]}, {"type": "family", "sets": [[...], ...]} or
// {"type": "mixture", "components": [{"weight": w, "dist": {...}}, ...]}.
ExperimentConfig experiment_config_from_json(const nlohmann::json& j);
Distribution distribution_from_json(const nlohmann::json& j, std::uint32_t n);

// Price-protocol decision logs as CSV (columns round,set,price,bought;
// sets are semicolon-joined item indices).
std::string decision_csv_header();
std::string to_csv_row(const DecisionRecord& record);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace vallearn
