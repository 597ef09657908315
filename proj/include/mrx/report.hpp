#pragma once

// JSON and text renderings of explanations and benchmark rows.

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mrx/bench.hpp"
#include "mrx/explain.hpp"

namespace mrx {

struct ExplanationReport {
  Explanation explanation;
  std::optional<bool> complete;
  std::optional<bool> monotonic;
};

inline nlohmann::json to_json(const Edit& e) {
  return {{"sign", to_string(e.sign)}, {"feature", render(e.feature)}};
}

inline nlohmann::json to_json(const ExplanationReport& r) {
  const Explanation& e = r.explanation;
  nlohmann::json edits = nlohmann::json::array();
  for (const auto& ed : e.edits) edits.push_back(to_json(ed));
  nlohmann::json j{{"class", to_string(e.cls)},
                   {"edits", edits},
                   {"size", e.size()},
                   {"complete", r.complete ? nlohmann::json(*r.complete) : nlohmann::json(nullptr)},
                   {"monotonic", r.monotonic ? nlohmann::json(*r.monotonic) : nlohmann::json(nullptr)},
                   {"expansions", e.stats.expansions},
                   {"planner_calls", e.stats.planner_calls},
                   {"elapsed_ms", e.stats.elapsed_ms()}};
  if (!e.notes.empty()) j["notes"] = e.notes;
  return j;
}

inline nlohmann::json to_json(const BenchRow& r) {
  return {{"domain", r.domain},
          {"problem", r.problem},
          {"explainer", r.explainer},
          {"size", r.size ? nlohmann::json(*r.size) : nlohmann::json(nullptr)},
          {"time_ms", r.time_ms},
          {"expansions", r.expansions},
          {"planner_calls", r.planner_calls},
          {"status", r.status}};
}

inline void write_json(std::ostream& os, const std::vector<BenchRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) arr.push_back(to_json(r));
  os << arr.dump(2) << '\n';
}

/// The demo rendering: one `Explanation >> feature` line per edit. Features
/// to be removed from the human model carry a leading `-`. Nothing is
/// printed for an empty explanation.
inline void write_text(std::ostream& os, const Explanation& e) {
  for (const auto& ed : e.edits)
    os << "Explanation >> " << (ed.sign == EditSign::Remove ? "-" : "") << render(ed.feature) << '\n';
}

}  // namespace mrx
