#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mivc/ivc_engine.hpp"
#include "mivc/mcs_engine.hpp"
#include "mivc/transition_system.hpp"

namespace mivc {

struct PropertyReport {
  std::string property;
  std::string verdict;  // "safe" | "unsafe" | "unknown"
  int k = -1;           // induction depth for safe verdicts
  std::optional<Trace> trace;

  std::optional<IvcResult> ivc;  // single-core analyses
  std::string ivc_mode;          // "approximate" | "minimal"
  std::optional<MivcEnumeration> mivcs;
  std::optional<McsEnumeration> mcs;
  int mcs_bound = -1;
  std::optional<std::pair<ElementIdSet, bool>> must;
  std::optional<Categorization> categorization;

  std::map<std::string, long long> timing_ms;
  std::string note;  // free-form remark, e.g. "no cut set exists"
};

struct AnalysisReport {
  std::string file;
  std::string main_node;
  std::string command;
  std::string solver_command;
  std::string solver_name;
  std::string solver_version;
  std::map<std::string, std::string> config;  // flag echo

  const TransitionSystem* ts = nullptr;
  ElementIdSet universe;
  std::vector<PropertyReport> properties;

  // 0 = safe and complete, 10 = some property unsafe, 20 = some analysis
  // approximate or unknown.
  int exit_code() const;
};

std::string render_json(const AnalysisReport& report);
std::string render_text(const AnalysisReport& report);

// Sorted labels of an element set; the normalized order used everywhere.
std::vector<std::string> labels_of(const TransitionSystem& ts, const ElementIdSet& ids);

// Validates a rendered report against the JSON schema shipped in
// docs/report.schema.json (a self-contained subset of JSON Schema:
// type/properties/required/items/enum/additionalProperties). Returns an
// error description or nullopt when valid.
std::optional<std::string> validate_against_schema(const std::string& schema_json,
                                                   const std::string& document_json);

}  // namespace mivc
