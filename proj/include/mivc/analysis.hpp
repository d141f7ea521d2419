#pragma once

#include <optional>
#include <set>
#include <string>

#include "mivc/report.hpp"

namespace mivc {

struct AnalysisOptions {
  enum class Command { Check, Ivc, Mcs, Must };
  enum class IvcMode { Approximate, Minimal, All };
  enum class McsMode { Smallest, All, UpTo };

  Command command = Command::Check;
  IvcMode ivc_mode = IvcMode::Approximate;
  bool with_must = false;  // --must combined with an ivc mode
  McsMode mcs_mode = McsMode::All;
  int mcs_bound = -1;  // for McsMode::UpTo

  std::set<ElementKind> categories = {ElementKind::Assumption, ElementKind::Guarantee};
  int kmax = 10;
  long long timeout_ms = 60000;
  std::string solver_cmd;  // empty: resolve via MIVCKIT_SOLVER / PATH / bundled
  int jobs = 1;
};

// Runs the requested pipeline on every property of the elaborated system.
// Properties run independently (in parallel when jobs > 1), each over its
// own solver sessions; the report is assembled in property order.
AnalysisReport analyze(const TransitionSystem& ts, const std::string& file,
                       const std::string& main_node, const AnalysisOptions& options);

}  // namespace mivc
