#include "mivc/analysis.hpp"

#include <chrono>
#include <future>
#include <mutex>
#include <sstream>

namespace mivc {

namespace {

using Clock = std::chrono::steady_clock;

struct Stopwatch {
  Clock::time_point t0 = Clock::now();
  long long lap() {
    auto now = Clock::now();
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now - t0).count();
    t0 = now;
    return ms;
  }
};

std::string verdict_name(const VerifyOutcome& out) {
  if (out.safe()) return "safe";
  if (out.unsafe()) return "unsafe";
  return "unknown";
}

struct SolverIdentity {
  std::mutex mutex;
  std::string name, version, command;
};

PropertyReport analyze_property(const TransitionSystem& ts, const ElementIdSet& universe,
                                size_t prop_index, const AnalysisOptions& options,
                                SolverConfig cfg, SolverIdentity& identity) {
  EngineOptions engine_opts;
  engine_opts.kmax = options.kmax;
  engine_opts.budget_ms = options.timeout_ms;

  EngineContext ctx(ts, universe, prop_index, cfg, engine_opts);
  PropertyReport pr;
  pr.property = ts.properties[prop_index].label;

  Stopwatch watch;
  const bool wants_cores = options.command == AnalysisOptions::Command::Ivc ||
                           options.command == AnalysisOptions::Command::Must;
  VerifyOutcome check = ctx.verify_active(universe, wants_cores);
  pr.timing_ms["check"] = watch.lap();
  pr.verdict = verdict_name(check);
  pr.k = check.k;
  if (check.unsafe()) pr.trace = check.trace;

  {
    std::lock_guard<std::mutex> lock(identity.mutex);
    if (identity.name.empty()) {
      identity.name = ctx.engine().session().solver_name();
      identity.version = ctx.engine().session().solver_version();
      identity.command = ctx.engine().session().config().command;
    }
  }

  const bool invariant_analyses_ok = !check.unsafe();

  switch (options.command) {
    case AnalysisOptions::Command::Check:
      break;

    case AnalysisOptions::Command::Ivc: {
      if (!invariant_analyses_ok) {
        pr.note = "property is not invariant; core analyses skipped";
        break;
      }
      watch.lap();
      switch (options.ivc_mode) {
        case AnalysisOptions::IvcMode::Approximate: {
          pr.ivc = get_approximate_mivc(ctx);
          pr.ivc_mode = "approximate";
          pr.timing_ms["ivc_approximate"] = watch.lap();
          break;
        }
        case AnalysisOptions::IvcMode::Minimal: {
          IvcResult approx = get_approximate_mivc(ctx);
          if (approx.approximate) {
            pr.ivc = approx;  // could not be certified, do not minimize
          } else {
            pr.ivc = minimize_ivc(ctx, approx.elements, {});
          }
          pr.ivc_mode = "minimal";
          pr.timing_ms["ivc_minimal"] = watch.lap();
          break;
        }
        case AnalysisOptions::IvcMode::All: {
          MivcEnumeration enumeration = all_mivcs(ctx);
          pr.timing_ms["ivc_all"] = watch.lap();
          bool all_exact = enumeration.complete;
          for (const auto& m : enumeration.mivcs)
            if (m.approximate) all_exact = false;
          if (all_exact) pr.categorization = categorize(enumeration, universe);
          pr.mivcs = std::move(enumeration);
          break;
        }
      }
      if (options.with_must) {
        watch.lap();
        pr.must = must_set(ctx);
        pr.timing_ms["must"] = watch.lap();
      }
      break;
    }

    case AnalysisOptions::Command::Must: {
      if (!invariant_analyses_ok) {
        pr.note = "property is not invariant; MUST analysis skipped";
        break;
      }
      watch.lap();
      pr.must = must_set(ctx);
      pr.timing_ms["must"] = watch.lap();
      break;
    }

    case AnalysisOptions::Command::Mcs: {
      watch.lap();
      switch (options.mcs_mode) {
        case AnalysisOptions::McsMode::Smallest: {
          McsEnumeration one;
          try {
            auto mcs = get_single_mcs(ctx, universe);
            if (mcs) {
              one.mcs.push_back(*mcs);
              one.complete = !mcs->approximate;
            } else {
              one.complete = false;
              pr.note = "search for a smallest cut set was inconclusive";
            }
          } catch (const NoCutSetExists&) {
            one.complete = true;
            pr.note = "no cut set exists over the selected elements";
          }
          pr.mcs = std::move(one);
          pr.mcs_bound = static_cast<int>(universe.size());
          pr.timing_ms["mcs_smallest"] = watch.lap();
          break;
        }
        case AnalysisOptions::McsMode::All:
        case AnalysisOptions::McsMode::UpTo: {
          int ub = options.mcs_mode == AnalysisOptions::McsMode::All
                       ? static_cast<int>(universe.size())
                       : options.mcs_bound;
          pr.mcs = all_mcs_up_to_ub(ctx, universe, ub);
          pr.mcs_bound = ub;
          pr.timing_ms["mcs_all"] = watch.lap();
          break;
        }
      }
      break;
    }
  }
  return pr;
}

std::string command_name(AnalysisOptions::Command c) {
  switch (c) {
    case AnalysisOptions::Command::Check: return "check";
    case AnalysisOptions::Command::Ivc: return "ivc";
    case AnalysisOptions::Command::Mcs: return "mcs";
    case AnalysisOptions::Command::Must: return "must";
  }
  return "?";
}

}  // namespace

AnalysisReport analyze(const TransitionSystem& ts, const std::string& file,
                       const std::string& main_node, const AnalysisOptions& options) {
  AnalysisReport report;
  report.ts = &ts;
  report.file = file;
  report.main_node = main_node;
  report.command = command_name(options.command);
  report.universe = select_elements(ts, options.categories);

  SolverConfig cfg;
  cfg.command = options.solver_cmd.empty() ? default_solver_command() : options.solver_cmd;
  cfg.query_timeout_ms = static_cast<int>(options.timeout_ms);

  {
    std::ostringstream cats;
    bool first = true;
    for (ElementKind k :
         {ElementKind::Assumption, ElementKind::Guarantee, ElementKind::Equation,
          ElementKind::NodeCall}) {
      if (!options.categories.count(k)) continue;
      if (!first) cats << ",";
      cats << element_kind_name(k) << "s";
      first = false;
    }
    report.config["elements"] = cats.str();
    report.config["kmax"] = std::to_string(options.kmax);
    report.config["timeout_ms"] = std::to_string(options.timeout_ms);
    report.config["jobs"] = std::to_string(options.jobs);
  }

  SolverIdentity identity;
  const size_t n = ts.properties.size();
  report.properties.resize(n);

  if (options.jobs <= 1 || n <= 1) {
    for (size_t p = 0; p < n; ++p)
      report.properties[p] =
          analyze_property(ts, report.universe, p, options, cfg, identity);
  } else {
    size_t next = 0;
    std::mutex next_mutex;
    auto worker = [&]() {
      while (true) {
        size_t p;
        {
          std::lock_guard<std::mutex> lock(next_mutex);
          if (next >= n) return;
          p = next++;
        }
        report.properties[p] =
            analyze_property(ts, report.universe, p, options, cfg, identity);
      }
    };
    std::vector<std::future<void>> pool;
    int threads = std::min<int>(options.jobs, static_cast<int>(n));
    for (int i = 0; i < threads; ++i) pool.push_back(std::async(std::launch::async, worker));
    for (auto& f : pool) f.get();
  }

  report.solver_command = identity.command.empty() ? cfg.command : identity.command;
  report.solver_name = identity.name;
  report.solver_version = identity.version;
  return report;
}

}  // namespace mivc
