#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "mivc/analysis.hpp"
#include "mivc/elaborator.hpp"
#include "mivc/parser.hpp"
#include "mivc/type_checker.hpp"

namespace {

struct CliArgs {
  std::string file;
  std::string main_node;
  std::string elements = "assumptions,guarantees";
  std::string solver_cmd;
  std::string format = "text";
  std::string output;
  int kmax = 10;
  long long timeout_ms = 60000;
  int jobs = 1;
  bool dump_ts = false;

  bool ivc_approximate = false;
  bool ivc_minimal = false;
  bool ivc_all = false;
  bool with_must = false;

  bool mcs_smallest = false;
  bool mcs_all = false;
  int max_cardinality = -1;
};

void add_common_options(CLI::App* cmd, CliArgs& args) {
  cmd->add_option("file", args.file, "Lustre input file (.lus)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--main", args.main_node, "analysis entry node (default: first node)");
  cmd->add_option("--elements", args.elements,
                  "selectable element categories (comma list of assumptions, guarantees, "
                  "equations, node_calls)");
  cmd->add_option("--kmax", args.kmax, "highest induction depth")->check(CLI::NonNegativeNumber);
  cmd->add_option("--timeout", args.timeout_ms, "per-verification budget in milliseconds")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--solver-cmd", args.solver_cmd,
                  "SMT solver command (overrides MIVCKIT_SOLVER)");
  cmd->add_option("--format", args.format, "report format")
      ->check(CLI::IsMember({"text", "json"}));
  cmd->add_option("--output", args.output, "write the report to a file instead of stdout");
  cmd->add_flag("--dump-ts", args.dump_ts, "print the elaborated transition system and exit");
  cmd->add_option("--jobs", args.jobs, "number of properties analyzed in parallel")
      ->check(CLI::PositiveNumber);
}

std::set<mivc::ElementKind> parse_categories(const std::string& csv) {
  std::set<mivc::ElementKind> cats;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "assumptions")
      cats.insert(mivc::ElementKind::Assumption);
    else if (item == "guarantees")
      cats.insert(mivc::ElementKind::Guarantee);
    else if (item == "equations")
      cats.insert(mivc::ElementKind::Equation);
    else if (item == "node_calls")
      cats.insert(mivc::ElementKind::NodeCall);
    else if (!item.empty())
      throw CLI::ValidationError("--elements", "unknown category '" + item + "'");
  }
  if (cats.empty()) throw CLI::ValidationError("--elements", "no categories selected");
  return cats;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& text, const std::string& output) {
  if (output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(output, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + output);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mivc-kit: k-induction model checking with merit (IVC) and blame (MCS) cores"};
  app.require_subcommand(1);
  CliArgs args;

  CLI::App* check = app.add_subcommand("check", "prove or refute the contract guarantees");
  add_common_options(check, args);

  CLI::App* ivc = app.add_subcommand("ivc", "compute inductive validity cores");
  add_common_options(ivc, args);
  auto* opt_approx = ivc->add_flag("--approximate", args.ivc_approximate,
                                   "one approximate core from the proof's unsat cores (default)");
  auto* opt_minimal =
      ivc->add_flag("--minimal", args.ivc_minimal, "one minimal core (deletion-based)");
  auto* opt_all = ivc->add_flag("--all", args.ivc_all, "enumerate all minimal cores");
  opt_approx->excludes(opt_minimal)->excludes(opt_all);
  opt_minimal->excludes(opt_all);
  ivc->add_flag("--must", args.with_must, "also compute the MUST set");

  CLI::App* mcs = app.add_subcommand("mcs", "compute minimal cut sets");
  add_common_options(mcs, args);
  auto* opt_smallest =
      mcs->add_flag("--smallest", args.mcs_smallest, "one smallest cut set only");
  auto* opt_mcs_all = mcs->add_flag("--all", args.mcs_all, "all minimal cut sets (default)");
  auto* opt_card = mcs->add_option("--max-cardinality", args.max_cardinality,
                                   "all minimal cut sets up to this cardinality");
  opt_smallest->excludes(opt_mcs_all)->excludes(opt_card);
  opt_mcs_all->excludes(opt_card);

  CLI::App* must = app.add_subcommand("must", "compute the MUST set");
  add_common_options(must, args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    mivc::AnalysisOptions options;
    if (check->parsed()) options.command = mivc::AnalysisOptions::Command::Check;
    if (ivc->parsed()) {
      options.command = mivc::AnalysisOptions::Command::Ivc;
      options.ivc_mode = args.ivc_minimal ? mivc::AnalysisOptions::IvcMode::Minimal
                         : args.ivc_all  ? mivc::AnalysisOptions::IvcMode::All
                                         : mivc::AnalysisOptions::IvcMode::Approximate;
      options.with_must = args.with_must;
    }
    if (mcs->parsed()) {
      options.command = mivc::AnalysisOptions::Command::Mcs;
      if (args.mcs_smallest)
        options.mcs_mode = mivc::AnalysisOptions::McsMode::Smallest;
      else if (args.max_cardinality >= 0) {
        options.mcs_mode = mivc::AnalysisOptions::McsMode::UpTo;
        options.mcs_bound = args.max_cardinality;
      } else {
        options.mcs_mode = mivc::AnalysisOptions::McsMode::All;
      }
    }
    if (must->parsed()) options.command = mivc::AnalysisOptions::Command::Must;

    options.categories = parse_categories(args.elements);
    options.kmax = args.kmax;
    options.timeout_ms = args.timeout_ms;
    options.solver_cmd = args.solver_cmd;
    options.jobs = args.jobs;

    std::string source = read_file(args.file);
    mivc::ast::SourceModel model = mivc::parse_program(source);
    std::string main_node = mivc::resolve_main(
        model, args.main_node.empty() ? std::nullopt
                                      : std::optional<std::string>(args.main_node));
    mivc::TypedModel typed = mivc::type_check(std::move(model));
    mivc::TransitionSystem ts = mivc::elaborate(typed, main_node);

    if (args.dump_ts) {
      emit(mivc::dump_transition_system(ts), args.output);
      return 0;
    }

    mivc::AnalysisReport report = mivc::analyze(ts, args.file, main_node, options);
    emit(args.format == "json" ? mivc::render_json(report) : mivc::render_text(report),
         args.output);
    return report.exit_code();
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const mivc::ParseError& e) {
    std::cerr << args.file << ":" << e.what() << "\n";
    return 3;
  } catch (const mivc::TypeError& e) {
    std::cerr << args.file << ":" << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
