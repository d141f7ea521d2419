#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mivc/term.hpp"

namespace mivc {

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SpawnError : SolverError {
  using SolverError::SolverError;
};
struct ProtocolError : SolverError {
  using SolverError::SolverError;
};
struct SolverCrashed : SolverError {
  using SolverError::SolverError;
};

struct SolverConfig {
  std::string command;             // shell command, e.g. "z3 -in"
  std::string logic = "QF_LIRA";   // sent via set-logic; errors are tolerated
  int query_timeout_ms = 60000;    // per-query limit, > 0
  bool produce_unsat_cores = true;
};

// Resolution order: MIVCKIT_SOLVER, a z3 binary on PATH, the bundled
// WebAssembly solver. Throws SpawnError if nothing is available.
std::string default_solver_command();

// An assumption literal or core entry: symbol plus polarity.
struct Literal {
  std::string name;
  bool positive = true;
};

enum class UnknownReason { Timeout, Incomplete };

struct SatResult {
  enum class Kind { Sat, Unsat, Unknown } kind;
  std::map<std::string, Value> model;  // Sat: one value per queried symbol
  std::vector<Literal> core;           // Unsat: subset of the assumptions
  UnknownReason reason = UnknownReason::Incomplete;

  bool is_sat() const { return kind == Kind::Sat; }
  bool is_unsat() const { return kind == Kind::Unsat; }
  bool is_unknown() const { return kind == Kind::Unknown; }
};

// One external SMT solver process speaking SMT-LIB v2 over stdin/stdout.
// Single-owner: exactly one logical thread drives a session at a time.
// Queries that exceed the watchdog deadline kill the process; the session
// respawns it, replays the assertion trail, and reports Unknown(Timeout).
class Session {
 public:
  explicit Session(SolverConfig cfg);
  ~Session();
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  void declare_const(const std::string& name, const std::string& smt_sort);
  void assert_raw(const std::string& smt_formula);
  // Guards the formula behind a fresh Boolean named `label`, declared here.
  void assert_labeled(const std::string& label, const std::string& smt_formula);

  // check-sat-assuming with the given literals. On Sat, fetches values for
  // `value_queries`; on Unsat, fetches the unsat core.
  SatResult check_assuming(const std::vector<Literal>& assumptions,
                           const std::vector<std::string>& value_queries = {});

  // Values of the given symbols in the model of the last Sat answer.
  std::map<std::string, Value> get_values(const std::vector<std::string>& symbols);

  void push();
  void pop();

  // Changes the per-query time limit for subsequent checks.
  void set_query_timeout(int ms);

  const std::string& solver_name() const { return solver_name_; }
  const std::string& solver_version() const { return solver_version_; }
  const SolverConfig& config() const { return cfg_; }
  int queries_run() const { return queries_; }

 private:
  struct Process;

  void handshake();
  void spawn();
  void respawn_and_replay();
  void send(const std::string& cmd, bool record);
  std::string read_unit(int deadline_ms);
  void expect_success(const std::string& context);
  std::vector<Literal> fetch_core();

  SolverConfig cfg_;
  std::unique_ptr<Process> proc_;
  std::vector<std::string> transcript_;  // state-changing commands, for replay
  std::string solver_name_ = "unknown";
  std::string solver_version_;
  bool timeout_option_ok_ = false;
  int pending_timeout_ms_ = 0;
  int stack_depth_ = 0;
  int queries_ = 0;
};

}  // namespace mivc
