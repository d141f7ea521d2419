#include "mivc/solver_session.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <cctype>
#include <chrono>
#include <sstream>

namespace mivc {

namespace {

// Set at build time to the bundled solver script, if any.
#ifndef MIVCKIT_BUNDLED_SOLVER
#define MIVCKIT_BUNDLED_SOLVER ""
#endif

bool on_path(const std::string& exe) {
  const char* path = std::getenv("PATH");
  if (!path) return false;
  std::stringstream ss(path);
  std::string dir;
  while (std::getline(ss, dir, ':')) {
    if (dir.empty()) continue;
    std::error_code ec;
    if (std::filesystem::exists(dir + "/" + exe, ec)) return true;
  }
  return false;
}

}  // namespace

std::string default_solver_command() {
  if (const char* env = std::getenv("MIVCKIT_SOLVER"); env && *env) return env;
  if (on_path("z3")) return "z3 -in";
  std::string bundled = MIVCKIT_BUNDLED_SOLVER;
  if (!bundled.empty()) {
    std::error_code ec;
    if (std::filesystem::exists(bundled, ec)) return "node " + bundled;
  }
  throw SpawnError(
      "no SMT solver found: set MIVCKIT_SOLVER or --solver-cmd, put z3 on PATH, "
      "or run `npm install` in tools/solver");
}

struct Session::Process {
  pid_t pid = -1;
  int to_child = -1;
  int from_child = -1;
  std::string rbuf;
  size_t rpos = 0;

  ~Process() { close_all(); }

  void close_all() {
    if (to_child >= 0) close(to_child);
    if (from_child >= 0) close(from_child);
    to_child = from_child = -1;
    if (pid > 0) {
      kill(pid, SIGKILL);
      waitpid(pid, nullptr, 0);
      pid = -1;
    }
  }

  bool alive() {
    if (pid <= 0) return false;
    int status = 0;
    pid_t r = waitpid(pid, &status, WNOHANG);
    if (r == pid) {
      pid = -1;
      return false;
    }
    return true;
  }
};

Session::Session(SolverConfig cfg) : cfg_(std::move(cfg)) {
  if (cfg_.query_timeout_ms <= 0) throw SpawnError("query timeout must be positive");
  if (cfg_.command.empty()) cfg_.command = default_solver_command();
  signal(SIGPIPE, SIG_IGN);
  spawn();
  handshake();
}

Session::~Session() {
  if (proc_ && proc_->to_child >= 0) {
    std::string bye = "(exit)\n";
    ssize_t ignored = write(proc_->to_child, bye.data(), bye.size());
    (void)ignored;
  }
}

void Session::spawn() {
  int to_child[2];
  int from_child[2];
  if (pipe(to_child) != 0 || pipe(from_child) != 0)
    throw SpawnError("pipe() failed: " + std::string(strerror(errno)));

  pid_t pid = fork();
  if (pid < 0) throw SpawnError("fork() failed: " + std::string(strerror(errno)));
  if (pid == 0) {
    dup2(to_child[0], STDIN_FILENO);
    dup2(from_child[1], STDOUT_FILENO);
    close(to_child[0]);
    close(to_child[1]);
    close(from_child[0]);
    close(from_child[1]);
    std::string cmd = "exec " + cfg_.command;
    execl("/bin/sh", "sh", "-c", cmd.c_str(), (char*)nullptr);
    _exit(127);
  }
  close(to_child[0]);
  close(from_child[1]);
  proc_ = std::make_unique<Process>();
  proc_->pid = pid;
  proc_->to_child = to_child[1];
  proc_->from_child = from_child[0];
}

void Session::send(const std::string& cmd, bool record) {
  if (!proc_ || proc_->to_child < 0) throw SolverCrashed("solver session is closed");
  std::string line = cmd + "\n";
  size_t off = 0;
  while (off < line.size()) {
    ssize_t n = write(proc_->to_child, line.data() + off, line.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw SolverCrashed("failed to write to solver: " + std::string(strerror(errno)));
    }
    off += static_cast<size_t>(n);
  }
  if (record) transcript_.push_back(cmd);
}

// Reads one response unit: a bare word/line or one balanced s-expression.
std::string Session::read_unit(int deadline_ms) {
  auto need_more = [&](int remaining) {
    struct pollfd pfd {
      proc_->from_child, POLLIN, 0
    };
    int r = poll(&pfd, 1, remaining);
    if (r == 0) return false;
    if (r < 0) {
      if (errno == EINTR) return true;
      throw SolverCrashed("poll() failed: " + std::string(strerror(errno)));
    }
    char buf[65536];
    ssize_t n = read(proc_->from_child, buf, sizeof buf);
    if (n <= 0) throw SolverCrashed("solver process closed its output");
    proc_->rbuf.append(buf, static_cast<size_t>(n));
    return true;
  };

  auto start = std::chrono::steady_clock::now();
  auto remaining = [&]() {
    auto spent = std::chrono::duration_cast<std::chrono::milliseconds>(
                     std::chrono::steady_clock::now() - start)
                     .count();
    return static_cast<int>(deadline_ms - spent);
  };

  std::string& buf = proc_->rbuf;
  size_t& pos = proc_->rpos;
  int depth = 0;
  bool in_string = false;
  bool any = false;
  size_t unit_begin = 0;
  while (true) {
    if (pos >= buf.size()) {
      if (pos > 0 && depth == 0 && !any) {
        buf.erase(0, pos);
        pos = 0;
      }
      int rem = remaining();
      if (rem <= 0) throw SolverCrashed("watchdog: solver did not answer in time");
      if (!need_more(rem)) throw SolverCrashed("watchdog: solver did not answer in time");
      continue;
    }
    char c = buf[pos];
    if (!any) {
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos;
        continue;
      }
      any = true;
      unit_begin = pos;
      if (c == '(') {
        depth = 1;
        ++pos;
        continue;
      }
      ++pos;
      continue;
    }
    if (depth > 0) {
      if (in_string) {
        if (c == '"') in_string = false;
      } else if (c == '"') {
        in_string = true;
      } else if (c == '(') {
        ++depth;
      } else if (c == ')') {
        if (--depth == 0) {
          ++pos;
          std::string unit = buf.substr(unit_begin, pos - unit_begin);
          return unit;
        }
      }
      ++pos;
      continue;
    }
    // bare token: runs to end of line
    if (c == '\n') {
      std::string unit = buf.substr(unit_begin, pos - unit_begin);
      ++pos;
      while (!unit.empty() && std::isspace(static_cast<unsigned char>(unit.back())))
        unit.pop_back();
      return unit;
    }
    ++pos;
  }
}

void Session::expect_success(const std::string& context) {
  std::string r = read_unit(30000);
  if (r == "success") return;
  if (r.rfind("(error", 0) == 0)
    throw ProtocolError("solver error during " + context + ": " + r);
  throw ProtocolError("unexpected solver reply during " + context + ": " + r);
}

void Session::handshake() {
  send("(set-option :print-success true)", true);
  expect_success("handshake");
  send("(set-option :produce-models true)", true);
  expect_success("produce-models");
  if (cfg_.produce_unsat_cores) {
    send("(set-option :produce-unsat-cores true)", true);
    expect_success("produce-unsat-cores");
    // best effort: smaller cores when the solver knows how
    send("(set-option :smt.core.minimize true)", true);
    std::string r = read_unit(30000);
    if (r != "success") transcript_.pop_back();
  }
  if (!cfg_.logic.empty()) {
    send("(set-logic " + cfg_.logic + ")", true);
    std::string r = read_unit(30000);
    if (r != "success") transcript_.pop_back();  // tolerated: solver kept its default
  }
  {
    send("(set-option :timeout " + std::to_string(cfg_.query_timeout_ms) + ")", false);
    std::string r = read_unit(30000);
    timeout_option_ok_ = (r == "success");
    pending_timeout_ms_ = cfg_.query_timeout_ms;
  }
  {
    send("(get-info :name)", false);
    std::string r = read_unit(30000);
    auto q1 = r.find('"');
    auto q2 = r.rfind('"');
    if (q1 != std::string::npos && q2 > q1) solver_name_ = r.substr(q1 + 1, q2 - q1 - 1);
    send("(get-info :version)", false);
    r = read_unit(30000);
    q1 = r.find('"');
    q2 = r.rfind('"');
    if (q1 != std::string::npos && q2 > q1) solver_version_ = r.substr(q1 + 1, q2 - q1 - 1);
  }
}

void Session::respawn_and_replay() {
  proc_->close_all();
  spawn();
  std::vector<std::string> saved = transcript_;
  transcript_.clear();
  handshake();
  // the handshake re-records its own commands; replay the rest
  size_t skip = transcript_.size();
  for (const auto& cmd : saved) {
    if (skip > 0) {
      --skip;
      continue;
    }
    send(cmd, true);
    expect_success("replay");
  }
  if (timeout_option_ok_ && pending_timeout_ms_ != cfg_.query_timeout_ms)
    set_query_timeout(pending_timeout_ms_);
}

void Session::declare_const(const std::string& name, const std::string& smt_sort) {
  send("(declare-const " + name + " " + smt_sort + ")", true);
  expect_success("declare-const " + name);
}

void Session::assert_raw(const std::string& smt_formula) {
  send("(assert " + smt_formula + ")", true);
  expect_success("assert");
}

void Session::assert_labeled(const std::string& label, const std::string& smt_formula) {
  declare_const(label, "Bool");
  assert_raw("(=> " + label + " " + smt_formula + ")");
}

void Session::push() {
  send("(push 1)", true);
  expect_success("push");
  ++stack_depth_;
}

void Session::pop() {
  if (stack_depth_ <= 0) throw ProtocolError("pop on an empty assertion stack");
  send("(pop 1)", true);
  expect_success("pop");
  --stack_depth_;
}

void Session::set_query_timeout(int ms) {
  if (ms <= 0) ms = 1;
  pending_timeout_ms_ = ms;
  if (!timeout_option_ok_) return;
  send("(set-option :timeout " + std::to_string(ms) + ")", false);
  std::string r = read_unit(30000);
  if (r != "success") timeout_option_ok_ = false;
}

SatResult Session::check_assuming(const std::vector<Literal>& assumptions,
                                  const std::vector<std::string>& value_queries) {
  std::ostringstream cmd;
  cmd << "(check-sat-assuming (";
  for (size_t i = 0; i < assumptions.size(); ++i) {
    if (i) cmd << " ";
    if (assumptions[i].positive)
      cmd << assumptions[i].name;
    else
      cmd << "(not " << assumptions[i].name << ")";
  }
  cmd << "))";
  ++queries_;

  // Watchdog: generous slack over the solver-side limit so the in-band
  // timeout fires first when the solver supports one.
  int deadline = pending_timeout_ms_ + std::max(10000, 2 * pending_timeout_ms_);
  std::string verdict;
  try {
    send(cmd.str(), false);
    verdict = read_unit(deadline);
  } catch (const SolverCrashed&) {
    respawn_and_replay();
    SatResult r;
    r.kind = SatResult::Kind::Unknown;
    r.reason = UnknownReason::Timeout;
    return r;
  }

  SatResult result;
  if (verdict == "sat") {
    result.kind = SatResult::Kind::Sat;
    if (!value_queries.empty()) result.model = get_values(value_queries);
    return result;
  }
  if (verdict == "unsat") {
    result.kind = SatResult::Kind::Unsat;
    if (cfg_.produce_unsat_cores) result.core = fetch_core();
    return result;
  }
  if (verdict == "unknown") {
    result.kind = SatResult::Kind::Unknown;
    send("(get-info :reason-unknown)", false);
    std::string reason = read_unit(30000);
    result.reason = (reason.find("timeout") != std::string::npos ||
                     reason.find("canceled") != std::string::npos ||
                     reason.find("resource") != std::string::npos)
                        ? UnknownReason::Timeout
                        : UnknownReason::Incomplete;
    return result;
  }
  if (verdict.rfind("(error", 0) == 0)
    throw ProtocolError("solver error on check-sat-assuming: " + verdict);
  throw ProtocolError("unexpected check-sat reply: " + verdict);
}

namespace {

// Tiny s-expression reader for get-value / get-unsat-core replies.
struct SNode {
  std::string atom;
  std::vector<SNode> items;
  bool is_atom() const { return items.empty() && !atom.empty(); }
};

SNode parse_sexpr(const std::string& text, size_t& pos) {
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  if (pos >= text.size()) throw ProtocolError("truncated solver reply: " + text);
  if (text[pos] == '(') {
    ++pos;
    SNode node;
    while (true) {
      while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
      if (pos >= text.size()) throw ProtocolError("unbalanced solver reply: " + text);
      if (text[pos] == ')') {
        ++pos;
        return node;
      }
      node.items.push_back(parse_sexpr(text, pos));
    }
  }
  if (text[pos] == '|') {
    size_t end = text.find('|', pos + 1);
    if (end == std::string::npos) throw ProtocolError("unbalanced quoted symbol: " + text);
    SNode node;
    node.atom = text.substr(pos + 1, end - pos - 1);
    pos = end + 1;
    return node;
  }
  size_t start = pos;
  while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
         text[pos] != '(' && text[pos] != ')')
    ++pos;
  SNode node;
  node.atom = text.substr(start, pos - start);
  return node;
}

std::string render_sexpr(const SNode& n) {
  if (n.is_atom() || n.items.empty()) return n.atom;
  std::string out = "(";
  for (size_t i = 0; i < n.items.size(); ++i) {
    if (i) out += " ";
    out += render_sexpr(n.items[i]);
  }
  out += ")";
  return out;
}

Value parse_value(const SNode& n) {
  if (n.is_atom()) {
    if (n.atom == "true") return true;
    if (n.atom == "false") return false;
    auto r = parse_smt_numeral(n.atom);
    if (r) return *r;
    throw ProtocolError("cannot parse solver value: " + n.atom);
  }
  auto r = parse_smt_numeral(render_sexpr(n));
  if (r) return *r;
  throw ProtocolError("cannot parse solver value: " + render_sexpr(n));
}

}  // namespace

std::map<std::string, Value> Session::get_values(const std::vector<std::string>& symbols) {
  std::map<std::string, Value> out;
  // chunked to keep lines bounded
  const size_t kChunk = 64;
  for (size_t base = 0; base < symbols.size(); base += kChunk) {
    std::ostringstream cmd;
    cmd << "(get-value (";
    size_t end = std::min(symbols.size(), base + kChunk);
    for (size_t i = base; i < end; ++i) {
      if (i > base) cmd << " ";
      cmd << symbols[i];
    }
    cmd << "))";
    send(cmd.str(), false);
    std::string reply = read_unit(60000);
    if (reply.rfind("(error", 0) == 0)
      throw ProtocolError("get-value failed: " + reply);
    size_t pos = 0;
    SNode root = parse_sexpr(reply, pos);
    for (const auto& pair : root.items) {
      if (pair.items.size() != 2)
        throw ProtocolError("malformed get-value entry in: " + reply);
      out[pair.items[0].atom] = parse_value(pair.items[1]);
    }
  }
  return out;
}

std::vector<Literal> Session::fetch_core() {
  send("(get-unsat-core)", false);
  std::string reply = read_unit(60000);
  if (reply.rfind("(error", 0) == 0) throw ProtocolError("get-unsat-core failed: " + reply);
  size_t pos = 0;
  SNode root = parse_sexpr(reply, pos);
  std::vector<Literal> core;
  for (const auto& item : root.items) {
    if (item.is_atom()) {
      core.push_back({item.atom, true});
    } else if (item.items.size() == 2 && item.items[0].atom == "not") {
      core.push_back({item.items[1].atom, false});
    } else {
      throw ProtocolError("malformed core entry in: " + reply);
    }
  }
  return core;
}

}  // namespace mivc
