#pragma once

// External SMT solver bridge. One backend: any SMT-LIB 2 process
// (z3-compatible by default); the binary, arguments and input mode are
// configuration so a different solver needs no code changes here. Each
// query owns its process; the bridge is stateless.

#include "dgl/ast.hpp"
#include "dgl/process.hpp"
#include "dgl/smtlib.hpp"

#include <unistd.h>

#include <cstdlib>
#include <map>
#include <string>

namespace dgl {

struct SolverConfig {
  std::string command = "z3";  // split on whitespace; quotes honored
  bool use_stdin = false;      // default: pass a temp .smt2 file argument
  bool dump_models = true;     // ask for a model on sat (z3 global param)
  static SolverConfig from_env() {
    SolverConfig cfg;
    if (const char* env = std::getenv("DGL_SOLVER"); env && *env) cfg.command = env;
    return cfg;
  }
};

struct SolverQuery {
  FormulaPtr goal;            // checked for validity
  int timeout_ms = 180000;    // 3 minutes, the evaluation budget
};

struct SolverVerdict {
  enum class Kind { Valid, Invalid, Unknown, TimedOut, ProcessError };
  Kind kind = Kind::ProcessError;
  std::string detail;
  std::map<Ident, std::string> counterexample;  // Invalid, when the solver gave one
};

inline const char* verdict_name(SolverVerdict::Kind k) {
  switch (k) {
    case SolverVerdict::Kind::Valid: return "valid";
    case SolverVerdict::Kind::Invalid: return "invalid";
    case SolverVerdict::Kind::Unknown: return "unknown";
    case SolverVerdict::Kind::TimedOut: return "timed_out";
    case SolverVerdict::Kind::ProcessError: return "process_error";
  }
  return "process_error";
}

namespace solver_detail {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& content) {
    const char* dir = std::getenv("TMPDIR");
    std::string tmpl = std::string(dir && *dir ? dir : "/tmp") + "/dgl-query-XXXXXX";
    std::vector<char> buf(tmpl.begin(), tmpl.end());
    buf.push_back('\0');
    int fd = mkstemp(buf.data());
    if (fd >= 0) {
      path.assign(buf.data());
      size_t off = 0;
      while (off < content.size()) {
        ssize_t n = write(fd, content.data() + off, content.size() - off);
        if (n <= 0) break;
        off += (size_t)n;
      }
      close(fd);
    }
  }
  ~TempFile() {
    if (!path.empty()) unlink(path.c_str());
  }
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;
};

struct RawOutcome {
  enum class Kind { Sat, Unsat, Unknown, TimedOut, ProcessError };
  Kind kind = Kind::ProcessError;
  std::string detail;
  std::map<Ident, std::string> model;
};

// Best-effort model extraction from (define-fun v () Real ...) blocks.
inline std::map<Ident, std::string> parse_model(const std::string& text) {
  std::map<Ident, std::string> model;
  size_t pos = 0;
  const std::string key = "(define-fun ";
  while ((pos = text.find(key, pos)) != std::string::npos) {
    size_t p = pos + key.size();
    size_t name_end = text.find_first_of(" \t\n(", p);
    if (name_end == std::string::npos) break;
    std::string name = text.substr(p, name_end - p);
    size_t real = text.find("Real", name_end);
    if (real == std::string::npos) { pos = p; continue; }
    // Capture until the define-fun's closing paren.
    int depth = 1;  // we are inside "(define-fun"
    size_t i = pos + 1;
    // Recompute depth from after the opening paren to find the matching close.
    depth = 1;
    i = pos + 1;
    size_t end = std::string::npos;
    for (; i < text.size(); ++i) {
      if (text[i] == '(') ++depth;
      else if (text[i] == ')') {
        if (--depth == 0) { end = i; break; }
      }
    }
    if (end == std::string::npos) break;
    std::string value = text.substr(real + 4, end - (real + 4));
    // Collapse whitespace runs for a stable one-line rendering.
    std::string clean;
    bool space = false;
    for (char c : value) {
      if (c == ' ' || c == '\n' || c == '\t' || c == '\r') {
        space = true;
        continue;
      }
      if (space && !clean.empty()) clean += ' ';
      space = false;
      clean += c;
    }
    if (!name.empty() && name[0] != '|') model[name] = clean;
    else if (name.size() > 2) model[name.substr(1, name.size() - 2)] = clean;
    pos = end;
  }
  return model;
}

inline RawOutcome run_script(const std::string& script, int timeout_ms, const SolverConfig& cfg) {
  RawOutcome out;
  std::vector<std::string> argv = split_command(cfg.command);
  if (argv.empty()) {
    out.detail = "solver command is empty; set solver.cmd in dgl.toml or DGL_SOLVER";
    return out;
  }
  if (cfg.dump_models) argv.push_back("dump_models=true");

  std::optional<TempFile> file;
  if (!cfg.use_stdin) {
    file.emplace(script);
    if (file->path.empty()) {
      out.detail = "could not create temporary query file";
      return out;
    }
    argv.push_back(file->path);
  }

  ProcessResult proc = run_process(argv, cfg.use_stdin ? script : std::string(), timeout_ms,
                                   cfg.use_stdin);
  if (proc.spawn_failed) {
    out.kind = RawOutcome::Kind::ProcessError;
    out.detail = "could not run solver '" + cfg.command + "': " +
                 (proc.error_detail.empty() ? "spawn failure" : proc.error_detail);
    return out;
  }
  if (proc.timed_out) {
    out.kind = RawOutcome::Kind::TimedOut;
    out.detail = "solver killed after " + std::to_string(timeout_ms) + " ms";
    return out;
  }

  // First sat|unsat|unknown line decides; an (error ...) before any
  // verdict is a bridge bug or solver misconfiguration, never silent.
  size_t start = 0;
  while (start <= proc.out.size()) {
    size_t nl = proc.out.find('\n', start);
    std::string line = proc.out.substr(start, nl == std::string::npos ? nl : nl - start);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line == "sat") {
      out.kind = RawOutcome::Kind::Sat;
      out.model = parse_model(proc.out.substr(nl == std::string::npos ? proc.out.size() : nl));
      return out;
    }
    if (line == "unsat") {
      out.kind = RawOutcome::Kind::Unsat;
      return out;
    }
    if (line == "unknown") {
      out.kind = RawOutcome::Kind::Unknown;
      return out;
    }
    if (line.rfind("(error", 0) == 0) {
      out.kind = RawOutcome::Kind::ProcessError;
      out.detail = "solver reported: " + line;
      return out;
    }
    if (nl == std::string::npos) break;
    start = nl + 1;
  }
  out.kind = RawOutcome::Kind::ProcessError;
  out.detail = "no sat/unsat/unknown in solver output (exit " + std::to_string(proc.exit_code) +
               "): " + proc.err.substr(0, 200);
  return out;
}

}  // namespace solver_detail

// Validity of q.goal: unsat of the negated assertion means valid.
inline SolverVerdict check_validity(const SolverQuery& q, const SolverConfig& cfg) {
  SolverVerdict v;
  auto raw = solver_detail::run_script(to_smtlib(q.goal), q.timeout_ms, cfg);
  switch (raw.kind) {
    case solver_detail::RawOutcome::Kind::Unsat: v.kind = SolverVerdict::Kind::Valid; break;
    case solver_detail::RawOutcome::Kind::Sat:
      v.kind = SolverVerdict::Kind::Invalid;
      v.counterexample = std::move(raw.model);
      break;
    case solver_detail::RawOutcome::Kind::Unknown: v.kind = SolverVerdict::Kind::Unknown; break;
    case solver_detail::RawOutcome::Kind::TimedOut: v.kind = SolverVerdict::Kind::TimedOut; break;
    case solver_detail::RawOutcome::Kind::ProcessError:
      v.kind = SolverVerdict::Kind::ProcessError;
      break;
  }
  v.detail = std::move(raw.detail);
  return v;
}

enum class SatVerdict { Sat, Unsat, Unknown, TimedOut, ProcessError };

struct SatResult {
  SatVerdict kind = SatVerdict::ProcessError;
  std::string detail;
};

inline SatResult check_satisfiability(const FormulaPtr& f, int timeout_ms,
                                      const SolverConfig& cfg) {
  auto raw = solver_detail::run_script(to_smtlib_sat(f), timeout_ms, cfg);
  SatResult r;
  switch (raw.kind) {
    case solver_detail::RawOutcome::Kind::Sat: r.kind = SatVerdict::Sat; break;
    case solver_detail::RawOutcome::Kind::Unsat: r.kind = SatVerdict::Unsat; break;
    case solver_detail::RawOutcome::Kind::Unknown: r.kind = SatVerdict::Unknown; break;
    case solver_detail::RawOutcome::Kind::TimedOut: r.kind = SatVerdict::TimedOut; break;
    case solver_detail::RawOutcome::Kind::ProcessError: r.kind = SatVerdict::ProcessError; break;
  }
  r.detail = std::move(raw.detail);
  return r;
}

}  // namespace dgl
