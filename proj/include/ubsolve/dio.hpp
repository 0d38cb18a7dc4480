#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "ubsolve/synth.hpp"

namespace ubsolve {

// Wall-clock budget; no deadline means unbounded.
struct Deadline {
  std::optional<std::chrono::steady_clock::time_point> at;

  static Deadline unbounded() { return {}; }
  static Deadline in(std::chrono::milliseconds ms) {
    return {std::chrono::steady_clock::now() + ms};
  }
  bool expired() const {
    return at && std::chrono::steady_clock::now() >= *at;
  }
  std::chrono::milliseconds remaining() const {
    if (!at) return std::chrono::milliseconds::max();
    auto r = std::chrono::duration_cast<std::chrono::milliseconds>(
        *at - std::chrono::steady_clock::now());
    return r.count() < 0 ? std::chrono::milliseconds(0) : r;
  }
};

using CoeffValuation = std::map<unsigned, Nat>;

enum class SolveStatus { Sat, Unsat, Unknown, TimedOut };

struct SolveResult {
  SolveStatus status = SolveStatus::Unknown;
  CoeffValuation valuation;  // set when Sat
};

struct SolverConfig {
  // Shell command for an external SMT-LIB2 QF_NIA solver reading stdin
  // (e.g. "z3 -in"). Unset selects the internal bounded enumeration.
  std::optional<std::string> external_command;
  unsigned internal_bound = 16;
  std::chrono::milliseconds time_budget{90000};
  unsigned minimise_rounds = 64;
  std::uint64_t work_limit = 50'000'000;  // internal search nodes
  // Tighter per-check cap applied during minimisation probes, so that an
  // unsatisfiable "can the sum go lower?" query cannot eat the whole budget.
  std::uint64_t probe_work_limit = 1'000'000;
};

// Full one-shot script: (set-logic QF_NIA), Int declarations with
// non-negativity asserts, one assert per clause, (check-sat). Deterministic.
std::string emit_smtlib(const DioSystem& dio);

// Complete search over {0..bound}^vars, clause-wise pruning, first model in
// lexicographic order of the connectivity-based variable order. "Unsat" here
// means unsat-within-bound.
SolveResult solve_internal(const DioSystem& dio, unsigned bound,
                           std::uint64_t work_limit = 50'000'000,
                           Deadline deadline = Deadline::unbounded());

// Spawns the configured command and drives it over the SMT-LIB2 text
// protocol. The time budget is enforced by terminating the process.
SolveResult solve_external(const DioSystem& dio, const SolverConfig& config,
                           Deadline deadline = Deadline::unbounded());

// One solver session per synthesis attempt; push/pop is used by
// minimisation. Not thread-safe; one owner at a time.
class IncrementalSolver {
 public:
  virtual ~IncrementalSolver() = default;
  virtual void push(const DioClause& clause) = 0;
  virtual void pop() = 0;
  virtual SolveResult check(Deadline deadline) = 0;
  // Lowers the per-check work budget for subsequent checks (no-op for
  // backends without a notion of work, e.g. the external solver).
  virtual void limit_work(std::uint64_t) {}
};

std::unique_ptr<IncrementalSolver> make_solver(const DioSystem& dio,
                                               const SolverConfig& config);

// Tiered descent: repeatedly bounds the sum of the coefficient variables of
// the highest-degree tier below its current value and re-solves, keeping the
// last satisfying valuation. The result always satisfies dio.
CoeffValuation minimise(const DioSystem& dio, const CoeffValuation& start,
                        const std::vector<CoeffVar>& coeff_vars,
                        IncrementalSolver& solver, const SolverConfig& config,
                        Deadline deadline = Deadline::unbounded());

}  // namespace ubsolve
