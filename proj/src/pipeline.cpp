#include "ubsolve/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "ubsolve/sexpr.hpp"

namespace ubsolve {

namespace {

struct IncContext {
  const RunOptions* opts;
  Deadline deadline;
  bool timed_out = false;
  bool backend_error = false;
};

// Iterative-degree synthesis of a whole (sub)system on top of a fixed
// partial model. Returns the interpretations of the templated symbols.
std::optional<Interpretation> solve_inc(const ConstraintSystem& cs,
                                        const Interpretation& fixed,
                                        IncContext& ctx) {
  for (unsigned degree = 1; degree <= ctx.opts->max_degree; ++degree) {
    if (ctx.deadline.expired()) {
      ctx.timed_out = true;
      return std::nullopt;
    }
    Synthesis syn = synthesize(cs, fixed, degree, ctx.opts->template_opts);
    SolveResult result;
    std::unique_ptr<IncrementalSolver> solver;
    try {
      solver = make_solver(syn.dio, ctx.opts->solver);
      result = solver->check(ctx.deadline);
    } catch (const ResourceError&) {
      continue;  // treat as unknown at this degree, escalate
    }
    switch (result.status) {
      case SolveStatus::TimedOut:
        ctx.timed_out = true;
        return std::nullopt;
      case SolveStatus::Unsat:
      case SolveStatus::Unknown:
        continue;  // escalate degree
      case SolveStatus::Sat:
        break;
    }
    CoeffValuation val = std::move(result.valuation);
    if (ctx.opts->minimise) {
      // never let minimisation convert a SAT into a TIMEOUT: cap it to 30%
      // of the remaining budget
      Deadline mini = Deadline::in(std::chrono::milliseconds(
          std::max<long long>(1, ctx.deadline.remaining().count() * 3 / 10)));
      if (ctx.deadline.at && *ctx.deadline.at < *mini.at) mini = ctx.deadline;
      val = minimise(syn.dio, val, syn.coeff_vars, *solver, ctx.opts->solver,
                     mini);
    }
    // coefficient variables absent from the diophantine system are
    // unconstrained; zero is the minimal choice
    for (auto& cv : syn.coeff_vars)
      if (!val.contains(cv.id)) val[cv.id] = 0;
    return syn.concretize(val);
  }
  return std::nullopt;
}

}  // namespace

std::optional<Strategy> parse_strategy(const std::string& name) {
  if (name == "inc") return Strategy::Inc;
  if (name == "inc+simp") return Strategy::IncSimp;
  if (name == "inc+simp+scc") return Strategy::IncSimpScc;
  return std::nullopt;
}

std::string strategy_name(Strategy s) {
  switch (s) {
    case Strategy::Inc: return "inc";
    case Strategy::IncSimp: return "inc+simp";
    case Strategy::IncSimpScc: return "inc+simp+scc";
  }
  return "?";
}

RunOutcome run_system(const ConstraintSystem& cs, const RunOptions& opts) {
  auto start = std::chrono::steady_clock::now();
  RunOutcome out;
  IncContext ctx{&opts, Deadline::in(opts.timeout)};

  std::optional<Interpretation> model;
  if (opts.strategy == Strategy::Inc) {
    model = solve_inc(cs, Interpretation{}, ctx);
  } else {
    SimplifyResult simplified = simplify_all(cs);
    if (opts.strategy == Strategy::IncSimp) {
      auto partial = solve_inc(simplified.system, Interpretation{}, ctx);
      if (partial) model = replay(simplified.trace, *partial);
    } else {
      out.scc_count =
          decompose(build_call_graph(simplified.system)).sccs.size();
      SccSolveResult scc = solve_by_scc(
          simplified.system,
          [&](const ConstraintSystem& subsystem, const Interpretation& fixed)
              -> std::optional<Interpretation> {
            return solve_inc(subsystem, fixed, ctx);
          });
      if (scc.model) {
        model = replay(simplified.trace, *scc.model);
      } else if (!ctx.timed_out) {
        // Per-SCC solving is incomplete: a symbol fixed while solving an
        // early SCC may admit no extension later even though the whole
        // system has a model. Retry unsplit so this strategy solves at
        // least everything inc+simp does.
        auto partial = solve_inc(simplified.system, Interpretation{}, ctx);
        if (partial) model = replay(simplified.trace, *partial);
      }
    }
  }

  if (model) {
    out.status = RunStatus::Sat;
    out.degree = model->degree();
    if (opts.check) out.check_verdict = check_model(cs, *model).verdict;
    out.model = std::move(model);
  } else {
    out.status = ctx.timed_out ? RunStatus::Timeout : RunStatus::Open;
  }
  out.wall_seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();
  return out;
}

CorpusSummary run_corpus(const std::filesystem::path& directory,
                         const RunOptions& opts) {
  CorpusSummary summary;
  std::vector<std::filesystem::path> files;
  if (std::filesystem::exists(directory))
    for (auto& entry : std::filesystem::directory_iterator(directory))
      if (entry.is_regular_file() && entry.path().extension() == ".cs")
        files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  for (auto& file : files) {
    CorpusRow row{file.filename().string(), std::nullopt, ""};
    try {
      std::ifstream in(file);
      std::stringstream buf;
      buf << in.rdbuf();
      ConstraintSystem cs = parse_system(buf.str());
      row.outcome = run_system(cs, opts);
    } catch (const Error& e) {
      row.error = e.what();
      ++summary.errors;
    }
    if (row.outcome) {
      switch (row.outcome->status) {
        case RunStatus::Sat:
          ++summary.sat_by_degree[row.outcome->degree];
          break;
        case RunStatus::Open: ++summary.open; break;
        case RunStatus::Timeout: ++summary.timeout; break;
      }
    }
    summary.rows.push_back(std::move(row));
  }
  return summary;
}

std::string corpus_csv(const CorpusSummary& summary) {
  std::ostringstream os;
  os << "file,status,degree,wall_seconds\n";
  for (auto& row : summary.rows) {
    os << row.file << ",";
    if (!row.outcome) {
      os << "ERROR,,\n";
      continue;
    }
    switch (row.outcome->status) {
      case RunStatus::Sat:
        os << "SAT," << row.outcome->degree;
        break;
      case RunStatus::Open: os << "OPEN,"; break;
      case RunStatus::Timeout: os << "TIMEOUT,"; break;
    }
    os << "," << row.outcome->wall_seconds << "\n";
  }
  return os.str();
}

std::string corpus_table(const CorpusSummary& summary) {
  std::ostringstream os;
  for (auto& row : summary.rows) {
    os << "  " << row.file << ": ";
    if (!row.outcome) {
      os << "error: " << row.error << "\n";
      continue;
    }
    switch (row.outcome->status) {
      case RunStatus::Sat:
        os << "SAT(" << row.outcome->degree << ")";
        break;
      case RunStatus::Open: os << "OPEN"; break;
      case RunStatus::Timeout: os << "TIMEOUT"; break;
    }
    os << "  [" << row.outcome->wall_seconds << " s]\n";
  }
  os << "summary:";
  for (auto& [d, n] : summary.sat_by_degree)
    os << " SAT(" << d << ")=" << n;
  os << " OPEN=" << summary.open << " TIMEOUT=" << summary.timeout
     << " ERROR=" << summary.errors << "\n";
  return os.str();
}

}  // namespace ubsolve
