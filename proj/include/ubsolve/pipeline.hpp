#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ubsolve/dio.hpp"
#include "ubsolve/interpretation.hpp"
#include "ubsolve/scc.hpp"
#include "ubsolve/simplify.hpp"
#include "ubsolve/synth.hpp"

namespace ubsolve {

enum class Strategy { Inc, IncSimp, IncSimpScc };

std::optional<Strategy> parse_strategy(const std::string& name);
std::string strategy_name(Strategy s);

struct RunOptions {
  Strategy strategy = Strategy::IncSimpScc;
  unsigned max_degree = 4;
  std::chrono::milliseconds timeout{90000};  // covers all phases
  SolverConfig solver;
  bool minimise = true;
  bool check = false;
  TemplateOptions template_opts;
};

enum class RunStatus { Sat, Open, Timeout };

struct RunOutcome {
  RunStatus status = RunStatus::Open;
  std::optional<Interpretation> model;  // set when Sat
  unsigned degree = 0;                  // max monomial degree of the model
  double wall_seconds = 0.0;
  std::size_t scc_count = 0;  // SCCs in the plan (inc+simp+scc only)
  std::optional<ModelCheck::Verdict> check_verdict;
};

RunOutcome run_system(const ConstraintSystem& cs, const RunOptions& opts);

struct CorpusRow {
  std::string file;
  std::optional<RunOutcome> outcome;  // unset on a per-file error
  std::string error;
};

struct CorpusSummary {
  std::vector<CorpusRow> rows;
  std::map<unsigned, std::size_t> sat_by_degree;
  std::size_t open = 0;
  std::size_t timeout = 0;
  std::size_t errors = 0;
};

CorpusSummary run_corpus(const std::filesystem::path& directory,
                         const RunOptions& opts);

std::string corpus_csv(const CorpusSummary& summary);
std::string corpus_table(const CorpusSummary& summary);

}  // namespace ubsolve
