#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ubsolve/pipeline.hpp"
#include "ubsolve/sexpr.hpp"

namespace {

constexpr int kExitSat = 0;
constexpr int kExitOpen = 1;
constexpr int kExitTimeout = 2;
constexpr int kExitInputError = 3;
constexpr int kExitBackendError = 4;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ubsolve::Error("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace ubsolve;

  CLI::App app{
      "ubsolve - synthesizes weakly monotone max-polynomial models of "
      "inequality systems over the naturals"};

  std::string file;
  std::string corpus_dir;
  std::string strategy_str = "inc+simp+scc";
  unsigned max_degree = 4;
  double timeout_s = 90.0;
  std::string smt_command;
  bool no_minimise = false;
  bool check = false;
  std::string output = "human";

  app.add_option("file", file, "constraint system file (.cs)");
  app.add_option("--corpus", corpus_dir, "run every .cs file in a directory");
  app.add_option("--strategy", strategy_str,
                 "inc | inc+simp | inc+simp+scc (default inc+simp+scc)");
  app.add_option("--max-degree", max_degree,
                 "maximal template degree (default 4)");
  app.add_option("--timeout", timeout_s,
                 "global budget in seconds, all phases (default 90)");
  app.add_option("--smt", smt_command,
                 "external SMT-LIB2 QF_NIA solver command reading stdin "
                 "(default: environment variable UBSOLVE_SMT; if unset, the "
                 "internal bounded search with bound 16 is used)");
  app.add_flag("--no-minimise", no_minimise, "skip model minimisation");
  app.add_flag("--check", check, "verify the model with the checker");
  app.add_option("--output", output, "human | sexpr | csv (default human)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int r = app.exit(e);
    return r == 0 ? 0 : kExitInputError;
  }

  RunOptions opts;
  if (auto s = parse_strategy(strategy_str)) {
    opts.strategy = *s;
  } else {
    std::cerr << "unknown strategy: " << strategy_str << "\n";
    return kExitInputError;
  }
  opts.max_degree = max_degree;
  opts.timeout = std::chrono::milliseconds(
      static_cast<long long>(timeout_s * 1000.0));
  opts.minimise = !no_minimise;
  opts.check = check;
  if (smt_command.empty())
    if (const char* env = std::getenv("UBSOLVE_SMT")) smt_command = env;
  if (!smt_command.empty()) opts.solver.external_command = smt_command;
  opts.solver.time_budget = opts.timeout;

  try {
    if (!corpus_dir.empty()) {
      CorpusSummary summary = run_corpus(corpus_dir, opts);
      std::cout << (output == "csv" ? corpus_csv(summary)
                                    : corpus_table(summary));
      return summary.timeout > 0 ? kExitTimeout
             : summary.errors > 0 ? kExitInputError
                                  : kExitSat;
    }
    if (file.empty()) {
      std::cerr << "no input: give a FILE or --corpus DIR (see --help)\n";
      return kExitInputError;
    }
    ConstraintSystem cs;
    try {
      cs = parse_system(read_file(file));
    } catch (const Error& e) {
      std::cerr << file << ": " << e.what() << "\n";
      return kExitInputError;
    }
    RunOutcome outcome = run_system(cs, opts);
    switch (outcome.status) {
      case RunStatus::Sat: {
        std::cout << "SAT(" << outcome.degree << ")  ["
                  << outcome.wall_seconds << " s]\n";
        ModelStyle style =
            output == "sexpr" ? ModelStyle::Sexpr : ModelStyle::Human;
        std::cout << print_model(*outcome.model, style);
        if (outcome.check_verdict) {
          const char* v =
              *outcome.check_verdict == ModelCheck::Verdict::Valid ? "Valid"
              : *outcome.check_verdict == ModelCheck::Verdict::Invalid
                  ? "Invalid"
                  : "Unknown";
          std::cout << "check: " << v << "\n";
        }
        return kExitSat;
      }
      case RunStatus::Open:
        std::cout << "OPEN  [" << outcome.wall_seconds << " s]\n";
        return kExitOpen;
      case RunStatus::Timeout:
        std::cout << "TIMEOUT  [" << outcome.wall_seconds << " s]\n";
        return kExitTimeout;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBackendError;
  }
  return kExitBackendError;
}
