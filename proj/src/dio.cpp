#include "ubsolve/dio.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstring>
#include <set>
#include <sstream>

namespace ubsolve {

namespace {

// ---- SMT-LIB emission ----

void emit_coeff_poly(std::ostream& os, const CoeffPoly& p) {
  if (p.terms.empty()) {
    os << "0";
    return;
  }
  bool sum = p.terms.size() > 1;
  if (sum) os << "(+";
  for (auto& [m, c] : p.terms) {
    if (sum) os << " ";
    std::size_t factors = (c != 1 || m.exps.empty() ? 1 : 0);
    for (auto& [id, e] : m.exps) factors += e;
    if (factors > 1) os << "(* ";
    bool first = true;
    if (c != 1 || m.exps.empty()) {
      os << nat_str(c);
      first = false;
    }
    for (auto& [id, e] : m.exps)
      for (unsigned i = 0; i < e; ++i) {
        if (!first) os << " ";
        os << "c" << id;
        first = false;
      }
    if (factors > 1) os << ")";
  }
  if (sum) os << ")";
}

void emit_atom(std::ostream& os, const DioAtom& a) {
  os << "(>= ";
  emit_coeff_poly(os, a.lhs);
  os << " ";
  emit_coeff_poly(os, a.rhs);
  os << ")";
}

void emit_conj(std::ostream& os, const DioConj& conj) {
  if (conj.empty()) {
    os << "true";
    return;
  }
  if (conj.size() == 1) {
    emit_atom(os, conj.front());
    return;
  }
  os << "(and";
  for (auto& a : conj) {
    os << " ";
    emit_atom(os, a);
  }
  os << ")";
}

void emit_clause(std::ostream& os, const DioClause& clause) {
  if (clause.disjuncts.empty()) {
    os << "false";
    return;
  }
  if (clause.disjuncts.size() == 1) {
    emit_conj(os, clause.disjuncts.front());
    return;
  }
  os << "(or";
  for (auto& d : clause.disjuncts) {
    os << " ";
    emit_conj(os, d);
  }
  os << ")";
}

std::string emit_prelude(const DioSystem& dio,
                         const std::vector<unsigned>& ids) {
  std::ostringstream os;
  os << "(set-logic QF_NIA)\n";
  for (auto id : ids) {
    os << "(declare-fun c" << id << " () Int)\n";
    os << "(assert (>= c" << id << " 0))\n";
  }
  for (auto& clause : dio.clauses) {
    os << "(assert ";
    emit_clause(os, clause);
    os << ")\n";
  }
  return os.str();
}

// ---- subprocess session ----

class Subprocess {
 public:
  explicit Subprocess(const std::string& command) {
    int to_child[2], from_child[2];
    if (pipe(to_child) != 0 || pipe(from_child) != 0)
      throw Error("pipe failed: " + std::string(strerror(errno)));
    pid_ = fork();
    if (pid_ < 0) throw Error("fork failed: " + std::string(strerror(errno)));
    if (pid_ == 0) {
      // own process group, so terminate() can reach shell-spawned
      // grandchildren as well
      setpgid(0, 0);
      dup2(to_child[0], STDIN_FILENO);
      dup2(from_child[1], STDOUT_FILENO);
      close(to_child[0]);
      close(to_child[1]);
      close(from_child[0]);
      close(from_child[1]);
      execl("/bin/sh", "sh", "-c", command.c_str(), (char*)nullptr);
      _exit(127);
    }
    close(to_child[0]);
    close(from_child[1]);
    in_fd_ = to_child[1];
    out_fd_ = from_child[0];
    fcntl(out_fd_, F_SETFL, O_NONBLOCK);
    // keep these pipes out of any later solver session's child
    fcntl(in_fd_, F_SETFD, FD_CLOEXEC);
    fcntl(out_fd_, F_SETFD, FD_CLOEXEC);
  }

  ~Subprocess() { terminate(); }

  Subprocess(const Subprocess&) = delete;
  Subprocess& operator=(const Subprocess&) = delete;

  void write_all(const std::string& text) {
    std::size_t off = 0;
    while (off < text.size()) {
      ssize_t n = ::write(in_fd_, text.data() + off, text.size() - off);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw Error("write to solver failed: " + std::string(strerror(errno)));
      }
      off += static_cast<std::size_t>(n);
    }
  }

  // Reads until `pred` finds a complete reply in the buffer or the deadline
  // passes. Returns nullopt on timeout (the process is killed).
  std::optional<std::string> read_until(
      const std::function<std::optional<std::string>(std::string&)>& pred,
      Deadline deadline) {
    for (;;) {
      if (auto reply = pred(buffer_)) return reply;
      if (deadline.expired()) {
        terminate();
        return std::nullopt;
      }
      struct pollfd pfd {out_fd_, POLLIN, 0};
      auto wait = deadline.remaining();
      int timeout_ms =
          wait == std::chrono::milliseconds::max()
              ? 1000
              : static_cast<int>(std::min<long long>(wait.count(), 1000));
      int r = poll(&pfd, 1, timeout_ms);
      if (r < 0 && errno != EINTR)
        throw Error("poll failed: " + std::string(strerror(errno)));
      if (r > 0) {
        char buf[4096];
        ssize_t n = ::read(out_fd_, buf, sizeof buf);
        if (n > 0) {
          buffer_.append(buf, static_cast<std::size_t>(n));
        } else if (n == 0) {
          if (auto reply = pred(buffer_)) return reply;
          throw Error("solver process closed its output unexpectedly");
        } else if (errno != EAGAIN && errno != EINTR) {
          throw Error("read from solver failed: " +
                      std::string(strerror(errno)));
        }
      }
    }
  }

  void terminate() {
    if (pid_ <= 0) return;
    close(in_fd_);
    close(out_fd_);
    kill(-pid_, SIGKILL);  // whole process group
    kill(pid_, SIGKILL);   // in case setpgid lost the race
    int status = 0;
    waitpid(pid_, &status, 0);
    pid_ = -1;
  }

 private:
  pid_t pid_ = -1;
  int in_fd_ = -1, out_fd_ = -1;
  std::string buffer_;
};

// first whitespace-delimited word, consumed from the buffer
std::optional<std::string> take_word(std::string& buf) {
  std::size_t i = 0;
  while (i < buf.size() && std::isspace(static_cast<unsigned char>(buf[i])))
    ++i;
  std::size_t j = i;
  while (j < buf.size() && !std::isspace(static_cast<unsigned char>(buf[j])) &&
         buf[j] != '(' && buf[j] != ')')
    ++j;
  if (j == i || j == buf.size()) return std::nullopt;  // need a delimiter
  std::string word = buf.substr(i, j - i);
  buf.erase(0, j);
  return word;
}

// first balanced s-expression, consumed from the buffer
std::optional<std::string> take_sexpr(std::string& buf) {
  std::size_t i = 0;
  while (i < buf.size() && std::isspace(static_cast<unsigned char>(buf[i])))
    ++i;
  if (i >= buf.size() || buf[i] != '(') return std::nullopt;
  int depth = 0;
  for (std::size_t j = i; j < buf.size(); ++j) {
    if (buf[j] == '(') ++depth;
    if (buf[j] == ')' && --depth == 0) {
      std::string expr = buf.substr(i, j - i + 1);
      buf.erase(0, j + 1);
      return expr;
    }
  }
  return std::nullopt;
}

class ExternalSolver : public IncrementalSolver {
 public:
  ExternalSolver(const DioSystem& dio, const std::string& command)
      : ids_(dio.variable_ids()), proc_(command) {
    proc_.write_all(emit_prelude(dio, ids_));
  }

  void push(const DioClause& clause) override {
    std::ostringstream os;
    os << "(push 1)\n(assert ";
    emit_clause(os, clause);
    os << ")\n";
    proc_.write_all(os.str());
  }

  void pop() override { proc_.write_all("(pop 1)\n"); }

  SolveResult check(Deadline deadline) override {
    proc_.write_all("(check-sat)\n");
    auto word = proc_.read_until(take_word, deadline);
    if (!word) return {SolveStatus::TimedOut, {}};
    if (*word == "unsat") return {SolveStatus::Unsat, {}};
    if (*word == "unknown") return {SolveStatus::Unknown, {}};
    if (*word != "sat")
      throw Error("solver protocol violation: unexpected reply '" + *word +
                  "'");
    if (ids_.empty()) return {SolveStatus::Sat, {}};
    std::ostringstream os;
    os << "(get-value (";
    for (std::size_t i = 0; i < ids_.size(); ++i)
      os << (i ? " " : "") << "c" << ids_[i];
    os << "))\n";
    proc_.write_all(os.str());
    auto reply = proc_.read_until(take_sexpr, deadline);
    if (!reply) return {SolveStatus::TimedOut, {}};
    return {SolveStatus::Sat, parse_values(*reply)};
  }

 private:
  CoeffValuation parse_values(const std::string& reply) const {
    CoeffValuation val;
    std::size_t pos = 0;
    auto skip = [&] {
      while (pos < reply.size() &&
             std::isspace(static_cast<unsigned char>(reply[pos])))
        ++pos;
    };
    auto expect = [&](char c) {
      skip();
      if (pos >= reply.size() || reply[pos] != c)
        throw Error("solver protocol violation in get-value reply: " + reply);
      ++pos;
    };
    auto word = [&]() {
      skip();
      std::string w;
      while (pos < reply.size() && reply[pos] != '(' && reply[pos] != ')' &&
             !std::isspace(static_cast<unsigned char>(reply[pos])))
        w += reply[pos++];
      return w;
    };
    expect('(');
    for (;;) {
      skip();
      if (pos < reply.size() && reply[pos] == ')') break;
      expect('(');
      std::string name = word();
      skip();
      std::string value;
      if (pos < reply.size() && reply[pos] == '(') {
        // parenthesized term; "(- n)" is a protocol violation given the
        // non-negativity asserts
        ++pos;
        std::string op = word();
        std::string n = word();
        expect(')');
        if (op == "-")
          throw Error("solver returned negative value for " + name);
        throw Error("solver protocol violation: unexpected term (" + op + " " +
                    n + ")");
      }
      value = word();
      expect(')');
      if (name.size() < 2 || name[0] != 'c')
        throw Error("solver protocol violation: unexpected name " + name);
      if (!value.empty() && value[0] == '-')
        throw Error("solver returned negative value for " + name);
      val[static_cast<unsigned>(std::stoul(name.substr(1)))] = Nat(value);
    }
    for (auto id : ids_)
      if (!val.contains(id))
        throw Error("solver reply missing value for c" + std::to_string(id));
    return val;
  }

  std::vector<unsigned> ids_;
  Subprocess proc_;
};

// ---- internal bounded enumeration ----

class InternalSolver : public IncrementalSolver {
 public:
  InternalSolver(const DioSystem& dio, unsigned bound,
                 std::uint64_t work_limit)
      : base_(dio), bound_(bound), work_limit_(work_limit) {}

  void push(const DioClause& clause) override { extra_.push_back(clause); }
  void pop() override { extra_.pop_back(); }

  void limit_work(std::uint64_t limit) override {
    work_limit_ = std::min(work_limit_, limit);
  }

  SolveResult check(Deadline deadline) override {
    DioSystem full = base_;
    for (auto& c : extra_) full.clauses.push_back(c);
    return solve_internal(full, bound_, work_limit_, deadline);
  }

 private:
  DioSystem base_;
  unsigned bound_;
  std::uint64_t work_limit_;
  std::vector<DioClause> extra_;
};

// Evaluation of a clause under a partial assignment: true/false when
// determined, nullopt otherwise.
struct ClauseView {
  const DioClause* clause;
  std::vector<std::vector<std::set<unsigned>>> atom_vars;  // per disjunct
  std::set<unsigned> vars;
};

std::set<unsigned> poly_vars(const CoeffPoly& p) {
  std::set<unsigned> out;
  for (auto& [m, c] : p.terms)
    for (auto& [id, e] : m.exps) out.insert(id);
  return out;
}

// Interval evaluation of a polynomial under a partial assignment: every
// coefficient is a natural, so substituting 0 (resp. the search bound) for
// the unassigned variables yields a lower (resp. upper) bound.
void poly_range(const CoeffPoly& p, const std::vector<std::optional<Nat>>& value,
                const std::map<unsigned, std::size_t>& slot, const Nat& bound,
                Nat& lo, Nat& hi) {
  lo = 0;
  hi = 0;
  for (auto& [m, c] : p.terms) {
    Nat tlo = c, thi = c;
    bool has_unknown = false;
    for (auto& [id, e] : m.exps) {
      const auto& v = value[slot.at(id)];
      if (v) {
        Nat p_ = nat_pow(*v, e);
        tlo *= p_;
        thi *= p_;
      } else {
        has_unknown = true;
        thi *= nat_pow(bound, e);
      }
    }
    if (has_unknown) tlo = 0;
    lo += tlo;
    hi += thi;
  }
}

std::optional<bool> eval_partial(const ClauseView& cv,
                                 const std::vector<std::optional<Nat>>& value,
                                 const std::map<unsigned, std::size_t>& slot,
                                 const Nat& bound) {
  bool any_unknown = false;
  for (std::size_t d = 0; d < cv.clause->disjuncts.size(); ++d) {
    bool disj_false = false;
    bool disj_unknown = false;
    for (auto& atom : cv.clause->disjuncts[d]) {
      Nat llo, lhi, rlo, rhi;
      poly_range(atom.lhs, value, slot, bound, llo, lhi);
      poly_range(atom.rhs, value, slot, bound, rlo, rhi);
      if (lhi < rlo) {  // no completion can satisfy lhs >= rhs
        disj_false = true;
        break;
      }
      if (llo < rhi) disj_unknown = true;  // not yet guaranteed
    }
    if (disj_false) continue;
    if (disj_unknown) {
      any_unknown = true;
      continue;
    }
    return true;  // every atom holds under all completions
  }
  if (any_unknown) return std::nullopt;
  return false;
}

}  // namespace

std::string emit_smtlib(const DioSystem& dio) {
  return emit_prelude(dio, dio.variable_ids()) + "(check-sat)\n";
}

SolveResult solve_internal(const DioSystem& dio, unsigned bound,
                           std::uint64_t work_limit, Deadline deadline) {
  if (bound < 1) throw Error("internal solver bound must be >= 1");
  std::vector<unsigned> ids = dio.variable_ids();
  if (static_cast<std::uint64_t>(ids.size()) *
          (static_cast<std::uint64_t>(bound) + 1) >
      work_limit)
    throw ResourceError("internal solver: search space exceeds work limit");

  std::vector<ClauseView> views;
  for (auto& clause : dio.clauses) {
    ClauseView cv{&clause, {}, {}};
    for (auto& conj : clause.disjuncts) {
      std::vector<std::set<unsigned>> av;
      for (auto& atom : conj) {
        std::set<unsigned> vs = poly_vars(atom.lhs);
        auto rv = poly_vars(atom.rhs);
        vs.insert(rv.begin(), rv.end());
        cv.vars.insert(vs.begin(), vs.end());
        av.push_back(std::move(vs));
      }
      cv.atom_vars.push_back(std::move(av));
    }
    views.push_back(std::move(cv));
  }

  // Variable order: repeatedly take the unfixed variables of the clause with
  // the fewest remaining unfixed variables, so clauses become checkable as
  // early as possible.
  std::vector<unsigned> order;
  {
    std::set<unsigned> remaining(ids.begin(), ids.end());
    while (!remaining.empty()) {
      const ClauseView* best = nullptr;
      std::size_t best_count = 0;
      for (auto& cv : views) {
        std::size_t count = 0;
        for (auto id : cv.vars)
          if (remaining.contains(id)) ++count;
        if (count == 0) continue;
        if (!best || count < best_count) {
          best = &cv;
          best_count = count;
        }
      }
      if (!best) {
        // variables not mentioned in any clause (possible only via
        // variable_ids / views drift); take them in id order
        for (auto id : remaining) order.push_back(id);
        break;
      }
      for (auto id : best->vars)
        if (remaining.erase(id)) order.push_back(id);
    }
  }

  std::map<unsigned, std::size_t> slot;
  for (std::size_t i = 0; i < order.size(); ++i) slot[order[i]] = i;

  // clauses to re-check after position i is assigned: any clause mentioning
  // that variable (partial evaluation prunes as soon as every disjunct has a
  // determined-false atom)
  std::vector<std::vector<const ClauseView*>> watch(order.size() + 1);
  std::vector<const ClauseView*> ground;
  for (auto& cv : views) {
    if (cv.vars.empty()) {
      ground.push_back(&cv);
      continue;
    }
    for (auto id : cv.vars) watch[slot.at(id)].push_back(&cv);
  }
  std::vector<std::optional<Nat>> value(order.size());
  for (auto* cv : ground)
    if (!eval_clause(*cv->clause, {})) return {SolveStatus::Unsat, {}};
  if (order.empty()) return {SolveStatus::Sat, {}};

  std::uint64_t nodes = 0;
  // iterative DFS, values ascending -> first model is lexicographically
  // smallest in the chosen order at the given bound
  auto dfs = [&](unsigned b) -> SolveResult {
    const Nat nat_bound(b);
    std::vector<long long> choice(order.size(), -1);
    std::fill(value.begin(), value.end(), std::nullopt);
    std::size_t depth = 0;
    while (true) {
      if (deadline.expired()) return {SolveStatus::TimedOut, {}};
      if (++nodes > work_limit)
        throw ResourceError("internal solver: work limit exceeded");
      ++choice[depth];
      if (choice[depth] > b) {
        choice[depth] = -1;
        value[depth] = std::nullopt;
        if (depth == 0) return {SolveStatus::Unsat, {}};
        --depth;
        continue;
      }
      value[depth] = Nat(static_cast<long>(choice[depth]));
      bool ok = true;
      for (auto* cv : watch[depth]) {
        auto r = eval_partial(*cv, value, slot, nat_bound);
        if (r.has_value() && !*r) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      if (depth + 1 == order.size()) {
        CoeffValuation val;
        for (std::size_t i = 0; i < order.size(); ++i)
          val[order[i]] = *value[i];
        return {SolveStatus::Sat, std::move(val)};
      }
      ++depth;
    }
  };

  // Deepen on the value bound: almost all satisfiable systems have a model
  // with tiny coefficients, and searching those first avoids exhausting a
  // (bound+1)^n space. Only genuinely unsatisfiable systems pay full price.
  for (unsigned b : {1u, 2u, 4u, bound}) {
    if (b > bound) break;
    SolveResult r = dfs(b);
    if (r.status != SolveStatus::Unsat || b == bound) return r;
  }
  return {SolveStatus::Unsat, {}};
}

SolveResult solve_external(const DioSystem& dio, const SolverConfig& config,
                           Deadline deadline) {
  if (!config.external_command)
    throw Error("solve_external: no external command configured");
  if (!deadline.at) deadline = Deadline::in(config.time_budget);
  ExternalSolver solver(dio, *config.external_command);
  return solver.check(deadline);
}

std::unique_ptr<IncrementalSolver> make_solver(const DioSystem& dio,
                                               const SolverConfig& config) {
  if (config.external_command)
    return std::make_unique<ExternalSolver>(dio, *config.external_command);
  return std::make_unique<InternalSolver>(dio, config.internal_bound,
                                          config.work_limit);
}

CoeffValuation minimise(const DioSystem& dio, const CoeffValuation& start,
                        const std::vector<CoeffVar>& coeff_vars,
                        IncrementalSolver& solver, const SolverConfig& config,
                        Deadline deadline) {
  CoeffValuation best = start;
  std::set<unsigned> present;
  for (auto& [id, v] : start) present.insert(id);

  // tiers by origin degree, highest first, constants last
  std::map<unsigned, std::vector<unsigned>, std::greater<>> tiers;
  for (auto& cv : coeff_vars)
    if (present.contains(cv.id)) tiers[cv.origin_degree()].push_back(cv.id);

  auto tier_sum = [&](const std::vector<unsigned>& tier) {
    Nat s = 0;
    for (auto id : tier) s += best.at(id);
    return s;
  };
  auto sum_clause = [&](const std::vector<unsigned>& tier, const Nat& limit) {
    CoeffPoly rhs;
    for (auto id : tier) rhs = rhs + CoeffPoly::variable(id, Nat(1));
    DioClause clause;
    clause.disjuncts.push_back({DioAtom{CoeffPoly::constant(limit), rhs}});
    return clause;
  };

  unsigned rounds = 0;
  solver.limit_work(config.probe_work_limit);
  try {
    for (auto& [degree, tier] : tiers) {
      bool dead = false;
      for (;;) {
        if (rounds >= config.minimise_rounds || deadline.expired()) break;
        Nat s = tier_sum(tier);
        if (s == 0) break;
        ++rounds;
        solver.push(sum_clause(tier, s - 1));
        SolveResult r;
        try {
          r = solver.check(deadline);
        } catch (const ResourceError&) {
          // probe too expensive; give up on this tier
          solver.pop();
          break;
        }
        if (r.status == SolveStatus::TimedOut) {
          // the session may have been torn down; keep what we have
          dead = true;
          break;
        }
        solver.pop();
        if (r.status != SolveStatus::Sat) break;
        best = std::move(r.valuation);
        for (auto id : present)
          if (!best.contains(id)) best[id] = 0;
      }
      if (dead) break;
      // lock the achieved sum so later tiers cannot undo it
      solver.push(sum_clause(tier, tier_sum(tier)));
    }
  } catch (const Error&) {
    // failures during a round stop the descent; `best` still satisfies dio
  }
  return best;
}

}  // namespace ubsolve
