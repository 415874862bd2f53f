#pragma once

// Conflict-driven clause-learning SAT solver: two watched literals, VSIDS
// branching with phase saving, geometric restarts, activity-based learnt
// clause deletion, and solving under assumptions with final-conflict cores.
//
// A solver is incremental: clauses may be added between calls to solve().

#include "satcs/cnf.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace satcs {

enum class SolveStatus { sat, unsat };

struct SolveResult {
  SolveStatus status = SolveStatus::unsat;
  Model model;           // meaningful when sat
  std::vector<Lit> core; // when unsat: assumptions whose conjunction with the formula is UNSAT

  [[nodiscard]] bool is_sat() const noexcept { return status == SolveStatus::sat; }
};

struct SolverOptions {
  int restart_first = 100;      // conflicts before the first restart
  double restart_growth = 1.5;  // geometric factor between restarts
  double var_decay = 0.95;
  double clause_decay = 0.999;
  double learnt_fraction = 1.0 / 3.0; // initial learnt limit relative to problem clauses
  double learnt_growth = 1.1;
  int verbosity = 0;            // > 0 logs restarts to `log`
  std::ostream *log = nullptr;
};

struct SolverStats {
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;
  std::uint64_t conflicts = 0;
  std::uint64_t restarts = 0;
  std::uint64_t learnts_deleted = 0;
};

class SatSolver {
public:
  explicit SatSolver(SolverOptions options = {});

  /// Ensures variables 1..n exist.
  void reserve_vars(std::size_t n);
  Var new_var();
  [[nodiscard]] std::size_t num_vars() const noexcept { return assigns_.size(); }

  /// Returns false once the clause set is known to be unsatisfiable at the root.
  bool add_clause(std::span<const Lit> lits);
  bool add_clause(std::initializer_list<Lit> lits) { return add_clause(std::span(lits.begin(), lits.size())); }
  void add_formula(const CnfFormula &f);

  SolveResult solve(std::span<const Lit> assumptions = {});

  [[nodiscard]] bool okay() const noexcept { return ok_; }
  [[nodiscard]] const SolverStats &stats() const noexcept { return stats_; }

private:
  using CRef = std::uint32_t;
  static constexpr CRef no_reason = ~CRef{0};

  enum class LBool : std::uint8_t { t, f, undef };

  struct ClauseData {
    std::vector<Lit> lits;
    double activity = 0;
    bool learnt = false;
    bool deleted = false;
  };

  struct Watcher {
    CRef cref;
    Lit blocker;
  };

  // Internal literal indices are 0-based: variable v (1-based) is slot v-1.
  static std::uint32_t slot(Lit l) { return l.code() - 2; }
  static std::size_t vidx(Var v) { return v - 1; }

  LBool value(Lit l) const {
    auto a = assigns_[vidx(l.var())];
    if (a == LBool::undef)
      return LBool::undef;
    return (a == LBool::t) != l.negated() ? LBool::t : LBool::f;
  }
  int level(Var v) const { return levels_[vidx(v)]; }
  int decision_level() const { return static_cast<int>(trail_lim_.size()); }

  void attach(CRef cr);
  void enqueue(Lit l, CRef reason);
  std::optional<CRef> propagate();
  void analyze(CRef confl, std::vector<Lit> &learnt, int &backtrack_level);
  bool literal_redundant(Lit l, std::uint32_t abstract_levels);
  void analyze_final(Lit p, std::vector<Lit> &core);
  void cancel_until(int level);
  Lit pick_branch();
  bool locked(CRef cr) const;
  void reduce_learnts();
  void collect_garbage();
  void simplify_root();

  void bump_var(Var v);
  void bump_clause(ClauseData &c);

  // Binary max-heap on activity, keyed by variable.
  void heap_insert(Var v);
  void heap_up(std::size_t pos);
  void heap_down(std::size_t pos);
  Var heap_pop();
  bool heap_contains(Var v) const { return heap_pos_[vidx(v)] >= 0; }

  SolverOptions opts_;
  SolverStats stats_;
  bool ok_ = true;

  std::vector<ClauseData> clauses_;
  std::vector<CRef> problem_;
  std::vector<CRef> learnts_;
  std::vector<std::vector<Watcher>> watches_; // by slot of the literal whose falsification wakes the clause

  std::vector<LBool> assigns_;
  std::vector<int> levels_;
  std::vector<CRef> reasons_;
  std::vector<bool> saved_phase_; // true = negative polarity
  std::vector<double> activity_;
  std::vector<std::uint8_t> seen_;
  std::vector<Lit> trail_;
  std::vector<std::size_t> trail_lim_;
  std::size_t qhead_ = 0;

  std::vector<Var> heap_;
  std::vector<long> heap_pos_;

  double var_inc_ = 1.0;
  double clause_inc_ = 1.0;
  double max_learnts_ = 0;
  std::size_t root_simplified_at_ = 0;
  std::vector<Lit> analyze_stack_;
  std::vector<Lit> analyze_clear_;
};

/// One-shot convenience wrapper.
[[nodiscard]] SolveResult solve(const CnfFormula &f, std::span<const Lit> assumptions = {});

} // namespace satcs
