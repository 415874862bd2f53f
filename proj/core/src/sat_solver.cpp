#include "satcs/sat_solver.hpp"

#include "satcs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace satcs {

SatSolver::SatSolver(SolverOptions options) : opts_(options) {}

void SatSolver::reserve_vars(std::size_t n) {
  while (num_vars() < n)
    new_var();
}

Var SatSolver::new_var() {
  assigns_.push_back(LBool::undef);
  levels_.push_back(0);
  reasons_.push_back(no_reason);
  saved_phase_.push_back(true);
  activity_.push_back(0.0);
  seen_.push_back(0);
  watches_.emplace_back();
  watches_.emplace_back();
  heap_pos_.push_back(-1);
  auto v = static_cast<Var>(assigns_.size());
  heap_insert(v);
  return v;
}

bool SatSolver::add_clause(std::span<const Lit> lits) {
  if (!ok_)
    return false;
  cancel_until(0);

  std::vector<Lit> c(lits.begin(), lits.end());
  Var max_var = 0;
  for (auto l : c) {
    if (l.var() == 0)
      throw InputError("variable 0 is not a valid literal");
    max_var = std::max(max_var, l.var());
  }
  reserve_vars(max_var);

  std::sort(c.begin(), c.end());
  std::size_t j = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (j > 0 && c[i] == c[j - 1])
      continue;
    if (j > 0 && c[i] == ~c[j - 1])
      return true; // tautology
    auto v = value(c[i]);
    if (v == LBool::t)
      return true;
    if (v == LBool::f)
      continue;
    c[j++] = c[i];
  }
  c.resize(j);

  if (c.empty()) {
    ok_ = false;
    return false;
  }
  if (c.size() == 1) {
    enqueue(c[0], no_reason);
    ok_ = !propagate().has_value();
    return ok_;
  }
  auto cr = static_cast<CRef>(clauses_.size());
  clauses_.push_back({std::move(c), 0.0, false, false});
  problem_.push_back(cr);
  attach(cr);
  return true;
}

void SatSolver::add_formula(const CnfFormula &f) {
  reserve_vars(f.num_vars);
  for (const auto &c : f.clauses)
    add_clause(c);
}

void SatSolver::attach(CRef cr) {
  const auto &c = clauses_[cr].lits;
  watches_[slot(~c[0])].push_back({cr, c[1]});
  watches_[slot(~c[1])].push_back({cr, c[0]});
}

void SatSolver::enqueue(Lit l, CRef reason) {
  auto v = vidx(l.var());
  assigns_[v] = l.negated() ? LBool::f : LBool::t;
  levels_[v] = decision_level();
  reasons_[v] = reason;
  trail_.push_back(l);
}

std::optional<SatSolver::CRef> SatSolver::propagate() {
  std::optional<CRef> conflict;
  while (qhead_ < trail_.size()) {
    Lit p = trail_[qhead_++];
    auto &ws = watches_[slot(p)];
    Lit false_lit = ~p;
    ++stats_.propagations;

    std::size_t i = 0;
    std::size_t j = 0;
    while (i < ws.size()) {
      Watcher w = ws[i++];
      if (value(w.blocker) == LBool::t) {
        ws[j++] = w;
        continue;
      }
      auto &c = clauses_[w.cref].lits;
      if (c[0] == false_lit)
        std::swap(c[0], c[1]);
      Lit first = c[0];
      Watcher nw{w.cref, first};
      if (first != w.blocker && value(first) == LBool::t) {
        ws[j++] = nw;
        continue;
      }

      bool moved = false;
      for (std::size_t k = 2; k < c.size(); ++k) {
        if (value(c[k]) != LBool::f) {
          std::swap(c[1], c[k]);
          watches_[slot(~c[1])].push_back(nw);
          moved = true;
          break;
        }
      }
      if (moved)
        continue;

      ws[j++] = nw;
      if (value(first) == LBool::f) {
        conflict = w.cref;
        qhead_ = trail_.size();
        while (i < ws.size())
          ws[j++] = ws[i++];
      } else {
        enqueue(first, w.cref);
      }
    }
    ws.resize(j);
  }
  return conflict;
}

void SatSolver::bump_var(Var v) {
  auto &a = activity_[vidx(v)];
  a += var_inc_;
  if (a > 1e100) {
    for (auto &x : activity_)
      x *= 1e-100;
    var_inc_ *= 1e-100;
  }
  if (heap_contains(v))
    heap_up(static_cast<std::size_t>(heap_pos_[vidx(v)]));
}

void SatSolver::bump_clause(ClauseData &c) {
  c.activity += clause_inc_;
  if (c.activity > 1e20) {
    for (auto cr : learnts_)
      clauses_[cr].activity *= 1e-20;
    clause_inc_ *= 1e-20;
  }
}

namespace {
std::uint32_t abstract_level(int level) { return 1u << (static_cast<unsigned>(level) & 31u); }
} // namespace

void SatSolver::analyze(CRef confl, std::vector<Lit> &learnt, int &backtrack_level) {
  learnt.clear();
  learnt.emplace_back(); // room for the asserting literal
  int path = 0;
  Lit p{};
  bool have_p = false;
  auto index = static_cast<long>(trail_.size()) - 1;

  do {
    auto &c = clauses_[confl];
    if (c.learnt)
      bump_clause(c);
    for (std::size_t k = have_p ? 1 : 0; k < c.lits.size(); ++k) {
      Lit q = c.lits[k];
      auto v = vidx(q.var());
      if (!seen_[v] && levels_[v] > 0) {
        bump_var(q.var());
        seen_[v] = 1;
        if (levels_[v] >= decision_level())
          ++path;
        else
          learnt.push_back(q);
      }
    }
    while (!seen_[vidx(trail_[static_cast<std::size_t>(index)].var())])
      --index;
    p = trail_[static_cast<std::size_t>(index)];
    --index;
    confl = reasons_[vidx(p.var())];
    seen_[vidx(p.var())] = 0;
    have_p = true;
    --path;
    // The reason clause of p keeps p in position 0.
  } while (path > 0);
  learnt[0] = ~p;

  // Recursive minimization: drop literals implied by the rest of the clause.
  analyze_clear_.assign(learnt.begin(), learnt.end());
  std::uint32_t levels = 0;
  for (std::size_t k = 1; k < learnt.size(); ++k)
    levels |= abstract_level(level(learnt[k].var()));
  std::size_t j = 1;
  for (std::size_t k = 1; k < learnt.size(); ++k) {
    auto r = reasons_[vidx(learnt[k].var())];
    if (r == no_reason || !literal_redundant(learnt[k], levels))
      learnt[j++] = learnt[k];
  }
  learnt.resize(j);

  if (learnt.size() == 1) {
    backtrack_level = 0;
  } else {
    std::size_t max_i = 1;
    for (std::size_t k = 2; k < learnt.size(); ++k)
      if (level(learnt[k].var()) > level(learnt[max_i].var()))
        max_i = k;
    std::swap(learnt[1], learnt[max_i]);
    backtrack_level = level(learnt[1].var());
  }

  for (auto l : analyze_clear_)
    seen_[vidx(l.var())] = 0;
}

bool SatSolver::literal_redundant(Lit l, std::uint32_t abstract_levels) {
  analyze_stack_.clear();
  analyze_stack_.push_back(l);
  auto top = analyze_clear_.size();
  while (!analyze_stack_.empty()) {
    Lit q = analyze_stack_.back();
    analyze_stack_.pop_back();
    const auto &c = clauses_[reasons_[vidx(q.var())]].lits;
    for (std::size_t k = 1; k < c.size(); ++k) {
      Lit r = c[k];
      auto v = vidx(r.var());
      if (seen_[v] || levels_[v] == 0)
        continue;
      if (reasons_[v] != no_reason && (abstract_level(levels_[v]) & abstract_levels) != 0) {
        seen_[v] = 1;
        analyze_stack_.push_back(r);
        analyze_clear_.push_back(r);
      } else {
        for (auto k2 = top; k2 < analyze_clear_.size(); ++k2)
          seen_[vidx(analyze_clear_[k2].var())] = 0;
        analyze_clear_.resize(top);
        return false;
      }
    }
  }
  return true;
}

void SatSolver::analyze_final(Lit p, std::vector<Lit> &core) {
  // p is an assumption that is currently false.
  core.clear();
  core.push_back(p);
  if (decision_level() == 0)
    return;
  seen_[vidx(p.var())] = 1;
  for (auto i = static_cast<long>(trail_.size()) - 1;
       i >= static_cast<long>(trail_lim_[0]); --i) {
    Lit x = trail_[static_cast<std::size_t>(i)];
    auto v = vidx(x.var());
    if (!seen_[v])
      continue;
    if (reasons_[v] == no_reason) {
      core.push_back(x);
    } else {
      const auto &c = clauses_[reasons_[v]].lits;
      for (std::size_t k = 1; k < c.size(); ++k)
        if (levels_[vidx(c[k].var())] > 0)
          seen_[vidx(c[k].var())] = 1;
    }
    seen_[v] = 0;
  }
  seen_[vidx(p.var())] = 0;
}

void SatSolver::cancel_until(int lvl) {
  if (decision_level() <= lvl)
    return;
  for (auto i = trail_.size(); i-- > trail_lim_[static_cast<std::size_t>(lvl)];) {
    auto v = trail_[i].var();
    saved_phase_[vidx(v)] = trail_[i].negated();
    assigns_[vidx(v)] = LBool::undef;
    reasons_[vidx(v)] = no_reason;
    if (!heap_contains(v))
      heap_insert(v);
  }
  trail_.resize(trail_lim_[static_cast<std::size_t>(lvl)]);
  qhead_ = trail_.size();
  trail_lim_.resize(static_cast<std::size_t>(lvl));
}

Lit SatSolver::pick_branch() {
  while (!heap_.empty()) {
    Var v = heap_pop();
    if (assigns_[vidx(v)] == LBool::undef)
      return {v, saved_phase_[vidx(v)]};
  }
  return {};
}

bool SatSolver::locked(CRef cr) const {
  const auto &c = clauses_[cr].lits;
  auto v = vidx(c[0].var());
  return reasons_[v] == cr && value(c[0]) == LBool::t;
}

void SatSolver::reduce_learnts() {
  std::sort(learnts_.begin(), learnts_.end(), [&](CRef a, CRef b) {
    const auto &ca = clauses_[a];
    const auto &cb = clauses_[b];
    if ((ca.lits.size() > 2) != (cb.lits.size() > 2))
      return ca.lits.size() > 2;
    return ca.activity < cb.activity;
  });
  double limit = clause_inc_ / static_cast<double>(std::max<std::size_t>(learnts_.size(), 1));
  std::size_t half = learnts_.size() / 2;
  for (std::size_t i = 0; i < learnts_.size(); ++i) {
    auto &c = clauses_[learnts_[i]];
    if (c.lits.size() > 2 && !locked(learnts_[i]) && (i < half || c.activity < limit)) {
      c.deleted = true;
      ++stats_.learnts_deleted;
    }
  }
  collect_garbage();
}

void SatSolver::simplify_root() {
  // Clauses satisfied at the root can never matter again.
  auto drop = [&](std::vector<CRef> &refs) {
    for (auto cr : refs) {
      auto &c = clauses_[cr];
      if (std::any_of(c.lits.begin(), c.lits.end(), [&](Lit l) { return value(l) == LBool::t; }))
        c.deleted = true;
    }
  };
  drop(problem_);
  drop(learnts_);
  collect_garbage();
  root_simplified_at_ = trail_.size();
}

void SatSolver::collect_garbage() {
  std::vector<CRef> remap(clauses_.size(), no_reason);
  std::vector<ClauseData> kept;
  kept.reserve(clauses_.size());
  for (CRef cr = 0; cr < clauses_.size(); ++cr) {
    if (clauses_[cr].deleted)
      continue;
    remap[cr] = static_cast<CRef>(kept.size());
    kept.push_back(std::move(clauses_[cr]));
  }
  clauses_ = std::move(kept);

  auto fix = [&](std::vector<CRef> &refs) {
    std::size_t j = 0;
    for (auto cr : refs)
      if (remap[cr] != no_reason)
        refs[j++] = remap[cr];
    refs.resize(j);
  };
  fix(problem_);
  fix(learnts_);
  for (auto &r : reasons_)
    if (r != no_reason)
      r = remap[r];

  for (auto &ws : watches_)
    ws.clear();
  for (CRef cr = 0; cr < clauses_.size(); ++cr)
    attach(cr);
}

SolveResult SatSolver::solve(std::span<const Lit> assumptions) {
  SolveResult result;
  for (auto a : assumptions) {
    if (a.var() == 0)
      throw InputError("variable 0 is not a valid assumption");
    reserve_vars(a.var());
  }
  cancel_until(0);
  if (!ok_)
    return result;
  if (propagate()) {
    ok_ = false;
    return result;
  }

  max_learnts_ =
      std::max(static_cast<double>(problem_.size()) * opts_.learnt_fraction, 2000.0);
  double budget = opts_.restart_first;
  std::vector<Lit> learnt;

  for (;;) {
    auto conflicts_this_round = 0.0;
    for (;;) {
      auto confl = propagate();
      if (confl) {
        ++stats_.conflicts;
        conflicts_this_round += 1;
        if (decision_level() == 0) {
          ok_ = false;
          cancel_until(0);
          return result;
        }
        int bt = 0;
        analyze(*confl, learnt, bt);
        cancel_until(bt);
        if (learnt.size() == 1) {
          enqueue(learnt[0], no_reason);
        } else {
          auto cr = static_cast<CRef>(clauses_.size());
          clauses_.push_back({learnt, 0.0, true, false});
          learnts_.push_back(cr);
          attach(cr);
          bump_clause(clauses_[cr]);
          enqueue(learnt[0], cr);
        }
        var_inc_ /= opts_.var_decay;
        clause_inc_ /= opts_.clause_decay;
        continue;
      }

      if (conflicts_this_round >= budget) {
        cancel_until(0);
        ++stats_.restarts;
        budget *= opts_.restart_growth;
        max_learnts_ *= opts_.learnt_growth;
        if (opts_.verbosity > 0 && opts_.log)
          *opts_.log << "c restart " << stats_.restarts << " conflicts " << stats_.conflicts
                     << " learnts " << learnts_.size() << '\n';
        break;
      }
      if (decision_level() == 0 && trail_.size() > root_simplified_at_)
        simplify_root();
      if (static_cast<double>(learnts_.size()) >=
          max_learnts_ + static_cast<double>(trail_.size()))
        reduce_learnts();

      Lit next{};
      while (static_cast<std::size_t>(decision_level()) < assumptions.size()) {
        Lit a = assumptions[static_cast<std::size_t>(decision_level())];
        auto v = value(a);
        if (v == LBool::t) {
          trail_lim_.push_back(trail_.size());
        } else if (v == LBool::f) {
          analyze_final(a, result.core);
          cancel_until(0);
          return result;
        } else {
          next = a;
          break;
        }
      }
      if (next.var() == 0) {
        next = pick_branch();
        if (next.var() == 0) {
          result.status = SolveStatus::sat;
          result.model = Model(num_vars());
          for (Var v = 1; v <= num_vars(); ++v)
            result.model.set(v, assigns_[vidx(v)] == LBool::t);
          cancel_until(0);
          return result;
        }
        ++stats_.decisions;
      }
      trail_lim_.push_back(trail_.size());
      enqueue(next, no_reason);
    }
  }
}

void SatSolver::heap_insert(Var v) {
  heap_pos_[vidx(v)] = static_cast<long>(heap_.size());
  heap_.push_back(v);
  heap_up(heap_.size() - 1);
}

void SatSolver::heap_up(std::size_t pos) {
  Var v = heap_[pos];
  while (pos > 0) {
    auto parent = (pos - 1) / 2;
    if (activity_[vidx(heap_[parent])] >= activity_[vidx(v)])
      break;
    heap_[pos] = heap_[parent];
    heap_pos_[vidx(heap_[pos])] = static_cast<long>(pos);
    pos = parent;
  }
  heap_[pos] = v;
  heap_pos_[vidx(v)] = static_cast<long>(pos);
}

void SatSolver::heap_down(std::size_t pos) {
  Var v = heap_[pos];
  for (;;) {
    auto child = 2 * pos + 1;
    if (child >= heap_.size())
      break;
    if (child + 1 < heap_.size() &&
        activity_[vidx(heap_[child + 1])] > activity_[vidx(heap_[child])])
      ++child;
    if (activity_[vidx(heap_[child])] <= activity_[vidx(v)])
      break;
    heap_[pos] = heap_[child];
    heap_pos_[vidx(heap_[pos])] = static_cast<long>(pos);
    pos = child;
  }
  heap_[pos] = v;
  heap_pos_[vidx(v)] = static_cast<long>(pos);
}

Var SatSolver::heap_pop() {
  Var top = heap_.front();
  heap_pos_[vidx(top)] = -1;
  Var last = heap_.back();
  heap_.pop_back();
  if (!heap_.empty()) {
    heap_[0] = last;
    heap_pos_[vidx(last)] = 0;
    heap_down(0);
  }
  return top;
}

SolveResult solve(const CnfFormula &f, std::span<const Lit> assumptions) {
  f.validate();
  for (auto a : assumptions)
    if (a.var() == 0 || a.var() > f.num_vars)
      throw InputError("assumption variable outside the formula");
  SatSolver s;
  s.add_formula(f);
  return s.solve(assumptions);
}

} // namespace satcs
