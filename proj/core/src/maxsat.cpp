#include "satcs/maxsat.hpp"

#include "satcs/errors.hpp"

#include <algorithm>
#include <map>
#include <optional>

namespace satcs {

namespace {

// Totalizer merge of two unary counters.
std::vector<Lit> merge_unary(EncoderContext &ctx, const std::vector<Lit> &a,
                             const std::vector<Lit> &b) {
  const auto p = a.size();
  const auto q = b.size();
  std::vector<Lit> r;
  r.reserve(p + q);
  for (std::size_t i = 0; i < p + q; ++i)
    r.push_back(Lit::pos(ctx.fresh()));

  // a_i and b_j imply r_{i+j}; index 0 stands for "true".
  for (std::size_t i = 0; i <= p; ++i) {
    for (std::size_t j = 0; j <= q; ++j) {
      if (i + j == 0)
        continue;
      Clause c;
      if (i > 0)
        c.push_back(~a[i - 1]);
      if (j > 0)
        c.push_back(~b[j - 1]);
      c.push_back(r[i + j - 1]);
      ctx.add(std::move(c));
    }
  }
  // not a_{i+1} and not b_{j+1} imply not r_{i+j+1}; index p+1 / q+1 stands for "false".
  for (std::size_t i = 0; i <= p; ++i) {
    for (std::size_t j = 0; j <= q; ++j) {
      if (i + j + 1 > p + q)
        continue;
      Clause c;
      if (i < p)
        c.push_back(a[i]);
      if (j < q)
        c.push_back(b[j]);
      c.push_back(~r[i + j]);
      ctx.add(std::move(c));
    }
  }
  return r;
}

std::vector<Lit> totalizer_rec(EncoderContext &ctx, std::span<const Lit> lits) {
  if (lits.size() == 1)
    return {lits[0]};
  auto mid = lits.size() / 2;
  auto left = totalizer_rec(ctx, lits.subspan(0, mid));
  auto right = totalizer_rec(ctx, lits.subspan(mid));
  return merge_unary(ctx, left, right);
}

// Generalized totalizer node: attainable weighted sums -> output literal.
// Sums above `cap` are merged into cap + 1.
using SumMap = std::map<std::uint64_t, Lit>;

SumMap weighted_rec(EncoderContext &ctx, std::span<const Lit> lits,
                    std::span<const std::uint64_t> weights, std::uint64_t cap) {
  if (lits.size() == 1)
    return {{std::min(weights[0], cap + 1), lits[0]}};
  auto mid = lits.size() / 2;
  auto left = weighted_rec(ctx, lits.subspan(0, mid), weights.subspan(0, mid), cap);
  auto right = weighted_rec(ctx, lits.subspan(mid), weights.subspan(mid), cap);

  SumMap out;
  auto output = [&](std::uint64_t s) {
    auto it = out.find(s);
    if (it == out.end())
      it = out.emplace(s, Lit::pos(ctx.fresh())).first;
    return it->second;
  };
  for (const auto &[s, l] : left)
    ctx.add({~l, output(s)});
  for (const auto &[s, l] : right)
    ctx.add({~l, output(s)});
  for (const auto &[sa, la] : left)
    for (const auto &[sb, lb] : right)
      ctx.add({~la, ~lb, output(std::min(sa + sb, cap + 1))});
  return out;
}

// The incremental bound over soft-falsification indicators.
class CostBound {
public:
  CostBound(std::vector<Lit> indicators, std::vector<std::uint64_t> weights)
      : indicators_(std::move(indicators)), weights_(std::move(weights)) {
    uniform_ = std::all_of(weights_.begin(), weights_.end(),
                           [&](auto w) { return w == weights_.front(); });
  }

  // Adds "weighted sum of indicators <= bound" to the solver.
  void restrict_to(SatSolver &solver, std::uint64_t bound) {
    if (indicators_.empty())
      return;
    if (!built_)
      build(solver, bound);
    std::vector<Lit> units;
    if (uniform_) {
      auto k = bound / weights_.front();
      for (auto i = k; i < unary_.size(); ++i)
        units.push_back(~unary_[i]);
    } else {
      for (const auto &[s, l] : sums_)
        if (s > bound)
          units.push_back(~l);
    }
    for (auto l : units)
      solver.add_clause({l});
  }

private:
  void build(SatSolver &solver, std::uint64_t first_bound) {
    EncoderContext ctx(solver.num_vars());
    if (uniform_)
      unary_ = encode_totalizer(ctx, indicators_);
    else
      sums_ = weighted_rec(ctx, indicators_, weights_, first_bound);
    solver.reserve_vars(ctx.num_vars());
    for (const auto &c : ctx.clauses())
      solver.add_clause(c);
    built_ = true;
  }

  std::vector<Lit> indicators_;
  std::vector<std::uint64_t> weights_;
  bool uniform_ = true;
  bool built_ = false;
  std::vector<Lit> unary_;
  SumMap sums_;
};

Model restrict_model(const Model &m, std::size_t num_vars) {
  Model out(num_vars);
  for (Var v = 1; v <= num_vars; ++v)
    out.set(v, m.value(v));
  return out;
}

} // namespace

std::vector<Lit> encode_totalizer(EncoderContext &ctx, std::span<const Lit> literals) {
  if (literals.empty())
    return {};
  return totalizer_rec(ctx, literals);
}

void encode_atmost_k(EncoderContext &ctx, std::span<const Lit> literals, std::size_t k) {
  if (k >= literals.size())
    return;
  auto outputs = encode_totalizer(ctx, literals);
  ctx.add({~outputs[k]});
}

OptResult solve_maxsat(const WeightedCnf &w, const MaxSatOptions &options) {
  w.validate();
  OptResult result;

  SatSolver solver(options.solver);
  solver.reserve_vars(w.num_vars);
  for (const auto &c : w.hard)
    solver.add_clause(c);

  std::uint64_t fixed_cost = 0; // empty soft clauses are always falsified
  std::vector<Lit> indicators;
  std::vector<std::uint64_t> weights;
  for (const auto &s : w.soft) {
    if (s.clause.empty()) {
      fixed_cost += s.weight;
      continue;
    }
    if (s.clause.size() == 1) {
      indicators.push_back(~s.clause.front());
    } else {
      Lit relax = Lit::pos(solver.new_var());
      Clause relaxed = s.clause;
      relaxed.push_back(relax);
      solver.add_clause(relaxed);
      indicators.push_back(relax);
    }
    weights.push_back(s.weight);
  }
  CostBound bound(std::move(indicators), std::move(weights));

  auto r = solver.solve();
  ++result.sat_calls;
  if (!r.is_sat())
    return result;

  for (;;) {
    auto model = restrict_model(r.model, w.num_vars);
    auto cost = soft_cost(w, model);
    result.status = OptStatus::optimal;
    result.model = std::move(model);
    result.cost = cost;
    if (options.on_incumbent)
      options.on_incumbent(cost);
    if (cost == fixed_cost)
      break;
    bound.restrict_to(solver, cost - fixed_cost - 1);
    r = solver.solve();
    ++result.sat_calls;
    if (!r.is_sat())
      break;
  }
  return result;
}

OptResult brute_force_maxsat(const WeightedCnf &w) {
  w.validate();
  if (w.num_vars > brute_force_var_limit)
    throw InputError("brute-force MaxSAT is limited to " +
                     std::to_string(brute_force_var_limit) + " variables");

  // Clause as two bit masks: satisfied iff (x & pos) | (~x & neg) is nonzero.
  struct Masks {
    std::uint32_t pos = 0;
    std::uint32_t neg = 0;
  };
  auto masks = [](const Clause &c) {
    Masks m;
    for (auto l : c)
      (l.negated() ? m.neg : m.pos) |= std::uint32_t{1} << (l.var() - 1);
    return m;
  };
  std::vector<Masks> hard;
  for (const auto &c : w.hard)
    hard.push_back(masks(c));
  std::vector<std::pair<Masks, std::uint64_t>> soft;
  for (const auto &s : w.soft)
    soft.emplace_back(masks(s.clause), s.weight);

  OptResult result;
  std::optional<std::uint32_t> best;
  std::uint64_t best_cost = 0;
  const std::uint64_t count = std::uint64_t{1} << w.num_vars;
  for (std::uint64_t a = 0; a < count; ++a) {
    auto x = static_cast<std::uint32_t>(a);
    bool ok = std::all_of(hard.begin(), hard.end(),
                          [&](const Masks &m) { return ((x & m.pos) | (~x & m.neg)) != 0; });
    if (!ok)
      continue;
    std::uint64_t cost = 0;
    for (const auto &[m, wt] : soft)
      if (((x & m.pos) | (~x & m.neg)) == 0)
        cost += wt;
    if (!best || cost < best_cost) {
      best = x;
      best_cost = cost;
    }
  }
  ++result.sat_calls;
  if (!best)
    return result;
  result.status = OptStatus::optimal;
  result.cost = best_cost;
  result.model = Model(w.num_vars);
  for (Var v = 1; v <= w.num_vars; ++v)
    result.model.set(v, ((*best >> (v - 1)) & 1u) != 0);
  return result;
}

} // namespace satcs
