#pragma once

// Test-only reference implementations. Nothing here calls into the solver,
// encoder, or simplex code it is used to check.

#include "satcs/cnf.hpp"
#include "satcs/model.hpp"

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace satcs::oracle {

/// Assignment as a bit mask over variables 1..n (bit v-1).
inline bool clause_holds(const Clause &c, std::uint64_t mask) {
  for (auto l : c) {
    bool v = ((mask >> (l.var() - 1)) & 1u) != 0;
    if (v != l.negated())
      return true;
  }
  return false;
}

inline bool formula_holds(const std::vector<Clause> &clauses, std::uint64_t mask) {
  for (const auto &c : clauses)
    if (!clause_holds(c, mask))
      return false;
  return true;
}

inline Model mask_to_model(std::uint64_t mask, std::size_t n) {
  Model m(n);
  for (Var v = 1; v <= n; ++v)
    m.set(v, ((mask >> (v - 1)) & 1u) != 0);
  return m;
}

/// Exhaustive satisfiability over all 2^n assignments.
inline bool enumerate_sat(const CnfFormula &f) {
  const std::uint64_t count = std::uint64_t{1} << f.num_vars;
  for (std::uint64_t a = 0; a < count; ++a)
    if (formula_holds(f.clauses, a))
      return true;
  return false;
}

/// True iff the assignment to variables 1..k (`fixed`, bit mask) extends to a
/// model of the clauses over variables 1..n.
inline bool extends(const std::vector<Clause> &clauses, std::size_t n, std::size_t k,
                    std::uint64_t fixed) {
  const std::uint64_t rest = std::uint64_t{1} << (n - k);
  for (std::uint64_t r = 0; r < rest; ++r)
    if (formula_holds(clauses, fixed | (r << k)))
      return true;
  return false;
}

/// All extensions of `fixed` (variables 1..k) to models over 1..n.
inline std::vector<std::uint64_t> extensions(const std::vector<Clause> &clauses, std::size_t n,
                                             std::size_t k, std::uint64_t fixed) {
  std::vector<std::uint64_t> out;
  const std::uint64_t rest = std::uint64_t{1} << (n - k);
  for (std::uint64_t r = 0; r < rest; ++r)
    if (formula_holds(clauses, fixed | (r << k)))
      out.push_back(fixed | (r << k));
  return out;
}

enum class Extension { extends, blocked, undetermined };

struct Propagation {
  Extension status = Extension::undetermined;
  std::vector<bool> values; // by variable, index 0 unused; complete when extends
};

/// Fixes variables 1..k from `fixed` and runs plain unit propagation to a
/// fixpoint. For circuits whose auxiliaries are functions of the inputs this
/// decides whether the input assignment extends to a model without search.
/// When it returns `extends`, every variable was forced, so the extension is
/// the unique one.
inline Propagation propagate_extension(const std::vector<Clause> &clauses, std::size_t n,
                                       std::size_t k, const std::vector<bool> &fixed) {
  std::vector<int> val(n + 1, -1);
  for (std::size_t v = 1; v <= k; ++v)
    val[v] = fixed[v - 1] ? 1 : 0;
  auto lit_val = [&](Lit l) {
    int v = val[l.var()];
    return v < 0 ? -1 : (v == 1) != l.negated() ? 1 : 0;
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto &c : clauses) {
      std::size_t open = 0;
      Lit last{};
      bool sat = false;
      for (auto l : c) {
        int v = lit_val(l);
        if (v == 1) {
          sat = true;
          break;
        }
        if (v < 0) {
          ++open;
          last = l;
        }
      }
      if (sat)
        continue;
      if (open == 0)
        return {Extension::blocked, {}};
      if (open == 1) {
        val[last.var()] = last.negated() ? 0 : 1;
        changed = true;
      }
    }
  }
  Propagation out{Extension::extends, std::vector<bool>(n + 1, false)};
  for (std::size_t v = 1; v <= n; ++v) {
    if (val[v] < 0)
      return {Extension::undetermined, {}};
    out.values[v] = val[v] == 1;
  }
  return out;
}

inline std::optional<std::uint64_t> min_soft_cost(const WeightedCnf &w) {
  std::optional<std::uint64_t> best;
  const std::uint64_t count = std::uint64_t{1} << w.num_vars;
  for (std::uint64_t a = 0; a < count; ++a) {
    if (!formula_holds(w.hard, a))
      continue;
    std::uint64_t cost = 0;
    for (const auto &s : w.soft)
      if (!clause_holds(s.clause, a))
        cost += s.weight;
    if (!best || cost < *best)
      best = cost;
  }
  return best;
}

inline CnfFormula random_kcnf(std::mt19937_64 &rng, std::size_t vars, std::size_t clauses,
                              std::size_t k) {
  CnfFormula f;
  f.num_vars = vars;
  std::uniform_int_distribution<Var> var_dist(1, static_cast<Var>(vars));
  std::bernoulli_distribution sign(0.5);
  for (std::size_t i = 0; i < clauses; ++i) {
    Clause c;
    while (c.size() < k) {
      Var v = var_dist(rng);
      bool dup = false;
      for (auto l : c)
        dup = dup || l.var() == v;
      if (!dup)
        c.push_back(Lit(v, sign(rng)));
    }
    f.clauses.push_back(std::move(c));
  }
  return f;
}

/// Random WCNF: random 1..3-literal hard clauses and unit or short soft clauses.
inline WeightedCnf random_wcnf(std::mt19937_64 &rng, std::size_t vars, std::size_t hard,
                               std::size_t soft, bool unit_soft, std::uint64_t max_weight) {
  WeightedCnf w;
  w.num_vars = vars;
  std::uniform_int_distribution<std::size_t> len(1, 3);
  std::uniform_int_distribution<Var> var_dist(1, static_cast<Var>(vars));
  std::uniform_int_distribution<std::uint64_t> weight(1, max_weight);
  std::bernoulli_distribution sign(0.5);
  auto clause = [&](std::size_t k) {
    Clause c;
    for (std::size_t i = 0; i < k; ++i)
      c.push_back(Lit(var_dist(rng), sign(rng)));
    return c;
  };
  for (std::size_t i = 0; i < hard; ++i)
    w.hard.push_back(clause(len(rng)));
  for (std::size_t i = 0; i < soft; ++i)
    w.soft.push_back({clause(unit_soft ? 1 : len(rng)), weight(rng)});
  return w;
}

inline DesignMatrix random_matrix(std::mt19937_64 &rng, std::size_t m, std::size_t n, double p) {
  std::bernoulli_distribution bit(p);
  std::vector<std::uint8_t> e(m * n);
  for (auto &v : e)
    v = bit(rng) ? 1 : 0;
  return {m, n, std::move(e)};
}

inline BinarySignal random_signal(std::mt19937_64 &rng, std::size_t n, std::size_t s) {
  std::vector<std::uint8_t> bits(n, 0);
  for (std::size_t i = 0; i < s; ++i)
    bits[i] = 1;
  std::shuffle(bits.begin(), bits.end(), rng);
  return BinarySignal(std::move(bits));
}

/// min sum(x) over {A x = y, 0 <= x <= 1} by vertex enumeration: every vertex
/// fixes each coordinate to 0, 1, or leaves it free, with the free columns
/// linearly independent and the remaining system uniquely solvable.
/// Returns nullopt when the polytope is empty. Exponential (3^N); N <= 10.
inline std::optional<mpq_class> lp_vertex_oracle(const DesignMatrix &a, const MeasurementVector &y) {
  const auto m = a.rows();
  const auto n = a.cols();
  std::optional<mpq_class> best;
  std::vector<int> state(n, 0); // 0 -> x=0, 1 -> x=1, 2 -> free
  std::size_t total = 1;
  for (std::size_t j = 0; j < n; ++j)
    total *= 3;

  for (std::size_t code = 0; code < total; ++code) {
    auto c = code;
    std::vector<std::size_t> free_cols;
    for (std::size_t j = 0; j < n; ++j) {
      state[j] = static_cast<int>(c % 3);
      c /= 3;
      if (state[j] == 2)
        free_cols.push_back(j);
    }
    if (free_cols.size() > m)
      continue;
    // Residual system on the free columns: M z = r.
    const auto k = free_cols.size();
    std::vector<std::vector<mpq_class>> aug(m, std::vector<mpq_class>(k + 1));
    for (std::size_t i = 0; i < m; ++i) {
      mpq_class r = y[i];
      for (std::size_t j = 0; j < n; ++j)
        if (state[j] == 1 && a.at(i, j))
          r -= 1;
      for (std::size_t t = 0; t < k; ++t)
        aug[i][t] = a.at(i, free_cols[t]) ? 1 : 0;
      aug[i][k] = r;
    }
    // Gauss-Jordan; require full column rank and consistency.
    std::size_t row = 0;
    bool full_rank = true;
    for (std::size_t col = 0; col < k; ++col) {
      std::size_t piv = row;
      while (piv < m && aug[piv][col] == 0)
        ++piv;
      if (piv == m) {
        full_rank = false;
        break;
      }
      std::swap(aug[piv], aug[row]);
      mpq_class p = aug[row][col];
      for (auto &v : aug[row])
        v /= p;
      for (std::size_t i = 0; i < m; ++i) {
        if (i == row || aug[i][col] == 0)
          continue;
        mpq_class f = aug[i][col];
        for (std::size_t t = 0; t <= k; ++t)
          aug[i][t] -= f * aug[row][t];
      }
      ++row;
    }
    if (!full_rank)
      continue;
    bool consistent = true;
    for (std::size_t i = row; i < m; ++i)
      if (aug[i][k] != 0)
        consistent = false;
    if (!consistent)
      continue;
    mpq_class obj = 0;
    bool in_box = true;
    for (std::size_t j = 0; j < n; ++j)
      if (state[j] == 1)
        obj += 1;
    for (std::size_t t = 0; t < k; ++t) {
      const auto &z = aug[t][k];
      if (z < 0 || z > 1)
        in_box = false;
      obj += z;
    }
    if (!in_box)
      continue;
    if (!best || obj < *best)
      best = obj;
  }
  return best;
}

} // namespace satcs::oracle
