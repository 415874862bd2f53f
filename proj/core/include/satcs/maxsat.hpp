#pragma once

// Exact weighted MaxSAT by linear search from above (solution-improving
// search): each model's soft cost c is followed by a cardinality bound
// "cost <= c - 1" until the hard clauses plus the bound become unsatisfiable.

#include "satcs/cnf.hpp"
#include "satcs/encoder.hpp"
#include "satcs/sat_solver.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace satcs {

enum class OptStatus { optimal, infeasible };

struct OptResult {
  OptStatus status = OptStatus::infeasible;
  Model model;            // over the formula's variables; meaningful when optimal
  std::uint64_t cost = 0; // soft_cost(formula, model)
  std::size_t sat_calls = 0;

  [[nodiscard]] bool is_optimal() const noexcept { return status == OptStatus::optimal; }
};

struct MaxSatOptions {
  SolverOptions solver;
  /// Called with each improving incumbent cost, in order.
  std::function<void(std::uint64_t)> on_incumbent;
};

OptResult solve_maxsat(const WeightedCnf &w, const MaxSatOptions &options = {});

/// Largest formula the exhaustive oracle accepts.
inline constexpr std::size_t brute_force_var_limit = 24;

/// Exhaustive enumeration over all assignments; ties go to the first
/// assignment in counting order. Throws InputError above the variable limit.
OptResult brute_force_maxsat(const WeightedCnf &w);

/// Unary counter over `literals`: returns outputs o_1..o_n with o_i true iff at
/// least i inputs are true. Both implication directions are encoded, so
/// every output is functionally determined by the inputs.
std::vector<Lit> encode_totalizer(EncoderContext &ctx, std::span<const Lit> literals);

/// At most k of the literals are true. k >= |literals| adds nothing.
void encode_atmost_k(EncoderContext &ctx, std::span<const Lit> literals, std::size_t k);

} // namespace satcs
