#pragma once

// Propositional formulas in clausal form, their evaluation, and the DIMACS
// CNF / classic WCNF text formats.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace satcs {

/// 1-based variable index, as in DIMACS.
using Var = std::uint32_t;

/// A variable with a polarity. Packed as 2*var + negated so literals of one
/// variable are adjacent; usable directly as an array index.
class Lit {
public:
  constexpr Lit() = default;
  constexpr Lit(Var var, bool negated) : code_(2 * var + (negated ? 1u : 0u)) {}

  static constexpr Lit pos(Var v) { return {v, false}; }
  static constexpr Lit neg(Var v) { return {v, true}; }
  /// From a nonzero signed DIMACS integer.
  static Lit from_dimacs(std::int64_t value);
  static constexpr Lit from_code(std::uint32_t code) {
    Lit l;
    l.code_ = code;
    return l;
  }

  [[nodiscard]] constexpr Var var() const noexcept { return code_ >> 1; }
  [[nodiscard]] constexpr bool negated() const noexcept { return (code_ & 1u) != 0; }
  [[nodiscard]] constexpr std::uint32_t code() const noexcept { return code_; }
  [[nodiscard]] constexpr std::int64_t to_dimacs() const noexcept {
    return negated() ? -static_cast<std::int64_t>(var()) : static_cast<std::int64_t>(var());
  }

  constexpr Lit operator~() const noexcept { return from_code(code_ ^ 1u); }
  friend constexpr auto operator<=>(Lit, Lit) = default;

private:
  std::uint32_t code_ = 0;
};

using Clause = std::vector<Lit>;

/// Total assignment over variables 1..num_vars.
class Model {
public:
  Model() = default;
  explicit Model(std::size_t num_vars) : values_(num_vars + 1, false) {}
  explicit Model(std::vector<bool> values_by_var); // index 0 unused

  [[nodiscard]] std::size_t num_vars() const noexcept {
    return values_.empty() ? 0 : values_.size() - 1;
  }
  [[nodiscard]] bool value(Var v) const { return values_.at(v); }
  [[nodiscard]] bool value(Lit l) const { return values_.at(l.var()) != l.negated(); }
  void set(Var v, bool value) { values_.at(v) = value; }

  friend bool operator==(const Model &, const Model &) = default;

private:
  std::vector<bool> values_;
};

struct CnfFormula {
  std::size_t num_vars = 0;
  std::vector<Clause> clauses;

  /// Throws InputError if a literal references a variable above num_vars.
  void validate() const;
  friend bool operator==(const CnfFormula &, const CnfFormula &) = default;
};

struct SoftClause {
  Clause clause;
  std::uint64_t weight = 1;
  friend bool operator==(const SoftClause &, const SoftClause &) = default;
};

/// Hard clauses must hold; soft clauses cost their weight when falsified.
struct WeightedCnf {
  std::size_t num_vars = 0;
  std::vector<Clause> hard;
  std::vector<SoftClause> soft;

  /// Smallest weight strictly above the total soft weight. Hard clauses are
  /// written with this weight.
  [[nodiscard]] std::uint64_t top() const;
  [[nodiscard]] CnfFormula hard_formula() const { return {num_vars, hard}; }
  void validate() const;
  friend bool operator==(const WeightedCnf &, const WeightedCnf &) = default;
};

[[nodiscard]] bool satisfies(const Clause &clause, const Model &m);

/// True iff every clause has a true literal. Throws InputError when the model
/// does not cover all of the formula's variables.
[[nodiscard]] bool evaluate(const CnfFormula &f, const Model &m);

/// Sum of weights of falsified soft clauses. Hard clauses are ignored.
[[nodiscard]] std::uint64_t soft_cost(const WeightedCnf &w, const Model &m);

[[nodiscard]] std::string emit_dimacs_cnf(const CnfFormula &f);
[[nodiscard]] CnfFormula parse_dimacs_cnf(std::string_view text);

/// Classic WCNF: "p wcnf <vars> <clauses> <top>", hard clauses first.
[[nodiscard]] std::string emit_wcnf(const WeightedCnf &w);

struct ParsedWcnf {
  WeightedCnf formula;
  std::uint64_t top = 0; // as declared in the header
};
[[nodiscard]] ParsedWcnf parse_wcnf_with_top(std::string_view text);
[[nodiscard]] WeightedCnf parse_wcnf(std::string_view text);

} // namespace satcs

template <> struct std::hash<satcs::Lit> {
  std::size_t operator()(satcs::Lit l) const noexcept { return l.code(); }
};
