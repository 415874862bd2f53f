#pragma once

// Reduction of a binary sensing instance to weighted MaxSAT.
//
// Each row constraint y_i = <A_i., x> becomes an adder-tree popcount over the
// row's support whose output bits are pinned to the binary expansion of y_i
// (hard clauses). Sparsity is rewarded with one soft unit clause (-x_j) of
// weight 1 per signal variable. Hard clauses are written with top = N + 1,
// which exceeds the total soft weight N.

#include "satcs/cnf.hpp"
#include "satcs/model.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace satcs {

/// Unsigned integer over literals, least-significant bit first.
struct BitVector {
  std::vector<Lit> bits;

  [[nodiscard]] std::size_t width() const noexcept { return bits.size(); }
  /// Value under a model.
  [[nodiscard]] std::uint64_t value(const Model &m) const;
};

/// Accumulates Tseitin clauses and hands out fresh variables. Variables
/// 1..num_inputs are reserved for the caller's inputs.
class EncoderContext {
public:
  explicit EncoderContext(std::size_t num_inputs = 0);

  Var fresh();
  void add(Clause clause) { clauses_.push_back(std::move(clause)); }
  void add(std::initializer_list<Lit> lits) { clauses_.emplace_back(lits); }

  [[nodiscard]] Lit input(std::size_t j) const; // 0-based
  [[nodiscard]] std::size_t num_inputs() const noexcept { return num_inputs_; }
  /// A literal fixed to false by a unit clause, created on first use.
  [[nodiscard]] Lit constant_false();

  [[nodiscard]] std::size_t num_vars() const noexcept { return next_var_ - 1; }
  [[nodiscard]] const std::vector<Clause> &clauses() const noexcept { return clauses_; }
  [[nodiscard]] std::vector<Clause> take_clauses() { return std::move(clauses_); }
  [[nodiscard]] CnfFormula formula() const { return {num_vars(), clauses_}; }

  /// Size accounting for tests and benchmarks: multi-bit adder modules (tree
  /// nodes) and the one-bit cells they are built from.
  std::size_t adders = 0;
  std::size_t half_adders = 0;
  std::size_t full_adders = 0;

private:
  std::size_t num_inputs_;
  Var next_var_;
  std::vector<Clause> clauses_;
  std::optional<Lit> false_;
};

struct AdderOutput {
  Lit sum;
  Lit carry;
};

/// sum = a xor b, carry = a and b.
AdderOutput encode_half_adder(EncoderContext &ctx, Lit a, Lit b);
/// sum = a xor b xor cin, carry = majority(a, b, cin).
AdderOutput encode_full_adder(EncoderContext &ctx, Lit a, Lit b, Lit cin);

/// value(result) = value(u) + value(v); width is max(width(u), width(v)) + 1.
BitVector encode_ripple_add(EncoderContext &ctx, const BitVector &u, const BitVector &v);

/// Hamming weight of the inputs as a (floor(log2 k) + 1)-bit number.
/// Throws InputError on an empty input list.
BitVector encode_popcount(EncoderContext &ctx, std::span<const Lit> inputs);

/// Popcount over the input variables at the given column indices. An empty
/// support gives a one-bit constant zero.
BitVector encode_row(EncoderContext &ctx, std::span<const std::size_t> support);

/// Pins z to c with unit clauses. If c needs more bits than z has, adds the
/// empty clause instead.
void constrain_equal_constant(EncoderContext &ctx, const BitVector &z, std::uint64_t c);

struct EncodedInstance {
  WeightedCnf wcnf;
  std::vector<Var> signal_vars; // signal_vars[j] is the variable of x_j
  std::size_t adders = 0;
  std::size_t half_adders = 0;
  std::size_t full_adders = 0;
};

EncodedInstance encode_instance(const SensingInstance &inst);

/// Reads x_j off variable j + 1.
[[nodiscard]] BinarySignal decode_model(const Model &m, std::size_t n);

/// Sidecar map, one line per signal entry: "x <j> <var>" with 1-based j.
void write_variable_map(std::ostream &out, const EncodedInstance &enc);

} // namespace satcs
