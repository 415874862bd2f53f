#include "satcs/encoder.hpp"

#include "satcs/errors.hpp"

#include <bit>
#include <ostream>

namespace satcs {

std::uint64_t BitVector::value(const Model &m) const {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (m.value(bits[i]))
      v |= std::uint64_t{1} << i;
  return v;
}

EncoderContext::EncoderContext(std::size_t num_inputs)
    : num_inputs_(num_inputs), next_var_(static_cast<Var>(num_inputs + 1)) {}

Var EncoderContext::fresh() { return next_var_++; }

Lit EncoderContext::input(std::size_t j) const {
  if (j >= num_inputs_)
    throw InputError("input index out of range");
  return Lit::pos(static_cast<Var>(j + 1));
}

Lit EncoderContext::constant_false() {
  if (!false_) {
    false_ = Lit::pos(fresh());
    add({~*false_});
  }
  return *false_;
}

namespace {

// s <-> a xor b
void define_xor(EncoderContext &ctx, Lit s, Lit a, Lit b) {
  ctx.add({~a, ~b, ~s});
  ctx.add({a, b, ~s});
  ctx.add({a, ~b, s});
  ctx.add({~a, b, s});
}

// s <-> a xor b xor c
void define_xor3(EncoderContext &ctx, Lit s, Lit a, Lit b, Lit c) {
  ctx.add({a, b, c, ~s});
  ctx.add({a, ~b, ~c, ~s});
  ctx.add({~a, b, ~c, ~s});
  ctx.add({~a, ~b, c, ~s});
  ctx.add({~a, ~b, ~c, s});
  ctx.add({~a, b, c, s});
  ctx.add({a, ~b, c, s});
  ctx.add({a, b, ~c, s});
}

// c <-> a and b
void define_and(EncoderContext &ctx, Lit c, Lit a, Lit b) {
  ctx.add({~c, a});
  ctx.add({~c, b});
  ctx.add({c, ~a, ~b});
}

// c <-> at least two of a, b, d
void define_majority(EncoderContext &ctx, Lit c, Lit a, Lit b, Lit d) {
  ctx.add({~a, ~b, c});
  ctx.add({~a, ~d, c});
  ctx.add({~b, ~d, c});
  ctx.add({a, b, ~c});
  ctx.add({a, d, ~c});
  ctx.add({b, d, ~c});
}

struct Bounded {
  BitVector bits;
  std::uint64_t max = 0; // value(bits) <= max in every model of the clauses
};

// Adds two bounded vectors. The result is only as wide as max(u)+max(v)
// needs, so the last column never produces a carry.
Bounded add_bounded(EncoderContext &ctx, const Bounded &u, const Bounded &v) {
  Bounded out;
  out.max = u.max + v.max;
  ++ctx.adders;
  auto width = static_cast<std::size_t>(std::bit_width(out.max));
  std::optional<Lit> carry;
  for (std::size_t i = 0; i < width; ++i) {
    std::vector<Lit> col;
    if (i < u.bits.width())
      col.push_back(u.bits.bits[i]);
    if (i < v.bits.width())
      col.push_back(v.bits.bits[i]);
    if (carry)
      col.push_back(*carry);
    carry.reset();
    bool last = i + 1 == width;

    if (col.size() == 1) {
      out.bits.bits.push_back(col[0]);
    } else if (col.size() == 2) {
      if (last) {
        Lit s = Lit::pos(ctx.fresh());
        define_xor(ctx, s, col[0], col[1]);
        out.bits.bits.push_back(s);
      } else {
        auto ha = encode_half_adder(ctx, col[0], col[1]);
        out.bits.bits.push_back(ha.sum);
        carry = ha.carry;
      }
    } else if (col.size() == 3) {
      if (last) {
        Lit s = Lit::pos(ctx.fresh());
        define_xor3(ctx, s, col[0], col[1], col[2]);
        out.bits.bits.push_back(s);
      } else {
        auto fa = encode_full_adder(ctx, col[0], col[1], col[2]);
        out.bits.bits.push_back(fa.sum);
        carry = fa.carry;
      }
    } else {
      // Unreachable: every column below the bound width has an operand bit or a carry.
      out.bits.bits.push_back(ctx.constant_false());
    }
  }
  return out;
}

} // namespace

AdderOutput encode_half_adder(EncoderContext &ctx, Lit a, Lit b) {
  AdderOutput o{Lit::pos(ctx.fresh()), Lit::pos(ctx.fresh())};
  define_xor(ctx, o.sum, a, b);
  define_and(ctx, o.carry, a, b);
  ++ctx.half_adders;
  return o;
}

AdderOutput encode_full_adder(EncoderContext &ctx, Lit a, Lit b, Lit cin) {
  AdderOutput o{Lit::pos(ctx.fresh()), Lit::pos(ctx.fresh())};
  define_xor3(ctx, o.sum, a, b, cin);
  define_majority(ctx, o.carry, a, b, cin);
  ++ctx.full_adders;
  return o;
}

BitVector encode_ripple_add(EncoderContext &ctx, const BitVector &u, const BitVector &v) {
  if (u.width() == 0 || v.width() == 0)
    throw InputError("bit vectors must be at least one bit wide");
  auto width = std::max(u.width(), v.width());
  ++ctx.adders;
  BitVector out;
  std::optional<Lit> carry;
  for (std::size_t i = 0; i < width; ++i) {
    std::vector<Lit> col;
    if (i < u.width())
      col.push_back(u.bits[i]);
    if (i < v.width())
      col.push_back(v.bits[i]);
    if (carry)
      col.push_back(*carry);
    if (col.size() == 3) {
      auto fa = encode_full_adder(ctx, col[0], col[1], col[2]);
      out.bits.push_back(fa.sum);
      carry = fa.carry;
    } else {
      // Position 0 has both operands; later positions missing one operand
      // always have the incoming carry.
      auto ha = encode_half_adder(ctx, col[0], col[1]);
      out.bits.push_back(ha.sum);
      carry = ha.carry;
    }
  }
  out.bits.push_back(*carry);
  return out;
}

BitVector encode_popcount(EncoderContext &ctx, std::span<const Lit> inputs) {
  if (inputs.empty())
    throw InputError("popcount needs at least one input");
  std::vector<Bounded> level;
  level.reserve(inputs.size());
  for (auto l : inputs)
    level.push_back({BitVector{{l}}, 1});
  // Pair neighbours left to right; an odd tail moves up unchanged.
  while (level.size() > 1) {
    std::vector<Bounded> next;
    next.reserve((level.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < level.size(); i += 2)
      next.push_back(add_bounded(ctx, level[i], level[i + 1]));
    if (level.size() % 2 == 1)
      next.push_back(std::move(level.back()));
    level = std::move(next);
  }
  return std::move(level.front().bits);
}

BitVector encode_row(EncoderContext &ctx, std::span<const std::size_t> support) {
  if (support.empty())
    return BitVector{{ctx.constant_false()}};
  std::vector<Lit> inputs;
  inputs.reserve(support.size());
  for (auto j : support)
    inputs.push_back(ctx.input(j));
  return encode_popcount(ctx, inputs);
}

void constrain_equal_constant(EncoderContext &ctx, const BitVector &z, std::uint64_t c) {
  if (z.width() < 64 && (c >> z.width()) != 0) {
    ctx.add(Clause{});
    return;
  }
  for (std::size_t i = 0; i < z.width(); ++i) {
    bool bit = i < 64 && ((c >> i) & 1u) != 0;
    ctx.add({bit ? z.bits[i] : ~z.bits[i]});
  }
}

EncodedInstance encode_instance(const SensingInstance &inst) {
  const auto &a = inst.matrix();
  const auto n = a.cols();
  EncoderContext ctx(n);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto support = a.support(i);
    if (support.empty()) {
      // Nothing to count: the row is satisfiable iff y_i = 0.
      if (inst.measurements()[i] != 0)
        ctx.add(Clause{});
      continue;
    }
    auto z = encode_row(ctx, support);
    constrain_equal_constant(ctx, z, inst.measurements()[i]);
  }

  EncodedInstance enc;
  enc.adders = ctx.adders;
  enc.half_adders = ctx.half_adders;
  enc.full_adders = ctx.full_adders;
  enc.wcnf.num_vars = ctx.num_vars();
  enc.wcnf.hard = ctx.take_clauses();
  enc.wcnf.soft.reserve(n);
  enc.signal_vars.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    auto v = static_cast<Var>(j + 1);
    enc.signal_vars.push_back(v);
    enc.wcnf.soft.push_back({{Lit::neg(v)}, 1});
  }
  return enc;
}

BinarySignal decode_model(const Model &m, std::size_t n) {
  if (m.num_vars() < n)
    throw InputError("model does not cover the signal variables");
  std::vector<std::uint8_t> bits(n);
  for (std::size_t j = 0; j < n; ++j)
    bits[j] = m.value(static_cast<Var>(j + 1)) ? 1 : 0;
  return BinarySignal(std::move(bits));
}

void write_variable_map(std::ostream &out, const EncodedInstance &enc) {
  for (std::size_t j = 0; j < enc.signal_vars.size(); ++j)
    out << "x " << (j + 1) << ' ' << enc.signal_vars[j] << '\n';
}

} // namespace satcs
