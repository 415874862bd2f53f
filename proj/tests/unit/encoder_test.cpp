#include "satcs/bench.hpp"
#include "satcs/encoder.hpp"
#include "satcs/errors.hpp"
#include "satcs/sat_solver.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <bit>
#include <random>
#include <sstream>

using namespace satcs;

namespace {

// Every assignment of the k inputs (variables 1..k) must have exactly one
// extension, and `check` is run on it. Small circuits are enumerated; larger
// ones are decided by unit propagation, which forces every auxiliary.
template <class Check>
void for_each_functional_extension(const EncoderContext &ctx, std::size_t k, Check check) {
  const auto n = ctx.num_vars();
  for (std::uint64_t fixed = 0; fixed < (std::uint64_t{1} << k); ++fixed) {
    if (n <= 16) {
      auto ext = oracle::extensions(ctx.clauses(), n, k, fixed);
      ASSERT_EQ(ext.size(), 1u) << "inputs " << fixed;
      check(fixed, oracle::mask_to_model(ext[0], n));
    } else {
      std::vector<bool> in(k);
      for (std::size_t j = 0; j < k; ++j)
        in[j] = ((fixed >> j) & 1u) != 0;
      auto p = oracle::propagate_extension(ctx.clauses(), n, k, in);
      ASSERT_EQ(p.status, oracle::Extension::extends) << "inputs " << fixed;
      check(fixed, Model(p.values));
    }
  }
}

std::vector<Lit> inputs(const EncoderContext &ctx) {
  std::vector<Lit> out;
  for (std::size_t j = 0; j < ctx.num_inputs(); ++j)
    out.push_back(ctx.input(j));
  return out;
}

} // namespace

TEST(Adders, HalfAdderTruthTable) {
  EncoderContext ctx(2);
  auto out = encode_half_adder(ctx, ctx.input(0), ctx.input(1));
  EXPECT_EQ(ctx.clauses().size(), 7u);
  for_each_functional_extension(ctx, 2, [&](std::uint64_t in, const Model &m) {
    int a = in & 1, b = (in >> 1) & 1;
    EXPECT_EQ(m.value(out.sum), ((a + b) & 1) != 0);
    EXPECT_EQ(m.value(out.carry), a + b >= 2);
  });
}

TEST(Adders, FullAdderTruthTable) {
  EncoderContext ctx(3);
  auto out = encode_full_adder(ctx, ctx.input(0), ctx.input(1), ctx.input(2));
  EXPECT_EQ(ctx.clauses().size(), 14u);
  for_each_functional_extension(ctx, 3, [&](std::uint64_t in, const Model &m) {
    int total = std::popcount(in);
    EXPECT_EQ(m.value(out.sum), (total & 1) != 0);
    EXPECT_EQ(m.value(out.carry), total >= 2);
  });
}

TEST(Adders, RippleAddAllTwoBitOperands) {
  EncoderContext ctx(4);
  BitVector u{{ctx.input(0), ctx.input(1)}};
  BitVector v{{ctx.input(2), ctx.input(3)}};
  auto sum = encode_ripple_add(ctx, u, v);
  EXPECT_EQ(sum.width(), 3u);
  for_each_functional_extension(ctx, 4, [&](std::uint64_t in, const Model &m) {
    EXPECT_EQ(sum.value(m), (in & 3u) + (in >> 2));
  });
}

TEST(Adders, RippleAddUnequalWidths) {
  EncoderContext ctx(4);
  BitVector u{{ctx.input(0), ctx.input(1), ctx.input(2)}};
  BitVector v{{ctx.input(3)}};
  auto sum = encode_ripple_add(ctx, u, v);
  EXPECT_EQ(sum.width(), 4u);
  for_each_functional_extension(ctx, 4, [&](std::uint64_t in, const Model &m) {
    EXPECT_EQ(sum.value(m), (in & 7u) + (in >> 3));
  });
}

TEST(Popcount, SmallCases) {
  {
    EncoderContext ctx(1);
    auto in = inputs(ctx);
    auto z = encode_popcount(ctx, in);
    EXPECT_EQ(z.width(), 1u);
    EXPECT_EQ(ctx.half_adders + ctx.full_adders, 0u);
  }
  {
    EncoderContext ctx(2);
    auto in = inputs(ctx);
    auto z = encode_popcount(ctx, in);
    EXPECT_EQ(z.width(), 2u);
    EXPECT_EQ(ctx.half_adders, 1u);
  }
  EncoderContext empty(0);
  EXPECT_THROW((void)encode_popcount(empty, {}), InputError);
}

TEST(Popcount, ExhaustiveUpToEightInputs) {
  for (std::size_t k = 1; k <= 8; ++k) {
    EncoderContext ctx(k);
    auto in = inputs(ctx);
    auto z = encode_popcount(ctx, in);
    EXPECT_EQ(z.width(), static_cast<std::size_t>(std::bit_width(k)));
    EXPECT_EQ(ctx.adders, k - 1);
    for_each_functional_extension(ctx, k, [&](std::uint64_t a, const Model &m) {
      EXPECT_EQ(z.value(m), static_cast<std::uint64_t>(std::popcount(a)));
    });
  }
}

TEST(Popcount, WidthBoundAndAdderCountForLargeRows) {
  for (std::size_t k : {9u, 15u, 16u, 17u, 30u, 31u, 32u, 33u, 64u}) {
    EncoderContext ctx(k);
    auto in = inputs(ctx);
    auto z = encode_popcount(ctx, in);
    EXPECT_EQ(z.width(), static_cast<std::size_t>(std::bit_width(k))) << k;
    EXPECT_EQ(ctx.adders, k - 1) << k;
    // One-bit cells stay linear in k.
    EXPECT_LE(ctx.half_adders + ctx.full_adders, 2 * k) << k;
  }
}

TEST(Popcount, LargeRowIsCorrectUnderSolver) {
  // Force a random input pattern with units and read the count off the model.
  std::mt19937_64 rng(3);
  for (int iter = 0; iter < 50; ++iter) {
    const std::size_t k = 20 + rng() % 20;
    EncoderContext ctx(k);
    auto in = inputs(ctx);
    auto z = encode_popcount(ctx, in);
    std::size_t expected = 0;
    std::vector<Lit> assumptions;
    for (std::size_t j = 0; j < k; ++j) {
      bool bit = rng() % 2;
      expected += bit;
      assumptions.push_back(bit ? in[j] : ~in[j]);
    }
    SatSolver s;
    s.add_formula(ctx.formula());
    auto r = s.solve(assumptions);
    ASSERT_TRUE(r.is_sat());
    EXPECT_EQ(z.value(r.model), expected);
  }
}

TEST(EncodeRow, EmptySupportIsConstantZero) {
  EncoderContext ctx(3);
  auto z = encode_row(ctx, {});
  ASSERT_EQ(z.width(), 1u);
  for_each_functional_extension(ctx, 3, [&](std::uint64_t, const Model &m) {
    EXPECT_EQ(z.value(m), 0u);
  });
}

TEST(EncodeRow, CountsOnlyTheSupport) {
  EncoderContext ctx(5);
  std::vector<std::size_t> support{0, 2, 3};
  auto z = encode_row(ctx, support);
  for_each_functional_extension(ctx, 5, [&](std::uint64_t a, const Model &m) {
    EXPECT_EQ(z.value(m), static_cast<std::uint64_t>(std::popcount(a & 0b01101u)));
  });
}

TEST(ConstrainEqualConstant, PinsBits) {
  EncoderContext ctx(3);
  auto in = inputs(ctx);
  auto z = encode_popcount(ctx, in);
  constrain_equal_constant(ctx, z, 2);
  const auto n = ctx.num_vars();
  for (std::uint64_t a = 0; a < 8; ++a)
    EXPECT_EQ(oracle::extends(ctx.clauses(), n, 3, a), std::popcount(a) == 2);
}

TEST(ConstrainEqualConstant, OutOfRangeAddsEmptyClause) {
  EncoderContext ctx(2);
  BitVector z{{ctx.input(0), ctx.input(1)}};
  constrain_equal_constant(ctx, z, 4);
  bool has_empty = false;
  for (const auto &c : ctx.clauses())
    has_empty = has_empty || c.empty();
  EXPECT_TRUE(has_empty);
}

TEST(EncodeInstance, IdentityMatrix) {
  auto a = DesignMatrix::identity(3);
  SensingInstance inst(a, MeasurementVector({1, 0, 1}));
  auto enc = encode_instance(inst);
  EXPECT_EQ(enc.wcnf.top(), 4u);
  EXPECT_EQ(enc.wcnf.soft.size(), 3u);
  for (const auto &s : enc.wcnf.soft) {
    EXPECT_EQ(s.weight, 1u);
    ASSERT_EQ(s.clause.size(), 1u);
    EXPECT_TRUE(s.clause[0].negated());
  }
  EXPECT_EQ(enc.signal_vars, (std::vector<Var>{1, 2, 3}));
  auto r = solve(enc.wcnf.hard_formula());
  ASSERT_TRUE(r.is_sat());
  EXPECT_EQ(decode_model(r.model, 3).to_string(), "101");
}

TEST(EncodeInstance, EmptyRowWithPositiveMeasurementIsUnsat) {
  auto a = DesignMatrix::from_rows({{0, 0}, {1, 1}});
  // Construct without a truth so the inconsistent y is accepted.
  SensingInstance inst(a, MeasurementVector({1, 1}));
  auto enc = encode_instance(inst);
  bool has_empty = false;
  for (const auto &c : enc.wcnf.hard)
    has_empty = has_empty || c.empty();
  EXPECT_TRUE(has_empty);
  EXPECT_FALSE(solve(enc.wcnf.hard_formula()).is_sat());
}

TEST(EncodeInstance, SoundAndCompleteOnSmallInstances) {
  std::mt19937_64 rng(12);
  int checked = 0;
  while (checked < 40) {
    const std::size_t n = 2 + rng() % 7;
    const std::size_t m = 1 + rng() % 4;
    auto inst = gen_instance(n, m, rng() % (n + 1), 0.5, rng());
    auto enc = encode_instance(inst);
    const auto vars = enc.wcnf.num_vars;
    if (vars > 22)
      continue;
    ++checked;
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
      std::vector<std::uint8_t> bits(n);
      for (std::size_t j = 0; j < n; ++j)
        bits[j] = (x >> j) & 1u;
      const bool feasible = measure(inst.matrix(), BinarySignal(bits)) == inst.measurements();
      auto ext = oracle::extensions(enc.wcnf.hard, vars, n, x);
      EXPECT_EQ(!ext.empty(), feasible);
      // Auxiliaries are functionally determined by x.
      EXPECT_LE(ext.size(), 1u);
      // Cost identity: soft cost equals the sparsity of x.
      if (!ext.empty())
        EXPECT_EQ(soft_cost(enc.wcnf, oracle::mask_to_model(ext[0], vars)),
                  static_cast<std::uint64_t>(std::popcount(x)));
    }
  }
}

TEST(EncodeInstance, AdderCountBoundedBySupport) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto inst = gen_instance(30, 15, 10, 0.5, seed);
    auto enc = encode_instance(inst);
    std::size_t support = 0;
    for (std::size_t i = 0; i < inst.measurement_count(); ++i)
      support += inst.matrix().support(i).size();
    EXPECT_LE(enc.adders, support);
    EXPECT_LE(enc.half_adders + enc.full_adders, 2 * support);
    EXPECT_EQ(enc.wcnf.top(), 31u);
  }
}

TEST(DecodeModel, ReadsLeadingVariables) {
  Model m(5);
  m.set(2, true);
  m.set(4, true);
  EXPECT_EQ(decode_model(m, 3).to_string(), "010");
}

TEST(VariableMap, OneLinePerSignalEntry) {
  auto inst = gen_instance(3, 2, 1, 0.5, 1);
  std::ostringstream out;
  write_variable_map(out, encode_instance(inst));
  EXPECT_EQ(out.str(), "x 1 1\nx 2 2\nx 3 3\n");
}
