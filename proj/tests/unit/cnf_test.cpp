#include "satcs/bench.hpp"
#include "satcs/cnf.hpp"
#include "satcs/encoder.hpp"
#include "satcs/errors.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace satcs;

namespace {
Lit p(Var v) { return Lit::pos(v); }
Lit n(Var v) { return Lit::neg(v); }

std::size_t parse_error_line(auto &&fn) {
  try {
    fn();
  } catch (const ParseError &e) {
    return e.line();
  }
  return 0;
}
} // namespace

TEST(Lit, DimacsConversion) {
  EXPECT_EQ(Lit::from_dimacs(-3), n(3));
  EXPECT_EQ(Lit::from_dimacs(7).to_dimacs(), 7);
  EXPECT_EQ(~p(4), n(4));
  EXPECT_THROW((void)Lit::from_dimacs(0), InputError);
}

TEST(Evaluate, Examples) {
  Model m1(1);
  m1.set(1, true);
  EXPECT_TRUE(evaluate({1, {{p(1)}}}, m1));

  CnfFormula contradiction{1, {{p(1)}, {n(1)}}};
  EXPECT_FALSE(evaluate(contradiction, Model(1)));
  EXPECT_FALSE(evaluate(contradiction, m1));

  CnfFormula f{2, {{p(1), p(2)}, {n(1), p(2)}}};
  Model m(2);
  m.set(1, true);
  EXPECT_FALSE(evaluate(f, m));
  // Enumeration: exactly the models with x2 true satisfy f.
  for (std::uint64_t mask = 0; mask < 4; ++mask)
    EXPECT_EQ(evaluate(f, oracle::mask_to_model(mask, 2)), (mask & 2u) != 0);
}

TEST(Evaluate, PartialModelRejected) {
  EXPECT_THROW((void)evaluate({3, {{p(3)}}}, Model(2)), InputError);
}

TEST(Evaluate, EmptyClauseIsFalse) {
  EXPECT_FALSE(evaluate({1, {Clause{}}}, Model(1)));
  EXPECT_TRUE(evaluate({1, {}}, Model(1)));
}

TEST(Evaluate, AddingClausesIsMonotone) {
  std::mt19937_64 rng(21);
  for (int iter = 0; iter < 200; ++iter) {
    auto f = oracle::random_kcnf(rng, 6, 1 + rng() % 10, 3);
    auto m = oracle::mask_to_model(rng() % 64, 6);
    bool before = evaluate(f, m);
    f.clauses.push_back(oracle::random_kcnf(rng, 6, 1, 1 + rng() % 3).clauses[0]);
    if (!before)
      EXPECT_FALSE(evaluate(f, m));
  }
}

TEST(SoftCost, Examples) {
  WeightedCnf w{2, {}, {{{n(1)}, 1}, {{n(2)}, 1}}};
  EXPECT_EQ(soft_cost(w, Model(2)), 0u);
  Model all(2);
  all.set(1, true);
  all.set(2, true);
  EXPECT_EQ(soft_cost(w, all), 2u);

  WeightedCnf weighted{2, {}, {{{n(1)}, 3}, {{n(2)}, 5}}};
  Model m(2);
  m.set(1, true);
  EXPECT_EQ(soft_cost(weighted, m), 3u);
}

TEST(SoftCost, SatisfiedFormulaAsUnitWeightSoftCostsZero) {
  std::mt19937_64 rng(8);
  for (int iter = 0; iter < 200; ++iter) {
    auto f = oracle::random_kcnf(rng, 5, 1 + rng() % 6, 2);
    auto m = oracle::mask_to_model(rng() % 32, 5);
    WeightedCnf w{f.num_vars, {}, {}};
    for (const auto &c : f.clauses)
      w.soft.push_back(SoftClause{c, 1});
    if (evaluate(f, m))
      EXPECT_EQ(soft_cost(w, m), 0u);
  }
}

TEST(Dimacs, EmitExamples) {
  EXPECT_EQ(emit_dimacs_cnf({2, {{p(1), n(2)}}}), "p cnf 2 1\n1 -2 0\n");
  EXPECT_EQ(emit_dimacs_cnf({1, {}}), "p cnf 1 0\n");
  EXPECT_EQ(emit_dimacs_cnf({2, {{p(1), p(1), n(2)}}}), "p cnf 2 1\n1 -2 0\n");
  EXPECT_EQ(emit_dimacs_cnf({1, {Clause{}}}), "p cnf 1 1\n0\n");
}

TEST(Dimacs, ParseAcceptsCommentsAndMultilineClauses) {
  auto f = parse_dimacs_cnf("c hello\np cnf 3 2\n1 -2\n 3 0 -1 0\n");
  ASSERT_EQ(f.clauses.size(), 2u);
  EXPECT_EQ(f.clauses[0], (Clause{p(1), n(2), p(3)}));
  EXPECT_EQ(f.clauses[1], (Clause{n(1)}));
}

TEST(Dimacs, ParseErrors) {
  EXPECT_EQ(parse_error_line([] { (void)parse_dimacs_cnf("p cnf x 1\n1 0\n"); }), 1u);
  EXPECT_EQ(parse_error_line([] { (void)parse_dimacs_cnf("p cnf 2 1\n1 3 0\n"); }), 2u);
  EXPECT_EQ(parse_error_line([] { (void)parse_dimacs_cnf("p cnf 2 2\n1 0\n"); }), 2u);
  EXPECT_EQ(parse_error_line([] { (void)parse_dimacs_cnf("p cnf 2 1\n1 2\n"); }), 2u);
  EXPECT_EQ(parse_error_line([] { (void)parse_dimacs_cnf("1 2 0\n"); }), 1u);
}

TEST(Dimacs, RoundTripProperty) {
  std::mt19937_64 rng(99);
  for (int iter = 0; iter < 100; ++iter) {
    const std::size_t vars = 1 + rng() % 20;
    auto f = oracle::random_kcnf(rng, vars, rng() % 30, 1 + rng() % std::min<std::size_t>(4, vars));
    auto text = emit_dimacs_cnf(f);
    auto back = parse_dimacs_cnf(text);
    EXPECT_EQ(back, f);
    EXPECT_EQ(emit_dimacs_cnf(back), text);
  }
}

TEST(Wcnf, EmitUsesTopForHardClauses) {
  WeightedCnf w{2, {{p(1), p(2)}}, {{{n(1)}, 1}, {{n(2)}, 4}}};
  EXPECT_EQ(w.top(), 6u);
  EXPECT_EQ(emit_wcnf(w), "p wcnf 2 3 6\n6 1 2 0\n1 -1 0\n4 -2 0\n");
}

TEST(Wcnf, ParseErrors) {
  // weight above top
  EXPECT_EQ(parse_error_line([] { (void)parse_wcnf("p wcnf 1 1 3\n4 1 0\n"); }), 2u);
  // literal beyond num_vars
  EXPECT_EQ(parse_error_line([] { (void)parse_wcnf("p wcnf 1 1 3\n1 2 0\n"); }), 2u);
  // malformed header
  EXPECT_EQ(parse_error_line([] { (void)parse_wcnf("c x\np wcnf 1 1\n1 1 0\n"); }), 2u);
  // zero weight
  EXPECT_EQ(parse_error_line([] { (void)parse_wcnf("p wcnf 1 1 3\n0 1 0\n"); }), 2u);
  // clause count mismatch
  EXPECT_EQ(parse_error_line([] { (void)parse_wcnf("p wcnf 1 2 3\n1 1 0\n"); }), 2u);
}

TEST(Wcnf, ParseSeparatesHardAndSoftByTop) {
  auto parsed = parse_wcnf_with_top("c foreign file\np wcnf 2 3 100\n100 1 2 0\n7 -1 0\n100 -2 0\n");
  EXPECT_EQ(parsed.top, 100u);
  EXPECT_EQ(parsed.formula.hard.size(), 2u);
  ASSERT_EQ(parsed.formula.soft.size(), 1u);
  EXPECT_EQ(parsed.formula.soft[0].weight, 7u);
}

TEST(Wcnf, RoundTripOnEncoderOutput) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto inst = gen_instance(8, 4, 3, 0.5, seed);
    auto enc = encode_instance(inst);
    auto text = emit_wcnf(enc.wcnf);
    auto parsed = parse_wcnf_with_top(text);
    EXPECT_EQ(parsed.formula, enc.wcnf);
    EXPECT_EQ(parsed.top, 9u);
    EXPECT_EQ(emit_wcnf(parsed.formula), text);
  }
}

TEST(Wcnf, RoundTripProperty) {
  std::mt19937_64 rng(4);
  for (int iter = 0; iter < 100; ++iter) {
    auto w = oracle::random_wcnf(rng, 1 + rng() % 10, rng() % 10, rng() % 10, false, 9);
    // Duplicate literals are collapsed on output, so compare against a deduplicated copy.
    auto dedup = [](Clause c) {
      Clause out;
      for (auto l : c)
        if (std::find(out.begin(), out.end(), l) == out.end())
          out.push_back(l);
      return out;
    };
    for (auto &c : w.hard)
      c = dedup(c);
    for (auto &s : w.soft)
      s.clause = dedup(s.clause);
    auto text = emit_wcnf(w);
    EXPECT_EQ(parse_wcnf(text), w);
  }
}
