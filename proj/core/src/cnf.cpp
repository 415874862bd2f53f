#include "satcs/cnf.hpp"

#include "satcs/errors.hpp"
#include "text.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace satcs {

Lit Lit::from_dimacs(std::int64_t value) {
  if (value == 0)
    throw InputError("literal 0 is the clause terminator");
  auto v = value < 0 ? -value : value;
  if (v > std::numeric_limits<std::int32_t>::max())
    throw InputError("variable index too large");
  return {static_cast<Var>(v), value < 0};
}

Model::Model(std::vector<bool> values_by_var) : values_(std::move(values_by_var)) {
  if (values_.empty())
    values_.push_back(false);
}

namespace {

void check_vars(const Clause &c, std::size_t num_vars) {
  for (auto l : c)
    if (l.var() == 0 || l.var() > num_vars)
      throw InputError("literal " + std::to_string(l.to_dimacs()) + " outside 1.." +
                       std::to_string(num_vars));
}

void require_total(const Model &m, std::size_t num_vars) {
  if (m.num_vars() < num_vars)
    throw InputError("model assigns " + std::to_string(m.num_vars()) + " of " +
                     std::to_string(num_vars) + " variables");
}

void append_clause(std::string &out, const Clause &c) {
  // Duplicate literals are written once, first occurrence wins.
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (std::find(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(i), c[i]) !=
        c.begin() + static_cast<std::ptrdiff_t>(i))
      continue;
    out += std::to_string(c[i].to_dimacs());
    out += ' ';
  }
  out += "0\n";
}

bool is_comment(std::string_view line) {
  return line.empty() || line[0] == 'c' || line.find_first_not_of(" \t") == std::string_view::npos;
}

Lit parse_lit(const detail::Line &line, std::string_view tok, std::size_t num_vars) {
  auto v = detail::parse_number<std::int64_t>(tok);
  if (!v)
    throw ParseError(line.number, "bad literal '" + std::string(tok) + "'");
  auto var = *v < 0 ? -*v : *v;
  if (static_cast<std::uint64_t>(var) > num_vars)
    throw ParseError(line.number, "literal " + std::string(tok) + " exceeds declared " +
                                      std::to_string(num_vars) + " variables");
  return Lit::from_dimacs(*v);
}

} // namespace

void CnfFormula::validate() const {
  for (const auto &c : clauses)
    check_vars(c, num_vars);
}

std::uint64_t WeightedCnf::top() const {
  std::uint64_t total = 1;
  for (const auto &s : soft)
    total += s.weight;
  return total;
}

void WeightedCnf::validate() const {
  for (const auto &c : hard)
    check_vars(c, num_vars);
  for (const auto &s : soft) {
    if (s.weight == 0)
      throw InputError("soft clause weights must be positive");
    check_vars(s.clause, num_vars);
  }
}

bool satisfies(const Clause &clause, const Model &m) {
  return std::any_of(clause.begin(), clause.end(), [&](Lit l) { return m.value(l); });
}

bool evaluate(const CnfFormula &f, const Model &m) {
  require_total(m, f.num_vars);
  return std::all_of(f.clauses.begin(), f.clauses.end(),
                     [&](const Clause &c) { return satisfies(c, m); });
}

std::uint64_t soft_cost(const WeightedCnf &w, const Model &m) {
  require_total(m, w.num_vars);
  std::uint64_t cost = 0;
  for (const auto &s : w.soft)
    if (!satisfies(s.clause, m))
      cost += s.weight;
  return cost;
}

std::string emit_dimacs_cnf(const CnfFormula &f) {
  std::string out =
      "p cnf " + std::to_string(f.num_vars) + ' ' + std::to_string(f.clauses.size()) + '\n';
  for (const auto &c : f.clauses)
    append_clause(out, c);
  return out;
}

CnfFormula parse_dimacs_cnf(std::string_view text) {
  auto lines = detail::split_lines(text);
  CnfFormula f;
  std::size_t declared = 0;
  bool have_header = false;
  std::size_t last_line = 1;
  Clause current;
  for (const auto &line : lines) {
    last_line = line.number;
    if (is_comment(line.text))
      continue;
    auto tok = detail::split_ws(line.text);
    if (!have_header) {
      if (tok.size() != 4 || tok[0] != "p" || tok[1] != "cnf")
        throw ParseError(line.number, "expected header 'p cnf <vars> <clauses>'");
      auto nv = detail::parse_number<std::size_t>(tok[2]);
      auto nc = detail::parse_number<std::size_t>(tok[3]);
      if (!nv || !nc)
        throw ParseError(line.number, "malformed header counts");
      f.num_vars = *nv;
      declared = *nc;
      have_header = true;
      continue;
    }
    for (auto t : tok) {
      if (t == "0") {
        f.clauses.push_back(std::move(current));
        current.clear();
      } else {
        current.push_back(parse_lit(line, t, f.num_vars));
      }
    }
  }
  if (!have_header)
    throw ParseError(last_line, "missing 'p cnf' header");
  if (!current.empty())
    throw ParseError(last_line, "last clause is not terminated by 0");
  if (f.clauses.size() != declared)
    throw ParseError(last_line, "header declares " + std::to_string(declared) +
                                    " clauses, found " + std::to_string(f.clauses.size()));
  return f;
}

std::string emit_wcnf(const WeightedCnf &w) {
  auto top = w.top();
  auto top_str = std::to_string(top);
  std::string out = "p wcnf " + std::to_string(w.num_vars) + ' ' +
                    std::to_string(w.hard.size() + w.soft.size()) + ' ' + top_str + '\n';
  for (const auto &c : w.hard) {
    out += top_str;
    out += ' ';
    append_clause(out, c);
  }
  for (const auto &s : w.soft) {
    out += std::to_string(s.weight);
    out += ' ';
    append_clause(out, s.clause);
  }
  return out;
}

ParsedWcnf parse_wcnf_with_top(std::string_view text) {
  auto lines = detail::split_lines(text);
  ParsedWcnf result;
  auto &w = result.formula;
  std::size_t declared = 0;
  bool have_header = false;
  std::size_t last_line = 1;
  for (const auto &line : lines) {
    last_line = line.number;
    if (is_comment(line.text))
      continue;
    auto tok = detail::split_ws(line.text);
    if (!have_header) {
      if (tok.size() != 5 || tok[0] != "p" || tok[1] != "wcnf")
        throw ParseError(line.number, "expected header 'p wcnf <vars> <clauses> <top>'");
      auto nv = detail::parse_number<std::size_t>(tok[2]);
      auto nc = detail::parse_number<std::size_t>(tok[3]);
      auto top = detail::parse_number<std::uint64_t>(tok[4]);
      if (!nv || !nc || !top || *top == 0)
        throw ParseError(line.number, "malformed header counts");
      w.num_vars = *nv;
      declared = *nc;
      result.top = *top;
      have_header = true;
      continue;
    }
    if (tok.size() < 2 || tok.back() != "0")
      throw ParseError(line.number, "clause line must be '<weight> <literals> 0'");
    auto weight = detail::parse_number<std::uint64_t>(tok[0]);
    if (!weight || *weight == 0)
      throw ParseError(line.number, "weight must be a positive integer");
    if (*weight > result.top)
      throw ParseError(line.number, "weight " + std::string(tok[0]) + " exceeds top " +
                                        std::to_string(result.top));
    Clause c;
    for (std::size_t i = 1; i + 1 < tok.size(); ++i) {
      if (tok[i] == "0")
        throw ParseError(line.number, "one clause per line expected");
      c.push_back(parse_lit(line, tok[i], w.num_vars));
    }
    if (*weight == result.top)
      w.hard.push_back(std::move(c));
    else
      w.soft.push_back({std::move(c), *weight});
  }
  if (!have_header)
    throw ParseError(last_line, "missing 'p wcnf' header");
  if (w.hard.size() + w.soft.size() != declared)
    throw ParseError(last_line, "header declares " + std::to_string(declared) +
                                    " clauses, found " +
                                    std::to_string(w.hard.size() + w.soft.size()));
  return result;
}

WeightedCnf parse_wcnf(std::string_view text) { return parse_wcnf_with_top(text).formula; }

} // namespace satcs
