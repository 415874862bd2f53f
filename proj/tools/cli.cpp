#include "cli.hpp"

#include "satcs/bench.hpp"
#include "satcs/cnf.hpp"
#include "satcs/encoder.hpp"
#include "satcs/errors.hpp"
#include "satcs/maxsat.hpp"
#include "satcs/recovery.hpp"
#include "satcs/sat_solver.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

namespace satcs::cli {

namespace {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string &path, const std::string &content) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw IoError("cannot write '" + path + "'");
  out << content;
  out.flush();
  if (!out)
    throw IoError("failed writing '" + path + "'");
}

SensingInstance load_instance(const std::string &path) {
  auto text = read_file(path);
  try {
    return parse_instance(text);
  } catch (const ParseError &e) {
    throw IoError(path + ": " + e.what());
  }
}

struct GenArgs {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t s = 0;
  double pb = 0.5;
  std::uint64_t seed = 0;
  std::string out;
};

struct EncodeArgs {
  std::string in;
  std::string out_wcnf;
  std::string out_map;
};

struct SolveArgs {
  std::string wcnf;
  std::string cnf;
  int verbosity = 0;
};

struct RecoverArgs {
  std::string in;
  std::string method = "sat";
};

struct BenchArgs {
  std::string preset;
  std::string config;
  std::string out;
  std::size_t jobs = 0;
};

struct VerifyArgs {
  std::string in;
  std::string x;
};

int do_gen(const GenArgs &a, std::ostream &out) {
  auto inst = gen_instance(a.n, a.m, a.s, a.pb, a.seed);
  auto text = format_instance(inst);
  if (a.out.empty())
    out << text;
  else
    write_file(a.out, text);
  return exit_ok;
}

int do_encode(const EncodeArgs &a, std::ostream &out) {
  auto inst = load_instance(a.in);
  auto enc = encode_instance(inst);
  write_file(a.out_wcnf, emit_wcnf(enc.wcnf));
  if (!a.out_map.empty()) {
    std::ostringstream map;
    write_variable_map(map, enc);
    write_file(a.out_map, map.str());
  }
  out << "vars " << enc.wcnf.num_vars << '\n'
      << "hard " << enc.wcnf.hard.size() << '\n'
      << "soft " << enc.wcnf.soft.size() << '\n'
      << "top " << enc.wcnf.top() << '\n';
  return exit_ok;
}

void print_v_line(std::ostream &out, const Model &m, bool terminate) {
  out << 'v';
  for (Var v = 1; v <= m.num_vars(); ++v)
    out << ' ' << (m.value(v) ? "" : "-") << v;
  if (terminate)
    out << " 0";
  out << '\n';
}

int do_solve(const SolveArgs &a, std::ostream &out, std::ostream &err) {
  SolverOptions so;
  so.verbosity = a.verbosity;
  so.log = &err;

  if (!a.cnf.empty()) {
    CnfFormula f;
    try {
      f = parse_dimacs_cnf(read_file(a.cnf));
    } catch (const ParseError &e) {
      throw IoError(a.cnf + ": " + e.what());
    }
    SatSolver solver(so);
    solver.add_formula(f);
    auto r = solver.solve();
    if (!r.is_sat()) {
      out << "s UNSATISFIABLE\n";
      return exit_infeasible;
    }
    out << "s SATISFIABLE\n";
    Model m(f.num_vars);
    for (Var v = 1; v <= f.num_vars; ++v)
      m.set(v, r.model.value(v));
    print_v_line(out, m, true);
    return exit_ok;
  }

  WeightedCnf w;
  try {
    w = parse_wcnf(read_file(a.wcnf));
  } catch (const ParseError &e) {
    throw IoError(a.wcnf + ": " + e.what());
  }
  MaxSatOptions mo;
  mo.solver = so;
  mo.on_incumbent = [&](std::uint64_t cost) { out << "o " << cost << '\n'; };
  auto r = solve_maxsat(w, mo);
  if (!r.is_optimal()) {
    out << "s UNSATISFIABLE\n";
    return exit_infeasible;
  }
  out << "s OPTIMUM FOUND\n";
  print_v_line(out, r.model, false);
  return exit_ok;
}

int do_recover(const RecoverArgs &a, std::ostream &out) {
  auto inst = load_instance(a.in);
  auto report = recover(inst, parse_method(a.method));
  out << "method " << to_string(report.method) << '\n';
  if (!report.feasible) {
    out << "status infeasible\n";
    return exit_infeasible;
  }
  out << "status optimal\n"
      << "cost " << report.cost << '\n'
      << "x " << report.recovered.to_string() << '\n';
  if (report.exact)
    out << "exact " << (*report.exact ? "yes" : "no") << '\n';
  out << "elapsed_ms "
      << std::chrono::duration<double, std::milli>(report.elapsed).count() << '\n';
  return exit_ok;
}

int do_bench(const BenchArgs &a, std::ostream &out, std::ostream &err) {
  ExperimentConfig cfg;
  if (!a.config.empty()) {
    auto text = read_file(a.config);
    try {
      cfg = parse_config(text);
    } catch (const ParseError &e) {
      err << "error: " << a.config << ": " << e.what() << '\n';
      return exit_usage;
    }
  } else {
    cfg = preset(a.preset);
  }
  if (a.jobs > 0)
    cfg.jobs = a.jobs;

  auto rows = run_experiment(cfg, [&](std::string_view line) { err << "[" << cfg.name << "] " << line << '\n'; });
  for (const auto &r : rows)
    if (r.failed)
      err << "[" << cfg.name << "] warning: " << to_string(r.method) << " s=" << r.s
          << " never recovered all trials; reporting m = N\n";
  if (a.out.empty()) {
    write_csv(out, rows);
  } else {
    try {
      write_csv(a.out, rows);
    } catch (const std::runtime_error &e) {
      throw IoError(e.what());
    }
  }
  return exit_ok;
}

int do_verify(const VerifyArgs &a, std::ostream &out) {
  auto inst = load_instance(a.in);
  std::string digits;
  for (char c : a.x)
    if (c != ' ' && c != ',')
      digits.push_back(c);
  auto x = BinarySignal::from_string(digits);
  auto y = measure(inst.matrix(), x);
  bool feasible = y == inst.measurements();
  out << "feasible " << (feasible ? "yes" : "no") << '\n' << "sparsity " << sparsity(x) << '\n';
  return feasible ? exit_ok : exit_infeasible;
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Exact sparse recovery of binary signals by weighted MaxSAT", "satcs"};
  app.require_subcommand(1);

  GenArgs gen;
  auto *gen_cmd = app.add_subcommand("gen", "Generate a random Bernoulli sensing instance");
  gen_cmd->add_option("--n", gen.n, "Signal length N")->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--m", gen.m, "Number of measurements m")->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--s", gen.s, "Number of ones in the signal")->required();
  gen_cmd->add_option("--pb", gen.pb, "Bernoulli parameter of the matrix entries")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  gen_cmd->add_option("--seed", gen.seed, "Seed")->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "Output instance file (default: stdout)");

  EncodeArgs enc;
  auto *enc_cmd = app.add_subcommand("encode", "Encode an instance as weighted MaxSAT (WCNF)");
  enc_cmd->add_option("--in", enc.in, "Instance file")->required();
  enc_cmd->add_option("--out-wcnf", enc.out_wcnf, "WCNF output file")->required();
  enc_cmd->add_option("--out-map", enc.out_map, "Signal variable map output file");

  SolveArgs sol;
  auto *sol_cmd = app.add_subcommand("solve", "Solve a WCNF (MaxSAT) or DIMACS CNF (SAT) file");
  auto *wcnf_opt = sol_cmd->add_option("--wcnf", sol.wcnf, "WCNF file to optimize");
  auto *cnf_opt = sol_cmd->add_option("--cnf", sol.cnf, "DIMACS CNF file to decide");
  wcnf_opt->excludes(cnf_opt);
  sol_cmd->add_option("--verbosity", sol.verbosity, "Solver log level on stderr (0 = quiet)")
      ->capture_default_str();

  RecoverArgs rec;
  auto *rec_cmd = app.add_subcommand("recover", "Recover the sparsest signal of an instance");
  rec_cmd->add_option("--in", rec.in, "Instance file")->required();
  rec_cmd->add_option("--method", rec.method, "sat | l1 | brute")
      ->capture_default_str()
      ->check(CLI::IsMember({"sat", "l1", "brute"}));

  BenchArgs bench;
  auto *bench_cmd = app.add_subcommand("bench", "Run a recovery experiment and write CSV");
  auto *preset_opt = bench_cmd->add_option("--preset", bench.preset, "fig3 | fig4 | fig5 | smoke")
                         ->check(CLI::IsMember({"fig3", "fig4", "fig5", "smoke"}));
  auto *config_opt = bench_cmd->add_option("--config", bench.config, "key=value experiment file");
  preset_opt->excludes(config_opt);
  bench_cmd->add_option("--out", bench.out, "CSV output file (default: stdout)");
  bench_cmd->add_option("--jobs", bench.jobs, "Worker threads (default: from config, else 1)");

  VerifyArgs ver;
  auto *ver_cmd = app.add_subcommand("verify", "Check A x = y for a candidate signal");
  ver_cmd->add_option("--in", ver.in, "Instance file")->required();
  ver_cmd->add_option("--x", ver.x, "Candidate signal as 0/1 digits")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    if (*sol_cmd && sol.wcnf.empty() && sol.cnf.empty())
      throw CLI::RequiredError("solve needs --wcnf or --cnf");
    if (*bench_cmd && bench.preset.empty() && bench.config.empty())
      throw CLI::RequiredError("bench needs --preset or --config");
  } catch (const CLI::ParseError &e) {
    auto code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    if (*gen_cmd)
      return do_gen(gen, out);
    if (*enc_cmd)
      return do_encode(enc, out);
    if (*sol_cmd)
      return do_solve(sol, out, err);
    if (*rec_cmd)
      return do_recover(rec, out);
    if (*bench_cmd)
      return do_bench(bench, out, err);
    if (*ver_cmd)
      return do_verify(ver, out);
  } catch (const IoError &e) {
    err << "error: " << e.what() << '\n';
    return exit_io;
  } catch (const InputError &e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }
  return exit_usage;
}

} // namespace satcs::cli
