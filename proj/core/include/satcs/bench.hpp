#pragma once

// Instance generation and the two recovery experiments:
//  * oversampling: smallest m that recovers every trial exactly, reported as
//    m / (s ln(N/s)) per sparsity rate;
//  * error vs compression: mean normalized Hamming error per m/N.

#include "satcs/model.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace satcs {

/// A is i.i.d. Bernoulli(p_b) keyed by (seed, "matrix", i, j); the truth is
/// uniform over weight-s signals keyed by (seed, "signal", k); y = A x.
/// Throws InputError unless n >= 1, m >= 1, s <= n, 0 < p_b <= 1.
[[nodiscard]] SensingInstance gen_instance(std::size_t n, std::size_t m, std::size_t s,
                                           double p_b, std::uint64_t seed);

/// Seed of trial `trial` at candidate measurement count m.
[[nodiscard]] std::uint64_t trial_seed(std::uint64_t master, std::size_t s, std::size_t m,
                                       std::size_t trial) noexcept;

struct MinMeasurements {
  std::size_t m = 0;
  bool failed = false; // no m <= N recovered every trial; m is then N
};

/// Linear scan m = 1..N; at each m, fresh instances for each trial. Returns
/// the first m at which `method` recovers all of them bit for bit.
[[nodiscard]] MinMeasurements min_measurements(Method method, std::size_t n, std::size_t s,
                                               double p_b, std::size_t trials,
                                               std::uint64_t seed);

/// m / (s ln(N/s)); requires 0 < s < n.
[[nodiscard]] double oversampling_factor(double m, std::size_t n, std::size_t s);

enum class ExperimentKind { oversampling, error_vs_compression };

struct ExperimentConfig {
  std::string name = "custom";
  ExperimentKind kind = ExperimentKind::oversampling;
  std::size_t n_min = 30;
  std::size_t n_max = 30;
  std::vector<double> sparsity_rates{0.1, 0.2, 0.3, 0.4, 0.5};
  std::vector<double> compression_rates; // m/N points, error experiment only
  double bernoulli_p = 0.5;
  std::size_t trials = 10;
  std::uint64_t seed = 1;
  std::vector<Method> methods{Method::sat, Method::l1};
  std::size_t jobs = 1;

  /// Throws InputError on inconsistent settings.
  void validate() const;
};

/// "fig3", "fig4", "fig5" or "smoke". Throws InputError for other names.
[[nodiscard]] ExperimentConfig preset(std::string_view name);

/// key=value lines; '#' starts a comment. Keys: experiment, name, n, n_min,
/// n_max, rates, compression, pb, trials, seed, methods, jobs. Lists are
/// comma separated. Throws ParseError on unknown keys or bad values.
[[nodiscard]] ExperimentConfig parse_config(std::string_view text);

struct ResultRow {
  Method method = Method::sat;
  std::string n;  // signal size, or "lo-hi" when it varies per trial
  std::string s;  // sparsity count (oversampling) or sparsity rate (error)
  double p_b = 0;
  double m = 0;   // m_min (oversampling) or m/N (error)
  double metric = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  bool failed = false; // oversampling only: no m <= N succeeded

  friend bool operator==(const ResultRow &, const ResultRow &) = default;
};

using ProgressFn = std::function<void(std::string_view)>;

[[nodiscard]] std::vector<ResultRow> oversampling_experiment(const ExperimentConfig &cfg,
                                                             const ProgressFn &progress = {});
[[nodiscard]] std::vector<ResultRow> error_vs_compression_experiment(const ExperimentConfig &cfg,
                                                                     const ProgressFn &progress = {});
[[nodiscard]] std::vector<ResultRow> run_experiment(const ExperimentConfig &cfg,
                                                    const ProgressFn &progress = {});

inline constexpr std::string_view csv_header = "method,N,s,p_B,m,metric,trials,seed";

/// Header plus one row per result; numbers with 6 significant digits.
void write_csv(std::ostream &out, const std::vector<ResultRow> &rows);
/// Throws std::runtime_error naming the path when it cannot be written.
void write_csv(const std::string &path, const std::vector<ResultRow> &rows);

} // namespace satcs
