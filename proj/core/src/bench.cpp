#include "satcs/bench.hpp"

#include "satcs/errors.hpp"
#include "satcs/recovery.hpp"
#include "satcs/rng.hpp"
#include "text.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <numeric>
#include <ostream>
#include <thread>

namespace satcs {

SensingInstance gen_instance(std::size_t n, std::size_t m, std::size_t s, double p_b,
                             std::uint64_t seed) {
  if (n == 0 || m == 0)
    throw InputError("N and m must be positive");
  if (s > n)
    throw InputError("sparsity s exceeds N");
  if (!(p_b > 0.0 && p_b <= 1.0))
    throw InputError("Bernoulli parameter must lie in (0, 1]");

  std::vector<std::uint8_t> entries(m * n);
  const auto matrix_tag = rng::tag("matrix");
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      entries[i * n + j] = rng::unit(rng::key(seed, {matrix_tag, i, j})) < p_b ? 1 : 0;

  // Partial Fisher-Yates: the first s slots of the permutation form the support.
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  const auto signal_tag = rng::tag("signal");
  for (std::size_t k = 0; k < s; ++k) {
    auto r = rng::below(rng::key(seed, {signal_tag, k}), n - k);
    std::swap(perm[k], perm[k + r]);
  }
  std::vector<std::uint8_t> bits(n, 0);
  for (std::size_t k = 0; k < s; ++k)
    bits[perm[k]] = 1;

  DesignMatrix a(m, n, std::move(entries));
  BinarySignal x(std::move(bits));
  auto y = measure(a, x);
  return SensingInstance(std::move(a), std::move(y), std::move(x), InstanceMeta{seed, p_b, s});
}

std::uint64_t trial_seed(std::uint64_t master, std::size_t s, std::size_t m,
                         std::size_t trial) noexcept {
  return rng::key(master, {rng::tag("trial"), s, m, trial});
}

MinMeasurements min_measurements(Method method, std::size_t n, std::size_t s, double p_b,
                                 std::size_t trials, std::uint64_t seed) {
  if (trials == 0)
    throw InputError("trials must be at least 1");
  for (std::size_t m = 1; m <= n; ++m) {
    bool all = true;
    for (std::size_t t = 0; t < trials && all; ++t) {
      auto inst = gen_instance(n, m, s, p_b, trial_seed(seed, s, m, t));
      all = recover(inst, method).exact.value_or(false);
    }
    if (all)
      return {m, false};
  }
  return {n, true};
}

double oversampling_factor(double m, std::size_t n, std::size_t s) {
  if (s == 0 || s >= n)
    throw InputError("oversampling factor needs 0 < s < N");
  auto sd = static_cast<double>(s);
  return m / (sd * std::log(static_cast<double>(n) / sd));
}

namespace {

std::size_t sparsity_for(double rate, std::size_t n) {
  return static_cast<std::size_t>(std::llround(rate * static_cast<double>(n)));
}

std::size_t measurements_for(double rate, std::size_t n) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(rate * static_cast<double>(n))));
}

// Runs body(0..count-1) on up to `jobs` threads; rethrows the first failure.
template <typename Body> void parallel_for(std::size_t count, std::size_t jobs, Body body) {
  jobs = std::max<std::size_t>(1, std::min(jobs, count));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i)
      body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> workers;
    for (std::size_t w = 0; w < jobs; ++w) {
      workers.emplace_back([&] {
        for (;;) {
          auto i = next.fetch_add(1);
          if (i >= count)
            return;
          try {
            body(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error)
              error = std::current_exception();
          }
        }
      });
    }
  }
  if (error)
    std::rethrow_exception(error);
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string csv_field(const std::string &s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos)
    return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"')
      q += '"';
    q += c;
  }
  q += '"';
  return q;
}

std::string n_label(const ExperimentConfig &cfg) {
  if (cfg.n_min == cfg.n_max)
    return std::to_string(cfg.n_min);
  return std::to_string(cfg.n_min) + "-" + std::to_string(cfg.n_max);
}

bool row_less(const ResultRow &a, const ResultRow &b) {
  auto key = [](const ResultRow &r) {
    return std::tuple(static_cast<int>(r.method), r.n.size(), r.n, r.s.size(), r.s, r.m);
  };
  return key(a) < key(b);
}

} // namespace

void ExperimentConfig::validate() const {
  if (n_min == 0 || n_min > n_max)
    throw InputError("need 1 <= n_min <= n_max");
  if (trials == 0)
    throw InputError("trials must be at least 1");
  if (!(bernoulli_p > 0.0 && bernoulli_p <= 1.0))
    throw InputError("Bernoulli parameter must lie in (0, 1]");
  if (methods.empty())
    throw InputError("at least one method is required");
  if (jobs == 0)
    throw InputError("jobs must be at least 1");
  if (sparsity_rates.empty())
    throw InputError("at least one sparsity rate is required");
  for (double r : sparsity_rates)
    if (!(r > 0.0 && r <= 1.0))
      throw InputError("sparsity rates must lie in (0, 1]");
  if (std::find(methods.begin(), methods.end(), Method::brute) != methods.end() &&
      n_max > brute_force_l0_limit)
    throw InputError("brute method needs N <= " + std::to_string(brute_force_l0_limit));

  if (kind == ExperimentKind::oversampling) {
    for (auto n = n_min; n <= n_max; ++n)
      for (double r : sparsity_rates) {
        auto s = sparsity_for(r, n);
        if (s == 0 || s >= n)
          throw InputError("sparsity rate " + format_number(r) + " gives s = " +
                           std::to_string(s) + " at N = " + std::to_string(n) +
                           "; the oversampling factor needs 0 < s < N");
      }
  } else {
    if (compression_rates.empty())
      throw InputError("error experiment needs compression rates");
    for (double r : compression_rates)
      if (!(r > 0.0 && r <= 1.0))
        throw InputError("compression rates must lie in (0, 1]");
  }
}

ExperimentConfig preset(std::string_view name) {
  ExperimentConfig cfg;
  cfg.name = std::string(name);
  if (name == "fig3") {
    cfg.kind = ExperimentKind::oversampling;
    cfg.n_min = cfg.n_max = 30;
    cfg.sparsity_rates = {0.1, 0.2, 0.3, 0.4, 0.5};
    cfg.bernoulli_p = 0.5;
  } else if (name == "fig4" || name == "fig5") {
    bool four = name == "fig4";
    cfg.kind = ExperimentKind::error_vs_compression;
    cfg.n_min = 20;
    cfg.n_max = 30;
    cfg.sparsity_rates = {four ? 0.5 : 0.3};
    cfg.bernoulli_p = four ? 0.5 : 0.3;
    cfg.compression_rates = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  } else if (name == "smoke") {
    cfg.kind = ExperimentKind::oversampling;
    cfg.n_min = cfg.n_max = 10;
    cfg.sparsity_rates = {0.1, 0.2, 0.3, 0.4, 0.5};
    cfg.bernoulli_p = 0.5;
  } else {
    throw InputError("unknown preset '" + std::string(name) + "'");
  }
  return cfg;
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  for (const auto &line : detail::split_lines(text)) {
    auto body = line.text.substr(0, line.text.find('#'));
    auto first = body.find_first_not_of(" \t");
    if (first == std::string_view::npos)
      continue;
    body = body.substr(first, body.find_last_not_of(" \t") - first + 1);
    auto eq = body.find('=');
    if (eq == std::string_view::npos)
      throw ParseError(line.number, "expected key=value");
    auto trim = [](std::string_view s) {
      auto b = s.find_first_not_of(" \t");
      if (b == std::string_view::npos)
        return std::string_view{};
      return s.substr(b, s.find_last_not_of(" \t") - b + 1);
    };
    auto key = trim(body.substr(0, eq));
    auto value = trim(body.substr(eq + 1));

    auto list = [&](std::string_view v) {
      std::vector<std::string_view> items;
      while (true) {
        auto comma = v.find(',');
        items.push_back(trim(v.substr(0, comma)));
        if (comma == std::string_view::npos)
          break;
        v.remove_prefix(comma + 1);
      }
      return items;
    };
    auto real = [&](std::string_view v) {
      try {
        std::size_t used = 0;
        std::string s(v);
        double d = std::stod(s, &used);
        if (used != s.size())
          throw std::invalid_argument("trailing");
        return d;
      } catch (const std::exception &) {
        throw ParseError(line.number, "bad number '" + std::string(v) + "'");
      }
    };
    auto count = [&](std::string_view v) {
      auto n = detail::parse_number<std::uint64_t>(v);
      if (!n)
        throw ParseError(line.number, "bad integer '" + std::string(v) + "'");
      return *n;
    };

    try {
      if (key == "preset") {
        cfg = preset(value);
      } else if (key == "name") {
        cfg.name = std::string(value);
      } else if (key == "experiment") {
        if (value == "oversampling")
          cfg.kind = ExperimentKind::oversampling;
        else if (value == "error")
          cfg.kind = ExperimentKind::error_vs_compression;
        else
          throw ParseError(line.number, "experiment must be 'oversampling' or 'error'");
      } else if (key == "n") {
        cfg.n_min = cfg.n_max = count(value);
      } else if (key == "n_min") {
        cfg.n_min = count(value);
      } else if (key == "n_max") {
        cfg.n_max = count(value);
      } else if (key == "rates") {
        cfg.sparsity_rates.clear();
        for (auto item : list(value))
          cfg.sparsity_rates.push_back(real(item));
      } else if (key == "compression") {
        cfg.compression_rates.clear();
        for (auto item : list(value))
          cfg.compression_rates.push_back(real(item));
      } else if (key == "pb") {
        cfg.bernoulli_p = real(value);
      } else if (key == "trials") {
        cfg.trials = count(value);
      } else if (key == "seed") {
        cfg.seed = count(value);
      } else if (key == "jobs") {
        cfg.jobs = count(value);
      } else if (key == "methods") {
        cfg.methods.clear();
        for (auto item : list(value))
          cfg.methods.push_back(parse_method(item));
      } else {
        throw ParseError(line.number, "unknown key '" + std::string(key) + "'");
      }
    } catch (const InputError &e) {
      throw ParseError(line.number, e.what());
    }
  }
  return cfg;
}

std::vector<ResultRow> oversampling_experiment(const ExperimentConfig &cfg,
                                               const ProgressFn &progress) {
  cfg.validate();
  struct Cell {
    Method method;
    std::size_t n;
    std::size_t s;
  };
  std::vector<Cell> cells;
  for (auto n = cfg.n_min; n <= cfg.n_max; ++n)
    for (double r : cfg.sparsity_rates)
      for (auto method : cfg.methods)
        cells.push_back({method, n, sparsity_for(r, n)});

  std::vector<ResultRow> rows(cells.size());
  std::mutex progress_mutex;
  parallel_for(cells.size(), cfg.jobs, [&](std::size_t i) {
    const auto &c = cells[i];
    auto mm = min_measurements(c.method, c.n, c.s, cfg.bernoulli_p, cfg.trials, cfg.seed);
    auto &row = rows[i];
    row.method = c.method;
    row.n = std::to_string(c.n);
    row.s = std::to_string(c.s);
    row.p_b = cfg.bernoulli_p;
    row.m = static_cast<double>(mm.m);
    row.metric = oversampling_factor(row.m, c.n, c.s);
    row.trials = cfg.trials;
    row.seed = cfg.seed;
    row.failed = mm.failed;
    if (progress) {
      std::lock_guard lock(progress_mutex);
      progress(std::string(to_string(c.method)) + " N=" + row.n + " s=" + row.s +
               " m_min=" + std::to_string(mm.m) + (mm.failed ? " (no m <= N recovered all)" : ""));
    }
  });
  std::sort(rows.begin(), rows.end(), row_less);
  return rows;
}

std::vector<ResultRow> error_vs_compression_experiment(const ExperimentConfig &cfg,
                                                       const ProgressFn &progress) {
  cfg.validate();
  const auto span = cfg.n_max - cfg.n_min + 1;
  std::vector<std::size_t> sizes(cfg.trials);
  for (std::size_t t = 0; t < cfg.trials; ++t)
    sizes[t] = cfg.n_min + rng::below(rng::key(cfg.seed, {rng::tag("size"), t}), span);

  struct Cell {
    Method method;
    double s_rate;
    double m_rate;
  };
  std::vector<Cell> cells;
  for (double sr : cfg.sparsity_rates)
    for (double mr : cfg.compression_rates)
      for (auto method : cfg.methods)
        cells.push_back({method, sr, mr});

  const auto trials = cfg.trials;
  std::vector<double> errors(cells.size() * trials);
  std::mutex progress_mutex;
  parallel_for(errors.size(), cfg.jobs, [&](std::size_t k) {
    const auto &c = cells[k / trials];
    auto t = k % trials;
    auto n = sizes[t];
    auto s = sparsity_for(c.s_rate, n);
    auto m = measurements_for(c.m_rate, n);
    auto inst = gen_instance(n, m, s, cfg.bernoulli_p, trial_seed(cfg.seed, s, m, t));
    auto report = recover(inst, c.method);
    errors[k] = recovery_error(*inst.truth(), report);
    if (progress && t + 1 == trials) {
      std::lock_guard lock(progress_mutex);
      progress(std::string(to_string(c.method)) + " s/N=" + format_number(c.s_rate) +
               " m/N=" + format_number(c.m_rate) + " done");
    }
  });

  std::vector<ResultRow> rows;
  rows.reserve(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    double sum = 0;
    for (std::size_t t = 0; t < trials; ++t)
      sum += errors[i * trials + t];
    ResultRow row;
    row.method = cells[i].method;
    row.n = n_label(cfg);
    row.s = format_number(cells[i].s_rate);
    row.p_b = cfg.bernoulli_p;
    row.m = cells[i].m_rate;
    row.metric = sum / static_cast<double>(trials);
    row.trials = trials;
    row.seed = cfg.seed;
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end(), row_less);
  return rows;
}

std::vector<ResultRow> run_experiment(const ExperimentConfig &cfg, const ProgressFn &progress) {
  if (cfg.kind == ExperimentKind::oversampling)
    return oversampling_experiment(cfg, progress);
  return error_vs_compression_experiment(cfg, progress);
}

void write_csv(std::ostream &out, const std::vector<ResultRow> &rows) {
  out << csv_header << '\n';
  for (const auto &r : rows) {
    out << csv_field(std::string(to_string(r.method))) << ',' << csv_field(r.n) << ','
        << csv_field(r.s) << ',' << format_number(r.p_b) << ',' << format_number(r.m) << ','
        << format_number(r.metric) << ',' << r.trials << ',' << r.seed << '\n';
  }
}

void write_csv(const std::string &path, const std::vector<ResultRow> &rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot open '" + path + "' for writing");
  write_csv(out, rows);
  out.flush();
  if (!out)
    throw std::runtime_error("failed writing '" + path + "'");
}

} // namespace satcs
