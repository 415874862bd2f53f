#include "satcs/recovery.hpp"

#include "satcs/encoder.hpp"
#include "satcs/errors.hpp"
#include "satcs/l1.hpp"

#include <bit>
#include <chrono>

namespace satcs {

std::optional<BinarySignal> brute_force_l0(const DesignMatrix &a, const MeasurementVector &y) {
  if (y.size() != a.rows())
    throw InputError("measurement count does not match matrix rows");
  const auto n = a.cols();
  if (n > brute_force_l0_limit)
    throw InputError("brute-force l0 is limited to N <= " + std::to_string(brute_force_l0_limit));

  std::vector<std::uint32_t> rows(a.rows(), 0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (a.at(i, j))
        rows[i] |= std::uint32_t{1} << j;
  auto feasible = [&](std::uint32_t x) {
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (static_cast<std::uint32_t>(std::popcount(x & rows[i])) != y[i])
        return false;
    return true;
  };

  const std::uint64_t limit = std::uint64_t{1} << n;
  for (std::size_t weight = 0; weight <= n; ++weight) {
    if (weight == 0) {
      if (feasible(0))
        return BinarySignal::zeros(n);
      continue;
    }
    // Gosper's hack: successive masks with the same popcount, ascending.
    std::uint64_t x = (std::uint64_t{1} << weight) - 1;
    while (x < limit) {
      if (feasible(static_cast<std::uint32_t>(x))) {
        std::vector<std::uint8_t> bits(n);
        for (std::size_t j = 0; j < n; ++j)
          bits[j] = static_cast<std::uint8_t>((x >> j) & 1u);
        return BinarySignal(std::move(bits));
      }
      std::uint64_t c = x & (~x + 1);
      std::uint64_t r = x + c;
      x = (((r ^ x) >> 2) / c) | r;
    }
  }
  return std::nullopt;
}

namespace {

void finish(RecoveryReport &report, const SensingInstance &inst,
            std::chrono::steady_clock::time_point start) {
  report.cost = sparsity(report.recovered);
  if (inst.truth())
    report.exact = report.feasible && report.recovered == *inst.truth();
  report.elapsed = std::chrono::steady_clock::now() - start;
}

} // namespace

RecoveryReport recover_sat(const SensingInstance &inst, const MaxSatOptions &options) {
  auto start = std::chrono::steady_clock::now();
  RecoveryReport report;
  report.method = Method::sat;
  auto enc = encode_instance(inst);
  auto opt = solve_maxsat(enc.wcnf, options);
  if (opt.is_optimal()) {
    report.recovered = decode_model(opt.model, inst.signal_size());
  } else {
    report.feasible = false;
    report.recovered = BinarySignal::zeros(inst.signal_size());
  }
  finish(report, inst, start);
  return report;
}

RecoveryReport recover_brute(const SensingInstance &inst) {
  auto start = std::chrono::steady_clock::now();
  RecoveryReport report;
  report.method = Method::brute;
  auto x = brute_force_l0(inst.matrix(), inst.measurements());
  if (x) {
    report.recovered = std::move(*x);
  } else {
    report.feasible = false;
    report.recovered = BinarySignal::zeros(inst.signal_size());
  }
  finish(report, inst, start);
  return report;
}

RecoveryReport recover(const SensingInstance &inst, Method method) {
  switch (method) {
  case Method::sat:
    return recover_sat(inst);
  case Method::l1:
    return recover_l1(inst);
  case Method::brute:
    return recover_brute(inst);
  }
  throw InputError("unknown method");
}

} // namespace satcs
