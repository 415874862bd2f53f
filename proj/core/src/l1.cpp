#include "satcs/l1.hpp"

#include "satcs/errors.hpp"

#include <chrono>
#include <limits>

namespace satcs {

Rational FractionalSignal::objective() const {
  Rational sum = 0;
  for (const auto &v : values)
    sum += v;
  return sum;
}

namespace {

constexpr std::size_t no_column = std::numeric_limits<std::size_t>::max();

// Dense tableau over the rationals for min c^T z s.t. M z = b, z >= 0, b >= 0.
class Tableau {
public:
  Tableau(std::vector<std::vector<Rational>> rows, std::vector<Rational> rhs,
          std::vector<std::size_t> basis)
      : rows_(std::move(rows)), rhs_(std::move(rhs)), basis_(std::move(basis)) {}

  // Runs Bland-rule simplex on the columns [0, usable) for the given costs.
  void optimize(const std::vector<Rational> &cost, std::size_t usable) {
    for (;;) {
      auto reduced = reduced_costs(cost, usable);
      std::size_t enter = no_column;
      for (std::size_t j = 0; j < usable; ++j) {
        if (reduced[j] < 0) {
          enter = j;
          break;
        }
      }
      if (enter == no_column)
        return;

      std::size_t leave = no_column;
      Rational best_ratio;
      for (std::size_t r = 0; r < rows_.size(); ++r) {
        if (rows_[r][enter] <= 0)
          continue;
        Rational ratio = rhs_[r] / rows_[r][enter];
        if (leave == no_column || ratio < best_ratio ||
            (ratio == best_ratio && basis_[r] < basis_[leave])) {
          leave = r;
          best_ratio = ratio;
        }
      }
      // The feasible region is bounded (0 <= x <= 1), so some row always blocks.
      if (leave == no_column)
        throw std::logic_error("unbounded l1 program");
      pivot(leave, enter);
    }
  }

  void pivot(std::size_t r, std::size_t col) {
    Rational p = rows_[r][col];
    for (auto &v : rows_[r])
      v /= p;
    rhs_[r] /= p;
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      if (k == r || rows_[k][col] == 0)
        continue;
      Rational f = rows_[k][col];
      for (std::size_t j = 0; j < rows_[k].size(); ++j)
        if (rows_[r][j] != 0)
          rows_[k][j] -= f * rows_[r][j];
      rhs_[k] -= f * rhs_[r];
    }
    basis_[r] = col;
  }

  void drop_row(std::size_t r) {
    rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(r));
    rhs_.erase(rhs_.begin() + static_cast<std::ptrdiff_t>(r));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
  }

  [[nodiscard]] std::vector<Rational> solution(std::size_t columns) const {
    std::vector<Rational> z(columns, 0);
    for (std::size_t r = 0; r < rows_.size(); ++r)
      if (basis_[r] < columns)
        z[basis_[r]] = rhs_[r];
    return z;
  }

  [[nodiscard]] Rational value(const std::vector<Rational> &cost) const {
    Rational v = 0;
    for (std::size_t r = 0; r < rows_.size(); ++r)
      v += cost[basis_[r]] * rhs_[r];
    return v;
  }

  [[nodiscard]] std::size_t row_count() const { return rows_.size(); }
  [[nodiscard]] std::size_t basic(std::size_t r) const { return basis_[r]; }
  [[nodiscard]] const Rational &at(std::size_t r, std::size_t j) const { return rows_[r][j]; }

private:
  std::vector<Rational> reduced_costs(const std::vector<Rational> &cost, std::size_t usable) const {
    std::vector<Rational> d(cost.begin(), cost.begin() + static_cast<std::ptrdiff_t>(usable));
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const auto &cb = cost[basis_[r]];
      if (cb == 0)
        continue;
      for (std::size_t j = 0; j < usable; ++j)
        if (rows_[r][j] != 0)
          d[j] -= cb * rows_[r][j];
    }
    return d;
  }

  std::vector<std::vector<Rational>> rows_;
  std::vector<Rational> rhs_;
  std::vector<std::size_t> basis_;
};

} // namespace

std::optional<FractionalSignal> solve_l1(const DesignMatrix &a, const MeasurementVector &y) {
  if (y.size() != a.rows())
    throw InputError("measurement count does not match matrix rows");
  const auto m = a.rows();
  const auto n = a.cols();
  // Columns: x_0..x_{n-1}, u_0..u_{n-1} (x_j + u_j = 1), then m artificials.
  const auto structural = 2 * n;
  const auto columns = structural + m;

  std::vector<std::vector<Rational>> rows;
  std::vector<Rational> rhs;
  std::vector<std::size_t> basis;
  rows.reserve(m + n);
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<Rational> row(columns, 0);
    for (std::size_t j = 0; j < n; ++j)
      if (a.at(i, j))
        row[j] = 1;
    row[structural + i] = 1;
    rows.push_back(std::move(row));
    rhs.emplace_back(y[i]);
    basis.push_back(structural + i);
  }
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Rational> row(columns, 0);
    row[j] = 1;
    row[n + j] = 1;
    rows.push_back(std::move(row));
    rhs.emplace_back(1);
    basis.push_back(n + j);
  }
  Tableau t(std::move(rows), std::move(rhs), std::move(basis));

  // Phase 1: drive the artificials to zero.
  std::vector<Rational> phase1(columns, 0);
  for (std::size_t i = 0; i < m; ++i)
    phase1[structural + i] = 1;
  t.optimize(phase1, columns);
  if (t.value(phase1) != 0)
    return std::nullopt;

  // Pivot remaining (zero-valued) artificials out; rows with no structural
  // entry are redundant equalities.
  for (std::size_t r = 0; r < t.row_count();) {
    if (t.basic(r) < structural) {
      ++r;
      continue;
    }
    std::size_t col = no_column;
    for (std::size_t j = 0; j < structural; ++j) {
      if (t.at(r, j) != 0) {
        col = j;
        break;
      }
    }
    if (col == no_column) {
      t.drop_row(r);
    } else {
      t.pivot(r, col);
      ++r;
    }
  }

  // Phase 2: min sum x over structural columns only.
  std::vector<Rational> phase2(columns, 0);
  for (std::size_t j = 0; j < n; ++j)
    phase2[j] = 1;
  t.optimize(phase2, structural);

  auto z = t.solution(structural);
  FractionalSignal out;
  out.values.assign(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(n));
  return out;
}

BinarySignal binarize(const FractionalSignal &xf, const Rational &threshold) {
  std::vector<std::uint8_t> bits;
  bits.reserve(xf.values.size());
  for (const auto &v : xf.values)
    bits.push_back(v >= threshold ? 1 : 0);
  return BinarySignal(std::move(bits));
}

RecoveryReport recover_l1(const SensingInstance &inst) {
  auto start = std::chrono::steady_clock::now();
  RecoveryReport report;
  report.method = Method::l1;
  auto xf = solve_l1(inst.matrix(), inst.measurements());
  if (xf) {
    report.recovered = binarize(*xf);
  } else {
    report.feasible = false;
    report.recovered = BinarySignal::zeros(inst.signal_size());
  }
  report.cost = sparsity(report.recovered);
  if (inst.truth())
    report.exact = report.feasible && report.recovered == *inst.truth();
  report.elapsed = std::chrono::steady_clock::now() - start;
  return report;
}

} // namespace satcs
