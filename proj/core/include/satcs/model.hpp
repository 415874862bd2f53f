#pragma once

// Domain values for binary compressive sensing: signals, binary design
// matrices, measurement vectors and the instance bundle tying them together.

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace satcs {

/// A vector x in {0,1}^N. Never empty.
class BinarySignal {
public:
  explicit BinarySignal(std::vector<std::uint8_t> bits);

  static BinarySignal zeros(std::size_t n);
  static BinarySignal ones(std::size_t n);
  /// Parses a run of '0'/'1' characters, e.g. "0110".
  static BinarySignal from_string(std::string_view digits);

  [[nodiscard]] std::size_t size() const noexcept { return bits_.size(); }
  [[nodiscard]] bool operator[](std::size_t j) const noexcept { return bits_[j] != 0; }
  [[nodiscard]] std::span<const std::uint8_t> bits() const noexcept { return bits_; }
  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const BinarySignal &, const BinarySignal &) = default;

private:
  std::vector<std::uint8_t> bits_;
};

/// Dense m x N matrix over {0,1}, row-major.
class DesignMatrix {
public:
  DesignMatrix(std::size_t rows, std::size_t cols, std::vector<std::uint8_t> entries);
  static DesignMatrix identity(std::size_t n);
  static DesignMatrix from_rows(const std::vector<std::vector<int>> &rows);

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  [[nodiscard]] bool at(std::size_t i, std::size_t j) const noexcept {
    return entries_[i * cols_ + j] != 0;
  }
  [[nodiscard]] std::span<const std::uint8_t> row(std::size_t i) const noexcept {
    return {entries_.data() + i * cols_, cols_};
  }
  /// Column indices j with A_ij = 1, ascending.
  [[nodiscard]] std::vector<std::size_t> support(std::size_t i) const;

  friend bool operator==(const DesignMatrix &, const DesignMatrix &) = default;

private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<std::uint8_t> entries_;
};

/// y in N^m. Values are bounded by the column count of the matrix that produced them.
class MeasurementVector {
public:
  MeasurementVector() = default;
  explicit MeasurementVector(std::vector<std::uint32_t> values) : values_(std::move(values)) {}

  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] std::uint32_t operator[](std::size_t i) const noexcept { return values_[i]; }
  [[nodiscard]] std::span<const std::uint32_t> values() const noexcept { return values_; }
  [[nodiscard]] bool is_zero() const noexcept;

  friend bool operator==(const MeasurementVector &, const MeasurementVector &) = default;

private:
  std::vector<std::uint32_t> values_;
};

struct InstanceMeta {
  std::uint64_t seed = 0;
  double bernoulli_p = 0.5;
  std::size_t sparsity = 0;

  friend bool operator==(const InstanceMeta &, const InstanceMeta &) = default;
};

/// A = matrix, y = measurements, and optionally the signal that produced y.
/// Construction checks dimensions, measurement range, and y = A*truth.
class SensingInstance {
public:
  SensingInstance(DesignMatrix matrix, MeasurementVector measurements,
                  std::optional<BinarySignal> truth = std::nullopt, InstanceMeta meta = {});

  [[nodiscard]] const DesignMatrix &matrix() const noexcept { return matrix_; }
  [[nodiscard]] const MeasurementVector &measurements() const noexcept { return measurements_; }
  [[nodiscard]] const std::optional<BinarySignal> &truth() const noexcept { return truth_; }
  [[nodiscard]] const InstanceMeta &meta() const noexcept { return meta_; }
  [[nodiscard]] std::size_t signal_size() const noexcept { return matrix_.cols(); }
  [[nodiscard]] std::size_t measurement_count() const noexcept { return matrix_.rows(); }

  friend bool operator==(const SensingInstance &, const SensingInstance &) = default;

private:
  DesignMatrix matrix_;
  MeasurementVector measurements_;
  std::optional<BinarySignal> truth_;
  InstanceMeta meta_;
};

enum class Method { sat, l1, brute };

[[nodiscard]] std::string_view to_string(Method method) noexcept;
/// Throws InputError on an unknown name.
[[nodiscard]] Method parse_method(std::string_view name);

struct RecoveryReport {
  Method method = Method::sat;
  BinarySignal recovered = BinarySignal::zeros(1);
  std::size_t cost = 0; // sparsity(recovered)
  /// False when the method produced no candidate (infeasible LP or unsat encoding);
  /// `recovered` is then the zero signal and error is reported as 1.
  bool feasible = true;
  std::optional<bool> exact; // set iff the instance carries a truth
  std::chrono::nanoseconds elapsed{0};
};

/// y_i = sum_j A_ij x_j. Throws InputError if x.size() != A.cols().
[[nodiscard]] MeasurementVector measure(const DesignMatrix &a, const BinarySignal &x);

[[nodiscard]] std::size_t sparsity(const BinarySignal &x) noexcept;

/// Hamming distance divided by N. Throws InputError on length mismatch.
[[nodiscard]] double recovery_error(const BinarySignal &x, const BinarySignal &xhat);

/// Error of a report against a truth, with the infeasible-means-1 convention.
[[nodiscard]] double recovery_error(const BinarySignal &truth, const RecoveryReport &report);

/// Instance text format:
///   cs <m> <N>
///   y <m integers>
///   <N digits>            (m lines)
///   x <N digits>          (optional)
void write_instance(std::ostream &out, const SensingInstance &inst);
[[nodiscard]] std::string format_instance(const SensingInstance &inst);
/// Throws ParseError (with line number) on malformed input.
[[nodiscard]] SensingInstance parse_instance(std::string_view text);

} // namespace satcs
