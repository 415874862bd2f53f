#include "satcs/model.hpp"

#include "satcs/errors.hpp"
#include "text.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

namespace satcs {

BinarySignal::BinarySignal(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  if (bits_.empty())
    throw InputError("signal must have at least one entry");
  for (auto b : bits_)
    if (b > 1)
      throw InputError("signal entries must be 0 or 1");
}

BinarySignal BinarySignal::zeros(std::size_t n) {
  return BinarySignal(std::vector<std::uint8_t>(n, 0));
}

BinarySignal BinarySignal::ones(std::size_t n) {
  return BinarySignal(std::vector<std::uint8_t>(n, 1));
}

BinarySignal BinarySignal::from_string(std::string_view digits) {
  std::vector<std::uint8_t> bits;
  bits.reserve(digits.size());
  for (char c : digits) {
    if (c != '0' && c != '1')
      throw InputError("signal digits must be 0 or 1");
    bits.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return BinarySignal(std::move(bits));
}

std::string BinarySignal::to_string() const {
  std::string s;
  s.reserve(bits_.size());
  for (auto b : bits_)
    s.push_back(static_cast<char>('0' + b));
  return s;
}

DesignMatrix::DesignMatrix(std::size_t rows, std::size_t cols, std::vector<std::uint8_t> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows_ == 0 || cols_ == 0)
    throw InputError("design matrix needs at least one row and one column");
  if (entries_.size() != rows_ * cols_)
    throw InputError("design matrix entry count does not match its shape");
  for (auto e : entries_)
    if (e > 1)
      throw InputError("design matrix entries must be 0 or 1");
}

DesignMatrix DesignMatrix::identity(std::size_t n) {
  std::vector<std::uint8_t> e(n * n, 0);
  for (std::size_t i = 0; i < n; ++i)
    e[i * n + i] = 1;
  return {n, n, std::move(e)};
}

DesignMatrix DesignMatrix::from_rows(const std::vector<std::vector<int>> &rows) {
  if (rows.empty())
    throw InputError("design matrix needs at least one row");
  std::size_t cols = rows.front().size();
  std::vector<std::uint8_t> e;
  e.reserve(rows.size() * cols);
  for (const auto &r : rows) {
    if (r.size() != cols)
      throw InputError("ragged design matrix");
    for (int v : r) {
      if (v != 0 && v != 1)
        throw InputError("design matrix entries must be 0 or 1");
      e.push_back(static_cast<std::uint8_t>(v));
    }
  }
  return {rows.size(), cols, std::move(e)};
}

std::vector<std::size_t> DesignMatrix::support(std::size_t i) const {
  std::vector<std::size_t> s;
  auto r = row(i);
  for (std::size_t j = 0; j < r.size(); ++j)
    if (r[j])
      s.push_back(j);
  return s;
}

bool MeasurementVector::is_zero() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](auto v) { return v == 0; });
}

SensingInstance::SensingInstance(DesignMatrix matrix, MeasurementVector measurements,
                                 std::optional<BinarySignal> truth, InstanceMeta meta)
    : matrix_(std::move(matrix)), measurements_(std::move(measurements)), truth_(std::move(truth)),
      meta_(meta) {
  if (measurements_.size() != matrix_.rows())
    throw InputError("measurement count does not match matrix rows");
  for (auto v : measurements_.values())
    if (v > matrix_.cols())
      throw InputError("measurement exceeds signal length");
  if (truth_) {
    if (truth_->size() != matrix_.cols())
      throw InputError("truth length does not match matrix columns");
    if (measure(matrix_, *truth_) != measurements_)
      throw InputError("measurements are not A*truth");
    meta_.sparsity = sparsity(*truth_);
  }
}

std::string_view to_string(Method method) noexcept {
  switch (method) {
  case Method::sat:
    return "sat";
  case Method::l1:
    return "l1";
  case Method::brute:
    return "brute";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  if (name == "sat")
    return Method::sat;
  if (name == "l1")
    return Method::l1;
  if (name == "brute")
    return Method::brute;
  throw InputError("unknown method '" + std::string(name) + "'");
}

MeasurementVector measure(const DesignMatrix &a, const BinarySignal &x) {
  if (x.size() != a.cols())
    throw InputError("signal length " + std::to_string(x.size()) + " does not match " +
                     std::to_string(a.cols()) + " matrix columns");
  std::vector<std::uint32_t> y(a.rows(), 0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto r = a.row(i);
    for (std::size_t j = 0; j < r.size(); ++j)
      y[i] += r[j] & x.bits()[j];
  }
  return MeasurementVector(std::move(y));
}

std::size_t sparsity(const BinarySignal &x) noexcept {
  return static_cast<std::size_t>(std::count(x.bits().begin(), x.bits().end(), 1));
}

double recovery_error(const BinarySignal &x, const BinarySignal &xhat) {
  if (x.size() != xhat.size())
    throw InputError("signals differ in length");
  std::size_t diff = 0;
  for (std::size_t j = 0; j < x.size(); ++j)
    diff += x[j] != xhat[j];
  return static_cast<double>(diff) / static_cast<double>(x.size());
}

double recovery_error(const BinarySignal &truth, const RecoveryReport &report) {
  if (!report.feasible)
    return 1.0;
  return recovery_error(truth, report.recovered);
}

void write_instance(std::ostream &out, const SensingInstance &inst) {
  const auto &a = inst.matrix();
  out << "cs " << a.rows() << ' ' << a.cols() << '\n';
  out << 'y';
  for (auto v : inst.measurements().values())
    out << ' ' << v;
  out << '\n';
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto r = a.row(i);
    for (std::size_t j = 0; j < r.size(); ++j)
      out << (j ? " " : "") << static_cast<int>(r[j]);
    out << '\n';
  }
  if (inst.truth()) {
    out << 'x';
    for (auto b : inst.truth()->bits())
      out << ' ' << static_cast<int>(b);
    out << '\n';
  }
}

std::string format_instance(const SensingInstance &inst) {
  std::ostringstream os;
  write_instance(os, inst);
  return os.str();
}

namespace {

std::vector<std::uint8_t> parse_bits(const detail::Line &line,
                                     std::span<const std::string_view> tokens, std::size_t n) {
  if (tokens.size() != n)
    throw ParseError(line.number, "expected " + std::to_string(n) + " binary digits, got " +
                                      std::to_string(tokens.size()));
  std::vector<std::uint8_t> bits;
  bits.reserve(n);
  for (auto t : tokens) {
    if (t != "0" && t != "1")
      throw ParseError(line.number, "entry '" + std::string(t) + "' is not 0 or 1");
    bits.push_back(static_cast<std::uint8_t>(t[0] - '0'));
  }
  return bits;
}

} // namespace

SensingInstance parse_instance(std::string_view text) {
  auto lines = detail::split_lines(text);
  // Trailing blank lines are tolerated; nothing else is.
  while (!lines.empty() && detail::split_ws(lines.back().text).empty())
    lines.pop_back();
  if (lines.empty())
    throw ParseError(1, "empty instance");

  auto header = detail::split_ws(lines[0].text);
  if (header.size() != 3 || header[0] != "cs")
    throw ParseError(1, "expected header 'cs <m> <N>'");
  auto m = detail::parse_number<std::size_t>(header[1]);
  auto n = detail::parse_number<std::size_t>(header[2]);
  if (!m || !n || *m == 0 || *n == 0)
    throw ParseError(1, "dimensions must be positive integers");

  if (lines.size() < 2 + *m)
    throw ParseError(lines.back().number, "instance truncated before all matrix rows");

  auto ytok = detail::split_ws(lines[1].text);
  if (ytok.empty() || ytok[0] != "y" || ytok.size() != *m + 1)
    throw ParseError(2, "expected 'y' followed by " + std::to_string(*m) + " integers");
  std::vector<std::uint32_t> y;
  for (std::size_t i = 1; i < ytok.size(); ++i) {
    auto v = detail::parse_number<std::uint32_t>(ytok[i]);
    if (!v || *v > *n)
      throw ParseError(2, "measurement '" + std::string(ytok[i]) + "' outside [0, N]");
    y.push_back(*v);
  }

  std::vector<std::uint8_t> entries;
  entries.reserve(*m * *n);
  for (std::size_t i = 0; i < *m; ++i) {
    const auto &line = lines[2 + i];
    auto row = parse_bits(line, detail::split_ws(line.text), *n);
    entries.insert(entries.end(), row.begin(), row.end());
  }

  std::optional<BinarySignal> truth;
  std::size_t next = 2 + *m;
  if (next < lines.size()) {
    const auto &line = lines[next];
    auto tok = detail::split_ws(line.text);
    if (tok.empty() || tok[0] != "x")
      throw ParseError(line.number, "expected optional 'x' ground-truth line");
    truth = BinarySignal(parse_bits(line, std::span(tok).subspan(1), *n));
    if (next + 1 < lines.size())
      throw ParseError(lines[next + 1].number, "unexpected content after ground truth");
  }

  try {
    return SensingInstance(DesignMatrix(*m, *n, std::move(entries)),
                           MeasurementVector(std::move(y)), std::move(truth));
  } catch (const InputError &e) {
    throw ParseError(next < lines.size() ? lines[next].number : 2, e.what());
  }
}

} // namespace satcs
