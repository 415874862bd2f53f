#pragma once

// l1 baseline: min sum(x) s.t. A x = y, 0 <= x <= 1, solved exactly over the
// rationals, followed by thresholding back to a binary signal.

#include "satcs/model.hpp"

#include <gmpxx.h>

#include <optional>
#include <vector>

namespace satcs {

using Rational = mpq_class;

struct FractionalSignal {
  std::vector<Rational> values; // each in [0, 1]

  [[nodiscard]] Rational objective() const;
};

/// Optimal basic solution of the box-constrained l1 program, or nullopt when
/// no x in [0,1]^N satisfies A x = y. Two-phase simplex, Bland's rule.
[[nodiscard]] std::optional<FractionalSignal> solve_l1(const DesignMatrix &a,
                                                       const MeasurementVector &y);

/// Bit j is 1 iff value_j >= threshold.
[[nodiscard]] BinarySignal binarize(const FractionalSignal &xf,
                                    const Rational &threshold = Rational(1, 2));

[[nodiscard]] RecoveryReport recover_l1(const SensingInstance &inst);

} // namespace satcs
