#pragma once

#include "satcs/maxsat.hpp"
#include "satcs/model.hpp"

#include <optional>

namespace satcs {

/// Largest signal the exhaustive l0 oracle accepts.
inline constexpr std::size_t brute_force_l0_limit = 24;

/// A minimum-sparsity x with A x = y, found by enumerating supports in order
/// of increasing weight (lexicographic within a weight). nullopt when no
/// binary x fits. Throws InputError when N exceeds the limit or shapes differ.
[[nodiscard]] std::optional<BinarySignal> brute_force_l0(const DesignMatrix &a,
                                                         const MeasurementVector &y);

/// Encodes the instance, solves the weighted MaxSAT exactly and decodes x.
[[nodiscard]] RecoveryReport recover_sat(const SensingInstance &inst,
                                         const MaxSatOptions &options = {});
[[nodiscard]] RecoveryReport recover_brute(const SensingInstance &inst);
[[nodiscard]] RecoveryReport recover(const SensingInstance &inst, Method method);

} // namespace satcs
