#ifndef KRONMLE_FLIPFLOP_HPP
#define KRONMLE_FLIPFLOP_HPP

#include "kronmle/types.hpp"

namespace kronmle {

/// One full update cycle from the current column precision:
///   psi1' = ((1/(n m2)) sum_i Y_i psi2 Y_i^T)^{-1},
///   psi2' = ((1/(n m1)) sum_i Y_i^T psi1' Y_i)^{-1}.
/// Requires n*m2 >= m1 and n*m1 >= m2 (else StepIllDefined); throws
/// DegenerateSample if an inner sum is numerically singular.
[[nodiscard]] PrecisionPair flip_flop_step(const DataSample& sample,
                                           const SpdMatrix& psi2);

/// Iterates flip_flop_step from the configured start until the profile
/// objective stalls (|delta| <= rel_tol * (1 + |g|)), a trailing window of
/// deltas certifies steady descent without convergence (Diverged), or the
/// iteration budget runs out.  The column factor is renormalized to unit
/// trace each cycle; g_trace[0] is the value at the start.
///
/// A converged run is labelled UniqueMax or NonUniqueMax by the first
/// applicable rule: the exact n = 2 statistic when it applies to the data's
/// shape, the exact sample-size thresholds when they are known for the
/// shape, otherwise agreement of restarts from five random starts (distinct
/// limits up to scale mean a non-unique maximum).
[[nodiscard]] FitReport fit(const DataSample& sample,
                            const FlipFlopConfig& config = FlipFlopConfig{});

}  // namespace kronmle

#endif
