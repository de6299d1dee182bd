#ifndef KRONMLE_THRESHOLDS_HPP
#define KRONMLE_THRESHOLDS_HPP

#include <optional>
#include <string>

namespace kronmle {

/// How a threshold value was determined.
enum class ThresholdSource {
  VectorCase,      // m2 = 1
  SquareCase,      // m1 = m2
  NearSquare,      // 2*m2 >= m1 > m2
  DivisibleCase,   // m2 | m1, m1 > m2
  LargeRatio,      // h*m2*(m2-r) > m2*(m2-r) + r^2 with r = m1 mod m2 >= 1
  LookupTable,     // stored values for m1, m2 <= 10
  BoundsOnly,      // only the general bracket is known
};

/// Exact sample-size thresholds for the Kronecker covariance model on
/// m1 x m2 observations:
///   bounded: smallest n with a bounded likelihood almost surely,
///   exists:  smallest n with a maximum attained almost surely,
///   unique:  smallest n with a unique maximum almost surely.
/// Always bounded <= exists <= unique.  When a value is not known exactly
/// the optional is empty and [lower, upper] brackets it.
struct ThresholdReport {
  int m1;
  int m2;
  bool mean_unknown;
  std::optional<int> bounded;
  std::optional<int> exists;
  std::optional<int> unique;
  int lower;  // shared lower bound for all three
  int upper;  // shared upper bound for all three
  ThresholdSource source;

  [[nodiscard]] bool exact() const {
    return bounded.has_value() && exists.has_value() && unique.has_value();
  }
};

/// Computes thresholds by the first applicable rule: vector case, square
/// case, near-square (2*m2 >= m1 > m2), divisible (m2 | m1), the large-ratio
/// sufficient condition, stored small-dimension values (m1, m2 <= 10), else
/// bounds only.  Unknown mean adds one observation to every value and bound.
/// Orientation-symmetric: dimensions are sorted so m1 >= m2 internally.
[[nodiscard]] ThresholdReport thresholds(int m1, int m2,
                                         bool mean_unknown = false);

/// CSV table for 1 <= m2 <= m1 <= max_m1 with one row per (m1, m2) and
/// columns m1, m2, bounded, exists, unique, lower, upper, source.  Inexact
/// values render as empty cells.
[[nodiscard]] std::string threshold_table_csv(int max_m1,
                                              bool mean_unknown = false);

[[nodiscard]] const char* threshold_source_name(ThresholdSource source);

}  // namespace kronmle

#endif
