#include "kronmle/thresholds.hpp"

#include <algorithm>
#include <sstream>

#include "kronmle/errors.hpp"

namespace kronmle {

namespace {

struct Exact {
  int bounded, exists, unique;
  ThresholdSource source;
};

// First applicable rule for big >= small >= 1.  Rules overlap on boundary
// shapes (big = 2*small is both near-square and divisible) but agree there.
std::optional<Exact> resolve(int big, int small) {
  if (small == 1)
    return Exact{big, big, big, ThresholdSource::VectorCase};
  if (big == small)
    return Exact{1, 1, 3, ThresholdSource::SquareCase};
  if (2 * small >= big) {
    int unique = big == small + 1 ? 2 : 3;
    int attained = small % (big - small) == 0 ? 2 : 3;
    return Exact{attained, attained, unique, ThresholdSource::NearSquare};
  }
  if (big % small == 0) {
    int q = big / small;
    return Exact{q, q, q + 1, ThresholdSource::DivisibleCase};
  }
  int r = big % small;
  int h = big / small;
  if (h * small * (small - r) > small * (small - r) + r * r)
    return Exact{h + 1, h + 1, h + 1, ThresholdSource::LargeRatio};
  // The one shape with both sides at most 10 that the rules above miss.
  if (big == 8 && small == 3)
    return Exact{3, 3, 3, ThresholdSource::LookupTable};
  return std::nullopt;
}

}  // namespace

ThresholdReport thresholds(int m1, int m2, bool mean_unknown) {
  if (m1 < 1 || m2 < 1)
    throw DimensionError("thresholds need positive dimensions");
  int big = std::max(m1, m2);
  int small = std::min(m1, m2);

  ThresholdReport rep;
  rep.m1 = m1;
  rep.m2 = m2;
  rep.mean_unknown = mean_unknown;
  rep.lower = (big + small - 1) / small;
  rep.upper = (big * big + small * small) / (big * small) + 1;
  if (auto exact = resolve(big, small)) {
    rep.bounded = exact->bounded;
    rep.exists = exact->exists;
    rep.unique = exact->unique;
    rep.source = exact->source;
  } else {
    rep.source = ThresholdSource::BoundsOnly;
  }
  if (mean_unknown) {
    ++rep.lower;
    ++rep.upper;
    if (rep.bounded) ++*rep.bounded;
    if (rep.exists) ++*rep.exists;
    if (rep.unique) ++*rep.unique;
  }
  return rep;
}

const char* threshold_source_name(ThresholdSource source) {
  switch (source) {
    case ThresholdSource::VectorCase: return "vector";
    case ThresholdSource::SquareCase: return "square";
    case ThresholdSource::NearSquare: return "near-square";
    case ThresholdSource::DivisibleCase: return "divisible";
    case ThresholdSource::LargeRatio: return "large-ratio";
    case ThresholdSource::LookupTable: return "table";
    case ThresholdSource::BoundsOnly: return "bounds";
  }
  return "unknown";
}

std::string threshold_table_csv(int max_m1, bool mean_unknown) {
  if (max_m1 < 1) throw InvalidArgument("table needs max_m1 >= 1");
  std::ostringstream out;
  out << "m1,m2,bounded,exists,unique,lower,upper,source\n";
  for (int m1 = 1; m1 <= max_m1; ++m1)
    for (int m2 = 1; m2 <= m1; ++m2) {
      ThresholdReport rep = thresholds(m1, m2, mean_unknown);
      out << m1 << "," << m2 << ",";
      if (rep.bounded) out << *rep.bounded;
      out << ",";
      if (rep.exists) out << *rep.exists;
      out << ",";
      if (rep.unique) out << *rep.unique;
      out << "," << rep.lower << "," << rep.upper << ","
          << threshold_source_name(rep.source) << "\n";
    }
  return out.str();
}

}  // namespace kronmle
