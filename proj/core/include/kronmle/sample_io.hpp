#ifndef KRONMLE_SAMPLE_IO_HPP
#define KRONMLE_SAMPLE_IO_HPP

#include <string>

#include "kronmle/types.hpp"

namespace kronmle {

/// JSON sample format:
///   {"m1": 3, "m2": 2, "n": 2, "matrices": [[[...], ...], ...]}
/// where matrices[i] is row-major, m1 rows of m2 numbers.  Non-finite
/// entries, shape mismatches, and malformed documents raise InvalidArgument.
[[nodiscard]] DataSample parse_sample_json(const std::string& text);
[[nodiscard]] std::string sample_to_json(const DataSample& sample);

[[nodiscard]] DataSample read_sample_json(const std::string& path);
void write_sample_json(const std::string& path, const DataSample& sample);

}  // namespace kronmle

#endif
