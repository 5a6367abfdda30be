#pragma once

#include <string>

namespace linkmodel::csv {

/// Shortest decimal representation that round-trips to the same double.
/// Keeps repeated runs byte-identical.
std::string format_double(double value);

}  // namespace linkmodel::csv
