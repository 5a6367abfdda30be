#include "linkmodel/csv.hpp"

#include <charconv>
#include <stdexcept>

namespace linkmodel::csv {

std::string format_double(double value) {
  char buffer[40];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (result.ec != std::errc{}) {
    throw std::runtime_error("failed to format a double");
  }
  return std::string(buffer, result.ptr);
}

}  // namespace linkmodel::csv
