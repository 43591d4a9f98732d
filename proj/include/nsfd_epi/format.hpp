#pragma once

#include <string>

namespace nsfd_epi {

/// Shortest decimal string that parses back to exactly `value`.
std::string format_number(double value);

} // namespace nsfd_epi
