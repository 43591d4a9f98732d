#include "nsfd_epi/format.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace nsfd_epi {

std::string format_number(double value)
{
    if (std::isnan(value))
        return "nan";
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    if (value == 0.0)
        value = 0.0; // folds -0 into 0
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), res.ptr);
}

} // namespace nsfd_epi
