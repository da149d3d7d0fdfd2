#include "tna/format.hpp"

#include <cstdio>

namespace tna {

std::string format_double(double value, int significant_digits) {
    if (value == 0.0) {
        value = 0.0;  // collapse -0
    }
    if (significant_digits < 1) {
        significant_digits = 1;
    } else if (significant_digits > 17) {
        significant_digits = 17;
    }
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*g", significant_digits, value);
    return buf;
}

}  // namespace tna
