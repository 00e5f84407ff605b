#include "mrubis/shop/thresholds.hpp"

#include <stdexcept>

#include <fmt/format.h>

namespace mrubis::shop {

void Thresholds::validate() const {
    if (cf2ExceptionThreshold < 1) {
        throw std::invalid_argument(fmt::format("cf2_exception_threshold must be positive, got {}", cf2ExceptionThreshold));
    }
    if (cf4RepeatCount < 1) {
        throw std::invalid_argument(fmt::format("cf4_repeat_count must be positive, got {}", cf4RepeatCount));
    }
    if (!(baseQueryTimeMs >= 0.0)) {
        throw std::invalid_argument(fmt::format("base_query_time_ms must be non-negative, got {}", baseQueryTimeMs));
    }
    if (!(baseQueryTimeMs < responseTimeLowerMs)) {
        throw std::invalid_argument(fmt::format("base_query_time_ms ({}) must be below response_time_lower_ms ({})",
                                                baseQueryTimeMs, responseTimeLowerMs));
    }
    if (!(responseTimeLowerMs < responseTimeUpperMs)) {
        throw std::invalid_argument(fmt::format("response_time_lower_ms ({}) must be below response_time_upper_ms ({})",
                                                responseTimeLowerMs, responseTimeUpperMs));
    }
}

}  // namespace mrubis::shop
