#pragma once

namespace mrubis::shop {

/// Harness defaults; every value can be overridden from the run configuration.
struct Thresholds {
    /// A component throwing more exceptions than this in its current deployment is failed (CF2).
    int cf2ExceptionThreshold = 5;
    /// The n-th CF1/CF2 hit on the same component is a CF4.
    int cf4RepeatCount = 3;
    double responseTimeUpperMs = 200.0;
    double responseTimeLowerMs = 60.0;
    double baseQueryTimeMs = 20.0;

    /// Throws std::invalid_argument unless
    /// 0 <= baseQueryTime < responseTimeLower < responseTimeUpper and the counts are positive.
    void validate() const;
};

}  // namespace mrubis::shop
