#pragma once

#include <cstdint>
#include <vector>

namespace qmlab {

struct GrowthPoint {
    std::uint64_t n = 0;
    std::uint64_t steps = 0;
};

/// Empirical growth of steps against input length.
struct GrowthReport {
    std::vector<GrowthPoint> series;   // sorted by n
    double fitted_exponent = 0.0;      // least-squares slope of log steps vs log n
    double max_ratio = 0.0;            // max steps/n
    double min_ratio = 0.0;
    bool linear = false;
};

inline constexpr double kLinearSlopeLimit = 1.05;
inline constexpr double kLinearRatioSpread = 3.0;

/// Sorts the series and fits it. The verdict is linear iff the slope is at
/// most 1.05 and max_ratio / min_ratio is at most 3. Throws
/// std::invalid_argument for fewer than 4 points, repeated n, or n < 2.
GrowthReport fit_growth(std::vector<GrowthPoint> series);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<GrowthPoint>& series);

}  // namespace qmlab
