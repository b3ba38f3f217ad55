#include "qmlab/growth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qmlab {

double loglog_slope(const std::vector<GrowthPoint>& series) {
    const double count = static_cast<double>(series.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& p : series) {
        const double x = std::log(static_cast<double>(p.n));
        const double y = std::log(static_cast<double>(std::max<std::uint64_t>(p.steps, 1)));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = count * sxx - sx * sx;
    if (denom == 0) throw std::invalid_argument("degenerate series");
    return (count * sxy - sx * sy) / denom;
}

GrowthReport fit_growth(std::vector<GrowthPoint> series) {
    if (series.size() < 4) throw std::invalid_argument("growth fit needs at least 4 points");
    std::sort(series.begin(), series.end(), [](const GrowthPoint& a, const GrowthPoint& b) { return a.n < b.n; });
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (series[i].n < 2) throw std::invalid_argument("growth fit needs n >= 2");
        if (i && series[i].n == series[i - 1].n) throw std::invalid_argument("growth fit needs distinct n");
    }

    GrowthReport r;
    r.fitted_exponent = loglog_slope(series);
    r.min_ratio = r.max_ratio = static_cast<double>(series[0].steps) / static_cast<double>(series[0].n);
    for (const auto& p : series) {
        const double ratio = static_cast<double>(p.steps) / static_cast<double>(p.n);
        r.min_ratio = std::min(r.min_ratio, ratio);
        r.max_ratio = std::max(r.max_ratio, ratio);
    }
    r.linear = r.fitted_exponent <= kLinearSlopeLimit && r.min_ratio > 0 &&
               r.max_ratio / r.min_ratio <= kLinearRatioSpread;
    r.series = std::move(series);
    return r;
}

}  // namespace qmlab
