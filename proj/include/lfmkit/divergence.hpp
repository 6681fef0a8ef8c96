#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "lfmkit/registry.hpp"
#include "lfmkit/series.hpp"

namespace lfmkit {

enum class Transform { levels, change_rate };

/// Agreement statistics between two versions of the same quantity.
struct DivergenceReport {
    YearRange common_window;
    double max_abs_diff = 0.0;
    int max_abs_diff_year = 0;
    double mean_abs_diff = 0.0;
    /// Pearson correlation; 1 when both sides are constant, 0 when only one is.
    double correlation = 0.0;
};

/// Compares two series over their common years, optionally after turning
/// levels into change rates.
[[nodiscard]] inline DivergenceReport compare_series(const AnnualSeries& a, const AnnualSeries& b,
                                                     Transform transform = Transform::levels) {
    const auto pair = transform == Transform::change_rate ? align(change_rate(a), change_rate(b)) : align(a, b);
    const auto x = pair.x.values();
    const auto y = pair.y.values();
    const auto n = static_cast<double>(x.size());

    DivergenceReport rep;
    rep.common_window = pair.common_window;
    rep.max_abs_diff_year = pair.common_window.first;
    double sum_abs = 0.0;
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = std::abs(x[i] - y[i]);
        sum_abs += d;
        if (d > rep.max_abs_diff) {
            rep.max_abs_diff = d;
            rep.max_abs_diff_year = pair.common_window.first + static_cast<int>(i);
        }
        mean_x += x[i];
        mean_y += y[i];
    }
    rep.mean_abs_diff = std::min(sum_abs / n, rep.max_abs_diff);
    mean_x /= n;
    mean_y /= n;

    double sxx = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mean_x;
        const double dy = y[i] - mean_y;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx > 0.0 && syy > 0.0) {
        rep.correlation = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
    } else {
        rep.correlation = (sxx == 0.0 && syy == 0.0) ? 1.0 : 0.0;
    }
    return rep;
}

[[nodiscard]] inline DivergenceReport compare_sources(const DatasetRegistry& reg, const DatasetKey& a,
                                                      const DatasetKey& b, Transform transform = Transform::levels) {
    return compare_series(reg.get(a), reg.get(b), transform);
}

}  // namespace lfmkit
