#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "lfmkit/error.hpp"
#include "lfmkit/series.hpp"

namespace lfmkit {

/// Simple linear regression y = intercept + slope * x with classical
/// (homoskedastic) diagnostics.
struct LinearFitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double intercept_stderr = 0.0;
    double r_squared = 0.0;
    /// sqrt(SSR / (n - 2))
    double residual_stdev = 0.0;
    std::size_t n = 0;
    YearRange period;
};

struct LagScanEntry {
    int lag = 0;
    double r_squared = 0.0;
    std::size_t n = 0;
};

struct LagSearchResult {
    int best_lag = 0;
    LinearFitResult fit;
    /// One entry per lag that produced a regression, in increasing lag order.
    std::vector<LagScanEntry> scan;
    /// Lags that were skipped, with the reason.
    std::vector<std::string> warnings;
};

/// Ordinary least squares of y on x over their common years.
///
/// Works on centered sums.  When y is constant the fit is exact and
/// r_squared is reported as 1.
[[nodiscard]] inline LinearFitResult ols(const AnnualSeries& x, const AnnualSeries& y) {
    const auto pair = align(x, y);
    const auto xs = pair.x.values();
    const auto ys = pair.y.values();
    const std::size_t n = xs.size();
    if (n < 3) {
        throw InsufficientDataError("regression of '" + y.label() + "' on '" + x.label() + "' has " +
                                    std::to_string(n) + " common years, need at least 3");
    }
    const auto nd = static_cast<double>(n);
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mean_x += xs[i];
        mean_y += ys[i];
    }
    mean_x /= nd;
    mean_y /= nd;

    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - mean_x;
        const double dy = ys[i] - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0)) {
        throw DegenerateRegressorError("regressor '" + x.label() + "' is constant over " +
                                       pair.common_window.to_string());
    }

    LinearFitResult fit;
    fit.n = n;
    fit.period = pair.common_window;
    fit.slope = sxy / sxx;
    fit.intercept = mean_y - fit.slope * mean_x;

    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = ys[i] - fit.intercept - fit.slope * xs[i];
        ssr += e * e;
    }
    fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ssr / syy, 0.0, 1.0) : 1.0;
    const double sigma2 = ssr / (nd - 2.0);
    fit.residual_stdev = std::sqrt(sigma2);
    fit.slope_stderr = std::sqrt(sigma2 / sxx);
    fit.intercept_stderr = std::sqrt(sigma2 * (1.0 / nd + mean_x * mean_x / sxx));
    return fit;
}

inline constexpr int kDefaultMaxLag = 6;

/// Regresses y(t) on x(t - lag) for lag = 0..max_lag over the lag-dependent
/// overlap and keeps the lag with the largest R^2 (ties go to the smaller
/// lag).  Lags with fewer than three overlapping years, or a constant
/// regressor, are skipped with a warning.
[[nodiscard]] inline LagSearchResult lag_search(const AnnualSeries& x, const AnnualSeries& y,
                                                int max_lag = kDefaultMaxLag) {
    if (max_lag < 0) {
        throw DomainError("max_lag must be non-negative, got " + std::to_string(max_lag));
    }
    LagSearchResult result;
    std::optional<LinearFitResult> best;
    for (int lag = 0; lag <= max_lag; ++lag) {
        const auto shifted = lag_shift(x, lag);
        try {
            auto fit = ols(shifted, y);
            result.scan.push_back({lag, fit.r_squared, fit.n});
            if (!best || fit.r_squared > best->r_squared) {
                best = fit;
                result.best_lag = lag;
            }
        } catch (const AlignmentError& e) {
            result.warnings.push_back("lag " + std::to_string(lag) + " skipped: " + e.what());
        } catch (const InsufficientDataError& e) {
            result.warnings.push_back("lag " + std::to_string(lag) + " skipped: " + e.what());
        } catch (const DegenerateRegressorError& e) {
            result.warnings.push_back("lag " + std::to_string(lag) + " skipped: " + e.what());
        }
    }
    if (!best) {
        throw InsufficientDataError("no lag in 0.." + std::to_string(max_lag) + " leaves 3 usable years for '" +
                                    y.label() + "' on '" + x.label() + "'");
    }
    result.fit = *best;
    return result;
}

}  // namespace lfmkit
