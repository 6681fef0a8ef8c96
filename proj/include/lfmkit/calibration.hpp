#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lfmkit/error.hpp"
#include "lfmkit/series.hpp"

namespace lfmkit {

/// single_driver: y(t) = A + B * r(t - lag)
/// generalized:   pi(t) = D1 * r(t) + D2 * UE(t) + D3
/// where r is the labor-force change rate.
enum class ModelFamily { single_driver, generalized };

[[nodiscard]] inline std::vector<std::string_view> coefficient_names(ModelFamily family) {
    if (family == ModelFamily::single_driver) {
        return {"A", "B"};
    }
    return {"D1", "D2", "D3"};
}

[[nodiscard]] inline std::size_t coefficient_count(ModelFamily family) {
    return family == ModelFamily::single_driver ? 2 : 3;
}

struct ModelSpec {
    ModelFamily family = ModelFamily::single_driver;
    AnnualSeries rate;                         ///< labor-force change rate
    std::optional<AnnualSeries> unemployment;  ///< second driver, generalized family only
    AnnualSeries target;                       ///< observed series being modeled
    YearRange fit_window;
    std::optional<int> cumulative_start;       ///< defaults to fit_window.first

    [[nodiscard]] int cumulative_from() const { return cumulative_start.value_or(fit_window.first); }
};

/// Coefficients in family order: (A, B) or (D1, D2, D3).
struct Coefficients {
    std::vector<double> values;
    int lag = 0;

    friend bool operator==(const Coefficients&, const Coefficients&) = default;
};

namespace detail {

inline void check_arity(const ModelSpec& spec, const Coefficients& c) {
    if (c.values.size() != coefficient_count(spec.family)) {
        throw SpecificationError("model family expects " + std::to_string(coefficient_count(spec.family)) +
                                 " coefficients, got " + std::to_string(c.values.size()));
    }
    if (c.lag < 0) {
        throw DomainError("lag must be non-negative, got " + std::to_string(c.lag));
    }
    if (spec.family == ModelFamily::generalized && c.lag != 0) {
        throw SpecificationError("the generalized model has no lag");
    }
}

inline void check_coverage(const ModelSpec& spec, int lag) {
    const auto& w = spec.fit_window;
    if (w.first > w.last) {
        throw SpecificationError("empty fit window " + w.to_string());
    }
    const YearRange driver_years{w.first - lag, w.last - lag};
    if (!spec.rate.covers(driver_years)) {
        throw RangeError("driver '" + spec.rate.label() + "' (" + spec.rate.years().to_string() +
                         ") does not cover " + driver_years.to_string() + " needed at lag " + std::to_string(lag));
    }
    if (spec.family == ModelFamily::generalized) {
        if (!spec.unemployment) {
            throw SpecificationError("the generalized model needs an unemployment series");
        }
        if (!spec.unemployment->covers(w)) {
            throw RangeError("unemployment '" + spec.unemployment->label() + "' (" +
                             spec.unemployment->years().to_string() + ") does not cover " + w.to_string());
        }
    }
}

/// Driver columns over the fit window in coefficient order.
[[nodiscard]] inline std::vector<std::vector<double>> basis(const ModelSpec& spec, int lag) {
    const auto& w = spec.fit_window;
    const auto n = static_cast<std::size_t>(w.length());
    std::vector<double> ones(n, 1.0);
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) {
        r[i] = spec.rate.at(w.first + static_cast<int>(i) - lag);
    }
    if (spec.family == ModelFamily::single_driver) {
        return {std::move(ones), std::move(r)};
    }
    std::vector<double> ue(n);
    for (std::size_t i = 0; i < n; ++i) {
        ue[i] = spec.unemployment->at(w.first + static_cast<int>(i));
    }
    return {std::move(r), std::move(ue), std::move(ones)};
}

/// Pointwise model value.  Both families are evaluated as a left-to-right
/// sum in coefficient order, matching the printed formulas.
[[nodiscard]] inline double evaluate_point(ModelFamily family, std::span<const double> c,
                                           const std::vector<std::vector<double>>& cols, std::size_t i) {
    if (family == ModelFamily::single_driver) {
        return c[0] + c[1] * cols[1][i];
    }
    return c[0] * cols[0][i] + c[1] * cols[1][i] + c[2];
}

[[nodiscard]] inline double cumulative_rms(std::span<const double> observed, std::span<const double> predicted) {
    double c_obs = 0.0;
    double c_pred = 0.0;
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        c_obs += observed[i];
        c_pred += predicted[i];
        const double d = c_obs - c_pred;
        sum_sq += d * d;
    }
    return std::sqrt(sum_sq / static_cast<double>(observed.size()));
}

}  // namespace detail

/// Model prediction over `spec.fit_window`.
[[nodiscard]] inline AnnualSeries predict_series(const ModelSpec& spec, const Coefficients& c) {
    detail::check_arity(spec, c);
    detail::check_coverage(spec, c.lag);
    const auto cols = detail::basis(spec, c.lag);
    std::vector<double> out(cols.front().size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = detail::evaluate_point(spec.family, c.values, cols, i);
    }
    return AnnualSeries(spec.fit_window.first, std::move(out), spec.target.unit(), "predicted(" + spec.target.label() + ")");
}

/// RMS of the difference between running sums of observed and predicted
/// values, both accumulated from from_year to the common last year.
[[nodiscard]] inline double cumulative_rms(const AnnualSeries& observed, const AnnualSeries& predicted, int from_year) {
    if (observed.end_year() != predicted.end_year() || !observed.covers(from_year) || !predicted.covers(from_year)) {
        throw AlignmentError("cumulative comparison from " + std::to_string(from_year) + " needs both series to span " +
                             std::to_string(from_year) + ":" + std::to_string(observed.end_year()) + "; got " +
                             observed.years().to_string() + " and " + predicted.years().to_string());
    }
    const auto o = window(observed, from_year, observed.end_year());
    const auto p = window(predicted, from_year, predicted.end_year());
    return detail::cumulative_rms(o.values(), p.values());
}

/// Plain RMS of annual differences; a diagnostic next to the cumulative objective.
[[nodiscard]] inline double annual_rms(const AnnualSeries& observed, const AnnualSeries& predicted) {
    const auto pair = align(observed, predicted);
    const auto o = pair.x.values();
    const auto p = pair.y.values();
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < o.size(); ++i) {
        sum_sq += (o[i] - p[i]) * (o[i] - p[i]);
    }
    return std::sqrt(sum_sq / static_cast<double>(o.size()));
}

struct GridAxis {
    double lower = 0.0;
    double upper = 0.0;
    double step = 0.0;

    [[nodiscard]] std::size_t points() const {
        return static_cast<std::size_t>(std::floor((upper - lower) / step + 1e-9)) + 1;
    }
    [[nodiscard]] double at(std::size_t k) const { return lower + static_cast<double>(k) * step; }
};

/// Coarse grid, refinement schedule and lag range for calibrate().
struct SearchGrid {
    std::vector<GridAxis> axes;  ///< one per coefficient, family order
    std::vector<int> lags{0};    ///< single_driver only
    /// Refinement halves steps until every step is below this value, then
    /// keeps halving while the objective still improves.
    double terminal_step = 1e-5;
    /// Consecutive non-improving halvings tolerated below terminal_step.
    int patience = 12;
    /// Hard floor on the step size.
    double min_step = 1e-13;
    std::size_t max_grid_nodes = 20'000'000;
    std::size_t max_refine_evaluations = 2'000'000;
};

/// Slopes in [-5, 5] step 0.1, free terms in [-0.1, 0.1] step 0.005.
[[nodiscard]] inline SearchGrid default_grid(ModelFamily family, int max_lag = 0) {
    SearchGrid g;
    const GridAxis slope{-5.0, 5.0, 0.1};
    const GridAxis free_term{-0.1, 0.1, 0.005};
    if (family == ModelFamily::single_driver) {
        g.axes = {free_term, slope};
        g.lags.clear();
        for (int lag = 0; lag <= max_lag; ++lag) g.lags.push_back(lag);
    } else {
        g.axes = {slope, slope, free_term};
    }
    return g;
}

struct TraceEntry {
    Coefficients coefficients;
    double objective = 0.0;
};

struct LagObjective {
    int lag = 0;
    double objective = 0.0;
};

struct CalibrationResult {
    ModelFamily family = ModelFamily::single_driver;
    Coefficients coefficients;
    double objective = 0.0;   ///< cumulative RMS at the optimum
    double annual_rms = 0.0;  ///< diagnostic only
    std::vector<TraceEntry> trace;
    std::vector<LagObjective> lag_scan;
    SearchGrid grid;
    std::size_t evaluations = 0;
    bool converged = true;
    std::vector<std::string> warnings;

    friend bool operator==(const CalibrationResult& a, const CalibrationResult& b) {
        if (a.trace.size() != b.trace.size()) return false;
        for (std::size_t i = 0; i < a.trace.size(); ++i) {
            if (a.trace[i].coefficients != b.trace[i].coefficients || a.trace[i].objective != b.trace[i].objective)
                return false;
        }
        return a.family == b.family && a.coefficients == b.coefficients && a.objective == b.objective &&
               a.annual_rms == b.annual_rms && a.evaluations == b.evaluations && a.converged == b.converged;
    }
};

namespace detail {

/// Cumulative-RMS objective for one lag with the window data precomputed.
class CumulativeObjective {
public:
    CumulativeObjective(const ModelSpec& spec, int lag)
        : family_(spec.family), cols_(basis(spec, lag)) {
        const auto target = window(spec.target, spec.fit_window);
        offset_ = static_cast<std::size_t>(spec.cumulative_from() - spec.fit_window.first);
        observed_.assign(target.values().begin() + static_cast<std::ptrdiff_t>(offset_), target.values().end());
        predicted_.resize(observed_.size());
    }

    double operator()(std::span<const double> c) {
        ++evaluations_;
        for (std::size_t i = 0; i < predicted_.size(); ++i) {
            predicted_[i] = evaluate_point(family_, c, cols_, offset_ + i);
        }
        return cumulative_rms(observed_, predicted_);
    }

    [[nodiscard]] std::size_t evaluations() const noexcept { return evaluations_; }

private:
    ModelFamily family_;
    std::vector<std::vector<double>> cols_;
    std::size_t offset_ = 0;
    std::vector<double> observed_;
    std::vector<double> predicted_;
    std::size_t evaluations_ = 0;
};

[[nodiscard]] inline bool better(double candidate, double incumbent) {
    return std::isfinite(candidate) && candidate < incumbent;
}

}  // namespace detail

/// Minimizes the cumulative-curve RMS deviation between target and model.
///
/// For every lag: exhaustive scan of the coarse grid, then a deterministic
/// pattern search (coordinate exploration plus pattern moves, Hooke-Jeeves)
/// from the best node with steps halved whenever a round fails to improve.
/// The returned point is the best over every lag and every evaluation; ties
/// go to the first point found, so the smaller lag wins.
[[nodiscard]] inline CalibrationResult calibrate(const ModelSpec& spec, const SearchGrid& grid) {
    const std::size_t dim = coefficient_count(spec.family);
    if (grid.axes.size() != dim) {
        throw SpecificationError("search grid has " + std::to_string(grid.axes.size()) + " axes, model needs " +
                                 std::to_string(dim));
    }
    std::size_t nodes = 1;
    for (const auto& a : grid.axes) {
        if (!std::isfinite(a.lower) || !std::isfinite(a.upper) || !std::isfinite(a.step)) {
            throw SpecificationError("search bounds and steps must be finite");
        }
        if (!(a.step > 0.0)) {
            throw SpecificationError("search steps must be positive");
        }
        if (a.lower > a.upper) {
            throw SpecificationError("empty search axis [" + std::to_string(a.lower) + ", " + std::to_string(a.upper) + "]");
        }
        nodes *= a.points();
    }
    if (nodes > grid.max_grid_nodes) {
        throw SpecificationError("search grid has " + std::to_string(nodes) + " nodes, limit is " +
                                 std::to_string(grid.max_grid_nodes));
    }
    if (!(grid.terminal_step > 0.0) || !(grid.min_step > 0.0)) {
        throw SpecificationError("refinement step limits must be positive");
    }
    std::vector<int> lags = spec.family == ModelFamily::generalized ? std::vector<int>{0} : grid.lags;
    if (lags.empty()) {
        throw SpecificationError("empty lag range");
    }
    for (int lag : lags) {
        if (lag < 0) throw DomainError("lag must be non-negative, got " + std::to_string(lag));
    }
    if (!spec.fit_window.contains(spec.cumulative_from())) {
        throw SpecificationError("cumulative start " + std::to_string(spec.cumulative_from()) + " outside fit window " +
                                 spec.fit_window.to_string());
    }
    if (!spec.target.covers(spec.fit_window)) {
        throw RangeError("target '" + spec.target.label() + "' (" + spec.target.years().to_string() +
                         ") does not cover fit window " + spec.fit_window.to_string());
    }
    CalibrationResult result;
    result.family = spec.family;
    result.grid = grid;

    // Lags the driver cannot cover are skipped; the call fails only if none is usable.
    std::vector<int> usable;
    std::exception_ptr first_failure;
    for (int lag : lags) {
        try {
            detail::check_coverage(spec, lag);
            usable.push_back(lag);
        } catch (const RangeError& e) {
            if (!first_failure) first_failure = std::current_exception();
            result.warnings.push_back("lag " + std::to_string(lag) + " skipped: " + e.what());
        }
    }
    if (usable.empty()) {
        std::rethrow_exception(first_failure);
    }
    lags = std::move(usable);
    double global_best = std::numeric_limits<double>::infinity();

    for (int lag : lags) {
        detail::CumulativeObjective objective(spec, lag);

        // Stage 1: exhaustive coarse grid.
        std::vector<std::size_t> idx(dim, 0);
        std::vector<double> point(dim);
        std::vector<double> best_point;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t node = 0; node < nodes; ++node) {
            for (std::size_t d = 0; d < dim; ++d) point[d] = grid.axes[d].at(idx[d]);
            const double f = objective(point);
            if (detail::better(f, best)) {
                best = f;
                best_point = point;
            }
            for (std::size_t d = dim; d-- > 0;) {
                if (++idx[d] < grid.axes[d].points()) break;
                idx[d] = 0;
            }
        }
        if (best_point.empty()) {
            result.lag_scan.push_back({lag, std::numeric_limits<double>::quiet_NaN()});
            continue;
        }
        result.trace.push_back({{best_point, lag}, best});

        // Stage 2: pattern search refinement.
        std::vector<double> steps(dim);
        for (std::size_t d = 0; d < dim; ++d) steps[d] = grid.axes[d].step;
        const std::size_t budget = objective.evaluations() + grid.max_refine_evaluations;

        auto explore = [&](std::vector<double> x, double fx) {
            for (std::size_t d = 0; d < dim; ++d) {
                const double origin = x[d];
                x[d] = origin + steps[d];
                double f = objective(x);
                if (detail::better(f, fx)) {
                    fx = f;
                    continue;
                }
                x[d] = origin - steps[d];
                f = objective(x);
                if (detail::better(f, fx)) {
                    fx = f;
                    continue;
                }
                x[d] = origin;
            }
            return std::pair{x, fx};
        };

        auto base = best_point;
        double f_base = best;
        bool improved_at_level = false;
        int idle_levels = 0;
        bool converged = true;
        while (f_base > 0.0) {
            if (objective.evaluations() > budget) {
                converged = false;
                break;
            }
            auto [x_new, f_new] = explore(base, f_base);
            if (f_new < f_base) {
                improved_at_level = true;
                while (f_new < f_base && objective.evaluations() <= budget) {
                    std::vector<double> pattern(dim);
                    for (std::size_t d = 0; d < dim; ++d) pattern[d] = 2.0 * x_new[d] - base[d];
                    base = x_new;
                    f_base = f_new;
                    result.trace.push_back({{base, lag}, f_base});
                    const double f_pattern = objective(pattern);
                    auto [x_p, f_p] = explore(pattern, std::isfinite(f_pattern) ? f_pattern
                                                                                : std::numeric_limits<double>::infinity());
                    if (f_p < f_base) {
                        x_new = std::move(x_p);
                        f_new = f_p;
                    }
                }
                continue;
            }
            const double largest = *std::max_element(steps.begin(), steps.end());
            idle_levels = improved_at_level ? 0 : idle_levels + 1;
            if ((largest < grid.terminal_step && idle_levels > grid.patience) || largest < grid.min_step) {
                break;
            }
            for (auto& s : steps) s *= 0.5;
            improved_at_level = false;
        }

        result.lag_scan.push_back({lag, f_base});
        result.evaluations += objective.evaluations();
        if (f_base < global_best) {
            global_best = f_base;
            result.coefficients = {base, lag};
            result.objective = f_base;
            result.converged = converged;
        }
    }

    if (!std::isfinite(global_best)) {
        throw DataError("cumulative objective is non-finite at every grid node");
    }
    result.annual_rms = annual_rms(window(spec.target, spec.fit_window), predict_series(spec, result.coefficients));
    return result;
}

}  // namespace lfmkit
