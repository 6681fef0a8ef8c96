#pragma once

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "lfmkit/calibration.hpp"
#include "lfmkit/error.hpp"
#include "lfmkit/format.hpp"
#include "lfmkit/regression.hpp"
#include "lfmkit/series.hpp"

namespace lfmkit {

inline constexpr YearRange kPhillipsWindow{1982, 2006};

/// Unemployment as a linear function of (possibly lagged) inflation:
/// UE(t) = intercept + slope * pi(t - lag).
struct PhillipsModel {
    std::string name = "phillips";
    double slope = 0.0;
    double intercept = 0.0;
    int lag = 0;
    YearRange window = kPhillipsWindow;
    std::optional<LinearFitResult> fit;
    std::string note;
};

enum class Target { inflation, unemployment };
enum class Estimator { ols, cumulative };

/// target(t) = A + B * r(t - t0), r = labor-force change rate.
struct LaggedLinearModel {
    std::string name = "lagged-linear";
    Target target = Target::inflation;
    double A = 0.0;
    double B = 0.0;
    int t0 = 0;
    Estimator fitted_by = Estimator::ols;
    YearRange window{};
    std::string note;
};

/// pi(t) = D1 * r(t) + D2 * UE(t) + D3.
struct GeneralizedModel {
    std::string name = "generalized";
    double D1 = 0.0;
    double D2 = 0.0;
    double D3 = 0.0;
    YearRange window{};
    int cumulative_start = 0;
    std::string note;
};

using Model = std::variant<PhillipsModel, LaggedLinearModel, GeneralizedModel>;

[[nodiscard]] inline std::string_view to_string(Target t) {
    return t == Target::inflation ? "inflation" : "unemployment";
}
[[nodiscard]] inline std::string_view to_string(Estimator e) { return e == Estimator::ols ? "ols" : "cumulative"; }

[[nodiscard]] inline Target target_from_string(std::string_view s) {
    if (s == "inflation") return Target::inflation;
    if (s == "unemployment") return Target::unemployment;
    throw SpecificationError("unknown target '" + std::string(s) + "'");
}

[[nodiscard]] inline Estimator estimator_from_string(std::string_view s) {
    if (s == "ols") return Estimator::ols;
    if (s == "cumulative") return Estimator::cumulative;
    throw SpecificationError("unknown estimator '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------
// Fitting

/// Lag-searched OLS of unemployment on inflation over `window`.  Inflation
/// years before the window are used for lagged regressors when available.
[[nodiscard]] inline PhillipsModel fit_phillips(const AnnualSeries& inflation, const AnnualSeries& unemployment,
                                                YearRange window = kPhillipsWindow, int max_lag = kDefaultMaxLag) {
    if (!inflation.covers(window) || !unemployment.covers(window)) {
        throw RangeError("Phillips window " + window.to_string() + " not covered by inflation (" +
                         inflation.years().to_string() + ") and unemployment (" + unemployment.years().to_string() + ")");
    }
    const auto search = lag_search(inflation, lfmkit::window(unemployment, window), max_lag);
    PhillipsModel m;
    m.slope = search.fit.slope;
    m.intercept = search.fit.intercept;
    m.lag = search.best_lag;
    m.window = window;
    m.fit = search.fit;
    m.note = "ols fit, lag searched over 0.." + std::to_string(max_lag);
    return m;
}

/// OLS estimate of target = A + B * r(t - t0) with t0 chosen by lag search.
[[nodiscard]] inline LaggedLinearModel fit_lagged_ols(Target target, const AnnualSeries& rate,
                                                      const AnnualSeries& observed, YearRange window,
                                                      int max_lag = kDefaultMaxLag,
                                                      LagSearchResult* search_out = nullptr) {
    const auto search = lag_search(rate, lfmkit::window(observed, window), max_lag);
    if (search_out) *search_out = search;
    LaggedLinearModel m;
    m.name = std::string(to_string(target)) + "-lf";
    m.target = target;
    m.A = search.fit.intercept;
    m.B = search.fit.slope;
    m.t0 = search.best_lag;
    m.fitted_by = Estimator::ols;
    m.window = window;
    m.note = "ols fit, lag searched over 0.." + std::to_string(max_lag);
    return m;
}

/// Cumulative-curve calibration of target = A + B * r(t - t0).
[[nodiscard]] inline LaggedLinearModel fit_lagged_cumulative(Target target, const AnnualSeries& rate,
                                                             const AnnualSeries& observed, YearRange window,
                                                             const SearchGrid& grid,
                                                             std::optional<int> cumulative_start = std::nullopt,
                                                             CalibrationResult* result_out = nullptr) {
    const ModelSpec spec{ModelFamily::single_driver, rate, std::nullopt, observed, window, cumulative_start};
    auto result = calibrate(spec, grid);
    LaggedLinearModel m;
    m.name = std::string(to_string(target)) + "-lf";
    m.target = target;
    m.A = result.coefficients.values[0];
    m.B = result.coefficients.values[1];
    m.t0 = result.coefficients.lag;
    m.fitted_by = Estimator::cumulative;
    m.window = window;
    m.note = "cumulative-curve calibration from " + std::to_string(spec.cumulative_from()) + ", rms " +
             format_report(result.objective);
    if (result_out) *result_out = std::move(result);
    return m;
}

[[nodiscard]] inline GeneralizedModel fit_generalized(const AnnualSeries& rate, const AnnualSeries& unemployment,
                                                      const AnnualSeries& inflation, YearRange window,
                                                      const SearchGrid& grid,
                                                      std::optional<int> cumulative_start = std::nullopt,
                                                      CalibrationResult* result_out = nullptr) {
    const ModelSpec spec{ModelFamily::generalized, rate, unemployment, inflation, window, cumulative_start};
    auto result = calibrate(spec, grid);
    GeneralizedModel m;
    m.D1 = result.coefficients.values[0];
    m.D2 = result.coefficients.values[1];
    m.D3 = result.coefficients.values[2];
    m.window = window;
    m.cumulative_start = spec.cumulative_from();
    m.note = "cumulative-curve calibration from " + std::to_string(m.cumulative_start) + ", rms " +
             format_report(result.objective);
    if (result_out) *result_out = std::move(result);
    return m;
}

/// Shifts the free term of a Phillips curve, recording the change in the note.
[[nodiscard]] inline PhillipsModel intercept_adjust(const PhillipsModel& model, double delta) {
    if (delta == 0.0) {
        return model;
    }
    PhillipsModel out = model;
    out.intercept = model.intercept + delta;
    if (!out.note.empty()) out.note += "; ";
    out.note += "intercept adjusted by " + format_exact(delta);
    return out;
}

// ---------------------------------------------------------------------------
// Evaluation

struct ResidualSummary {
    double stdev = 0.0;  ///< sample standard deviation of observed - predicted
    double max_abs = 0.0;
    double mean = 0.0;
    std::size_t n = 0;
};

struct Evaluation {
    AnnualSeries predicted;
    std::optional<ResidualSummary> residuals;
};

[[nodiscard]] inline ResidualSummary summarize_residuals(const AnnualSeries& observed, const AnnualSeries& predicted) {
    const auto pair = align(observed, predicted);
    const auto o = pair.x.values();
    const auto p = pair.y.values();
    ResidualSummary s;
    s.n = o.size();
    for (std::size_t i = 0; i < o.size(); ++i) {
        const double e = o[i] - p[i];
        s.mean += e;
        s.max_abs = std::max(s.max_abs, std::abs(e));
    }
    s.mean /= static_cast<double>(s.n);
    if (s.n > 1) {
        double ss = 0.0;
        for (std::size_t i = 0; i < o.size(); ++i) {
            const double d = o[i] - p[i] - s.mean;
            ss += d * d;
        }
        s.stdev = std::sqrt(ss / static_cast<double>(s.n - 1));
    }
    return s;
}

namespace detail {

/// intercept + slope * x(t - lag) for every year t in `years`, or for all
/// years the lagged driver covers when `years` is empty.
[[nodiscard]] inline AnnualSeries affine_of_lagged(const AnnualSeries& driver, double intercept, double slope, int lag,
                                                   std::optional<YearRange> years, Unit unit, std::string label) {
    const auto shifted = lag_shift(driver, lag);
    const auto span = years.value_or(shifted.years());
    if (!shifted.covers(span)) {
        throw RangeError("driver '" + driver.label() + "' at lag " + std::to_string(lag) + " covers " +
                         shifted.years().to_string() + ", requested " + span.to_string());
    }
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(span.length()));
    for (int y = span.first; y <= span.last; ++y) {
        out.push_back(intercept + slope * shifted.at(y));
    }
    return AnnualSeries(span.first, std::move(out), unit, std::move(label));
}

inline Evaluation finish(AnnualSeries predicted, const std::optional<AnnualSeries>& observed) {
    Evaluation ev{std::move(predicted), std::nullopt};
    if (observed) {
        ev.residuals = summarize_residuals(*observed, ev.predicted);
    }
    return ev;
}

}  // namespace detail

/// Predicted unemployment from inflation.
[[nodiscard]] inline Evaluation evaluate(const PhillipsModel& m, const AnnualSeries& inflation,
                                         std::optional<YearRange> years = std::nullopt,
                                         const std::optional<AnnualSeries>& observed = std::nullopt) {
    return detail::finish(
        detail::affine_of_lagged(inflation, m.intercept, m.slope, m.lag, years, Unit::rate, "predicted unemployment (" + m.name + ")"),
        observed);
}

/// Predicted target from the labor-force change rate.
[[nodiscard]] inline Evaluation evaluate(const LaggedLinearModel& m, const AnnualSeries& rate,
                                         std::optional<YearRange> years = std::nullopt,
                                         const std::optional<AnnualSeries>& observed = std::nullopt) {
    return detail::finish(detail::affine_of_lagged(rate, m.A, m.B, m.t0, years, Unit::rate,
                                                   "predicted " + std::string(to_string(m.target)) + " (" + m.name + ")"),
                          observed);
}

/// Predicted inflation from the labor-force change rate and unemployment.
[[nodiscard]] inline Evaluation evaluate(const GeneralizedModel& m, const AnnualSeries& rate,
                                         const AnnualSeries& unemployment,
                                         std::optional<YearRange> years = std::nullopt,
                                         const std::optional<AnnualSeries>& observed = std::nullopt) {
    const auto span = years.value_or(common_years(rate, unemployment));
    if (!rate.covers(span) || !unemployment.covers(span)) {
        throw RangeError("generalized model inputs do not cover " + span.to_string());
    }
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(span.length()));
    for (int y = span.first; y <= span.last; ++y) {
        out.push_back(m.D1 * rate.at(y) + m.D2 * unemployment.at(y) + m.D3);
    }
    return detail::finish(AnnualSeries(span.first, std::move(out), Unit::rate, "predicted inflation (" + m.name + ")"),
                          observed);
}

// ---------------------------------------------------------------------------
// Presets

/// Published Japan coefficients, usable without access to the data.
///
///   japan-phillips      UE = -0.94 pi + 0.041 (raw regression, 1982-2006)
///   japan-phillips-adj  same with the free term raised by 0.004 (0.045)
///   japan-cpi           pi = 0.0007 + 1.31 r, lag 0 (1982-2006)
///   japan-ue            UE = 0.045 - 1.5 r, lag 0 (1980-2006)
///   japan-gen           pi = 2.8 r + 0.9 UE - 0.0392 (cumulative from 1981)
///   japan-cpi-1981-2003 pi = -0.0035 + 1.77 r; CPI including imputed rent
[[nodiscard]] inline std::vector<std::string> preset_names() {
    return {"japan-phillips", "japan-phillips-adj", "japan-cpi", "japan-ue", "japan-gen", "japan-cpi-1981-2003"};
}

[[nodiscard]] inline Model preset(std::string_view name) {
    if (name == "japan-phillips" || name == "japan-phillips-adj") {
        PhillipsModel m;
        m.name = "japan-phillips";
        m.slope = -0.94;
        m.intercept = 0.041;
        m.lag = 0;
        m.window = kPhillipsWindow;
        m.note = "published regression, slope stderr 0.14, R2 0.68";
        if (name == "japan-phillips-adj") {
            m = intercept_adjust(m, 0.004);
            m.name = "japan-phillips-adj";
        }
        return m;
    }
    if (name == "japan-cpi") {
        return LaggedLinearModel{"japan-cpi", Target::inflation, 0.0007, 1.31, 0, Estimator::cumulative, {1982, 2006},
                                 "published coefficients, A stderr 0.002, B stderr 0.19"};
    }
    if (name == "japan-cpi-1981-2003") {
        return LaggedLinearModel{"japan-cpi-1981-2003", Target::inflation, -0.0035, 1.77, 0, Estimator::cumulative,
                                 {1981, 2003}, "earlier estimate on CPI including imputed rent; not reconciled"};
    }
    if (name == "japan-ue") {
        return LaggedLinearModel{"japan-ue", Target::unemployment, 0.045, -1.5, 0, Estimator::cumulative, {1980, 2006},
                                 "published coefficients from a visual fit; no statistics"};
    }
    if (name == "japan-gen") {
        return GeneralizedModel{"japan-gen", 2.8, 0.9, -0.0392, {1981, 2006}, 1981,
                                "published coefficients, cumulative-curve fit"};
    }
    throw LookupError("unknown preset '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Serialization: `key=value` lines, `#` comments.

inline void write_model(std::ostream& out, const Model& model) {
    std::visit(
        [&out](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            out << "name=" << m.name << '\n';
            if constexpr (std::is_same_v<T, PhillipsModel>) {
                out << "family=phillips\n"
                    << "slope=" << format_exact(m.slope) << '\n'
                    << "intercept=" << format_exact(m.intercept) << '\n'
                    << "lag=" << m.lag << '\n'
                    << "window=" << m.window.to_string() << '\n'
                    << "fitted_by=ols\n";
            } else if constexpr (std::is_same_v<T, LaggedLinearModel>) {
                out << "family=lagged_linear\n"
                    << "target=" << to_string(m.target) << '\n'
                    << "A=" << format_exact(m.A) << '\n'
                    << "B=" << format_exact(m.B) << '\n'
                    << "lag=" << m.t0 << '\n'
                    << "window=" << m.window.to_string() << '\n'
                    << "fitted_by=" << to_string(m.fitted_by) << '\n';
            } else {
                out << "family=generalized\n"
                    << "D1=" << format_exact(m.D1) << '\n'
                    << "D2=" << format_exact(m.D2) << '\n'
                    << "D3=" << format_exact(m.D3) << '\n'
                    << "lag=0\n"
                    << "window=" << m.window.to_string() << '\n'
                    << "cumulative_start=" << m.cumulative_start << '\n'
                    << "fitted_by=cumulative\n";
            }
            out << "note=" << m.note << '\n';
        },
        model);
}

[[nodiscard]] inline std::string to_text(const Model& model) {
    std::ostringstream out;
    write_model(out, model);
    return out.str();
}

[[nodiscard]] inline YearRange parse_year_range(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) {
        throw ParseError("year range '" + std::string(text) + "' must look like FIRST:LAST");
    }
    const auto first = parse_int(text.substr(0, colon));
    const auto last = parse_int(text.substr(colon + 1));
    if (!first || !last || *first > *last) {
        throw ParseError("invalid year range '" + std::string(text) + "'");
    }
    return {*first, *last};
}

/// Reads `key=value` lines; blank lines and `#` comments are skipped.
[[nodiscard]] inline std::map<std::string, std::string> read_key_values(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError("expected key=value", line_no);
        }
        auto key = std::string(trim(line.substr(0, eq)));
        if (kv.contains(key)) {
            throw DuplicateError("key '" + key + "' repeated on line " + std::to_string(line_no));
        }
        kv.emplace(std::move(key), std::string(trim(line.substr(eq + 1))));
    }
    return kv;
}

[[nodiscard]] inline Model read_model(std::istream& in) {
    const auto kv = read_key_values(in);
    auto get = [&kv](const std::string& key) -> const std::string& {
        const auto it = kv.find(key);
        if (it == kv.end()) throw ParseError("model file lacks '" + key + "'");
        return it->second;
    };
    auto num = [&](const std::string& key) {
        const auto v = parse_double(get(key));
        if (!v || !std::isfinite(*v)) throw ParseError("model field '" + key + "' is not a finite number");
        return *v;
    };
    auto integer = [&](const std::string& key) {
        const auto v = parse_int(get(key));
        if (!v) throw ParseError("model field '" + key + "' is not an integer");
        return *v;
    };
    const auto note = kv.contains("note") ? kv.at("note") : std::string{};
    const auto& family = get("family");
    if (family == "phillips") {
        PhillipsModel m;
        m.name = get("name");
        m.slope = num("slope");
        m.intercept = num("intercept");
        m.lag = integer("lag");
        m.window = parse_year_range(get("window"));
        m.note = note;
        if (m.lag < 0) throw ParseError("lag must be non-negative");
        return m;
    }
    if (family == "lagged_linear") {
        LaggedLinearModel m;
        m.name = get("name");
        m.target = target_from_string(get("target"));
        m.A = num("A");
        m.B = num("B");
        m.t0 = integer("lag");
        m.window = parse_year_range(get("window"));
        m.fitted_by = estimator_from_string(get("fitted_by"));
        m.note = note;
        if (m.t0 < 0) throw ParseError("lag must be non-negative");
        return m;
    }
    if (family == "generalized") {
        GeneralizedModel m;
        m.name = get("name");
        m.D1 = num("D1");
        m.D2 = num("D2");
        m.D3 = num("D3");
        m.window = parse_year_range(get("window"));
        m.cumulative_start = integer("cumulative_start");
        m.note = note;
        return m;
    }
    throw ParseError("unknown model family '" + family + "'");
}

[[nodiscard]] inline Model model_from_text(const std::string& text) {
    std::istringstream in(text);
    return read_model(in);
}

}  // namespace lfmkit
