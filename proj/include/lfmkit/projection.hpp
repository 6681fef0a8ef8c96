#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lfmkit/error.hpp"
#include "lfmkit/format.hpp"
#include "lfmkit/models.hpp"
#include "lfmkit/series.hpp"

namespace lfmkit {

inline constexpr double kJapanParticipationRate = 0.521;
inline constexpr YearRange kDefaultHorizon{2007, 2050};

using InflationModel = std::variant<LaggedLinearModel, GeneralizedModel>;

struct ProjectionScenario {
    AnnualSeries population;
    double participation_rate = kJapanParticipationRate;
    /// Optional per-year participation path; overrides the constant rate
    /// for the years it covers.
    std::optional<AnnualSeries> participation_path;
    YearRange horizon = kDefaultHorizon;
    InflationModel inflation_model;
    LaggedLinearModel unemployment_model;
    /// Observed labor force.  Years before the horizon come from here, so the
    /// first projected change rate is taken against the last observed level.
    std::optional<AnnualSeries> history;
};

struct ForecastBundle {
    AnnualSeries labor_force;
    AnnualSeries inflation;
    AnnualSeries unemployment;
    ProjectionScenario scenario;
    std::vector<std::string> notes;
};

namespace detail {

inline void check_participation(double rate, int year) {
    if (!(rate > 0.0 && rate <= 1.0)) {
        throw DomainError("participation rate " + format_exact(rate) + " in year " + std::to_string(year) +
                          " outside (0, 1]");
    }
}

}  // namespace detail

/// LF(t) = participation_rate * population(t) over `horizon`.
[[nodiscard]] inline AnnualSeries project_labor_force(const AnnualSeries& population, double participation_rate,
                                                      YearRange horizon,
                                                      const std::optional<AnnualSeries>& participation_path = std::nullopt) {
    if (!population.covers(horizon)) {
        throw RangeError("population '" + population.label() + "' covers " + population.years().to_string() +
                         ", projection needs " + horizon.to_string());
    }
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(horizon.length()));
    for (int y = horizon.first; y <= horizon.last; ++y) {
        const double rate =
            participation_path && participation_path->covers(y) ? participation_path->at(y) : participation_rate;
        detail::check_participation(rate, y);
        const double pop = population.at(y);
        if (!(pop > 0.0)) {
            throw DomainError("population in " + std::to_string(y) + " must be positive");
        }
        out.push_back(rate * pop);
    }
    return AnnualSeries(horizon.first, std::move(out), Unit::persons, "projected labor force");
}

[[nodiscard]] inline int lag_of(const InflationModel& m) {
    return std::holds_alternative<LaggedLinearModel>(m) ? std::get<LaggedLinearModel>(m).t0 : 0;
}

/// Projects labor force, unemployment and inflation over the horizon.
///
/// The labor-force path is history (years before the horizon) spliced with
/// participation * population (horizon years, and earlier years history does
/// not supply).  Unemployment comes from its lagged model; inflation from
/// its lagged model or, for the generalized model, from the change rate and
/// the projected unemployment.  Unemployment is clamped into [0, 1] with a
/// note when needed.
[[nodiscard]] inline ForecastBundle forecast(const ProjectionScenario& scenario) {
    const auto& h = scenario.horizon;
    if (h.first > h.last) {
        throw SpecificationError("empty horizon " + h.to_string());
    }
    detail::check_participation(scenario.participation_rate, h.first);
    const int max_lag = std::max(scenario.unemployment_model.t0, lag_of(scenario.inflation_model));
    const int lf_first = h.first - max_lag - 1;

    std::vector<double> lf;
    lf.reserve(static_cast<std::size_t>(h.last - lf_first + 1));
    std::vector<std::string> notes;
    for (int y = lf_first; y <= h.last; ++y) {
        if (y < h.first && scenario.history && scenario.history->covers(y)) {
            lf.push_back(scenario.history->at(y));
            continue;
        }
        if (!scenario.population.covers(y)) {
            throw RangeError("labor force for " + std::to_string(y) + " needed (horizon " + h.to_string() + ", lag " +
                             std::to_string(max_lag) + ") but neither history nor population covers it");
        }
        lf.push_back(project_labor_force(scenario.population, scenario.participation_rate, {y, y},
                                         scenario.participation_path)
                         .values()[0]);
    }
    if (scenario.history && scenario.history->covers(h.first - 1)) {
        notes.push_back("spliced to observed labor force at " + std::to_string(h.first - 1) + " (" +
                        format_exact(scenario.history->at(h.first - 1)) + ")");
    } else {
        notes.push_back("no observed labor force before " + std::to_string(h.first) +
                        "; change rate uses the projection alone");
    }
    const AnnualSeries spliced(lf_first, std::move(lf), Unit::persons, "labor force");
    const auto rate = change_rate(spliced);

    auto ue = evaluate(scenario.unemployment_model, rate, h).predicted;
    std::vector<double> ue_values(ue.values().begin(), ue.values().end());
    for (std::size_t i = 0; i < ue_values.size(); ++i) {
        const double clamped = std::clamp(ue_values[i], 0.0, 1.0);
        if (clamped != ue_values[i]) {
            notes.push_back("warning: unemployment " + format_report(ue_values[i]) + " in " +
                            std::to_string(h.first + static_cast<int>(i)) + " clamped to [0, 1]");
            ue_values[i] = clamped;
        }
    }
    AnnualSeries unemployment(h.first, std::move(ue_values), Unit::rate,
                              "unemployment (" + scenario.unemployment_model.name + ")");

    AnnualSeries inflation = std::visit(
        [&](const auto& m) -> AnnualSeries {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, GeneralizedModel>) {
                return evaluate(m, rate, unemployment, h).predicted.with_label("inflation (" + m.name + ")");
            } else {
                return evaluate(m, rate, h).predicted.with_label("inflation (" + m.name + ")");
            }
        },
        scenario.inflation_model);

    return ForecastBundle{window(spliced, h).with_label("labor force"), std::move(inflation), std::move(unemployment),
                          scenario, std::move(notes)};
}

}  // namespace lfmkit
