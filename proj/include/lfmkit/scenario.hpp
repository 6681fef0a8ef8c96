#pragma once

#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <string>

#include "lfmkit/error.hpp"
#include "lfmkit/models.hpp"
#include "lfmkit/projection.hpp"
#include "lfmkit/registry.hpp"

// Scenario files are `key=value` text; `#` starts a comment line.
//
//   population=population/ipss          registry key, required
//   participation_rate=0.521            optional, default 0.521
//   participation_path=file:rates.csv   optional per-year rates (file:PATH or registry key)
//   horizon=2007:2050                   optional, default 2007:2050
//   history=labor_force/nac             optional registry key
//   inflation_model=preset:japan-cpi    preset:NAME or file:PATH
//   unemployment_model=preset:japan-ue
//
// Relative model file paths resolve against the scenario file's directory.

namespace lfmkit {

struct ScenarioFile {
    DatasetKey population{Variable::population, Source::ipss};
    double participation_rate = kJapanParticipationRate;
    std::optional<std::string> participation_path;
    YearRange horizon = kDefaultHorizon;
    std::optional<DatasetKey> history;
    std::string inflation_model = "preset:japan-cpi";
    std::string unemployment_model = "preset:japan-ue";
};

[[nodiscard]] inline ScenarioFile parse_scenario(std::istream& in) {
    const auto kv = read_key_values(in);
    if (!kv.contains("population")) {
        throw ParseError("scenario file lacks 'population'");
    }
    ScenarioFile sf;
    for (const auto& [key, value] : kv) {
        if (key == "population") {
            sf.population = DatasetKey::parse(value);
        } else if (key == "participation_rate") {
            const auto v = parse_double(value);
            if (!v) throw ParseError("participation_rate '" + value + "' is not a number");
            sf.participation_rate = *v;
        } else if (key == "participation_path") {
            sf.participation_path = value;
        } else if (key == "horizon") {
            sf.horizon = parse_year_range(value);
        } else if (key == "history") {
            sf.history = DatasetKey::parse(value);
        } else if (key == "inflation_model") {
            sf.inflation_model = value;
        } else if (key == "unemployment_model") {
            sf.unemployment_model = value;
        } else {
            throw ParseError("unknown scenario key '" + key + "'");
        }
    }
    return sf;
}

/// Resolves `preset:NAME` or `file:PATH` (a bare path is treated as a file).
[[nodiscard]] inline Model resolve_model(const std::string& ref, const std::filesystem::path& base_dir = {}) {
    if (ref.starts_with("preset:")) {
        return preset(ref.substr(7));
    }
    std::filesystem::path path = ref.starts_with("file:") ? ref.substr(5) : ref;
    if (path.is_relative() && !base_dir.empty()) {
        path = base_dir / path;
    }
    std::ifstream in(path);
    if (!in) {
        throw LookupError("cannot open model file " + path.string());
    }
    return read_model(in);
}

[[nodiscard]] inline InflationModel as_inflation_model(const Model& m) {
    if (const auto* g = std::get_if<GeneralizedModel>(&m)) return *g;
    if (const auto* l = std::get_if<LaggedLinearModel>(&m)) {
        if (l->target != Target::inflation) {
            throw SpecificationError("model '" + l->name + "' predicts unemployment, not inflation");
        }
        return *l;
    }
    throw SpecificationError("a Phillips model cannot drive the inflation projection");
}

[[nodiscard]] inline LaggedLinearModel as_unemployment_model(const Model& m) {
    if (const auto* l = std::get_if<LaggedLinearModel>(&m); l && l->target == Target::unemployment) {
        return *l;
    }
    throw SpecificationError("the unemployment projection needs a lagged linear unemployment model");
}

[[nodiscard]] inline ProjectionScenario build_scenario(const ScenarioFile& sf, const DatasetRegistry& reg,
                                                       const std::filesystem::path& base_dir = {}) {
    ProjectionScenario s{reg.get(sf.population),
                         sf.participation_rate,
                         std::nullopt,
                         sf.horizon,
                         as_inflation_model(resolve_model(sf.inflation_model, base_dir)),
                         as_unemployment_model(resolve_model(sf.unemployment_model, base_dir)),
                         std::nullopt};
    if (sf.participation_path) {
        const auto& ref = *sf.participation_path;
        if (ref.starts_with("file:")) {
            std::filesystem::path path = ref.substr(5);
            if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
            std::ifstream in(path);
            if (!in) throw LookupError("cannot open participation path " + path.string());
            s.participation_path = load_csv(in, Unit::rate, "participation rate");
        } else {
            s.participation_path = reg.get(DatasetKey::parse(ref));
        }
    }
    if (sf.history) s.history = reg.get(*sf.history);
    return s;
}

}  // namespace lfmkit
