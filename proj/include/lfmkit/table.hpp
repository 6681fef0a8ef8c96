#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lfmkit/csv.hpp"
#include "lfmkit/error.hpp"
#include "lfmkit/format.hpp"
#include "lfmkit/projection.hpp"
#include "lfmkit/series.hpp"

// Export formats for plot-ready tables.
//
// CSV: `year,<column>...` header, one row per year, shortest round-trip
// decimals, columns in a fixed order (gnuplot-compatible).
// JSON: array of objects {label, unit, start_year, values}.

namespace lfmkit {

struct NamedColumn {
    std::string name;
    AnnualSeries series;
};

/// Writes columns sharing the same years as one CSV table.
inline void write_table_csv(std::ostream& out, const std::vector<NamedColumn>& columns) {
    if (columns.empty()) {
        throw SpecificationError("table needs at least one column");
    }
    const auto years = columns.front().series.years();
    for (const auto& c : columns) {
        if (c.series.years() != years) {
            throw AlignmentError("column '" + c.name + "' covers " + c.series.years().to_string() + ", table covers " +
                                 years.to_string());
        }
    }
    out << "year";
    for (const auto& c : columns) out << ',' << c.name;
    out << '\n';
    for (int y = years.first; y <= years.last; ++y) {
        out << y;
        for (const auto& c : columns) out << ',' << format_exact(c.series.at(y));
        out << '\n';
    }
}

/// Reads a multi-column table written by write_table_csv.
[[nodiscard]] inline std::vector<NamedColumn> read_table_csv(std::istream& in) {
    std::string raw;
    std::vector<std::string> names;
    std::vector<std::vector<double>> cols;
    int first_year = 0;
    int expected_year = 0;
    int line_no = 0;
    auto split = [](std::string_view line) {
        std::vector<std::string_view> f;
        std::size_t pos = 0;
        while (true) {
            const auto c = line.find(',', pos);
            f.push_back(trim(line.substr(pos, c - pos)));
            if (c == std::string_view::npos) break;
            pos = c + 1;
        }
        return f;
    };
    while (std::getline(in, raw)) {
        ++line_no;
        const auto line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const auto fields = split(line);
        if (names.empty()) {
            if (fields.size() < 2 || fields[0] != "year") {
                throw ParseError("table header must start with 'year' and name at least one column", line_no);
            }
            for (std::size_t i = 1; i < fields.size(); ++i) names.emplace_back(fields[i]);
            cols.resize(names.size());
            continue;
        }
        if (fields.size() != names.size() + 1) {
            throw ParseError("expected " + std::to_string(names.size() + 1) + " fields", line_no);
        }
        const auto year = parse_int(fields[0]);
        if (!year) throw ParseError("bad year '" + std::string(fields[0]) + "'", line_no);
        if (cols.front().empty()) {
            first_year = expected_year = *year;
        }
        if (*year != expected_year) {
            throw ContiguityError("table rows must be consecutive years; expected " + std::to_string(expected_year) +
                                  " on line " + std::to_string(line_no));
        }
        ++expected_year;
        for (std::size_t i = 0; i < names.size(); ++i) {
            const auto v = parse_double(fields[i + 1]);
            if (!v) throw ParseError("bad number '" + std::string(fields[i + 1]) + "'", line_no);
            cols[i].push_back(*v);
        }
    }
    if (names.empty() || cols.front().empty()) {
        throw ParseError("empty table");
    }
    std::vector<NamedColumn> out;
    for (std::size_t i = 0; i < names.size(); ++i) {
        const Unit unit = names[i] == "labor_force" || names[i] == "population" ? Unit::persons : Unit::rate;
        out.push_back({names[i], AnnualSeries(first_year, std::move(cols[i]), unit, names[i])});
    }
    return out;
}

[[nodiscard]] inline nlohmann::json to_json(const AnnualSeries& s) {
    return nlohmann::json{{"label", s.label()},
                          {"unit", std::string(to_string(s.unit()))},
                          {"start_year", s.start_year()},
                          {"values", std::vector<double>(s.values().begin(), s.values().end())}};
}

[[nodiscard]] inline AnnualSeries series_from_json(const nlohmann::json& j) {
    try {
        return AnnualSeries(j.at("start_year").get<int>(), j.at("values").get<std::vector<double>>(),
                            unit_from_string(j.at("unit").get<std::string>()), j.at("label").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed series object: ") + e.what());
    }
}

inline void write_series_json(std::ostream& out, const std::vector<AnnualSeries>& series) {
    auto arr = nlohmann::json::array();
    for (const auto& s : series) arr.push_back(to_json(s));
    out << arr.dump(2) << '\n';
}

[[nodiscard]] inline std::vector<NamedColumn> bundle_columns(const ForecastBundle& b) {
    return {{"labor_force", b.labor_force}, {"inflation", b.inflation}, {"unemployment", b.unemployment}};
}

}  // namespace lfmkit
