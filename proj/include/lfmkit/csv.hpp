#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "lfmkit/error.hpp"
#include "lfmkit/format.hpp"
#include "lfmkit/series.hpp"

// Annual series text format:
//
//   # optional comment lines, anywhere
//   # label: <text>        (metadata comment, optional)
//   # unit: rate|persons|index
//   year,value
//   2000,0.01
//   2001,0.02
//
// Records may be unsorted; years must be unique and contiguous once sorted.

namespace lfmkit {

namespace detail {

struct CsvDocument {
    std::vector<std::pair<int, double>> records;  // sorted by year
    std::map<std::string, std::string> metadata;
};

[[nodiscard]] inline bool is_four_digit_year(std::string_view s) {
    return s.size() == 4 && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c) != 0; });
}

[[nodiscard]] inline CsvDocument parse_csv(std::istream& in) {
    CsvDocument doc;
    std::string raw;
    int line_no = 0;
    bool header_seen = false;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = trim(raw);
        if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) {
            line = trim(line.substr(3));
        }
        if (line.empty()) {
            continue;
        }
        if (line.front() == '#') {
            auto body = trim(line.substr(1));
            if (auto colon = body.find(':'); colon != std::string_view::npos) {
                auto key = trim(body.substr(0, colon));
                if (key == "label" || key == "unit") {
                    doc.metadata[std::string(key)] = std::string(trim(body.substr(colon + 1)));
                }
            }
            continue;
        }
        if (!header_seen) {
            if (line != "year,value") {
                throw ParseError("expected header 'year,value', found '" + std::string(line) + "'", line_no);
            }
            header_seen = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos) {
            throw ParseError("expected 'year,value', found '" + std::string(line) + "'", line_no);
        }
        const auto year_text = trim(line.substr(0, comma));
        const auto value_text = trim(line.substr(comma + 1));
        if (!is_four_digit_year(year_text)) {
            throw ParseError("year must be a 4-digit integer, found '" + std::string(year_text) + "'", line_no);
        }
        const auto value = parse_double(value_text);
        if (!value) {
            throw ParseError("malformed number '" + std::string(value_text) + "'", line_no);
        }
        if (!std::isfinite(*value)) {
            throw ParseError("non-finite value '" + std::string(value_text) + "'", line_no);
        }
        doc.records.emplace_back(*parse_int(year_text), *value);
    }
    if (!header_seen) {
        throw ParseError("missing header 'year,value'");
    }
    if (doc.records.empty()) {
        throw ParseError("no data records");
    }

    std::stable_sort(doc.records.begin(), doc.records.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<int> missing;
    for (std::size_t i = 1; i < doc.records.size(); ++i) {
        const int prev = doc.records[i - 1].first;
        const int cur = doc.records[i].first;
        if (cur == prev) {
            throw DuplicateError("year " + std::to_string(cur) + " appears more than once");
        }
        for (int y = prev + 1; y < cur; ++y) {
            missing.push_back(y);
        }
    }
    if (!missing.empty()) {
        std::string list;
        for (std::size_t i = 0; i < missing.size(); ++i) {
            list += (i ? ", " : "") + std::to_string(missing[i]);
        }
        throw ContiguityError("missing years: " + list);
    }
    return doc;
}

[[nodiscard]] inline AnnualSeries to_series(const CsvDocument& doc, Unit unit, std::string label) {
    std::vector<double> values;
    values.reserve(doc.records.size());
    for (const auto& r : doc.records) {
        values.push_back(r.second);
    }
    return AnnualSeries(doc.records.front().first, std::move(values), unit, std::move(label));
}

}  // namespace detail

/// Parses a `year,value` stream into a series with the given unit and label.
[[nodiscard]] inline AnnualSeries load_csv(std::istream& in, Unit unit, std::string label) {
    return detail::to_series(detail::parse_csv(in), unit, std::move(label));
}

[[nodiscard]] inline AnnualSeries load_csv_text(const std::string& text, Unit unit, std::string label) {
    std::istringstream in(text);
    return load_csv(in, unit, std::move(label));
}

/// Writes `year,value` records with shortest round-trip decimals.  With
/// `with_metadata`, label and unit are recorded as comment lines first.
inline void save_csv(std::ostream& out, const AnnualSeries& s, bool with_metadata = false) {
    if (with_metadata) {
        out << "# label: " << s.label() << '\n' << "# unit: " << to_string(s.unit()) << '\n';
    }
    out << "year,value\n";
    int year = s.start_year();
    for (double v : s.values()) {
        out << year++ << ',' << format_exact(v) << '\n';
    }
}

[[nodiscard]] inline std::string to_csv_text(const AnnualSeries& s, bool with_metadata = false) {
    std::ostringstream out;
    save_csv(out, s, with_metadata);
    return out.str();
}

}  // namespace lfmkit
