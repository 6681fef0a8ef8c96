#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "lfmkit/format.hpp"
#include "lfmkit/series.hpp"

namespace lfmkit {

enum class Severity { error, warning };

struct Finding {
    Severity severity;
    int year;
    std::string message;
};

/// Plausibility screen thresholds.
struct ValidationBands {
    double rate_min = -0.25;
    double rate_max = 0.25;
    double max_rate_jump = 0.10;
};

/// Screens raw annual values.  Non-finite values are errors; rates outside
/// the band, non-positive levels and year-over-year rate jumps above the
/// threshold (possible definitional breaks) are warnings.
[[nodiscard]] inline std::vector<Finding> validate_values(int start_year, std::span<const double> values, Unit unit,
                                                          const ValidationBands& bands = {}) {
    std::vector<Finding> findings;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const int year = start_year + static_cast<int>(i);
        const double v = values[i];
        if (!std::isfinite(v)) {
            findings.push_back({Severity::error, year, "non-finite value"});
            continue;
        }
        if (unit == Unit::rate) {
            if (v < bands.rate_min || v > bands.rate_max) {
                findings.push_back({Severity::warning, year,
                                    "rate " + format_report(v) + " outside plausibility band [" +
                                        format_report(bands.rate_min) + ", " + format_report(bands.rate_max) +
                                        "]; check units (fraction vs percent)"});
            }
            if (i > 0 && std::isfinite(values[i - 1])) {
                const double jump = v - values[i - 1];
                if (std::abs(jump) > bands.max_rate_jump) {
                    findings.push_back({Severity::warning, year,
                                        "year-over-year jump of " + format_report(jump) +
                                            " exceeds " + format_report(bands.max_rate_jump) +
                                            "; possible series break"});
                }
            }
        } else if (!(v > 0.0)) {
            findings.push_back({Severity::warning, year, "non-positive level " + format_report(v)});
        }
    }
    return findings;
}

[[nodiscard]] inline std::vector<Finding> validate(const AnnualSeries& s, const ValidationBands& bands = {}) {
    return validate_values(s.start_year(), s.values(), s.unit(), bands);
}

[[nodiscard]] inline bool has_errors(const std::vector<Finding>& findings) {
    for (const auto& f : findings) {
        if (f.severity == Severity::error) {
            return true;
        }
    }
    return false;
}

[[nodiscard]] inline std::string to_string(const Finding& f) {
    return std::string(f.severity == Severity::error ? "error" : "warning") + " [" + std::to_string(f.year) +
           "] " + f.message;
}

}  // namespace lfmkit
