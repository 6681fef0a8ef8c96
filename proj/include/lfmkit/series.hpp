#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lfmkit/error.hpp"

namespace lfmkit {

/// Physical meaning of the numbers carried by a series.
enum class Unit {
    rate,     ///< dimensionless fraction per year (0.04 == 4%)
    persons,  ///< head counts (labor force, population)
    index,    ///< index level (e.g. CPI level, 2000 = 100)
};

[[nodiscard]] inline std::string_view to_string(Unit u) {
    switch (u) {
        case Unit::rate: return "rate";
        case Unit::persons: return "persons";
        case Unit::index: return "index";
    }
    return "rate";
}

[[nodiscard]] inline Unit unit_from_string(std::string_view s) {
    if (s == "rate") return Unit::rate;
    if (s == "persons") return Unit::persons;
    if (s == "index") return Unit::index;
    throw SpecificationError("unknown unit '" + std::string(s) + "' (expected rate, persons or index)");
}

/// Closed interval of calendar years.
struct YearRange {
    int first = 0;
    int last = 0;

    [[nodiscard]] constexpr bool contains(int year) const noexcept { return year >= first && year <= last; }
    [[nodiscard]] constexpr bool contains(YearRange other) const noexcept {
        return other.first >= first && other.last <= last;
    }
    [[nodiscard]] constexpr int length() const noexcept { return last - first + 1; }
    [[nodiscard]] std::string to_string() const { return std::to_string(first) + ":" + std::to_string(last); }

    friend constexpr bool operator==(YearRange, YearRange) = default;
};

/// Year-indexed, gap-free sequence of finite values.
///
/// Value i belongs to year start_year() + i.  Instances are immutable; every
/// transformation returns a new series.
class AnnualSeries {
public:
    AnnualSeries(int start_year, std::vector<double> values, Unit unit = Unit::rate, std::string label = {})
        : start_year_(start_year), values_(std::move(values)), unit_(unit), label_(std::move(label)) {
        if (values_.empty()) {
            throw InsufficientDataError("series '" + label_ + "' must hold at least one value");
        }
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (!std::isfinite(values_[i])) {
                throw DomainError("series '" + label_ + "' has a non-finite value in year " +
                                  std::to_string(start_year_ + static_cast<int>(i)));
            }
        }
    }

    [[nodiscard]] int start_year() const noexcept { return start_year_; }
    [[nodiscard]] int end_year() const noexcept { return start_year_ + static_cast<int>(values_.size()) - 1; }
    [[nodiscard]] YearRange years() const noexcept { return {start_year(), end_year()}; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] Unit unit() const noexcept { return unit_; }
    [[nodiscard]] const std::string& label() const noexcept { return label_; }

    [[nodiscard]] bool covers(int year) const noexcept { return years().contains(year); }
    [[nodiscard]] bool covers(YearRange r) const noexcept { return years().contains(r); }

    [[nodiscard]] double at(int year) const {
        if (!covers(year)) {
            throw RangeError("year " + std::to_string(year) + " outside series '" + label_ + "' (" +
                             years().to_string() + ")");
        }
        return values_[static_cast<std::size_t>(year - start_year_)];
    }

    [[nodiscard]] AnnualSeries with_label(std::string label) const {
        return AnnualSeries(start_year_, values_, unit_, std::move(label));
    }

    friend bool operator==(const AnnualSeries&, const AnnualSeries&) = default;

private:
    int start_year_;
    std::vector<double> values_;
    Unit unit_;
    std::string label_;
};

/// Two series restricted to their common years.
struct SeriesPair {
    AnnualSeries x;
    AnnualSeries y;
    YearRange common_window;
};

/// Backward relative change (s[t] - s[t-1]) / s[t-1], reported at year t.
[[nodiscard]] inline AnnualSeries change_rate(const AnnualSeries& s) {
    if (s.size() < 2) {
        throw InsufficientDataError("change rate of '" + s.label() + "' needs at least two years");
    }
    const auto v = s.values();
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!(v[i] > 0.0)) {
            throw DomainError("change rate of '" + s.label() + "' requires positive levels; year " +
                              std::to_string(s.start_year() + static_cast<int>(i)) + " has " + std::to_string(v[i]));
        }
    }
    std::vector<double> out;
    out.reserve(v.size() - 1);
    for (std::size_t i = 1; i < v.size(); ++i) {
        out.push_back((v[i] - v[i - 1]) / v[i - 1]);
    }
    return AnnualSeries(s.start_year() + 1, std::move(out), Unit::rate, "change_rate(" + s.label() + ")");
}

/// Plain first difference s[t] - s[t-1], reported at year t.
[[nodiscard]] inline AnnualSeries difference(const AnnualSeries& s) {
    if (s.size() < 2) {
        throw InsufficientDataError("difference of '" + s.label() + "' needs at least two years");
    }
    const auto v = s.values();
    std::vector<double> out;
    out.reserve(v.size() - 1);
    for (std::size_t i = 1; i < v.size(); ++i) {
        out.push_back(v[i] - v[i - 1]);
    }
    return AnnualSeries(s.start_year() + 1, std::move(out), s.unit(), "diff(" + s.label() + ")");
}

/// Moves every value k years later: the value measured in year y is aligned
/// against year y + k.  Used to regress on x(t - k).
[[nodiscard]] inline AnnualSeries lag_shift(const AnnualSeries& s, int k) {
    if (k < 0) {
        throw DomainError("lag must be non-negative, got " + std::to_string(k));
    }
    return AnnualSeries(s.start_year() + k, {s.values().begin(), s.values().end()}, s.unit(), s.label());
}

[[nodiscard]] inline AnnualSeries window(const AnnualSeries& s, int first, int last) {
    if (first > last) {
        throw RangeError("window " + std::to_string(first) + ":" + std::to_string(last) + " is empty");
    }
    if (!s.covers(YearRange{first, last})) {
        throw RangeError("window " + std::to_string(first) + ":" + std::to_string(last) + " outside series '" +
                         s.label() + "', available " + s.years().to_string());
    }
    const auto v = s.values();
    const auto begin = v.begin() + (first - s.start_year());
    return AnnualSeries(first, {begin, begin + (last - first + 1)}, s.unit(), s.label());
}

[[nodiscard]] inline AnnualSeries window(const AnnualSeries& s, YearRange r) { return window(s, r.first, r.last); }

/// Intersection of the year ranges of two series; empty intersection throws.
[[nodiscard]] inline YearRange common_years(const AnnualSeries& x, const AnnualSeries& y) {
    const YearRange r{std::max(x.start_year(), y.start_year()), std::min(x.end_year(), y.end_year())};
    if (r.first > r.last) {
        throw AlignmentError("series '" + x.label() + "' (" + x.years().to_string() + ") and '" + y.label() + "' (" +
                             y.years().to_string() + ") share no years");
    }
    return r;
}

[[nodiscard]] inline SeriesPair align(const AnnualSeries& x, const AnnualSeries& y) {
    const auto r = common_years(x, y);
    return SeriesPair{window(x, r), window(y, r), r};
}

/// Running sum starting at from_year: result[t] = sum of s over from_year..t.
[[nodiscard]] inline AnnualSeries cumulative(const AnnualSeries& s, int from_year) {
    if (!s.covers(from_year)) {
        throw RangeError("cumulative start " + std::to_string(from_year) + " outside series '" + s.label() +
                         "', available " + s.years().to_string());
    }
    const auto v = s.values();
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(s.end_year() - from_year + 1));
    double acc = 0.0;
    for (auto i = static_cast<std::size_t>(from_year - s.start_year()); i < v.size(); ++i) {
        acc += v[i];
        out.push_back(acc);
    }
    return AnnualSeries(from_year, std::move(out), s.unit(), "cumulative(" + s.label() + ")");
}

}  // namespace lfmkit
