#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "lfmkit/series.hpp"
#include "oracles.hpp"

using namespace lfmkit;

namespace {

std::vector<double> vals(const AnnualSeries& s) { return {s.values().begin(), s.values().end()}; }

}  // namespace

TEST(AnnualSeries, RejectsEmptyAndNonFinite) {
    EXPECT_THROW(AnnualSeries(2000, {}), InsufficientDataError);
    EXPECT_THROW(AnnualSeries(2000, {1.0, std::nan("")}), DomainError);
    EXPECT_THROW(AnnualSeries(2000, {std::numeric_limits<double>::infinity()}), DomainError);
}

TEST(AnnualSeries, YearIndexing) {
    const AnnualSeries s(1990, {1, 2, 3});
    EXPECT_EQ(s.end_year(), 1992);
    EXPECT_DOUBLE_EQ(s.at(1991), 2.0);
    EXPECT_THROW((void)s.at(1993), RangeError);
}

TEST(ChangeRate, ConstantSeriesIsZero) {
    const auto r = change_rate(AnnualSeries(2000, {100, 100, 100}, Unit::persons));
    EXPECT_EQ(r.start_year(), 2001);
    EXPECT_EQ(vals(r), (std::vector<double>{0.0, 0.0}));
    EXPECT_EQ(r.unit(), Unit::rate);
}

TEST(ChangeRate, SingleStep) {
    const auto r = change_rate(AnnualSeries(2000, {100, 110}, Unit::persons));
    EXPECT_EQ(r.start_year(), 2001);
    ASSERT_EQ(r.size(), 1u);
    EXPECT_DOUBLE_EQ(r.at(2001), 0.10);
}

TEST(ChangeRate, HandArithmetic) {
    // (60 - 50) / 50 = 0.2, (57 - 60) / 60 = -0.05
    const auto r = change_rate(AnnualSeries(2000, {50, 60, 57}, Unit::persons));
    EXPECT_DOUBLE_EQ(r.at(2001), 0.2);
    EXPECT_DOUBLE_EQ(r.at(2002), -0.05);
}

TEST(ChangeRate, Errors) {
    EXPECT_THROW((void)change_rate(AnnualSeries(2000, {5})), InsufficientDataError);
    try {
        (void)change_rate(AnnualSeries(2000, {5, 0, 3}, Unit::persons, "lf"));
        FAIL();
    } catch (const DomainError& e) {
        EXPECT_NE(std::string(e.what()).find("2001"), std::string::npos);
    }
}

TEST(ChangeRate, GeometricSeriesIsConstant) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> g_dist(-0.05, 0.05);
    for (int trial = 0; trial < 50; ++trial) {
        const double g = g_dist(rng);
        std::vector<double> levels{1e6};
        for (int i = 1; i < 40; ++i) levels.push_back(levels.back() * (1.0 + g));
        const auto r = change_rate(AnnualSeries(1960, levels, Unit::persons));
        for (double v : r.values()) {
            EXPECT_NEAR(v, g, 8 * std::numeric_limits<double>::epsilon());
        }
    }
}

TEST(LagShift, IdentityAndShift) {
    const AnnualSeries s(2000, {1, 2});
    EXPECT_EQ(lag_shift(s, 0), s);
    const auto t = lag_shift(s, 3);
    EXPECT_EQ(t.start_year(), 2003);
    EXPECT_EQ(vals(t), vals(s));
    EXPECT_EQ(lag_shift(lag_shift(s, 2), 1), lag_shift(s, 3));
    EXPECT_THROW((void)lag_shift(s, -1), DomainError);
}

TEST(Window, Basics) {
    const AnnualSeries s(2000, {0, 1, 2, 3, 4, 5});
    EXPECT_EQ(window(s, 2000, 2005), s);
    const auto w = window(s, 2002, 2003);
    EXPECT_EQ(w.size(), 2u);
    EXPECT_EQ(w.start_year(), 2002);
    EXPECT_EQ(vals(w), (std::vector<double>{2, 3}));
    EXPECT_EQ(window(window(s, 2001, 2004), 2002, 2005 - 1), window(s, 2002, 2004));
}

TEST(Window, OutOfRangeListsSpan) {
    const AnnualSeries s(2000, {0, 1, 2});
    try {
        (void)window(s, 1999, 2001);
        FAIL();
    } catch (const RangeError& e) {
        EXPECT_NE(std::string(e.what()).find("2000:2002"), std::string::npos);
    }
    EXPECT_THROW((void)window(s, 2002, 2001), RangeError);
}

TEST(Align, Cases) {
    const AnnualSeries a(2000, std::vector<double>(11, 1.0));
    const auto same = align(a, a);
    EXPECT_EQ(same.x, a);
    EXPECT_EQ(same.y, a);

    const AnnualSeries b(2005, std::vector<double>(11, 2.0));
    const auto p = align(a, b);
    EXPECT_EQ(p.common_window, (YearRange{2005, 2010}));
    EXPECT_EQ(p.x.size(), p.y.size());

    EXPECT_THROW((void)align(AnnualSeries(2000, {1, 2, 3}), AnnualSeries(2005, {1, 2, 3})), AlignmentError);
}

TEST(Align, CommutativeAndIdempotent) {
    const AnnualSeries a(1990, {1, 2, 3, 4, 5, 6});
    const AnnualSeries b(1993, {7, 8, 9, 10, 11, 12, 13});
    const auto ab = align(a, b);
    const auto ba = align(b, a);
    EXPECT_EQ(ab.common_window, ba.common_window);
    EXPECT_EQ(ab.x, ba.y);
    const auto again = align(ab.x, ab.y);
    EXPECT_EQ(again.x, ab.x);
    EXPECT_EQ(again.y, ab.y);
}

TEST(Cumulative, Cases) {
    const auto z = cumulative(AnnualSeries(2000, {0, 0, 0}), 2000);
    EXPECT_EQ(vals(z), (std::vector<double>{0, 0, 0}));

    const auto c = cumulative(AnnualSeries(2000, {0.01, 0.02, -0.01}), 2000);
    const auto expected = oracle::prefix_sums({0.01, 0.02, -0.01});  // {0.01, 0.03, 0.02}
    ASSERT_EQ(c.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(c.values()[i], expected[i]);
    EXPECT_DOUBLE_EQ(c.at(2002), 0.02);

    const auto late = cumulative(AnnualSeries(2000, {5, 1, 2}), 2001);
    EXPECT_EQ(late.start_year(), 2001);
    EXPECT_DOUBLE_EQ(late.at(2001), 1.0);
    EXPECT_DOUBLE_EQ(late.at(2002), 3.0);

    EXPECT_THROW((void)cumulative(AnnualSeries(2000, {1}), 1999), RangeError);
}

TEST(Cumulative, InverseOfDifferencing) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const auto v = oracle::uniform(rng, 5 + trial % 30, -0.05, 0.05);
        const AnnualSeries s(1970, v);
        const int from = 1970 + trial % 3;
        const auto c = cumulative(s, from);
        EXPECT_NEAR(c.at(c.end_year()), oracle::prefix_sums(vals(window(s, from, s.end_year()))).back(), 1e-15);
        const auto d = difference(c);
        for (int y = from + 1; y <= s.end_year(); ++y) {
            const double scale = std::max(std::abs(c.at(y)), std::abs(c.at(y - 1)));
            EXPECT_NEAR(d.at(y), s.at(y), 2 * std::numeric_limits<double>::epsilon() * scale);
        }
    }
}
