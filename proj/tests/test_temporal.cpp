#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "snc/temporal.hpp"
#include "support.hpp"

using namespace snc;
using snc::support::at;
using snc::support::slice_at;
using std::chrono::hours;
using std::chrono::seconds;

TEST(Burstiness, RegularIsMinusOne) {
    std::vector<double> t;
    for (int i = 0; i < 48; ++i) t.push_back(3600.0 * i);
    auto s = temporal::burstiness(t);
    ASSERT_TRUE(s.burstiness);
    EXPECT_EQ(*s.burstiness, -1.0);
    EXPECT_EQ(s.mean_iat_s, 3600.0);
}

TEST(Burstiness, OneLongGap) {
    // gaps 1,1,1,1,100: mu = 20.8, population variance = (4 * 19.8^2 + 79.2^2) / 5 = 1568.16
    const double mu = 20.8, sigma = std::sqrt(1568.16);
    std::vector<double> gaps{1, 1, 1, 1, 100};
    auto s = temporal::burstiness_from_gaps(gaps);
    EXPECT_NEAR(*s.burstiness, (sigma - mu) / (sigma + mu), 1e-12);
    EXPECT_NEAR(*s.burstiness, 0.3113, 1e-4);
}

TEST(Burstiness, MissingCases) {
    EXPECT_FALSE(temporal::burstiness(std::vector<double>{}).burstiness);
    EXPECT_FALSE(temporal::burstiness(std::vector<double>{1, 5}).burstiness);
    EXPECT_FALSE(temporal::burstiness(std::vector<double>{7, 7, 7, 7}).burstiness);
}

TEST(Burstiness, ScaleAndShiftInvariant) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1e6), c(1e-3, 1e3);
    for (int iter = 0; iter < 100; ++iter) {
        std::vector<double> t(3 + rng() % 200);
        for (auto& x : t) x = u(rng);
        std::sort(t.begin(), t.end());
        auto base = *temporal::burstiness(t).burstiness;
        const double k = c(rng), shift = u(rng);
        auto scaled = t, shifted = t;
        for (auto& x : scaled) x *= k;
        for (auto& x : shifted) x += shift;
        EXPECT_NEAR(*temporal::burstiness(scaled).burstiness, base, 1e-12);
        EXPECT_NEAR(*temporal::burstiness(shifted).burstiness, base, 1e-9);
        EXPECT_GE(base, -1.0);
        EXPECT_LE(base, 1.0);
    }
}

TEST(Burstiness, FromSlice) {
    auto t0 = at("2025-01-01T00:00:00Z");
    auto s = slice_at("a", {t0, t0 + hours{1}, t0 + hours{2}, t0 + hours{3}});
    EXPECT_EQ(*temporal::burstiness(s).burstiness, -1.0);
    EXPECT_EQ(temporal::gaps_seconds(s), (std::vector<double>{3600, 3600, 3600}));
}

TEST(Coactivity, SingleSource) {
    auto t0 = at("2025-01-01T00:00:00Z");
    auto a = slice_at("a", {t0, t0 + hours{1}, t0 + hours{13}, t0 + hours{40}});
    auto series = temporal::coactivity({&a});
    for (const auto& b : series.bins) EXPECT_LE(b.active_sources, 1u);
    EXPECT_EQ(series.mean_active, 1.0);
    ASSERT_EQ(series.bins.size(), 7u);  // 00-06 .. 36-42
    EXPECT_EQ(series.bins[0].start, t0);
}

TEST(Coactivity, AlternatingSources) {
    auto t0 = at("2025-01-01T00:00:00Z");
    std::vector<Timestamp> ta, tb;
    for (int i = 0; i < 10; ++i) (i % 2 ? tb : ta).push_back(t0 + hours{6 * i + 1});
    auto a = slice_at("a", ta), b = slice_at("b", tb);
    auto series = temporal::coactivity({&a, &b});
    EXPECT_EQ(series.mean_active, 1.0);
    EXPECT_EQ(series.full_fraction, 0.0);
    EXPECT_EQ(series.bins.size(), 10u);
}

TEST(Coactivity, WindowBinsAndFullFraction) {
    auto w = make_window("ev", "2025-01-01", "2025-01-02", std::nullopt, {});
    auto t0 = at("2025-01-01T00:00:00Z");
    auto a = slice_at("a", {t0 + hours{1}, t0 + hours{7}});
    auto b = slice_at("b", {t0 + hours{2}});
    auto series = temporal::coactivity({&a, &b}, &w);
    ASSERT_EQ(series.bins.size(), 8u);
    EXPECT_EQ(series.bins[0].active_sources, 2u);
    EXPECT_EQ(series.bins[1].active_sources, 1u);
    EXPECT_DOUBLE_EQ(series.mean_active, 1.5);
    EXPECT_DOUBLE_EQ(series.mean_all, 3.0 / 8.0);
    EXPECT_DOUBLE_EQ(series.full_fraction, 1.0 / 8.0);
}

TEST(Overlap, IdenticalAndDisjointHours) {
    auto t0 = at("2025-01-01T00:00:00Z");
    auto a = slice_at("a", {t0 + hours{1}, t0 + hours{5}});
    auto b = slice_at("b", {t0 + hours{1} + seconds{59}, t0 + hours{5} + seconds{3000}});
    auto c = slice_at("c", {t0 + hours{2}});
    SourceSlice empty;
    empty.source = "e";
    auto m = temporal::hourly_overlap({&a, &b, &c, &empty});
    EXPECT_EQ(*m.jaccard[0][1], 1.0);
    EXPECT_EQ(*m.jaccard[0][2], 0.0);
    EXPECT_FALSE(m.jaccard[0][3]);
    EXPECT_FALSE(m.jaccard[3][3]);
}

TEST(Overlap, JaccardHandValue) {
    std::set<int> a{1, 2, 3, 4}, b{3, 4, 5};
    EXPECT_DOUBLE_EQ(temporal::jaccard(a, b), 2.0 / 5.0);
    EXPECT_EQ(temporal::jaccard(std::set<int>{}, std::set<int>{}), 0.0);
}

TEST(Heatmap, SingleCell) {
    // 2025-01-06 is a Monday.
    auto mon = at("2025-01-06T09:00:00Z");
    auto s = slice_at("a", {mon, mon + seconds{100}, mon + std::chrono::days{7}});
    auto h = temporal::posting_heatmap(s);
    EXPECT_EQ(h[0][9], 1.0);
    double total = 0.0;
    for (const auto& row : h)
        for (double v : row) total += v;
    EXPECT_EQ(total, 1.0);
}

TEST(Heatmap, UniformPostsSpreadEvenly) {
    std::mt19937_64 rng(9);
    const auto start = epoch_seconds(at("2025-01-06T00:00:00Z"));
    std::uniform_int_distribution<std::int64_t> when(0, 7 * 86400 * 50 - 1);
    std::vector<Timestamp> times;
    const int n = 7 * 24 * 400;
    for (int i = 0; i < n; ++i) times.push_back(from_epoch_seconds(start + when(rng)));
    std::sort(times.begin(), times.end());
    auto h = temporal::posting_heatmap(slice_at("a", times));
    // Per-row share of an hour: about 1/24 with sd sqrt(p(1-p)/m), m ~ n/7 per row.
    const double p = 1.0 / 24.0, m = n / 7.0;
    const double tol = 4.0 * std::sqrt(p * (1 - p) / m);
    for (const auto& row : h) {
        double sum = 0.0;
        for (double v : row) {
            EXPECT_NEAR(v, p, tol);
            sum += v;
        }
        EXPECT_NEAR(sum, 1.0, 1e-12);
    }
}
