#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "snc/semantic.hpp"
#include "support.hpp"

using namespace snc;

namespace {

std::vector<double> unit_random(std::size_t dim, std::mt19937_64& rng) {
    std::normal_distribution<double> n;
    std::vector<double> v(dim);
    double s = 0;
    for (auto& x : v) {
        x = n(rng);
        s += x * x;
    }
    for (auto& x : v) x /= std::sqrt(s);
    return v;
}

double brute_mean_dot(const std::vector<std::vector<double>>& vs) {
    double sum = 0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < vs.size(); ++i)
        for (std::size_t j = i + 1; j < vs.size(); ++j) {
            double d = 0;
            for (std::size_t k = 0; k < vs[i].size(); ++k) d += vs[i][k] * vs[j][k];
            sum += d;
            ++pairs;
        }
    return sum / static_cast<double>(pairs);
}

std::optional<double> identity_mean_dot(const std::vector<std::vector<double>>& vs) {
    std::vector<const std::vector<double>*> ptrs;
    for (const auto& v : vs) ptrs.push_back(&v);
    return semantic::mean_pairwise_dot(ptrs);
}

semantic::EmbeddingStore parse(const std::string& body) {
    std::istringstream in(body);
    return semantic::load_embeddings(in);
}

}  // namespace

TEST(Identity, MatchesPairwiseLoop) {
    std::mt19937_64 rng(1);
    for (int iter = 0; iter < 20; ++iter) {
        std::vector<std::vector<double>> vs;
        for (std::size_t i = 0, n = 2 + rng() % 60; i < n; ++i) vs.push_back(unit_random(384, rng));
        EXPECT_NEAR(*identity_mean_dot(vs), brute_mean_dot(vs), 1e-10);
    }
    std::vector<std::vector<double>> five;
    for (int i = 0; i < 5; ++i) five.push_back(unit_random(8, rng));
    EXPECT_NEAR(*identity_mean_dot(five), brute_mean_dot(five), 1e-10);
}

TEST(Identity, Extremes) {
    std::vector<std::vector<double>> same(7, std::vector<double>{0.6, 0.8});
    EXPECT_NEAR(*identity_mean_dot(same), 1.0, 1e-15);
    EXPECT_EQ(*identity_mean_dot({{1, 0}, {0, 1}}), 0.0);
    EXPECT_FALSE(identity_mean_dot({{1, 0}}));
}

TEST(Identity, RotationInvariant) {
    std::mt19937_64 rng(2);
    std::vector<std::vector<double>> vs;
    for (int i = 0; i < 30; ++i) vs.push_back(unit_random(16, rng));
    // Givens rotation in a random plane.
    const double th = 0.7;
    auto rotated = vs;
    for (auto& v : rotated) {
        double a = v[3], b = v[11];
        v[3] = std::cos(th) * a - std::sin(th) * b;
        v[11] = std::sin(th) * a + std::cos(th) * b;
    }
    EXPECT_NEAR(*identity_mean_dot(vs), *identity_mean_dot(rotated), 1e-12);
}

TEST(VectorFile, LoadsAndRenormalizes) {
    auto store = parse("dim=3 count=3\nk1 2 0 0\nk2 0 0.5 0\nk3 1 1 1\n");
    EXPECT_EQ(store.size(), 3u);
    EXPECT_EQ(*store.find("k1"), (std::vector<double>{1, 0, 0}));
    double n = 0;
    for (double x : *store.find("k3")) n += x * x;
    EXPECT_NEAR(n, 1.0, 1e-15);
}

TEST(VectorFile, ZeroAndDuplicateSkipped) {
    auto store = parse("dim=2 count=3\na 0 0\nb 1 0\nb 0 1\n");
    EXPECT_EQ(store.size(), 1u);
    EXPECT_EQ(store.skipped_zero, 1u);
    EXPECT_EQ(store.skipped_duplicate, 1u);
}

TEST(VectorFile, Errors) {
    EXPECT_THROW(parse("dim=2 count=2\na 1 0\nb 1 0 0\n"), InputError);
    EXPECT_THROW(parse("dim=2 count=3\na 1 0\n"), InputError);
    EXPECT_THROW(parse("dims=2 count=1\na 1 0\n"), InputError);
    EXPECT_THROW(parse("dim=2 count=1\na 1 x\n"), InputError);
    EXPECT_THROW(parse("dim=2 count=1\na 1 nan\n"), InputError);
    EXPECT_THROW(parse(""), InputError);
    EXPECT_THROW(semantic::load_embeddings(std::string("/nonexistent.vec")), InputError);
}

TEST(VectorFile, WriteThenRead) {
    std::mt19937_64 rng(4);
    std::vector<std::pair<std::string, std::vector<double>>> rows;
    for (int i = 0; i < 3; ++i) rows.emplace_back("telegram:s:" + std::to_string(i), unit_random(384, rng));
    std::ostringstream out;
    semantic::write_embeddings(out, rows, 384);
    EXPECT_EQ(out.str().rfind("dim=384 count=3\n", 0), 0u);
    auto store = parse(out.str());
    ASSERT_EQ(store.size(), 3u);
    EXPECT_EQ(store.skipped_zero + store.skipped_duplicate, 0u);
    for (const auto& [k, v] : rows)
        for (std::size_t d = 0; d < v.size(); ++d) EXPECT_NEAR((*store.find(k))[d], v[d], 1e-8);
}

TEST(Sampling, CapAndDeterminism) {
    auto a = semantic::sample_indices(1000, 800, 42);
    EXPECT_EQ(a.size(), 800u);
    EXPECT_TRUE(std::is_sorted(a.begin(), a.end()));
    EXPECT_EQ(std::set<std::size_t>(a.begin(), a.end()).size(), 800u);
    EXPECT_EQ(a, semantic::sample_indices(1000, 800, 42));
    EXPECT_NE(a, semantic::sample_indices(1000, 800, 43));
    EXPECT_EQ(semantic::sample_indices(5, 800, 1).size(), 5u);
}

TEST(Sampling, RoughlyUniform) {
    std::vector<int> hits(100, 0);
    for (std::uint64_t seed = 0; seed < 2000; ++seed)
        for (auto i : semantic::sample_indices(100, 10, seed)) ++hits[i];
    // Each index is picked with probability 0.1: mean 200, sd ~13.4.
    for (int h : hits) {
        EXPECT_GT(h, 140);
        EXPECT_LT(h, 260);
    }
}

TEST(HScore, SliceWithStore) {
    auto slice = support::make_slice("s", {"m one", "m two", "m three"});
    semantic::EmbeddingStore store;
    store.dim = 2;
    store.add("telegram:s:1", {1, 0});
    store.add("telegram:s:2", {0, 3});
    auto h = semantic::h_score(slice, store, 7);
    EXPECT_EQ(h.n_sampled, 2u);
    EXPECT_EQ(*h.h_score, 0.0);
    store.add("telegram:s:3", {1, 1});
    auto h3 = semantic::h_score(slice, store, 7);
    EXPECT_NEAR(*h3.h_score, 2.0 * std::sqrt(0.5) / 3.0, 1e-15);
    EXPECT_EQ(semantic::h_score(slice, store, 7).h_score, h3.h_score);
}

TEST(HScore, CappedSampleIsBitStable) {
    std::mt19937_64 rng(8);
    std::vector<std::string> texts(300, "message");
    auto slice = support::make_slice("s", texts);
    semantic::EmbeddingStore store;
    store.dim = 32;
    for (const auto& r : slice.records) store.add(r.key(), unit_random(32, rng));
    auto a = semantic::h_score(slice, store, 99, 50);
    auto b = semantic::h_score(slice, store, 99, 50);
    EXPECT_EQ(a.n_sampled, 50u);
    EXPECT_EQ(*a.h_score, *b.h_score);
}

TEST(CrossSource, MeanVectorDot) {
    auto s1 = support::make_slice("a", {"x1", "x2"});
    auto s2 = support::make_slice("b", {"y1", "y2"});
    auto s3 = support::make_slice("c", {"z1"});
    auto s4 = support::make_slice("d", {"none"});
    semantic::EmbeddingStore store;
    store.dim = 3;
    store.add("telegram:a:1", {1, 0, 0});
    store.add("telegram:a:2", {0, 1, 0});
    store.add("telegram:b:1", {1, 0, 0});
    store.add("telegram:b:2", {0, 1, 0});
    store.add("telegram:c:1", {0, 0, 1});
    auto m = semantic::cross_source_matrix(std::vector<const SourceSlice*>{&s1, &s2, &s3, &s4}, store, 1);
    // Identical sets: mean m = (0.5, 0.5, 0), |m|^2 = 0.5.
    EXPECT_DOUBLE_EQ(*m[0][1], 0.5);
    EXPECT_EQ(*m[0][2], 0.0);
    EXPECT_EQ(*m[0][0], 0.0);
    EXPECT_FALSE(m[2][2]);  // one vector: no pairs
    EXPECT_FALSE(m[3][0]);
    EXPECT_EQ(m[1][0], m[0][1]);
}
