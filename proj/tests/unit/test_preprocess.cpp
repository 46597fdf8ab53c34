#include "doctest.h"

#include <cmath>
#include <random>

#include "xclass/preprocess.hpp"

using namespace xclass;

TEST_CASE("running stats: first sample and two-sample mean") {
    RunningStats s;
    update_stats(s, {2.0, 4.0});
    CHECK(s.count == 1);
    CHECK(s.mean == Vec{2.0, 4.0});

    RunningStats t;
    update_stats(t, {0.0});
    update_stats(t, {2.0});
    CHECK(t.mean[0] == doctest::Approx(1.0));
    CHECK(t.mean_sq[0] == doctest::Approx(2.0));
}

TEST_CASE("running stats match batch moments") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g(3.0, 5.0);
    RunningStats s;
    std::vector<Vec> xs;
    for (int i = 0; i < 100; ++i) {
        xs.push_back({g(rng), g(rng), g(rng)});
        update_stats(s, xs.back());
    }
    for (std::size_t f = 0; f < 3; ++f) {
        double m = 0.0, q = 0.0;
        for (const auto& x : xs) m += x[f];
        m /= 100.0;
        for (const auto& x : xs) q += (x[f] - m) * (x[f] - m);
        CHECK(std::abs(s.mean[f] - m) < 1e-9);
        CHECK(std::abs(s.variance()[f] - q / 100.0) < 1e-9);
    }
}

TEST_CASE("standardize") {
    RunningStats s;
    update_stats(s, {1.0, 0.0});
    update_stats(s, {5.0, 2.0});
    // mean (3, 1), population sigma (2, 1)
    const Vec z = standardize(s, {5.0, 1.0});
    CHECK(z[0] == doctest::Approx(1.0));
    CHECK(z[1] == doctest::Approx(0.0));
}

TEST_CASE("outlier flag at |z| >= 3") {
    CHECK(is_outlier({0.0, 3.5}));
    CHECK(is_outlier({-3.0}));
    CHECK_FALSE(is_outlier({2.99, -2.99}));
}

TEST_CASE("constant feature is degenerate only when strict") {
    RunningStats s;
    update_stats(s, {1.0, 7.0});
    update_stats(s, {3.0, 7.0});
    try {
        standardize(s, {2.0, 7.0}, true);
        FAIL("expected DegenerateFeature");
    } catch (const DegenerateFeature& e) {
        CHECK(e.feature() == 1);
    }
    const Vec z = standardize(s, {2.0, 7.0}, false);
    CHECK(std::isfinite(z[1]));
}

TEST_CASE("normalize over standardized extrema") {
    RunningStats s;
    s.count = 2;
    s.mean = {0.0};
    s.mean_sq = {1.0};
    s.std_min = {-1.0};
    s.std_max = {1.0};
    CHECK(normalize(s, {-1.0})[0] == doctest::Approx(0.0));
    CHECK(normalize(s, {1.0})[0] == doctest::Approx(1.0));
    CHECK(normalize(s, {0.0})[0] == doctest::Approx(0.5));
    CHECK(normalize(s, {4.0})[0] == doctest::Approx(1.0));
}

TEST_CASE("dimension mismatch") {
    RunningStats s;
    update_stats(s, {1.0, 2.0});
    CHECK_THROWS_AS(update_stats(s, {1.0}), DimensionError);
    CHECK_THROWS_AS(standardize(s, {1.0, 2.0, 3.0}), DimensionError);
}

TEST_CASE("frame maps raw values to the unit box") {
    Frame fr;
    fr.extend({0.0, 10.0});
    fr.extend({4.0, 20.0});
    const Vec a = fr.map({2.0, 25.0});
    CHECK(a[0] == doctest::Approx(0.5));
    CHECK(a[1] == doctest::Approx(1.5));
    CHECK(fr.map_clamped({2.0, 25.0})[1] == doctest::Approx(1.0));
    CHECK(fr.map_clamped({-1.0, 10.0})[0] == doctest::Approx(0.0));
}
