#include <cmath>
#include <map>

#include "doctest.h"
#include "sbus/stats.h"

using namespace sbus;

TEST_CASE("per round rate inverts r-fold flip composition") {
    // p_shot = (1 - (1-2 p_round)^r) / 2 must round-trip.
    for (double p : {1e-5, 1e-3, 0.05, 0.3}) {
        for (int r : {1, 9, 21}) {
            double shot = 0.5 * (1.0 - std::pow(1.0 - 2.0 * p, r));
            CHECK(per_round_rate(shot, r) == doctest::Approx(p).epsilon(1e-10));
        }
    }
    CHECK(per_round_rate(0.0, 9) == 0.0);
    // At or beyond the saturation point the rate pins to 1/2.
    CHECK(per_round_rate(0.5, 9) == doctest::Approx(0.5));
    CHECK(per_round_rate(0.7, 9) == doctest::Approx(0.5));
}

TEST_CASE("logical error rate carries binomial error bars") {
    auto est = logical_error_rate(10000, 250, 9);
    CHECK(est.shots == 10000);
    CHECK(est.failures == 250);
    CHECK(est.p_shot == doctest::Approx(0.025));
    CHECK(est.p_shot_stderr == doctest::Approx(std::sqrt(0.025 * 0.975 / 10000)).epsilon(1e-9));
    CHECK(est.p_round == doctest::Approx(per_round_rate(0.025, 9)));
}

TEST_CASE("pseudo threshold finds the crossing of two curves") {
    // Two power-law curves crossing at exactly x = 0.01.
    std::map<int, std::vector<std::pair<double, double>>> curves;
    for (double x : {0.004, 0.006, 0.01, 0.016, 0.025}) {
        curves[3].push_back({x, 0.5 * (x / 0.01)});
        curves[5].push_back({x, 0.5 * (x / 0.01) * (x / 0.01)});
    }
    auto est = pseudo_threshold(curves);
    REQUIRE(est.found());
    CHECK(est.mean == doctest::Approx(0.01).epsilon(1e-6));
    CHECK(est.stddev == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(est.crossings.size() == 1);
    CHECK(est.crossings[0].first == std::pair<int, int>{3, 5});
}

TEST_CASE("pseudo threshold reports curve pairs with no crossing") {
    std::map<int, std::vector<std::pair<double, double>>> curves;
    for (double x : {0.01, 0.02, 0.03}) {
        curves[3].push_back({x, 0.001});
        curves[5].push_back({x, 0.01});  // always above, never crosses
    }
    auto est = pseudo_threshold(curves);
    CHECK(!est.found());
    REQUIRE(est.no_crossing.size() == 1);
    CHECK(est.no_crossing[0] == std::pair<int, int>{3, 5});
}

TEST_CASE("zero-rate points are skipped not fatal") {
    std::map<int, std::vector<std::pair<double, double>>> curves;
    for (double x : {0.004, 0.01, 0.025}) {
        curves[3].push_back({x, 0.5 * (x / 0.01)});
        curves[5].push_back({x, x < 0.005 ? 0.0 : 0.5 * (x / 0.01) * (x / 0.01)});
    }
    auto est = pseudo_threshold(curves);
    CHECK(est.found());
    CHECK(est.mean == doctest::Approx(0.01).epsilon(1e-6));
}
