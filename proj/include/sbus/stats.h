#pragma once

#include <map>
#include <utility>
#include <vector>

namespace sbus {

struct RateEstimate {
    long shots = 0;
    long failures = 0;
    double p_shot = 0.0;
    double p_round = 0.0;
    double p_shot_stderr = 0.0;  // binomial
};

// Per-round rate from the per-shot rate over r rounds, inverting
// r-fold composition of a two-outcome flip channel.
double per_round_rate(double p_shot, int rounds);

RateEstimate logical_error_rate(long shots, long failures, int rounds);

struct ThresholdEstimate {
    double mean = 0.0;
    double stddev = 0.0;
    // (smaller distance, larger distance) -> crossing parameter.
    std::vector<std::pair<std::pair<int, int>, double>> crossings;
    std::vector<std::pair<int, int>> no_crossing;  // pairs with none in range
    bool found() const { return !crossings.empty(); }
};

// Crossing points of per-distance rate curves sampled on a shared
// parameter grid. Interpolation runs in log-log space when every value
// involved is positive, linear otherwise. Curve points with zero rate
// are skipped.
ThresholdEstimate pseudo_threshold(
    const std::map<int, std::vector<std::pair<double, double>>>& curves);

}  // namespace sbus
