#include "sbus/stats.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sbus {

double per_round_rate(double p_shot, int rounds) {
    if (rounds < 1) throw std::invalid_argument("rounds must be at least 1");
    if (p_shot < 0 || p_shot > 1) throw std::invalid_argument("p_shot outside [0,1]");
    if (p_shot >= 0.5) return 0.5;  // conversion saturates
    return (1.0 - std::pow(1.0 - 2.0 * p_shot, 1.0 / double(rounds))) / 2.0;
}

RateEstimate logical_error_rate(long shots, long failures, int rounds) {
    if (shots < 1 || failures < 0 || failures > shots) {
        throw std::invalid_argument("bad shot/failure counts");
    }
    RateEstimate est;
    est.shots = shots;
    est.failures = failures;
    est.p_shot = double(failures) / double(shots);
    est.p_round = per_round_rate(est.p_shot, rounds);
    est.p_shot_stderr = std::sqrt(est.p_shot * (1.0 - est.p_shot) / double(shots));
    return est;
}

namespace {

// Crossing of two piecewise curves over a shared grid; nullopt when no
// bracketing interval has opposite-signed differences.
std::vector<double> curve_crossings(const std::vector<std::pair<double, double>>& a,
                                    const std::vector<std::pair<double, double>>& b) {
    std::vector<double> found;
    size_t n = std::min(a.size(), b.size());
    for (size_t i = 0; i + 1 < n; ++i) {
        double d0 = a[i].second - b[i].second;
        double d1 = a[i + 1].second - b[i + 1].second;
        if (d0 == 0.0) {
            found.push_back(a[i].first);
            continue;
        }
        if (d0 * d1 >= 0.0) continue;
        double x0 = a[i].first, x1 = a[i + 1].first;
        bool positive = a[i].second > 0 && b[i].second > 0 && a[i + 1].second > 0 &&
                        b[i + 1].second > 0 && x0 > 0 && x1 > 0;
        if (positive) {
            // log-log interpolation of the difference of logs.
            double g0 = std::log(a[i].second) - std::log(b[i].second);
            double g1 = std::log(a[i + 1].second) - std::log(b[i + 1].second);
            double t = g0 / (g0 - g1);
            found.push_back(std::exp(std::log(x0) + t * (std::log(x1) - std::log(x0))));
        } else {
            double t = d0 / (d0 - d1);
            found.push_back(x0 + t * (x1 - x0));
        }
    }
    return found;
}

}  // namespace

ThresholdEstimate pseudo_threshold(
    const std::map<int, std::vector<std::pair<double, double>>>& curves) {
    if (curves.size() < 2) throw std::invalid_argument("need curves for at least two distances");
    ThresholdEstimate est;
    for (auto it1 = curves.begin(); it1 != curves.end(); ++it1) {
        for (auto it2 = std::next(it1); it2 != curves.end(); ++it2) {
            auto xs = curve_crossings(it1->second, it2->second);
            if (xs.empty()) {
                est.no_crossing.push_back({it1->first, it2->first});
            } else {
                // Several sign changes: take the first; noise-induced
                // re-crossings sit away from the true threshold.
                est.crossings.push_back({{it1->first, it2->first}, xs.front()});
            }
        }
    }
    if (!est.crossings.empty()) {
        double sum = 0.0;
        for (const auto& [pair, x] : est.crossings) sum += x;
        est.mean = sum / double(est.crossings.size());
        double var = 0.0;
        for (const auto& [pair, x] : est.crossings) var += (x - est.mean) * (x - est.mean);
        est.stddev = std::sqrt(var / double(est.crossings.size()));
    }
    return est;
}

}  // namespace sbus
