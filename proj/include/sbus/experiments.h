#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "sbus/decoder.h"
#include "sbus/sampler.h"
#include "sbus/stats.h"

namespace sbus {

// Layout synthesis for a code under a strategy. ZigZag requires a grid
// code; Optimal certifies within the budget and falls back to its best
// incumbent otherwise.
AugmentedLayout make_layout(const CodeSpec& code, Strategy strategy,
                            double optimal_budget_seconds = 300.0,
                            Optimality* optimality = nullptr);

struct SampleConfig {
    uint64_t seed = 1;
    long min_failures = 100;
    long shot_cap = 10'000'000;
    long min_shots = 10'000;
};

struct PointResult {
    RateEstimate rate;
    int rounds = 0;
    bool measurable = true;  // false when the cap was hit with no failures
};

// Confidence-targeted sampling: decode shots until min_failures logical
// failures are seen (and min_shots shots taken) or shot_cap is reached.
// Fully deterministic given (experiment, config).
PointResult estimate_point(const MemoryExperiment& exp, const SampleConfig& cfg);

enum class SweepParam { PGate, T2Qd, T2Bus };

std::string to_string(SweepParam p);

struct SweepCell {
    int distance = 0;
    double value = 0.0;
    PointResult point;
};

struct SweepResult {
    SweepParam param = SweepParam::PGate;
    std::vector<SweepCell> cells;
    ThresholdEstimate threshold;

    std::map<int, std::vector<std::pair<double, double>>> curves() const;
};

// One noise source swept over `values` for each distance, the other two
// held at the base config's settings. Per-cell seeds derive from
// (cfg.seed, cell index).
SweepResult threshold_sweep(const std::vector<int>& distances, Strategy strategy, char basis,
                            SweepParam param, const std::vector<double>& values,
                            const ArchParams& arch, const NoiseParams& base,
                            const SampleConfig& cfg, int rounds = 0);

struct ArchCell {
    int distance = 0;
    double d_qu = 0.0;
    double v_sh = 0.0;
    PointResult point;
};

std::vector<ArchCell> arch_sweep(const std::vector<int>& distances, Strategy strategy, char basis,
                                 const std::vector<double>& d_qu_values,
                                 const std::vector<double>& v_sh_values, const ArchParams& arch,
                                 const NoiseParams& noise, const SampleConfig& cfg,
                                 int rounds = 0);

struct CompareCell {
    Strategy strategy = Strategy::Naive;
    int distance = 0;
    PointResult point;
};

std::vector<CompareCell> compare_strategies(const std::vector<Strategy>& strategies,
                                            const std::vector<int>& distances, char basis,
                                            const ArchParams& arch, const NoiseParams& noise,
                                            const SampleConfig& cfg, int rounds = 0);

// Least-squares fit of log p_round against distance, evaluated at
// target_distance. Zero-rate points are skipped; needs two positives.
double extrapolate_log_rate(const std::vector<std::pair<int, double>>& rates,
                            int target_distance);

}  // namespace sbus
