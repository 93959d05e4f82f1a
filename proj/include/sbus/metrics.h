#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "sbus/synthesis.h"

namespace sbus {

// Physical bus parameters, SI units.
struct ArchParams {
    double d_qu = 100e-9;   // inter-dot pitch, m
    double v_sh = 2.8;      // shuttle velocity, m/s
    double t_1q = 100e-9;   // single-qubit gate, s
    double t_2q = 50e-9;    // two-qubit gate, s
    double t_meas = 500e-9; // ancilla readout, s

    void validate() const;  // throws invalid_argument on non-positive fields
};

struct MetricsReport {
    long total_distance_dots = 0;
    double total_distance_m = 0.0;
    std::array<long, 5> slice_times_dots{};
    std::array<double, 5> slice_times_s{};
    double cycle_time_s = 0.0;
    int bus_length = 0;
    int extra_dots = 0;
    std::vector<long> per_chain_distance;  // 2 * span, chain order
};

// Sum over chains of twice the forward span. Telescoping makes this
// equal to the summed lengths of every hop including the return.
long total_shuttle_distance(const Placement& placement, const std::vector<Chain>& chains);

// t1..t4 = per-slice bottleneck displacement, t5 = max chain span,
// all in placement position units.
std::array<long, 5> placement_slice_times(const Placement& placement,
                                          const std::vector<Chain>& chains);

// Same bottlenecks measured in physical dots along the augmented bus,
// including detours to parking dots. These are the durations the noise
// timeline uses.
std::array<long, 5> layout_slice_times(const AugmentedLayout& layout);

// Barrier-synchronized cycle duration: ancilla basis prep, four
// shuttle+CNOT slices, basis unprep, return shuttle, readout.
double cycle_time(const std::array<long, 5>& slice_times, const ArchParams& arch);

MetricsReport compute_metrics(const AugmentedLayout& layout, const ArchParams& arch);

enum class Strategy { Naive, ZigZag, Optimal };

std::string to_string(Strategy s);
Strategy strategy_from_string(const std::string& s);

struct ScalingRow {
    int distance = 0;
    Strategy strategy = Strategy::Naive;
    long time_sum = 0;        // sum t1..t5, position units
    long total_distance = 0;  // dots
    int extra_dots = 0;
    int bus_length = 0;
    double cycle_time_s = 0.0;
    bool certified = false;   // meaningful for Strategy::Optimal only
};

// One row per odd distance in [d_min, d_max]. optimal_budget_seconds
// caps each exact solve; a non-certified row is flagged, not an error.
std::vector<ScalingRow> scaling_sweep(int d_min, int d_max, Strategy strategy,
                                      const ArchParams& arch,
                                      double optimal_budget_seconds = 300.0);

void write_scaling_csv(const std::vector<ScalingRow>& rows, std::ostream& out);

// Least-squares fit y = c0 + c1 x + ... of the given degree. Returns
// coefficients low order first plus R^2 in *r_squared if non-null.
std::vector<double> polyfit(const std::vector<double>& x, const std::vector<double>& y,
                            int degree, double* r_squared = nullptr);

}  // namespace sbus
