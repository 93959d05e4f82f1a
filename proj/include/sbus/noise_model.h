#pragma once

#include <limits>
#include <string>
#include <vector>

#include "sbus/metrics.h"

namespace sbus {

constexpr double kInfT2 = std::numeric_limits<double>::infinity();

// Three-source noise model: gate depolarization, quantum-dot idle
// dephasing, shuttling dephasing with motional narrowing.
struct NoiseParams {
    double p_gate = 0.0;     // depolarizing probability, 1q and 2q gates
    double t2_qd = kInfT2;   // idle dephasing time at a dot, s
    double t2_bus = kInfT2;  // base dephasing time while shuttling, s
    double l_c = 13e-9;      // disorder correlation length, m

    void validate() const;
    bool lossless() const { return p_gate == 0 && t2_qd == kInfT2 && t2_bus == kInfT2; }
};

enum class NoiseKind { Depolarize1, Depolarize2, PauliZ };

enum class NoiseProvenance { Gate, Idle, Shuttle };

struct NoiseEvent {
    NoiseKind kind = NoiseKind::PauliZ;
    int q0 = -1;
    int q1 = -1;  // second operand for Depolarize2, else -1
    double probability = 0.0;
    NoiseProvenance provenance = NoiseProvenance::Idle;
    double duration_s = 0.0;    // Idle
    double distance_m = 0.0;    // Shuttle
};

// Phase damping as a Z flip: p = (1 - exp(-t / (2 T2))) / 2.
double dephasing_prob(double t, double t2);

// Motional-narrowed effective dephasing time over a shuttle of length
// d_sh: T2_bus * sqrt((d_sh + l_c) / l_c).
double shuttle_t2(double t2_bus, double d_sh, double l_c);

double shuttle_dephasing_prob(double d_sh, const ArchParams& arch, const NoiseParams& noise);

// One barrier-to-barrier segment of the cycle with its noise events.
struct TimelineSegment {
    std::string label;
    double duration_s = 0.0;
    std::vector<NoiseEvent> events;
};

// Per-cycle noise timeline over the augmented layout. Qubit numbers are
// physical dot indices. Each shuttled qubit gets one PauliZ for its own
// displacement; every qubit idling for part of a segment gets one PauliZ
// for the residual time; each gate is tagged for downstream depolarizing
// insertion (the gates themselves live in the circuit builder).
std::vector<TimelineSegment> build_noise_timeline(const AugmentedLayout& layout,
                                                  const ArchParams& arch,
                                                  const NoiseParams& noise);

// Key-value config file: one "key value" pair per line, '#' comments.
// Keys: d_qu v_sh t_1q t_2q t_meas p_gate t2_qd t2_bus l_c, SI units,
// "inf" accepted for the T2 values.
void load_params_file(const std::string& path, ArchParams& arch, NoiseParams& noise);

}  // namespace sbus
