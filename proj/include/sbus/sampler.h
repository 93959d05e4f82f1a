#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "sbus/circuit.h"

namespace sbus {

// Sampled detection events and observable flips. Bit-packed row-major:
// one record per shot, detector bytes then observable bytes,
// little-endian bit order within each byte.
struct ShotBatch {
    long n_shots = 0;
    uint64_t seed = 0;
    int n_detectors = 0;
    int n_observables = 0;
    std::vector<uint8_t> data;

    size_t detector_bytes() const { return (size_t(n_detectors) + 7) / 8; }
    size_t observable_bytes() const { return (size_t(n_observables) + 7) / 8; }
    size_t record_bytes() const { return detector_bytes() + observable_bytes(); }
    const uint8_t* record(long shot) const { return data.data() + size_t(shot) * record_bytes(); }
    bool detector(long shot, int d) const { return record(shot)[d >> 3] >> (d & 7) & 1; }
    bool observable(long shot, int o) const {
        return record(shot)[detector_bytes() + (o >> 3)] >> (o & 7) & 1;
    }
};

// Pauli-frame Monte Carlo over the Clifford circuit. Shots are
// processed in lanes of 64; a shot's randomness is a pure function of
// (seed, shot_index / 64) with its lane fixed by shot_index % 64, so
// identical (circuit, seed, n) gives identical batches and partitioned
// execution at lane-block boundaries aggregates identically.
class FrameSampler {
  public:
    explicit FrameSampler(const Circuit& circuit);
    ~FrameSampler();
    FrameSampler(FrameSampler&&) noexcept;
    FrameSampler& operator=(FrameSampler&&) noexcept;

    int n_detectors() const { return n_det_; }
    int n_observables() const { return n_obs_; }

    // Runs shots [first, first + count) and hands each to the sink as
    // packed detector/observable bytes (layout as in ShotBatch).
    void run(uint64_t seed, long first, long count,
             const std::function<void(long shot, const uint8_t* record)>& sink) const;

    ShotBatch sample(uint64_t seed, long n_shots) const;

  private:
    struct Step;  // flattened instruction
    std::vector<Step> steps_;
    int n_qubits_ = 0;
    int n_meas_ = 0;
    int n_det_ = 0;
    int n_obs_ = 0;
    // Detector/observable value = parity of these measurement indices.
    std::vector<std::vector<int>> det_meas_;
    std::vector<std::vector<int>> obs_meas_;

    void run_block(uint64_t seed, long block, uint64_t* det_words, uint64_t* obs_words) const;
};

ShotBatch sample_shots(const Circuit& circuit, long n_shots, uint64_t seed);

void write_shot_batch(const ShotBatch& batch, std::ostream& out);
ShotBatch read_shot_batch(std::istream& in);

}  // namespace sbus
