#pragma once

#include <cstdint>
#include <vector>

#include "sbus/dem.h"

namespace sbus {

// Weighted union-find decoder over a graphlike detector error model.
// Faults with one detector become boundary edges, faults with two
// become internal edges; edge weight is the log-likelihood ratio
// ln((1-p)/p). Decoding grows clusters around defects until every
// cluster is neutral (even defect count or boundary contact), then
// peels a spanning forest to pick the correction.
class UnionFindDecoder {
  public:
    explicit UnionFindDecoder(const DetectorErrorModel& dem);  // throws NonGraphlikeModel

    // detector_bits: packed little-endian, as in ShotBatch records.
    // Returns the predicted observable flips as a bit mask.
    uint64_t decode(const uint8_t* detector_bits) const;
    uint64_t decode(const std::vector<uint8_t>& detector_bits) const {
        return decode(detector_bits.data());
    }

    int n_detectors() const { return n_det_; }
    int n_edges() const { return static_cast<int>(edges_.size()); }

  private:
    struct Edge {
        int u = -1;
        int v = -1;  // boundary_node_ for boundary edges
        double weight = 0.0;
        uint64_t obs_mask = 0;
    };

    int n_det_ = 0;
    int n_obs_ = 0;
    int boundary_node_ = 0;  // == n_det_
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> incident_;  // node -> edge indices

    // Scratch reused across decode calls, versioned for cheap reset.
    struct Scratch;
    Scratch& scratch() const;
};

}  // namespace sbus
