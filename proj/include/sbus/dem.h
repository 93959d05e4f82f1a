#pragma once

#include <vector>

#include "sbus/circuit.h"

namespace sbus {

// An elementary fault mechanism: firing flips the listed detectors and
// observables.
struct Fault {
    double probability = 0.0;
    std::vector<int> detectors;    // ascending
    std::vector<int> observables;  // ascending
};

struct DetectorErrorModel {
    int n_detectors = 0;
    int n_observables = 0;
    std::vector<Fault> faults;
};

// Propagate every elementary Pauli term of every noise instruction to
// its detector/observable signature via one backward sensitivity sweep.
// Identical signatures are merged with p = p1 + p2 - 2 p1 p2.
//
// With decompose set, a term whose signature flips more than two
// detectors is split into its per-qubit X/Z factors (each kept as a
// separate fault); a factor still flipping more than two detectors
// raises NonGraphlikeModel. The union-find decoder needs this form.
DetectorErrorModel derive_detector_model(const Circuit& circuit, bool decompose = false);

}  // namespace sbus
