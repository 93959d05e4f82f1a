#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "sbus/noise_model.h"

namespace sbus {

// Stabilizer-circuit instruction set, a subset of the common text
// format: gates, probabilistic Pauli noise, measurements, barriers and
// detector/observable annotations.
enum class Op {
    Reset,        // R: Z-basis reset
    Hadamard,     // H
    Cnot,         // CX control target
    Measure,      // M: Z-basis measurement
    Tick,         // TICK barrier
    Depolarize1,  // DEPOLARIZE1(p)
    Depolarize2,  // DEPOLARIZE2(p)
    ZError,       // Z_ERROR(p)
    XError,       // X_ERROR(p)
    Detector,     // DETECTOR rec[-k] ...
    Observable,   // OBSERVABLE_INCLUDE(index) rec[-k] ...
};

struct Instruction {
    Op op = Op::Tick;
    // Qubit operands; for Detector/Observable these are measurement
    // record lookbacks (positive k meaning rec[-k]).
    std::vector<int> targets;
    double arg = 0.0;  // probability, or observable index
};

struct Circuit {
    int n_qubits = 0;
    int rounds = 0;
    std::vector<Instruction> instructions;

    int measurement_count() const;
    int detector_count() const;
    int observable_count() const;
};

struct MemoryExperiment {
    char basis = 'Z';  // 'Z' or 'X'
    int rounds = 0;    // 0 selects the default 3d
    AugmentedLayout layout;
    CodeSpec code;
    ArchParams arch;
    NoiseParams noise;
};

// Memory circuit: data reset in basis, `rounds` syndrome extraction
// cycles with the layout's shuttle/idle noise, final transversal data
// readout, detectors and one logical observable.
Circuit build_memory_circuit(const MemoryExperiment& exp);

void emit_circuit_text(const Circuit& circuit, std::ostream& out);
std::string circuit_to_text(const Circuit& circuit);
Circuit parse_circuit_text(std::istream& in);

std::map<NoiseKind, long> count_error_locations(const Circuit& circuit);

// The support of the basis logical operator: a straight line of data
// qubits commuting with every opposite-basis check.
std::vector<QubitId> logical_support(const CodeSpec& code, char basis);

}  // namespace sbus
