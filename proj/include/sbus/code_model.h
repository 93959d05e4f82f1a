#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <vector>

#include "sbus/types.h"

namespace sbus {

// One stabilizer check and the slice at which each supported data qubit
// interacts with its ancilla. Slices are 1-based (1..4).
struct Check {
    QubitId ancilla;
    char basis = 'Z';  // 'X' or 'Z'
    std::vector<std::pair<int, QubitId>> schedule;

    int weight() const { return static_cast<int>(schedule.size()); }
};

struct DataQubit {
    QubitId id;
    int row = 0;
    int col = 0;
};

struct CodeSpec {
    int distance = 0;  // 0 for generic codes
    std::string name;
    std::vector<DataQubit> data_qubits;
    std::vector<Check> checks;

    std::optional<QubitId> data_at(int row, int col) const;
};

// Per-slice view of all (data, ancilla) CNOT pairs.
struct ScheduleSpec {
    std::array<std::vector<std::pair<QubitId, QubitId>>, 4> slices;

    int total_pairs() const;
};

CodeSpec build_rotated_surface_code(int distance);
CodeSpec build_steane_code();

ScheduleSpec build_schedule(const CodeSpec& code);

// Generic-code entry point: a plain-text list of checks with basis,
// support and slice assignments. See data/steane.code for the schema.
CodeSpec parse_code_spec(std::istream& in);
CodeSpec load_code_file(const std::string& path);

}  // namespace sbus
