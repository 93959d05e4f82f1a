#include "sbus/code_model.h"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace sbus {

std::string to_string(const QubitId& q) {
    switch (q.kind) {
        case QubitKind::Data: return "D" + std::to_string(q.index);
        case QubitKind::AncillaX: return "X" + std::to_string(q.index);
        case QubitKind::AncillaZ: return "Z" + std::to_string(q.index);
    }
    return "?";
}

QubitId qubit_from_string(const std::string& s) {
    if (s.size() < 2) throw std::invalid_argument("bad qubit id: " + s);
    QubitKind kind;
    switch (s[0]) {
        case 'D': kind = QubitKind::Data; break;
        case 'X': kind = QubitKind::AncillaX; break;
        case 'Z': kind = QubitKind::AncillaZ; break;
        default: throw std::invalid_argument("bad qubit id: " + s);
    }
    return QubitId{kind, std::stoi(s.substr(1))};
}

CyclicDependency::CyclicDependency(std::vector<QubitId> witness)
    : std::runtime_error("cyclic dependency among chain interactions"),
      cycle(std::move(witness)) {}

std::optional<QubitId> CodeSpec::data_at(int row, int col) const {
    for (const auto& dq : data_qubits) {
        if (dq.row == row && dq.col == col) return dq.id;
    }
    return std::nullopt;
}

int ScheduleSpec::total_pairs() const {
    int n = 0;
    for (const auto& s : slices) n += static_cast<int>(s.size());
    return n;
}

namespace {

// Corner visit order per slice, as (dr, dc) offsets from the plaquette's
// top-left data qubit. The split after slice 2 leaves a horizontal pair
// for X checks and a vertical pair for Z checks, so a mid-cycle ancilla
// fault spreads perpendicular to the matching logical operator.
constexpr std::array<std::pair<int, int>, 4> kXOrder = {{{1, 1}, {1, 0}, {0, 1}, {0, 0}}};
constexpr std::array<std::pair<int, int>, 4> kZOrder = {{{1, 1}, {0, 1}, {1, 0}, {0, 0}}};

bool plaquette_is_x(int pr, int pc) {
    // Checkerboard parity; boundary rows keep X plaquettes, boundary
    // columns keep Z plaquettes, giving d^2-1 checks in total.
    return ((pr + pc) % 2 + 2) % 2 != 0;
}

}  // namespace

CodeSpec build_rotated_surface_code(int distance) {
    if (distance < 3 || distance % 2 == 0) {
        throw InvalidDistance("code distance must be an odd integer >= 3, got " +
                              std::to_string(distance));
    }
    CodeSpec code;
    code.distance = distance;
    code.name = "surface_d" + std::to_string(distance);

    const int d = distance;
    for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) {
            code.data_qubits.push_back({QubitId{QubitKind::Data, r * d + c}, r, c});
        }
    }

    int next_x = 0, next_z = 0;
    for (int pr = -1; pr < d; ++pr) {
        for (int pc = -1; pc < d; ++pc) {
            const bool is_x = plaquette_is_x(pr, pc);

            std::vector<std::pair<int, std::pair<int, int>>> corners;
            const auto& order = is_x ? kXOrder : kZOrder;
            for (int slice = 1; slice <= 4; ++slice) {
                auto [dr, dc] = order[slice - 1];
                int r = pr + dr, c = pc + dc;
                if (r >= 0 && r < d && c >= 0 && c < d) corners.push_back({slice, {r, c}});
            }
            if (corners.size() < 2) continue;  // lone corner plaquettes carry no check

            const bool top_or_bottom = (pr == -1 || pr == d - 1);
            const bool left_or_right = (pc == -1 || pc == d - 1);
            if (top_or_bottom && !is_x) continue;
            if (left_or_right && is_x) continue;

            Check check;
            check.basis = is_x ? 'X' : 'Z';
            check.ancilla = is_x ? QubitId{QubitKind::AncillaX, next_x++}
                                 : QubitId{QubitKind::AncillaZ, next_z++};
            for (auto [slice, rc] : corners) {
                check.schedule.push_back({slice, QubitId{QubitKind::Data, rc.first * d + rc.second}});
            }
            code.checks.push_back(std::move(check));
        }
    }
    return code;
}

CodeSpec build_steane_code() {
    CodeSpec code;
    code.distance = 3;
    code.name = "steane";
    for (int i = 0; i < 7; ++i) {
        code.data_qubits.push_back({QubitId{QubitKind::Data, i}, 0, i});
    }
    // The three weight-4 stabilizers of the [[7,1,3]] code, with a
    // slice assignment whose interaction chains are loop-free
    // (every chain visits the ancillas in the order X0 < X1 < X2).
    struct Row { int anc; std::array<std::pair<int, int>, 4> sched; };
    const std::array<Row, 3> rows = {{
        {0, {{{1, 6}, {2, 5}, {3, 4}, {4, 3}}}},
        {1, {{{1, 2}, {2, 6}, {3, 5}, {4, 1}}}},
        {2, {{{1, 0}, {2, 2}, {3, 6}, {4, 4}}}},
    }};
    for (const auto& row : rows) {
        Check check;
        check.basis = 'X';
        check.ancilla = QubitId{QubitKind::AncillaX, row.anc};
        for (auto [slice, data] : row.sched) {
            check.schedule.push_back({slice, QubitId{QubitKind::Data, data}});
        }
        code.checks.push_back(std::move(check));
    }
    return code;
}

ScheduleSpec build_schedule(const CodeSpec& code) {
    ScheduleSpec schedule;
    for (const auto& check : code.checks) {
        std::set<int> seen_slices;
        for (auto [slice, data] : check.schedule) {
            if (slice < 1 || slice > 4) {
                throw std::invalid_argument("slice out of range in check " +
                                            to_string(check.ancilla));
            }
            if (!seen_slices.insert(slice).second) {
                throw std::invalid_argument("duplicate slice in check " +
                                            to_string(check.ancilla));
            }
            schedule.slices[slice - 1].push_back({data, check.ancilla});
        }
    }
    // Per-slice disjointness: a qubit participates in at most one CNOT
    // per slice.
    for (int s = 0; s < 4; ++s) {
        std::set<QubitId> used;
        for (auto [data, anc] : schedule.slices[s]) {
            if (!used.insert(data).second || !used.insert(anc).second) {
                throw std::invalid_argument("qubit used twice in slice " +
                                            std::to_string(s + 1));
            }
        }
    }
    return schedule;
}

CodeSpec parse_code_spec(std::istream& in) {
    CodeSpec code;
    code.name = "generic";
    std::string line;
    int lineno = 0;
    int n_data = -1;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string word;
        if (!(ls >> word)) continue;
        if (word == "name") {
            ls >> code.name;
        } else if (word == "data") {
            if (!(ls >> n_data) || n_data <= 0) {
                throw std::invalid_argument("line " + std::to_string(lineno) +
                                            ": expected 'data <count>'");
            }
            for (int i = 0; i < n_data; ++i) {
                code.data_qubits.push_back({QubitId{QubitKind::Data, i}, 0, i});
            }
        } else if (word == "check") {
            std::string name, basis;
            if (!(ls >> name >> basis) || (basis != "X" && basis != "Z")) {
                throw std::invalid_argument("line " + std::to_string(lineno) +
                                            ": expected 'check <name> <X|Z> <slice>:<data>...'");
            }
            Check check;
            check.basis = basis[0];
            QubitKind kind = basis == "X" ? QubitKind::AncillaX : QubitKind::AncillaZ;
            int n_of_kind = 0;
            for (const auto& c : code.checks) {
                if (c.ancilla.kind == kind) ++n_of_kind;
            }
            check.ancilla = QubitId{kind, n_of_kind};
            std::string item;
            while (ls >> item) {
                auto colon = item.find(':');
                if (colon == std::string::npos) {
                    throw std::invalid_argument("line " + std::to_string(lineno) +
                                                ": bad slice:data item '" + item + "'");
                }
                int slice = std::stoi(item.substr(0, colon));
                int data = std::stoi(item.substr(colon + 1));
                if (n_data < 0 || data < 0 || data >= n_data) {
                    throw std::invalid_argument("line " + std::to_string(lineno) +
                                                ": data index out of range");
                }
                check.schedule.push_back({slice, QubitId{QubitKind::Data, data}});
            }
            if (check.schedule.empty()) {
                throw std::invalid_argument("line " + std::to_string(lineno) + ": empty check");
            }
            code.checks.push_back(std::move(check));
        } else {
            throw std::invalid_argument("line " + std::to_string(lineno) +
                                        ": unknown directive '" + word + "'");
        }
    }
    if (code.data_qubits.empty()) throw std::invalid_argument("code file declares no data qubits");
    build_schedule(code);  // validates slice assignments
    return code;
}

CodeSpec load_code_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open code file: " + path);
    return parse_code_spec(in);
}

}  // namespace sbus
