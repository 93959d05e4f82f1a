#include "sbus/circuit.h"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace sbus {

int Circuit::measurement_count() const {
    int n = 0;
    for (const auto& ins : instructions) {
        if (ins.op == Op::Measure) n += static_cast<int>(ins.targets.size());
    }
    return n;
}

int Circuit::detector_count() const {
    int n = 0;
    for (const auto& ins : instructions) n += ins.op == Op::Detector;
    return n;
}

int Circuit::observable_count() const {
    int max_idx = -1;
    for (const auto& ins : instructions) {
        if (ins.op == Op::Observable) max_idx = std::max(max_idx, int(ins.arg));
    }
    return max_idx + 1;
}

namespace {

// GF(2) row reduction helper over dense bit rows.
using BitRow = std::vector<uint8_t>;

bool in_row_space(std::vector<BitRow> rows, const BitRow& v) {
    size_t n = v.size();
    BitRow target = v;
    size_t rank_col = 0;
    for (size_t r = 0; r < rows.size() && rank_col < n; ++rank_col) {
        size_t pivot = r;
        while (pivot < rows.size() && !rows[pivot][rank_col]) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[r], rows[pivot]);
        for (size_t k = 0; k < rows.size(); ++k) {
            if (k != r && rows[k][rank_col]) {
                for (size_t c = 0; c < n; ++c) rows[k][c] ^= rows[r][c];
            }
        }
        if (target[rank_col]) {
            for (size_t c = 0; c < n; ++c) target[c] ^= rows[r][c];
        }
        ++r;
    }
    for (uint8_t b : target) {
        if (b) return false;
    }
    return true;
}

}  // namespace

std::vector<QubitId> logical_support(const CodeSpec& code, char basis) {
    if (basis != 'Z' && basis != 'X') throw std::invalid_argument("basis must be Z or X");
    char opposite = basis == 'Z' ? 'X' : 'Z';
    const size_t n = code.data_qubits.size();
    std::map<QubitId, size_t> col;
    for (size_t i = 0; i < n; ++i) col[code.data_qubits[i].id] = i;

    std::vector<BitRow> opp_checks, same_checks;
    for (const auto& check : code.checks) {
        BitRow row(n, 0);
        for (const auto& [slice, q] : check.schedule) row[col.at(q)] = 1;
        (check.basis == opposite ? opp_checks : same_checks).push_back(row);
    }
    auto commutes_with_all = [&](const BitRow& v) {
        for (const auto& row : opp_checks) {
            int overlap = 0;
            for (size_t c = 0; c < n; ++c) overlap += row[c] & v[c];
            if (overlap % 2) return false;
        }
        return true;
    };
    auto to_support = [&](const BitRow& v) {
        std::vector<QubitId> support;
        for (size_t i = 0; i < n; ++i) {
            if (v[i]) support.push_back(code.data_qubits[i].id);
        }
        return support;
    };

    // Grid codes: prefer a straight row or column of the lattice.
    if (code.distance > 0 && n == size_t(code.distance) * code.distance) {
        int d = code.distance;
        for (int axis = 0; axis < 2; ++axis) {
            BitRow v(n, 0);
            for (int k = 0; k < d; ++k) {
                auto q = axis == 0 ? code.data_at(0, k) : code.data_at(k, 0);
                if (q) v[col.at(*q)] = 1;
            }
            if (commutes_with_all(v) && !in_row_space(same_checks, v)) return to_support(v);
        }
    }
    // Generic fallback: search the kernel of the opposite-basis check
    // matrix for a vector outside the same-basis stabilizer span.
    // Enumerate combinations of low weight first.
    for (size_t weight = 1; weight <= n; ++weight) {
        std::vector<size_t> idx(weight);
        std::function<std::vector<QubitId>(size_t, size_t)> rec =
            [&](size_t k, size_t start) -> std::vector<QubitId> {
            if (k == weight) {
                BitRow v(n, 0);
                for (size_t i : idx) v[i] = 1;
                if (commutes_with_all(v) && !in_row_space(same_checks, v)) return to_support(v);
                return {};
            }
            for (size_t i = start; i < n; ++i) {
                idx[k] = i;
                auto r = rec(k + 1, i + 1);
                if (!r.empty()) return r;
            }
            return {};
        };
        auto r = rec(0, 0);
        if (!r.empty()) return r;
    }
    throw std::runtime_error("code has no logical operator in basis " + std::string(1, basis));
}

namespace {

struct Builder {
    const MemoryExperiment& exp;
    Circuit circuit;
    std::map<QubitId, int> qubit_index;  // physical dot of the home position
    std::vector<int> ancilla_qubits;     // measurement order, placement order
    std::vector<QubitId> ancilla_ids;
    std::vector<int> data_qubits;
    std::vector<QubitId> data_ids;
    std::vector<int> x_ancillas;
    std::map<QubitId, char> check_basis;
    int n_meas = 0;

    explicit Builder(const MemoryExperiment& e) : exp(e) {
        auto pos = exp.layout.placement.position_map();
        for (const auto& [q, p] : pos) qubit_index[q] = exp.layout.qubit_dot[p];
        for (const auto& q : exp.layout.placement.order) {
            int idx = qubit_index.at(q);
            if (q.kind == QubitKind::Data) {
                data_qubits.push_back(idx);
                data_ids.push_back(q);
            } else {
                ancilla_qubits.push_back(idx);
                ancilla_ids.push_back(q);
                if (q.kind == QubitKind::AncillaX) x_ancillas.push_back(idx);
            }
        }
        for (const auto& check : exp.code.checks) check_basis[check.ancilla] = check.basis;
        circuit.n_qubits = exp.layout.bus_length;
    }

    void push(Op op, std::vector<int> targets, double arg = 0.0) {
        circuit.instructions.push_back({op, std::move(targets), arg});
        if (op == Op::Measure) n_meas += static_cast<int>(circuit.instructions.back().targets.size());
    }

    void push_noise(const TimelineSegment& seg) {
        for (const auto& e : seg.events) {
            switch (e.kind) {
                case NoiseKind::Depolarize1:
                    push(Op::Depolarize1, {e.q0}, e.probability);
                    break;
                case NoiseKind::Depolarize2:
                    push(Op::Depolarize2, {e.q0, e.q1}, e.probability);
                    break;
                case NoiseKind::PauliZ:
                    push(Op::ZError, {e.q0}, e.probability);
                    break;
            }
        }
    }

    // Lookback of ancilla j's measurement in the most recent readout.
    int ancilla_lookback(size_t j) const {
        return static_cast<int>(ancilla_qubits.size() - j);
    }

    void build() {
        const int n_anc = static_cast<int>(ancilla_qubits.size());
        auto timeline = build_noise_timeline(exp.layout, exp.arch, exp.noise);

        std::vector<int> all;
        all.insert(all.end(), data_qubits.begin(), data_qubits.end());
        all.insert(all.end(), ancilla_qubits.begin(), ancilla_qubits.end());
        std::sort(all.begin(), all.end());
        push(Op::Reset, all);
        if (exp.basis == 'X') push(Op::Hadamard, data_qubits);
        push(Op::Tick, {});

        for (int round = 1; round <= circuit.rounds; ++round) {
            size_t seg = 0;
            auto emit_segment = [&](auto&& gates) {
                gates();
                push_noise(timeline[seg]);
                push(Op::Tick, {});
                ++seg;
            };

            emit_segment([&] {
                if (!x_ancillas.empty()) push(Op::Hadamard, x_ancillas);
            });
            for (int s = 1; s <= 4; ++s) {
                emit_segment([] {});  // shuttle, noise only
                emit_segment([&] {
                    for (size_t i = 0; i < exp.layout.chains.size(); ++i) {
                        const auto& chain = exp.layout.chains[i];
                        if (!chain.steps[s - 1]) continue;
                        int dq = qubit_index.at(chain.data);
                        int aq = qubit_index.at(*chain.steps[s - 1]);
                        // Z-checks accumulate parity onto the ancilla;
                        // X-checks fan out from the H-prepared ancilla.
                        if (check_basis.at(*chain.steps[s - 1]) == 'Z') {
                            push(Op::Cnot, {dq, aq});
                        } else {
                            push(Op::Cnot, {aq, dq});
                        }
                    }
                });
            }
            emit_segment([&] {
                if (!x_ancillas.empty()) push(Op::Hadamard, x_ancillas);
            });
            emit_segment([] {});  // return shuttle
            emit_segment([&] { push(Op::Measure, ancilla_qubits); });
            push(Op::Reset, ancilla_qubits);

            for (size_t j = 0; j < ancilla_ids.size(); ++j) {
                char cb = check_basis.at(ancilla_ids[j]);
                if (round == 1) {
                    // Only same-basis checks are deterministic initially.
                    if (cb == exp.basis) push(Op::Detector, {ancilla_lookback(j)});
                } else {
                    push(Op::Detector, {ancilla_lookback(j), ancilla_lookback(j) + n_anc});
                }
            }
        }

        if (exp.basis == 'X') push(Op::Hadamard, data_qubits);
        push(Op::Measure, data_qubits);

        std::map<QubitId, int> data_lookback;  // final transversal readout
        for (size_t i = 0; i < data_ids.size(); ++i) {
            data_lookback[data_ids[i]] = static_cast<int>(data_ids.size() - i);
        }
        int n_data = static_cast<int>(data_ids.size());
        for (size_t j = 0; j < ancilla_ids.size(); ++j) {
            if (check_basis.at(ancilla_ids[j]) != exp.basis) continue;
            std::vector<int> recs;
            for (const auto& check : exp.code.checks) {
                if (check.ancilla != ancilla_ids[j]) continue;
                for (const auto& [slice, q] : check.schedule) recs.push_back(data_lookback.at(q));
            }
            recs.push_back(ancilla_lookback(j) + n_data);
            push(Op::Detector, recs);
        }
        std::vector<int> obs;
        for (const auto& q : logical_support(exp.code, exp.basis)) {
            obs.push_back(data_lookback.at(q));
        }
        push(Op::Observable, obs, 0.0);
    }
};

}  // namespace

Circuit build_memory_circuit(const MemoryExperiment& exp) {
    if (exp.code.data_qubits.empty()) throw std::invalid_argument("empty code");
    size_t n_code = exp.code.data_qubits.size() + exp.code.checks.size();
    if (exp.layout.placement.order.size() != n_code) {
        throw std::invalid_argument("layout does not match the code");
    }
    Builder builder(exp);
    builder.circuit.rounds = exp.rounds > 0 ? exp.rounds : 3 * std::max(exp.code.distance, 1);
    builder.build();
    return builder.circuit;
}

namespace {

const char* op_name(Op op) {
    switch (op) {
        case Op::Reset: return "R";
        case Op::Hadamard: return "H";
        case Op::Cnot: return "CX";
        case Op::Measure: return "M";
        case Op::Tick: return "TICK";
        case Op::Depolarize1: return "DEPOLARIZE1";
        case Op::Depolarize2: return "DEPOLARIZE2";
        case Op::ZError: return "Z_ERROR";
        case Op::XError: return "X_ERROR";
        case Op::Detector: return "DETECTOR";
        case Op::Observable: return "OBSERVABLE_INCLUDE";
    }
    throw std::logic_error("bad op");
}

bool has_arg(Op op) {
    return op == Op::Depolarize1 || op == Op::Depolarize2 || op == Op::ZError ||
           op == Op::XError || op == Op::Observable;
}

bool rec_targets(Op op) { return op == Op::Detector || op == Op::Observable; }

}  // namespace

void emit_circuit_text(const Circuit& circuit, std::ostream& out) {
    char buf[64];
    for (const auto& ins : circuit.instructions) {
        out << op_name(ins.op);
        if (has_arg(ins.op)) {
            if (ins.op == Op::Observable) {
                std::snprintf(buf, sizeof buf, "%d", int(ins.arg));
            } else {
                std::snprintf(buf, sizeof buf, "%.9g", ins.arg);
            }
            out << "(" << buf << ")";
        }
        for (int t : ins.targets) {
            if (rec_targets(ins.op)) {
                out << " rec[-" << t << "]";
            } else {
                out << " " << t;
            }
        }
        out << "\n";
    }
}

std::string circuit_to_text(const Circuit& circuit) {
    std::ostringstream oss;
    emit_circuit_text(circuit, oss);
    return oss.str();
}

Circuit parse_circuit_text(std::istream& in) {
    Circuit circuit;
    std::string line;
    int max_qubit = -1;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head)) continue;

        Instruction ins;
        auto paren = head.find('(');
        std::string name = head.substr(0, paren);
        static const std::map<std::string, Op> kOps = {
            {"R", Op::Reset},         {"H", Op::Hadamard},
            {"CX", Op::Cnot},         {"M", Op::Measure},
            {"TICK", Op::Tick},       {"DEPOLARIZE1", Op::Depolarize1},
            {"DEPOLARIZE2", Op::Depolarize2}, {"Z_ERROR", Op::ZError},
            {"X_ERROR", Op::XError},  {"DETECTOR", Op::Detector},
            {"OBSERVABLE_INCLUDE", Op::Observable},
        };
        auto it = kOps.find(name);
        if (it == kOps.end()) throw std::runtime_error("unknown instruction: " + name);
        ins.op = it->second;
        if (paren != std::string::npos) {
            auto close = head.find(')', paren);
            if (close == std::string::npos) throw std::runtime_error("unbalanced paren: " + head);
            ins.arg = std::stod(head.substr(paren + 1, close - paren - 1));
        } else if (has_arg(ins.op)) {
            throw std::runtime_error("missing probability argument: " + head);
        }
        std::string tok;
        while (ls >> tok) {
            if (rec_targets(ins.op)) {
                if (tok.rfind("rec[-", 0) != 0 || tok.back() != ']') {
                    throw std::runtime_error("bad record target: " + tok);
                }
                ins.targets.push_back(std::stoi(tok.substr(5, tok.size() - 6)));
            } else {
                int q = std::stoi(tok);
                ins.targets.push_back(q);
                max_qubit = std::max(max_qubit, q);
            }
        }
        circuit.instructions.push_back(std::move(ins));
    }
    circuit.n_qubits = max_qubit + 1;
    return circuit;
}

std::map<NoiseKind, long> count_error_locations(const Circuit& circuit) {
    std::map<NoiseKind, long> counts = {{NoiseKind::Depolarize1, 0},
                                        {NoiseKind::Depolarize2, 0},
                                        {NoiseKind::PauliZ, 0}};
    for (const auto& ins : circuit.instructions) {
        switch (ins.op) {
            case Op::Depolarize1: counts[NoiseKind::Depolarize1] += 1; break;
            case Op::Depolarize2: counts[NoiseKind::Depolarize2] += 1; break;
            case Op::ZError:
            case Op::XError: counts[NoiseKind::PauliZ] += 1; break;
            default: break;
        }
    }
    return counts;
}

}  // namespace sbus
