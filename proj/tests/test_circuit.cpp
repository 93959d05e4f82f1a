#include <sstream>

#include "doctest.h"
#include "sbus/circuit.h"
#include "sbus/sampler.h"

using namespace sbus;

namespace {

MemoryExperiment experiment_for(int d, char basis = 'Z') {
    auto code = build_rotated_surface_code(d);
    auto dag = build_chain_dag(extract_chains(code, build_schedule(code)));
    MemoryExperiment exp;
    exp.basis = basis;
    exp.code = code;
    exp.layout = insert_idle_dots(zigzag(code, dag), dag.chains);
    return exp;
}

}  // namespace

TEST_CASE("memory circuit bookkeeping at d=3") {
    auto exp = experiment_for(3);
    auto circuit = build_memory_circuit(exp);
    CHECK(circuit.rounds == 9);  // default 3d
    // 8 ancilla measurements per round plus 9 data at the end.
    CHECK(circuit.measurement_count() == 8 * 9 + 9);
    // Round 1: 4 same-basis detectors; rounds 2..9: all 8; final: 4.
    CHECK(circuit.detector_count() == 4 + 8 * 8 + 4);
    CHECK(circuit.observable_count() == 1);
}

TEST_CASE("rounds override is honored") {
    auto exp = experiment_for(3);
    exp.rounds = 2;
    auto circuit = build_memory_circuit(exp);
    CHECK(circuit.rounds == 2);
    CHECK(circuit.measurement_count() == 8 * 2 + 9);
}

TEST_CASE("noiseless circuits trigger no detectors in either basis") {
    for (char basis : {'Z', 'X'}) {
        auto exp = experiment_for(3, basis);
        auto circuit = build_memory_circuit(exp);
        auto batch = sample_shots(circuit, 1024, 5);
        long events = 0;
        for (long s = 0; s < batch.n_shots; ++s) {
            for (int i = 0; i < batch.n_detectors; ++i) events += batch.detector(s, i);
            events += batch.observable(s, 0);
        }
        CHECK(events == 0);
    }
}

TEST_CASE("error location census") {
    auto exp = experiment_for(3);
    exp.noise.p_gate = 0.001;
    exp.noise.t2_qd = 1e-4;
    exp.noise.t2_bus = 1e-5;
    auto circuit = build_memory_circuit(exp);
    auto counts = count_error_locations(circuit);
    // Per round: 4 X ancillas get prep + unprep H (8 single-qubit
    // gates), and the 24 scheduled CNOTs.
    CHECK(counts.at(NoiseKind::Depolarize1) == 8 * 9);
    CHECK(counts.at(NoiseKind::Depolarize2) == 24 * 9);
    CHECK(counts.at(NoiseKind::PauliZ) > 0);
}

TEST_CASE("text emission is a fixed point of parsing") {
    auto exp = experiment_for(3);
    exp.noise.p_gate = 0.001;
    exp.noise.t2_qd = 1e-4;
    exp.noise.t2_bus = 1e-5;
    auto circuit = build_memory_circuit(exp);
    auto text = circuit_to_text(circuit);
    std::istringstream in(text);
    auto reparsed = parse_circuit_text(in);
    CHECK(circuit_to_text(reparsed) == text);
    // The builder sizes the register to the full bus; the parser only
    // sees indices that appear, so it may infer fewer qubits.
    CHECK(reparsed.n_qubits <= circuit.n_qubits);
    CHECK(reparsed.measurement_count() == circuit.measurement_count());
}

TEST_CASE("parser accepts comments and rejects junk") {
    std::istringstream ok("# comment\nR 0 1\nH 0\nCX 0 1\nM 0 1\nDETECTOR rec[-1]\n");
    auto c = parse_circuit_text(ok);
    CHECK(c.measurement_count() == 2);
    CHECK(c.detector_count() == 1);

    std::istringstream bad("FROBNICATE 0\n");
    CHECK_THROWS(parse_circuit_text(bad));
}

TEST_CASE("logical support lies on a grid line and commutes with checks") {
    for (int d : {3, 5}) {
        auto code = build_rotated_surface_code(d);
        for (char basis : {'Z', 'X'}) {
            auto support = logical_support(code, basis);
            CHECK(static_cast<int>(support.size()) == d);
            // Anticommutes with no same-basis-opposing check: every X
            // check shares an even number of qubits with logical Z.
            for (const auto& check : code.checks) {
                if (check.basis == basis) continue;
                int overlap = 0;
                for (auto [slice, q] : check.schedule) {
                    for (const auto& s : support) overlap += (s == q);
                }
                CHECK(overlap % 2 == 0);
            }
        }
    }
}
