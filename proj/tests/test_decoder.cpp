#include <vector>

#include "doctest.h"
#include "sbus/decoder.h"
#include "sbus/dem.h"

using namespace sbus;

namespace {

DetectorErrorModel make_model(int n_det, std::vector<Fault> faults) {
    DetectorErrorModel dem;
    dem.n_detectors = n_det;
    dem.n_observables = 1;
    dem.faults = std::move(faults);
    return dem;
}

uint64_t decode_bits(const UnionFindDecoder& dec, int n_det, const std::vector<int>& fired) {
    std::vector<uint8_t> bits((n_det + 7) / 8, 0);
    for (int d : fired) bits[d >> 3] |= uint8_t(1 << (d & 7));
    return dec.decode(bits.data());
}

}  // namespace

TEST_CASE("repetition chain matches through the cheap path") {
    // 0 - 1 - 2 with boundary edges at both ends; the logical runs
    // through the left boundary.
    auto dem = make_model(3, {
                                 {0.1, {0}, {0}},     // left boundary
                                 {0.1, {0, 1}, {}},
                                 {0.1, {1, 2}, {}},
                                 {0.1, {2}, {}},      // right boundary
                             });
    UnionFindDecoder dec(dem);
    CHECK(decode_bits(dec, 3, {}) == 0);
    // Single defect at 0: nearest exit is the left boundary.
    CHECK(decode_bits(dec, 3, {0}) == 1);
    // Single defect at 2: right boundary, no logical flip.
    CHECK(decode_bits(dec, 3, {2}) == 0);
    // Adjacent pair matches internally: no observable crossed.
    CHECK(decode_bits(dec, 3, {0, 1}) == 0);
    CHECK(decode_bits(dec, 3, {1, 2}) == 0);
}

TEST_CASE("weights steer the matching") {
    // Defect pair {0,1} with a cheap two-edge path through node 2 and an
    // expensive direct edge: the decoder must take the cheap path's
    // observable flips.
    auto dem = make_model(3, {
                                 {0.4, {0, 2}, {0}},
                                 {0.4, {2, 1}, {}},
                                 {0.01, {0, 1}, {}},
                             });
    UnionFindDecoder dec(dem);
    CHECK(decode_bits(dec, 3, {0, 1}) == 1);
}

TEST_CASE("non graphlike models are rejected") {
    auto dem = make_model(4, {{0.1, {0, 1, 2}, {}}});
    CHECK_THROWS_AS(UnionFindDecoder dec(dem), NonGraphlikeModel);
}

TEST_CASE("every weight-1 fault is corrected at d=3 and d=5") {
    for (int d : {3, 5}) {
        for (char basis : {'Z', 'X'}) {
            auto code = build_rotated_surface_code(d);
            auto dag = build_chain_dag(extract_chains(code, build_schedule(code)));
            MemoryExperiment exp;
            exp.basis = basis;
            exp.code = code;
            exp.layout = insert_idle_dots(zigzag(code, dag), dag.chains);
            exp.noise.p_gate = 0.001;
            exp.noise.t2_qd = 1e-4;
            exp.noise.t2_bus = 1e-5;
            auto circuit = build_memory_circuit(exp);
            auto dem = derive_detector_model(circuit, true);
            UnionFindDecoder dec(dem);
            size_t det_bytes = (size_t(dem.n_detectors) + 7) / 8;
            long miscorrected = 0;
            for (const auto& f : dem.faults) {
                if (f.detectors.empty()) continue;
                std::vector<uint8_t> bits(det_bytes, 0);
                for (int det : f.detectors) bits[det >> 3] |= uint8_t(1 << (det & 7));
                uint64_t obs = 0;
                for (int o : f.observables) obs |= uint64_t(1) << o;
                if (dec.decode(bits.data()) != obs) ++miscorrected;
            }
            CHECK(miscorrected == 0);
        }
    }
}
