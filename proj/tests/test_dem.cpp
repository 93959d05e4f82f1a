#include <algorithm>
#include <sstream>

#include "doctest.h"
#include "sbus/dem.h"

using namespace sbus;

namespace {

Circuit parse(const std::string& text) {
    std::istringstream in(text);
    return parse_circuit_text(in);
}

const Fault* find_fault(const DetectorErrorModel& dem, const std::vector<int>& detectors) {
    for (const auto& f : dem.faults) {
        if (f.detectors == detectors) return &f;
    }
    return nullptr;
}

}  // namespace

TEST_CASE("X error propagates through a CNOT to both measurements") {
    auto dem = derive_detector_model(parse(R"(R 0 1
X_ERROR(0.1) 0
CX 0 1
M 0 1
DETECTOR rec[-2]
DETECTOR rec[-1]
OBSERVABLE_INCLUDE(0) rec[-1]
)"));
    REQUIRE(dem.faults.size() == 1);
    CHECK(dem.faults[0].detectors == std::vector<int>{0, 1});
    CHECK(dem.faults[0].observables == std::vector<int>{0});
    CHECK(dem.faults[0].probability == doctest::Approx(0.1));
}

TEST_CASE("Z error between Hadamards flips the measurement") {
    auto dem = derive_detector_model(parse(R"(R 0
H 0
Z_ERROR(0.2) 0
H 0
M 0
DETECTOR rec[-1]
)"));
    REQUIRE(dem.faults.size() == 1);
    CHECK(dem.faults[0].detectors == std::vector<int>{0});
    CHECK(dem.faults[0].probability == doctest::Approx(0.2));
}

TEST_CASE("Z error on an unmeasured axis is silent") {
    auto dem = derive_detector_model(parse(R"(R 0
Z_ERROR(0.3) 0
M 0
DETECTOR rec[-1]
)"));
    CHECK(dem.faults.empty());
}

TEST_CASE("depolarize1 merges its X and Y components") {
    // X and Y both flip a Z measurement, Z does not: the two p/3 terms
    // combine as p' = 2(p/3)(1 - p/3) + ... = p1 + p2 - 2 p1 p2.
    double p = 0.09;
    auto dem = derive_detector_model(parse("R 0\nDEPOLARIZE1(0.09) 0\nM 0\nDETECTOR rec[-1]\n"));
    REQUIRE(dem.faults.size() == 1);
    double third = p / 3.0;
    CHECK(dem.faults[0].probability ==
          doctest::Approx(third + third - 2 * third * third).epsilon(1e-12));
}

TEST_CASE("depolarize2 produces the distinct two-qubit signatures") {
    auto dem = derive_detector_model(parse(R"(R 0 1
DEPOLARIZE2(0.15) 0 1
M 0 1
DETECTOR rec[-2]
DETECTOR rec[-1]
)"));
    // 15 Pauli pairs collapse to signatures {}, {0}, {1}, {0,1}; the
    // empty one is dropped.
    CHECK(dem.faults.size() == 3);
    CHECK(find_fault(dem, {0}) != nullptr);
    CHECK(find_fault(dem, {1}) != nullptr);
    CHECK(find_fault(dem, {0, 1}) != nullptr);
    // IX, IY, ZX, ZY flip only qubit 1's measurement: 4 of 15 terms.
    double unit = 0.15 / 15.0;
    double expect = 0.0;
    for (int i = 0; i < 4; ++i) expect = expect + unit - 2 * expect * unit;
    CHECK(find_fault(dem, {1})->probability == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("reset clears accumulated error sensitivity") {
    auto dem = derive_detector_model(parse(R"(R 0
X_ERROR(0.25) 0
R 0
M 0
DETECTOR rec[-1]
)"));
    CHECK(dem.faults.empty());
}

TEST_CASE("memory circuit model is graphlike after decomposition") {
    auto code = build_rotated_surface_code(3);
    auto dag = build_chain_dag(extract_chains(code, build_schedule(code)));
    MemoryExperiment exp;
    exp.code = code;
    exp.layout = insert_idle_dots(zigzag(code, dag), dag.chains);
    exp.noise.p_gate = 0.001;
    exp.noise.t2_qd = 1e-4;
    exp.noise.t2_bus = 1e-5;
    auto circuit = build_memory_circuit(exp);
    auto dem = derive_detector_model(circuit, true);
    CHECK(dem.n_detectors == circuit.detector_count());
    CHECK(!dem.faults.empty());
    for (const auto& f : dem.faults) {
        CHECK(f.detectors.size() <= 2);
        CHECK(std::is_sorted(f.detectors.begin(), f.detectors.end()));
        CHECK(f.probability > 0.0);
        CHECK(f.probability < 0.5);
    }
}
