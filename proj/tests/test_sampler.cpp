#include <cmath>
#include <cstring>
#include <sstream>

#include "doctest.h"
#include "sbus/sampler.h"

using namespace sbus;

namespace {

Circuit parse(const std::string& text) {
    std::istringstream in(text);
    return parse_circuit_text(in);
}

}  // namespace

TEST_CASE("deterministic error locations fire every shot") {
    auto batch = sample_shots(parse(R"(R 0 1
X_ERROR(1) 0
CX 0 1
M 0 1
DETECTOR rec[-2]
DETECTOR rec[-1]
OBSERVABLE_INCLUDE(0) rec[-1]
)"),
                              256, 3);
    for (long s = 0; s < batch.n_shots; ++s) {
        CHECK(batch.detector(s, 0) == 1);
        CHECK(batch.detector(s, 1) == 1);
        CHECK(batch.observable(s, 0) == 1);
    }
}

TEST_CASE("bernoulli rate matches the requested probability") {
    // 2e5 independent draws at p = 0.3: the sample mean must land
    // within 5 sigma of p.
    auto batch = sample_shots(parse("R 0\nX_ERROR(0.3) 0\nM 0\nDETECTOR rec[-1]\n"), 200000, 11);
    long fired = 0;
    for (long s = 0; s < batch.n_shots; ++s) fired += batch.detector(s, 0);
    double mean = double(fired) / double(batch.n_shots);
    double sigma = std::sqrt(0.3 * 0.7 / double(batch.n_shots));
    CHECK(std::abs(mean - 0.3) < 5 * sigma);
}

TEST_CASE("depolarize1 splits evenly over X, Y and Z") {
    // Z-basis measurement sees X and Y but not Z: the flip rate is 2p/3.
    double p = 0.3;
    auto batch =
        sample_shots(parse("R 0\nDEPOLARIZE1(0.3) 0\nM 0\nDETECTOR rec[-1]\n"), 200000, 13);
    long fired = 0;
    for (long s = 0; s < batch.n_shots; ++s) fired += batch.detector(s, 0);
    double expect = 2.0 * p / 3.0;
    double mean = double(fired) / double(batch.n_shots);
    double sigma = std::sqrt(expect * (1 - expect) / double(batch.n_shots));
    CHECK(std::abs(mean - expect) < 5 * sigma);
}

TEST_CASE("sampling is deterministic and seed sensitive") {
    auto circuit = parse("R 0 1\nX_ERROR(0.25) 0\nX_ERROR(0.25) 1\nM 0 1\n"
                         "DETECTOR rec[-2]\nDETECTOR rec[-1]\n");
    auto a = sample_shots(circuit, 4096, 21);
    auto b = sample_shots(circuit, 4096, 21);
    CHECK(a.data == b.data);
    auto c = sample_shots(circuit, 4096, 22);
    CHECK(a.data != c.data);
}

TEST_CASE("streaming subranges agree with the full batch") {
    auto circuit = parse("R 0\nX_ERROR(0.4) 0\nM 0\nDETECTOR rec[-1]\n");
    FrameSampler sampler(circuit);
    auto full = sampler.sample(9, 300);
    // Shots are indexed globally: re-running a window must reproduce
    // the same records.
    std::vector<uint8_t> window;
    sampler.run(9, 100, 50, [&](long shot, const uint8_t* rec) {
        CHECK(shot >= 100);
        CHECK(shot < 150);
        window.insert(window.end(), rec, rec + full.record_bytes());
    });
    REQUIRE(window.size() == 50 * full.record_bytes());
    for (long i = 0; i < 50; ++i) {
        CHECK(std::memcmp(window.data() + i * full.record_bytes(), full.record(100 + i),
                          full.record_bytes()) == 0);
    }
}

TEST_CASE("shot batch io round trip") {
    auto circuit = parse("R 0\nX_ERROR(0.5) 0\nM 0\nDETECTOR rec[-1]\n"
                         "OBSERVABLE_INCLUDE(0) rec[-1]\n");
    auto batch = sample_shots(circuit, 1000, 77);
    std::ostringstream out;
    write_shot_batch(batch, out);
    std::istringstream in(out.str());
    auto loaded = read_shot_batch(in);
    CHECK(loaded.n_shots == batch.n_shots);
    CHECK(loaded.seed == batch.seed);
    CHECK(loaded.n_detectors == batch.n_detectors);
    CHECK(loaded.n_observables == batch.n_observables);
    CHECK(loaded.data == batch.data);
}

TEST_CASE("probabilities outside the unit interval are rejected") {
    CHECK_THROWS(sample_shots(parse("R 0\nX_ERROR(1.5) 0\nM 0\n"), 10, 1));
}
