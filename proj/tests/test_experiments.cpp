#include <cmath>

#include "doctest.h"
#include "sbus/dem.h"
#include "sbus/experiments.h"

using namespace sbus;

TEST_CASE("make_layout covers all strategies") {
    auto code = build_rotated_surface_code(3);
    Optimality opt = Optimality::Heuristic;
    auto zz = make_layout(code, Strategy::ZigZag);
    CHECK(zz.extra_dot_count() == 2);
    auto nv = make_layout(code, Strategy::Naive);
    CHECK(nv.extra_dot_count() == 5);
    auto ex = make_layout(code, Strategy::Optimal, 60.0, &opt);
    CHECK(opt == Optimality::Certified);
    CHECK(ex.placement.size() == 17);
}

TEST_CASE("detector rates from the sampler match the error model") {
    // Dual route: the per-detector fire probability implied by the DEM,
    // (1 - prod(1 - 2 p_e)) / 2 over faults touching it, must agree with
    // Pauli frame sampling within binomial noise. The product assumes
    // independent faults; branches of one depolarizing event are not,
    // so the rate is kept low enough that the O(p^2) bias stays well
    // inside the 5 sigma band.
    auto code = build_rotated_surface_code(3);
    MemoryExperiment exp;
    exp.code = code;
    exp.layout = make_layout(code, Strategy::ZigZag);
    exp.noise.p_gate = 0.002;
    auto circuit = build_memory_circuit(exp);
    auto dem = derive_detector_model(circuit);

    std::vector<double> keep(dem.n_detectors, 1.0);
    for (const auto& f : dem.faults) {
        for (int det : f.detectors) keep[det] *= 1.0 - 2.0 * f.probability;
    }

    const long shots = 100000;
    auto batch = sample_shots(circuit, shots, 31);
    for (int det = 0; det < dem.n_detectors; ++det) {
        long fired = 0;
        for (long s = 0; s < shots; ++s) fired += batch.detector(s, det);
        double expect = 0.5 * (1.0 - keep[det]);
        double sigma = std::sqrt(std::max(expect * (1 - expect), 1e-12) / double(shots));
        CHECK(std::abs(double(fired) / double(shots) - expect) < 5 * sigma);
    }
}

TEST_CASE("estimate_point is deterministic and respects stopping rules") {
    auto code = build_rotated_surface_code(3);
    MemoryExperiment exp;
    exp.code = code;
    exp.layout = make_layout(code, Strategy::ZigZag);
    exp.noise.p_gate = 0.01;
    SampleConfig cfg;
    cfg.min_shots = 2000;
    cfg.shot_cap = 20000;
    auto a = estimate_point(exp, cfg);
    auto b = estimate_point(exp, cfg);
    CHECK(a.rate.shots == b.rate.shots);
    CHECK(a.rate.failures == b.rate.failures);
    CHECK(a.rate.shots >= cfg.min_shots);
    CHECK(a.rate.shots <= cfg.shot_cap);
    CHECK(a.rate.failures >= cfg.min_failures);
    CHECK(a.measurable);
}

TEST_CASE("noiseless points are flagged unmeasurable") {
    auto code = build_rotated_surface_code(3);
    MemoryExperiment exp;
    exp.code = code;
    exp.layout = make_layout(code, Strategy::ZigZag);
    SampleConfig cfg;
    cfg.min_shots = 100;
    cfg.shot_cap = 1000;
    auto pt = estimate_point(exp, cfg);
    CHECK(pt.rate.failures == 0);
    CHECK(!pt.measurable);
}

TEST_CASE("sweep cells use distinct derived seeds") {
    auto code = build_rotated_surface_code(3);
    (void)code;
    ArchParams arch;
    NoiseParams base;
    SampleConfig cfg;
    cfg.min_shots = 1000;
    cfg.shot_cap = 5000;
    auto res = threshold_sweep({3}, Strategy::ZigZag, 'Z', SweepParam::PGate,
                               {0.01, 0.01, 0.01}, arch, base, cfg);
    REQUIRE(res.cells.size() == 3);
    // Same physical point, different cell indices: the failure counts
    // must not all coincide if the per-cell seeds differ.
    CHECK((res.cells[0].point.rate.failures != res.cells[1].point.rate.failures ||
           res.cells[1].point.rate.failures != res.cells[2].point.rate.failures));
    // And the whole sweep reruns identically.
    auto rerun = threshold_sweep({3}, Strategy::ZigZag, 'Z', SweepParam::PGate,
                                 {0.01, 0.01, 0.01}, arch, base, cfg);
    for (size_t i = 0; i < res.cells.size(); ++i) {
        CHECK(res.cells[i].point.rate.failures == rerun.cells[i].point.rate.failures);
        CHECK(res.cells[i].point.rate.shots == rerun.cells[i].point.rate.shots);
    }
}

TEST_CASE("compare_strategies rejects exact synthesis beyond d=7") {
    ArchParams arch;
    NoiseParams noise;
    noise.p_gate = 0.001;
    SampleConfig cfg;
    cfg.min_shots = 100;
    cfg.shot_cap = 200;
    CHECK_THROWS_AS(
        compare_strategies({Strategy::Optimal}, {9}, 'Z', arch, noise, cfg),
        std::invalid_argument);
}

TEST_CASE("log-rate extrapolation on a clean geometric sequence") {
    // p(d) = 0.1 * 10^{-(d-3)/2}: each distance step divides by 10.
    std::vector<std::pair<int, double>> pts = {
        {3, 1e-1}, {5, 1e-2}, {7, 1e-3}, {9, 1e-4}};
    double p21 = extrapolate_log_rate(pts, 21);
    CHECK(p21 == doctest::Approx(1e-10).epsilon(1e-6));
    // Zero-rate points are skipped.
    pts.push_back({11, 0.0});
    CHECK(extrapolate_log_rate(pts, 21) == doctest::Approx(1e-10).epsilon(1e-6));
}
