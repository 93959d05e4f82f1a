#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "doctest.h"
#include "sbus/noise_model.h"

using namespace sbus;

TEST_CASE("dephasing probability closed form") {
    // p(t) = (1 - e^{-t/(2 T2)}) / 2; half-life style anchor points.
    CHECK(dephasing_prob(0.0, 1e-6) == 0.0);
    CHECK(dephasing_prob(2e-6 * std::log(2.0), 1e-6) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(dephasing_prob(1.0, kInfT2) == 0.0);
    // Saturates at the fully dephased value 1/2.
    CHECK(dephasing_prob(1.0, 1e-9) == doctest::Approx(0.5).epsilon(1e-9));

    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> ts(1e-9, 1e-3), t2s(1e-7, 1e-2);
    for (int i = 0; i < 1000; ++i) {
        double t = ts(rng), t2 = t2s(rng);
        double expected = 0.5 * (1.0 - std::exp(-t / (2.0 * t2)));
        CHECK(dephasing_prob(t, t2) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("motional narrowing of the shuttling T2") {
    // T2(d_sh) = T2_bus sqrt((d_sh + l_c) / l_c): tripling the length
    // past one correlation length doubles the effective time.
    CHECK(shuttle_t2(1e-6, 3 * 13e-9, 13e-9) == doctest::Approx(2e-6).epsilon(1e-12));
    CHECK(shuttle_t2(10e-6, 100e-9, 13e-9) ==
          doctest::Approx(10e-6 * std::sqrt(113.0 / 13.0)).epsilon(1e-12));

    std::mt19937_64 rng(999);
    std::uniform_real_distribution<double> t2s(1e-7, 1e-4), ds(1e-9, 1e-5);
    for (int i = 0; i < 1000; ++i) {
        double t2 = t2s(rng), d = ds(rng), lc = 13e-9;
        CHECK(shuttle_t2(t2, d, lc) ==
              doctest::Approx(t2 * std::sqrt((d + lc) / lc)).epsilon(1e-12));
    }
}

TEST_CASE("split interval composition identity") {
    // Z flips compose as independent channels:
    // 1 - 2 p(t1+t2) = (1 - 2 p(t1)) (1 - 2 p(t2)).
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ts(1e-9, 1e-4);
    double t2 = 3.7e-5;
    for (int i = 0; i < 1000; ++i) {
        double t1 = ts(rng), t2i = ts(rng);
        double lhs = 1.0 - 2.0 * dephasing_prob(t1 + t2i, t2);
        double rhs = (1.0 - 2.0 * dephasing_prob(t1, t2)) * (1.0 - 2.0 * dephasing_prob(t2i, t2));
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("noise params validation and lossless flag") {
    NoiseParams noise;
    CHECK(noise.lossless());
    CHECK_NOTHROW(noise.validate());
    noise.p_gate = 0.001;
    CHECK(!noise.lossless());
    noise.p_gate = 1.5;
    CHECK_THROWS_AS(noise.validate(), std::invalid_argument);
    noise.p_gate = 0.0;
    noise.t2_qd = -1.0;
    CHECK_THROWS_AS(noise.validate(), std::invalid_argument);
}

namespace {

AugmentedLayout zigzag_layout(int d) {
    auto code = build_rotated_surface_code(d);
    auto dag = build_chain_dag(extract_chains(code, build_schedule(code)));
    return insert_idle_dots(zigzag(code, dag), dag.chains);
}

}  // namespace

TEST_CASE("noise timeline spans exactly one cycle") {
    ArchParams arch;
    NoiseParams noise;
    noise.p_gate = 0.001;
    noise.t2_qd = 1e-4;
    noise.t2_bus = 1e-5;
    for (int d : {3, 5}) {
        auto layout = zigzag_layout(d);
        auto timeline = build_noise_timeline(layout, arch, noise);
        double total = 0.0;
        for (const auto& seg : timeline) total += seg.duration_s;
        auto m = compute_metrics(layout, arch);
        CHECK(total == doctest::Approx(m.cycle_time_s).epsilon(1e-12));
    }
}

TEST_CASE("lossless settings produce no noise events") {
    ArchParams arch;
    NoiseParams noise;  // all lossless
    auto timeline = build_noise_timeline(zigzag_layout(3), arch, noise);
    for (const auto& seg : timeline) CHECK(seg.events.empty());
}

TEST_CASE("shuttle events carry the traveled distance") {
    ArchParams arch;
    NoiseParams noise;
    noise.t2_bus = 1e-5;
    auto layout = zigzag_layout(3);
    auto timeline = build_noise_timeline(layout, arch, noise);
    bool saw_shuttle = false;
    for (const auto& seg : timeline) {
        for (const auto& ev : seg.events) {
            if (ev.provenance != NoiseProvenance::Shuttle) continue;
            saw_shuttle = true;
            CHECK(ev.kind == NoiseKind::PauliZ);
            CHECK(ev.distance_m > 0.0);
            double expected = dephasing_prob(
                ev.distance_m / arch.v_sh, shuttle_t2(noise.t2_bus, ev.distance_m, noise.l_c));
            CHECK(ev.probability == doctest::Approx(expected).epsilon(1e-12));
        }
    }
    CHECK(saw_shuttle);
}

TEST_CASE("params file loading with flag-style keys and inf") {
    std::string path = "params_test.cfg";
    {
        std::ofstream f(path);
        f << "# test parameters\n";
        f << "d_qu 2e-7\nv_sh 5\np_gate 0.002\nt2_qd inf\nt2_bus 1e-5\n";
    }
    ArchParams arch;
    NoiseParams noise;
    load_params_file(path, arch, noise);
    CHECK(arch.d_qu == doctest::Approx(2e-7));
    CHECK(arch.v_sh == doctest::Approx(5.0));
    CHECK(noise.p_gate == doctest::Approx(0.002));
    CHECK(noise.t2_qd == kInfT2);
    CHECK(noise.t2_bus == doctest::Approx(1e-5));
    std::remove(path.c_str());
}
