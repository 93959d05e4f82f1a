#include <sstream>

#include "doctest.h"
#include "sbus/metrics.h"

using namespace sbus;

namespace {

AugmentedLayout layout_for(int d, Strategy s) {
    auto code = build_rotated_surface_code(d);
    auto dag = build_chain_dag(extract_chains(code, build_schedule(code)));
    auto p = s == Strategy::ZigZag ? zigzag(code, dag) : naive_topological(dag);
    return insert_idle_dots(p, dag.chains);
}

}  // namespace

TEST_CASE("total distance telescopes to per-chain spans") {
    // Every chain walks monotonically forward then returns, so its travel
    // is exactly twice its span; summing hop lengths must agree.
    for (int d : {3, 5}) {
        auto code = build_rotated_surface_code(d);
        auto dag = build_chain_dag(extract_chains(code, build_schedule(code)));
        auto p = zigzag(code, dag);
        long direct = total_shuttle_distance(p, dag.chains);
        long hops = 0;
        for (const auto& chain : dag.chains) {
            int at = p.position_of(chain.data);
            for (const auto& step : chain.steps) {
                if (!step) continue;
                int next = p.position_of(*step);
                hops += std::abs(next - at);
                at = next;
            }
            hops += std::abs(p.position_of(chain.data) - at);
        }
        CHECK(direct == hops);
    }
}

TEST_CASE("cycle time closed form in the zero-shuttle limit") {
    // All slice times zero: prep H + 4 CNOTs + unprep H + readout.
    ArchParams arch;
    CHECK(cycle_time({0, 0, 0, 0, 0}, arch) == doctest::Approx(900e-9).epsilon(1e-12));
}

TEST_CASE("cycle time adds shuttle legs per slice") {
    ArchParams arch;
    // One dot of travel per slice: 5 legs at d_qu / v_sh each.
    double base = cycle_time({0, 0, 0, 0, 0}, arch);
    double t = cycle_time({1, 1, 1, 1, 1}, arch);
    CHECK(t == doctest::Approx(base + 5 * arch.d_qu / arch.v_sh).epsilon(1e-12));
}

TEST_CASE("metrics report is consistent with the layout") {
    ArchParams arch;
    auto layout = layout_for(3, Strategy::ZigZag);
    auto m = compute_metrics(layout, arch);
    CHECK(m.extra_dots == 2);
    CHECK(m.bus_length == 19);
    CHECK(m.total_distance_dots == 124);
    CHECK(m.total_distance_m == doctest::Approx(m.total_distance_dots * arch.d_qu));
    CHECK(m.per_chain_distance.size() == 9);
    CHECK(m.cycle_time_s == doctest::Approx(cycle_time(m.slice_times_dots, arch)));
}

TEST_CASE("arch params validation") {
    ArchParams arch;
    CHECK_NOTHROW(arch.validate());
    arch.v_sh = 0;
    CHECK_THROWS_AS(arch.validate(), std::invalid_argument);
}

TEST_CASE("scaling sweep shapes and flags") {
    ArchParams arch;
    auto zz = scaling_sweep(3, 9, Strategy::ZigZag, arch);
    REQUIRE(zz.size() == 4);
    for (const auto& r : zz) {
        CHECK(r.extra_dots == 2);
        CHECK(r.time_sum == (r.distance == 3 ? 24 : 12 * r.distance - 11));
    }
    auto nv = scaling_sweep(3, 9, Strategy::Naive, arch);
    const long sums[] = {45, 134, 269, 448};
    for (size_t i = 0; i < nv.size(); ++i) CHECK(nv[i].time_sum == sums[i]);
}

TEST_CASE("scaling csv emission is stable") {
    ArchParams arch;
    auto rows = scaling_sweep(3, 5, Strategy::ZigZag, arch);
    std::ostringstream a, b;
    write_scaling_csv(rows, a);
    write_scaling_csv(rows, b);
    CHECK(a.str() == b.str());
    CHECK(a.str().find("distance,strategy") == 0);
}

TEST_CASE("polyfit recovers exact polynomials") {
    std::vector<double> x = {1, 2, 3, 4, 5, 6};
    std::vector<double> y;
    for (double v : x) y.push_back(2.0 - 3.0 * v + 0.5 * v * v);
    double r2 = 0;
    auto c = polyfit(x, y, 2, &r2);
    REQUIRE(c.size() == 3);
    CHECK(c[0] == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(c[1] == doctest::Approx(-3.0).epsilon(1e-9));
    CHECK(c[2] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(r2 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("strategy string round trip") {
    for (Strategy s : {Strategy::Naive, Strategy::ZigZag, Strategy::Optimal}) {
        CHECK(strategy_from_string(to_string(s)) == s);
    }
    CHECK_THROWS_AS(strategy_from_string("bogus"), std::invalid_argument);
}
