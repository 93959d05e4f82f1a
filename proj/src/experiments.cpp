#include "sbus/experiments.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sbus {

AugmentedLayout make_layout(const CodeSpec& code, Strategy strategy,
                            double optimal_budget_seconds, Optimality* optimality) {
    auto chains = extract_chains(code, build_schedule(code));
    auto dag = build_chain_dag(chains);
    Placement placement;
    Optimality opt = Optimality::Heuristic;
    switch (strategy) {
        case Strategy::Naive:
            placement = naive_topological(dag);
            break;
        case Strategy::ZigZag:
            placement = zigzag(code, dag);
            break;
        case Strategy::Optimal: {
            Placement seed;
            bool grid = code.distance > 0 &&
                        code.data_qubits.size() == size_t(code.distance) * code.distance;
            if (grid) seed = zigzag(code, dag);
            auto result = optimal(dag, ObjectiveWeights{}, optimal_budget_seconds,
                                  grid ? &seed : nullptr);
            placement = result.placement;
            opt = result.optimality;
            break;
        }
    }
    if (optimality) *optimality = opt;
    return insert_idle_dots(placement, chains);
}

PointResult estimate_point(const MemoryExperiment& exp, const SampleConfig& cfg) {
    Circuit circuit = build_memory_circuit(exp);
    PointResult result;
    result.rounds = circuit.rounds;

    FrameSampler sampler(circuit);
    auto dem = derive_detector_model(circuit, /*decompose=*/true);
    UnionFindDecoder decoder(dem);

    const size_t det_bytes = (size_t(sampler.n_detectors()) + 7) / 8;
    long shots = 0, failures = 0;
    const long chunk = 4096;
    while (shots < cfg.shot_cap && (failures < cfg.min_failures || shots < cfg.min_shots)) {
        long n = std::min(chunk, cfg.shot_cap - shots);
        sampler.run(cfg.seed, shots, n, [&](long, const uint8_t* record) {
            uint64_t predicted = decoder.decode(record);
            uint64_t actual = 0;
            for (int o = 0; o < sampler.n_observables(); ++o) {
                actual |= uint64_t(record[det_bytes + (o >> 3)] >> (o & 7) & 1) << o;
            }
            failures += predicted != actual;
        });
        shots += n;
    }
    result.rate = logical_error_rate(shots, failures, circuit.rounds);
    result.measurable = failures > 0 || result.rate.p_shot > 0;
    return result;
}

std::string to_string(SweepParam p) {
    switch (p) {
        case SweepParam::PGate: return "p_gate";
        case SweepParam::T2Qd: return "t2_qd";
        case SweepParam::T2Bus: return "t2_bus";
    }
    throw std::logic_error("bad sweep parameter");
}

namespace {

uint64_t mix_seed(uint64_t seed, uint64_t cell) {
    uint64_t z = seed ^ (0x9e3779b97f4a7c15ull * (cell + 1));
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

MemoryExperiment make_experiment(const CodeSpec& code, const AugmentedLayout& layout,
                                 char basis, int rounds, const ArchParams& arch,
                                 const NoiseParams& noise) {
    MemoryExperiment exp;
    exp.basis = basis;
    exp.rounds = rounds;
    exp.layout = layout;
    exp.code = code;
    exp.arch = arch;
    exp.noise = noise;
    return exp;
}

}  // namespace

std::map<int, std::vector<std::pair<double, double>>> SweepResult::curves() const {
    std::map<int, std::vector<std::pair<double, double>>> out;
    for (const auto& cell : cells) out[cell.distance].push_back({cell.value, cell.point.rate.p_round});
    return out;
}

SweepResult threshold_sweep(const std::vector<int>& distances, Strategy strategy, char basis,
                            SweepParam param, const std::vector<double>& values,
                            const ArchParams& arch, const NoiseParams& base,
                            const SampleConfig& cfg, int rounds) {
    SweepResult result;
    result.param = param;
    uint64_t cell_index = 0;
    for (int d : distances) {
        auto code = build_rotated_surface_code(d);
        auto layout = make_layout(code, strategy);
        for (double value : values) {
            NoiseParams noise = base;
            switch (param) {
                case SweepParam::PGate: noise.p_gate = value; break;
                case SweepParam::T2Qd: noise.t2_qd = value; break;
                case SweepParam::T2Bus: noise.t2_bus = value; break;
            }
            auto exp = make_experiment(code, layout, basis, rounds, arch, noise);
            SampleConfig cell_cfg = cfg;
            cell_cfg.seed = mix_seed(cfg.seed, cell_index++);
            SweepCell cell;
            cell.distance = d;
            cell.value = value;
            cell.point = estimate_point(exp, cell_cfg);
            result.cells.push_back(std::move(cell));
        }
    }
    // A single-distance sweep is a plain data run: no crossing to fit.
    if (auto curves = result.curves(); curves.size() >= 2) {
        result.threshold = pseudo_threshold(curves);
    }
    return result;
}

std::vector<ArchCell> arch_sweep(const std::vector<int>& distances, Strategy strategy, char basis,
                                 const std::vector<double>& d_qu_values,
                                 const std::vector<double>& v_sh_values, const ArchParams& arch,
                                 const NoiseParams& noise, const SampleConfig& cfg, int rounds) {
    std::vector<ArchCell> cells;
    uint64_t cell_index = 0;
    for (int d : distances) {
        auto code = build_rotated_surface_code(d);
        auto layout = make_layout(code, strategy);
        for (double v_sh : v_sh_values) {
            for (double d_qu : d_qu_values) {
                ArchParams a = arch;
                a.d_qu = d_qu;
                a.v_sh = v_sh;
                auto exp = make_experiment(code, layout, basis, rounds, a, noise);
                SampleConfig cell_cfg = cfg;
                cell_cfg.seed = mix_seed(cfg.seed, cell_index++);
                ArchCell cell;
                cell.distance = d;
                cell.d_qu = d_qu;
                cell.v_sh = v_sh;
                cell.point = estimate_point(exp, cell_cfg);
                cells.push_back(std::move(cell));
            }
        }
    }
    return cells;
}

std::vector<CompareCell> compare_strategies(const std::vector<Strategy>& strategies,
                                            const std::vector<int>& distances, char basis,
                                            const ArchParams& arch, const NoiseParams& noise,
                                            const SampleConfig& cfg, int rounds) {
    std::vector<CompareCell> cells;
    uint64_t cell_index = 0;
    for (Strategy strategy : strategies) {
        for (int d : distances) {
            if (strategy == Strategy::Optimal && d > 7) {
                throw std::invalid_argument("exact strategy limited to distance 7");
            }
            auto code = build_rotated_surface_code(d);
            auto layout = make_layout(code, strategy);
            auto exp = make_experiment(code, layout, basis, rounds, arch, noise);
            SampleConfig cell_cfg = cfg;
            cell_cfg.seed = mix_seed(cfg.seed, cell_index++);
            CompareCell cell;
            cell.strategy = strategy;
            cell.distance = d;
            cell.point = estimate_point(exp, cell_cfg);
            cells.push_back(std::move(cell));
        }
    }
    return cells;
}

double extrapolate_log_rate(const std::vector<std::pair<int, double>>& rates,
                            int target_distance) {
    std::vector<double> x, y;
    for (const auto& [d, p] : rates) {
        if (p > 0) {
            x.push_back(double(d));
            y.push_back(std::log(p));
        }
    }
    if (x.size() < 2) throw std::invalid_argument("need two positive rates to extrapolate");
    auto coeff = polyfit(x, y, 1);
    return std::exp(coeff[0] + coeff[1] * double(target_distance));
}

}  // namespace sbus
