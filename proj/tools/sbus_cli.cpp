// Command-line front end: layout synthesis, scaling tables, circuit
// emission, shot sampling and the sweep experiments, as CSV/JSON.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sbus/circuit.h"
#include "sbus/dem.h"
#include "sbus/experiments.h"

using json = nlohmann::ordered_json;
using namespace sbus;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

// Arch + noise flags shared by every command; a parameter file supplies
// values for whatever flags the command line leaves unset.
struct ParamOpts {
    ArchParams arch;
    NoiseParams noise;
    std::string file;
    CLI::App* app = nullptr;

    void add(CLI::App* a) {
        app = a;
        a->add_option("--params", file, "key-value parameter file; flags override it");
        a->add_option("--d-qu", arch.d_qu, "inter-dot pitch [m]")->capture_default_str();
        a->add_option("--v-sh", arch.v_sh, "shuttle velocity [m/s]")->capture_default_str();
        a->add_option("--t-1q", arch.t_1q, "single-qubit gate time [s]")->capture_default_str();
        a->add_option("--t-2q", arch.t_2q, "two-qubit gate time [s]")->capture_default_str();
        a->add_option("--t-meas", arch.t_meas, "readout time [s]")->capture_default_str();
        a->add_option("--p-gate", noise.p_gate, "gate depolarizing probability")
            ->capture_default_str();
        a->add_option("--t2-qd", noise.t2_qd, "idle dephasing time [s], inf = lossless")
            ->capture_default_str();
        a->add_option("--t2-bus", noise.t2_bus, "shuttle dephasing time [s], inf = lossless")
            ->capture_default_str();
        a->add_option("--l-c", noise.l_c, "disorder correlation length [m]")
            ->capture_default_str();
    }

    void resolve() {
        if (file.empty()) return;
        AramsFromFile f;
        load_params_file(file, f.arch, f.noise);
        auto pick = [&](const char* name, double& bound, double filev) {
            if (app->count(name) == 0) bound = filev;
        };
        pick("--d-qu", arch.d_qu, f.arch.d_qu);
        pick("--v-sh", arch.v_sh, f.arch.v_sh);
        pick("--t-1q", arch.t_1q, f.arch.t_1q);
        pick("--t-2q", arch.t_2q, f.arch.t_2q);
        pick("--t-meas", arch.t_meas, f.arch.t_meas);
        pick("--p-gate", noise.p_gate, f.noise.p_gate);
        pick("--t2-qd", noise.t2_qd, f.noise.t2_qd);
        pick("--t2-bus", noise.t2_bus, f.noise.t2_bus);
        pick("--l-c", noise.l_c, f.noise.l_c);
    }

    struct AramsFromFile {
        ArchParams arch;
        NoiseParams noise;
    };

    void echo(std::vector<std::pair<std::string, std::string>>& kv) const {
        kv.push_back({"d_qu", fmt(arch.d_qu)});
        kv.push_back({"v_sh", fmt(arch.v_sh)});
        kv.push_back({"t_1q", fmt(arch.t_1q)});
        kv.push_back({"t_2q", fmt(arch.t_2q)});
        kv.push_back({"t_meas", fmt(arch.t_meas)});
        kv.push_back({"p_gate", fmt(noise.p_gate)});
        kv.push_back({"t2_qd", fmt(noise.t2_qd)});
        kv.push_back({"t2_bus", fmt(noise.t2_bus)});
        kv.push_back({"l_c", fmt(noise.l_c)});
    }
};

struct SampleOpts {
    SampleConfig cfg;

    void add(CLI::App* a) {
        a->add_option("--seed", cfg.seed, "master RNG seed")->capture_default_str();
        a->add_option("--min-failures", cfg.min_failures, "stop after this many failures")
            ->capture_default_str();
        a->add_option("--min-shots", cfg.min_shots, "lower bound on shots per point")
            ->capture_default_str();
        a->add_option("--shot-cap", cfg.shot_cap, "upper bound on shots per point")
            ->capture_default_str();
    }

    void echo(std::vector<std::pair<std::string, std::string>>& kv) const {
        kv.push_back({"seed", std::to_string(cfg.seed)});
        kv.push_back({"min_failures", std::to_string(cfg.min_failures)});
        kv.push_back({"min_shots", std::to_string(cfg.min_shots)});
        kv.push_back({"shot_cap", std::to_string(cfg.shot_cap)});
    }
};

// Code selection: a rotated surface code distance, the Steane code, or
// a generic code file.
struct CodeOpts {
    int distance = 3;
    bool steane = false;
    std::string code_file;

    void add(CLI::App* a) {
        auto* d = a->add_option("--d", distance, "rotated surface code distance")
                      ->capture_default_str();
        auto* s = a->add_flag("--steane", steane, "use the Steane code");
        auto* f = a->add_option("--code", code_file, "generic code spec file");
        d->excludes(s)->excludes(f);
        s->excludes(f);
    }

    CodeSpec build() const {
        if (steane) return build_steane_code();
        if (!code_file.empty()) return load_code_file(code_file);
        return build_rotated_surface_code(distance);
    }

    void echo(std::vector<std::pair<std::string, std::string>>& kv) const {
        if (steane) {
            kv.push_back({"code", "steane"});
        } else if (!code_file.empty()) {
            kv.push_back({"code", code_file});
        } else {
            kv.push_back({"distance", std::to_string(distance)});
        }
    }
};

struct OutFile {
    std::ofstream f;
    std::ostream* os = &std::cout;

    void open(const std::string& path) {
        if (path.empty() || path == "-") return;
        f.open(path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open output file: " + path);
        os = &f;
    }
    std::ostream& get() { return *os; }
};

void write_echo(std::ostream& out, const std::string& command,
                const std::vector<std::pair<std::string, std::string>>& kv) {
    out << "# command " << command << "\n";
    for (const auto& [k, v] : kv) out << "# " << k << " " << v << "\n";
}

char parse_basis(std::string s) {
    if (s == "Z" || s == "z") return 'Z';
    if (s == "X" || s == "x") return 'X';
    throw CLI::ValidationError("--basis", "basis must be Z or X");
}

std::string join_values(const std::vector<double>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(v[i]);
    return s;
}

std::string join_ints(const std::vector<int>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

void rate_columns(std::ostream& out, const PointResult& pt) {
    out << pt.rounds << "," << pt.rate.shots << "," << pt.rate.failures << ","
        << fmt(pt.rate.p_shot) << "," << fmt(pt.rate.p_shot_stderr) << ","
        << fmt(pt.rate.p_round) << "," << (pt.measurable ? 1 : 0);
}

json threshold_json(const SweepResult& res) {
    json j;
    j["param"] = to_string(res.param);
    j["found"] = res.threshold.found();
    j["mean"] = res.threshold.mean;
    j["stddev"] = res.threshold.stddev;
    j["crossings"] = json::array();
    for (const auto& [pair, value] : res.threshold.crossings) {
        j["crossings"].push_back(
            {{"d_low", pair.first}, {"d_high", pair.second}, {"value", value}});
    }
    j["no_crossing"] = json::array();
    for (const auto& [lo, hi] : res.threshold.no_crossing) {
        j["no_crossing"].push_back({{"d_low", lo}, {"d_high", hi}});
    }
    return j;
}

MemoryExperiment make_experiment(const CodeSpec& code, Strategy strategy, char basis, int rounds,
                                 const ParamOpts& params, double budget,
                                 Optimality* optimality = nullptr) {
    MemoryExperiment exp;
    exp.basis = basis;
    exp.rounds = rounds;
    exp.code = code;
    exp.layout = make_layout(code, strategy, budget, optimality);
    exp.arch = params.arch;
    exp.noise = params.noise;
    return exp;
}

int cmd_synth(const CodeOpts& code_opts, const ParamOpts& params, const std::string& strategy_s,
              double budget, const std::string& out_path) {
    auto code = code_opts.build();
    Strategy strategy = strategy_from_string(strategy_s);
    Optimality optimality = Optimality::Heuristic;
    auto layout = make_layout(code, strategy, budget, &optimality);
    auto metrics = compute_metrics(layout, params.arch);
    auto eval = evaluate_placement(layout.placement, build_chain_dag(layout.chains),
                                  ObjectiveWeights{}, optimality);

    if (!out_path.empty()) {
        std::ofstream f(out_path);
        if (!f) throw std::runtime_error("cannot open output file: " + out_path);
        save_placement(layout.placement, f);
    }

    json j;
    j["command"] = "synth";
    j["code"] = code.name;
    j["strategy"] = to_string(strategy);
    j["optimality"] = optimality == Optimality::Certified ? "certified" : "heuristic";
    j["order"] = json::array();
    for (const auto& q : layout.placement.order) j["order"].push_back(to_string(q));
    j["slice_times"] = eval.slice_times;
    j["time_sum"] = eval.slice_times[0] + eval.slice_times[1] + eval.slice_times[2] +
                    eval.slice_times[3] + eval.slice_times[4];
    j["total_distance"] = eval.total_distance;
    j["objective"] = eval.objective;
    j["extra_dots"] = metrics.extra_dots;
    j["bus_length"] = metrics.bus_length;
    j["cycle_time_s"] = metrics.cycle_time_s;
    std::cout << j.dump(2) << "\n";

    // A requested exact solve that ran out of budget is reported but
    // flagged through the exit code.
    if (strategy == Strategy::Optimal && optimality != Optimality::Certified) return 3;
    return 0;
}

int cmd_scaling(const ParamOpts& params, const std::string& strategy_s, int d_min, int d_max,
                double budget, const std::string& out_path) {
    Strategy strategy = strategy_from_string(strategy_s);
    auto rows = scaling_sweep(d_min, d_max, strategy, params.arch, budget);
    OutFile out;
    out.open(out_path);
    std::vector<std::pair<std::string, std::string>> kv;
    kv.push_back({"strategy", to_string(strategy)});
    kv.push_back({"d_min", std::to_string(d_min)});
    kv.push_back({"d_max", std::to_string(d_max)});
    kv.push_back({"budget_s", fmt(budget)});
    params.echo(kv);
    write_echo(out.get(), "scaling", kv);
    write_scaling_csv(rows, out.get());
    return 0;
}

int cmd_emit(const CodeOpts& code_opts, const ParamOpts& params, const std::string& strategy_s,
             const std::string& basis_s, int rounds, double budget, const std::string& out_path) {
    auto exp = make_experiment(code_opts.build(), strategy_from_string(strategy_s),
                               parse_basis(basis_s), rounds, params, budget);
    auto circuit = build_memory_circuit(exp);
    OutFile out;
    out.open(out_path);
    std::vector<std::pair<std::string, std::string>> kv;
    code_opts.echo(kv);
    kv.push_back({"strategy", strategy_s});
    kv.push_back({"basis", std::string(1, exp.basis)});
    kv.push_back({"rounds", std::to_string(circuit.rounds)});
    params.echo(kv);
    write_echo(out.get(), "emit", kv);
    emit_circuit_text(circuit, out.get());
    return 0;
}

int cmd_sample(const CodeOpts& code_opts, const ParamOpts& params, const std::string& strategy_s,
               const std::string& basis_s, int rounds, double budget, long shots, uint64_t seed,
               bool decode, const std::string& out_path) {
    auto exp = make_experiment(code_opts.build(), strategy_from_string(strategy_s),
                               parse_basis(basis_s), rounds, params, budget);
    auto circuit = build_memory_circuit(exp);
    auto batch = sample_shots(circuit, shots, seed);
    if (!out_path.empty()) {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open output file: " + out_path);
        write_shot_batch(batch, f);
    }

    json j;
    j["command"] = "sample";
    j["shots"] = batch.n_shots;
    j["seed"] = batch.seed;
    j["rounds"] = circuit.rounds;
    j["n_detectors"] = batch.n_detectors;
    j["n_observables"] = batch.n_observables;
    if (decode) {
        auto dem = derive_detector_model(circuit, true);
        UnionFindDecoder decoder(dem);
        long failures = 0;
        for (long s = 0; s < batch.n_shots; ++s) {
            if (decoder.decode(batch.record(s)) != batch.observable(s, 0)) ++failures;
        }
        auto rate = logical_error_rate(batch.n_shots, failures, circuit.rounds);
        j["failures"] = rate.failures;
        j["p_shot"] = rate.p_shot;
        j["p_shot_stderr"] = rate.p_shot_stderr;
        j["p_round"] = rate.p_round;
    }
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_threshold(const ParamOpts& params, const SampleOpts& sample, const std::string& strategy_s,
                  const std::string& basis_s, std::vector<int> distances,
                  const std::string& sweep_s, const std::vector<double>& values, int rounds,
                  const std::string& out_path, const std::string& json_path) {
    Strategy strategy = strategy_from_string(strategy_s);
    char basis = parse_basis(basis_s);
    SweepParam param;
    if (sweep_s == "p_gate") {
        param = SweepParam::PGate;
    } else if (sweep_s == "t2_qd") {
        param = SweepParam::T2Qd;
    } else if (sweep_s == "t2_bus") {
        param = SweepParam::T2Bus;
    } else {
        throw CLI::ValidationError("--sweep", "must be p_gate, t2_qd or t2_bus");
    }
    auto res = threshold_sweep(distances, strategy, basis, param, values, params.arch,
                               params.noise, sample.cfg, rounds);

    OutFile out;
    out.open(out_path);
    std::vector<std::pair<std::string, std::string>> kv;
    kv.push_back({"strategy", to_string(strategy)});
    kv.push_back({"basis", std::string(1, basis)});
    kv.push_back({"distances", join_ints(distances)});
    kv.push_back({"sweep", to_string(param)});
    kv.push_back({"values", join_values(values)});
    kv.push_back({"rounds_override", std::to_string(rounds)});
    params.echo(kv);
    sample.echo(kv);
    write_echo(out.get(), "threshold", kv);
    out.get() << "distance,value,rounds,shots,failures,p_shot,p_shot_stderr,p_round,measurable\n";
    for (const auto& c : res.cells) {
        out.get() << c.distance << "," << fmt(c.value) << ",";
        rate_columns(out.get(), c.point);
        out.get() << "\n";
    }

    json j = threshold_json(res);
    if (!json_path.empty()) {
        std::ofstream f(json_path);
        if (!f) throw std::runtime_error("cannot open output file: " + json_path);
        f << j.dump(2) << "\n";
    } else {
        std::cout << j.dump(2) << "\n";
    }
    return 0;
}

int cmd_archsweep(const ParamOpts& params, const SampleOpts& sample, const std::string& strategy_s,
                  const std::string& basis_s, const std::vector<int>& distances,
                  const std::vector<double>& d_qu_values, const std::vector<double>& v_sh_values,
                  int rounds, const std::string& out_path) {
    Strategy strategy = strategy_from_string(strategy_s);
    char basis = parse_basis(basis_s);
    auto cells = arch_sweep(distances, strategy, basis, d_qu_values, v_sh_values, params.arch,
                            params.noise, sample.cfg, rounds);

    OutFile out;
    out.open(out_path);
    std::vector<std::pair<std::string, std::string>> kv;
    kv.push_back({"strategy", to_string(strategy)});
    kv.push_back({"basis", std::string(1, basis)});
    kv.push_back({"distances", join_ints(distances)});
    kv.push_back({"d_qu_values", join_values(d_qu_values)});
    kv.push_back({"v_sh_values", join_values(v_sh_values)});
    kv.push_back({"rounds_override", std::to_string(rounds)});
    params.echo(kv);
    sample.echo(kv);
    write_echo(out.get(), "archsweep", kv);
    out.get() << "distance,d_qu,v_sh,rounds,shots,failures,p_shot,p_shot_stderr,p_round,"
                 "measurable\n";
    for (const auto& c : cells) {
        out.get() << c.distance << "," << fmt(c.d_qu) << "," << fmt(c.v_sh) << ",";
        rate_columns(out.get(), c.point);
        out.get() << "\n";
    }

    // Per-velocity pseudo-threshold in d_qu: the pitch below which the
    // bigger code wins.
    out.get() << "\nv_sh,threshold_mean,threshold_stddev,pairs,no_crossing\n";
    for (double v : v_sh_values) {
        std::map<int, std::vector<std::pair<double, double>>> curves;
        for (const auto& c : cells) {
            if (c.v_sh == v) curves[c.distance].push_back({c.d_qu, c.point.rate.p_round});
        }
        auto est = pseudo_threshold(curves);
        out.get() << fmt(v) << "," << fmt(est.mean) << "," << fmt(est.stddev) << ","
                  << est.crossings.size() << "," << est.no_crossing.size() << "\n";
    }
    return 0;
}

int cmd_compare(const ParamOpts& params, const SampleOpts& sample,
                const std::vector<std::string>& strategy_names, const std::string& basis_s,
                const std::vector<int>& distances, int rounds, const std::string& out_path) {
    char basis = parse_basis(basis_s);
    std::vector<Strategy> strategies;
    for (const auto& s : strategy_names) strategies.push_back(strategy_from_string(s));
    // Distances whose rates sit below what the shot cap can resolve are
    // refused up front rather than burned through.
    std::vector<int> runnable, refused;
    for (int d : distances) (d <= 15 ? runnable : refused).push_back(d);
    std::vector<CompareCell> cells;
    if (!runnable.empty()) {
        cells = compare_strategies(strategies, runnable, basis, params.arch, params.noise,
                                   sample.cfg, rounds);
    }

    OutFile out;
    out.open(out_path);
    std::vector<std::pair<std::string, std::string>> kv;
    std::string strat_list;
    for (size_t i = 0; i < strategies.size(); ++i) {
        strat_list += (i ? "," : "") + to_string(strategies[i]);
    }
    kv.push_back({"strategies", strat_list});
    kv.push_back({"basis", std::string(1, basis)});
    kv.push_back({"distances", join_ints(distances)});
    kv.push_back({"rounds_override", std::to_string(rounds)});
    params.echo(kv);
    sample.echo(kv);
    write_echo(out.get(), "compare", kv);
    out.get() << "strategy,distance,rounds,shots,failures,p_shot,p_shot_stderr,p_round,"
                 "measurable,below_measurable_floor\n";
    for (const auto& c : cells) {
        out.get() << to_string(c.strategy) << "," << c.distance << ",";
        rate_columns(out.get(), c.point);
        out.get() << ",0\n";
    }
    for (Strategy s : strategies) {
        for (int d : refused) {
            out.get() << to_string(s) << "," << d << ",0,0,0,0,0,0,0,1\n";
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"shuttling-bus architecture synthesis and simulation"};
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "synthesize a bus layout");
    CodeOpts synth_code;
    ParamOpts synth_params;
    std::string synth_strategy = "zigzag", synth_out;
    double synth_budget = 300.0;
    synth_code.add(synth);
    synth_params.add(synth);
    synth->add_option("--strategy", synth_strategy, "naive | zigzag | optimal")
        ->capture_default_str();
    synth->add_option("--budget", synth_budget, "exact-solve budget [s]")->capture_default_str();
    synth->add_option("--out", synth_out, "placement output file");

    // scaling
    auto* scaling = app.add_subcommand("scaling", "metrics table over a distance range");
    ParamOpts scaling_params;
    std::string scaling_strategy = "zigzag", scaling_out;
    int scaling_dmin = 3, scaling_dmax = 15;
    double scaling_budget = 300.0;
    scaling_params.add(scaling);
    scaling->add_option("--strategy", scaling_strategy, "naive | zigzag | optimal")
        ->capture_default_str();
    scaling->add_option("--d-min", scaling_dmin, "first distance")->capture_default_str();
    scaling->add_option("--d-max", scaling_dmax, "last distance")->capture_default_str();
    scaling->add_option("--budget", scaling_budget, "per-distance exact-solve budget [s]")
        ->capture_default_str();
    scaling->add_option("--out", scaling_out, "CSV output file, default stdout");

    // emit
    auto* emit = app.add_subcommand("emit", "emit a noisy memory circuit as text");
    CodeOpts emit_code;
    ParamOpts emit_params;
    std::string emit_strategy = "zigzag", emit_basis = "Z", emit_out;
    int emit_rounds = 0;
    double emit_budget = 300.0;
    emit_code.add(emit);
    emit_params.add(emit);
    emit->add_option("--strategy", emit_strategy, "naive | zigzag | optimal")
        ->capture_default_str();
    emit->add_option("--basis", emit_basis, "memory basis, Z or X")->capture_default_str();
    emit->add_option("--rounds", emit_rounds, "cycle count, 0 = 3d")->capture_default_str();
    emit->add_option("--budget", emit_budget, "exact-solve budget [s]")->capture_default_str();
    emit->add_option("--out", emit_out, "circuit output file, default stdout");

    // sample
    auto* sampc = app.add_subcommand("sample", "sample detector/observable shots");
    CodeOpts sample_code;
    ParamOpts sample_params;
    std::string sample_strategy = "zigzag", sample_basis = "Z", sample_out;
    int sample_rounds = 0;
    double sample_budget = 300.0;
    long sample_shots = 10000;
    uint64_t sample_seed = 1;
    bool sample_decode = false;
    sample_code.add(sampc);
    sample_params.add(sampc);
    sampc->add_option("--strategy", sample_strategy, "naive | zigzag | optimal")
        ->capture_default_str();
    sampc->add_option("--basis", sample_basis, "memory basis, Z or X")->capture_default_str();
    sampc->add_option("--rounds", sample_rounds, "cycle count, 0 = 3d")->capture_default_str();
    sampc->add_option("--budget", sample_budget, "exact-solve budget [s]")->capture_default_str();
    sampc->add_option("--shots", sample_shots, "number of shots")->capture_default_str();
    sampc->add_option("--seed", sample_seed, "RNG seed")->capture_default_str();
    sampc->add_flag("--decode", sample_decode, "decode the shots and report logical rates");
    sampc->add_option("--out", sample_out, "shot batch output file");

    // threshold
    auto* thresh = app.add_subcommand("threshold", "sweep one noise source, find the crossing");
    ParamOpts thresh_params;
    SampleOpts thresh_sample;
    std::string thresh_strategy = "zigzag", thresh_basis = "Z", thresh_sweep = "p_gate";
    std::string thresh_out, thresh_json;
    std::vector<int> thresh_d = {3, 5, 7};
    std::vector<double> thresh_values;
    int thresh_rounds = 0;
    thresh_params.add(thresh);
    thresh_sample.add(thresh);
    thresh->add_option("--strategy", thresh_strategy, "naive | zigzag | optimal")
        ->capture_default_str();
    thresh->add_option("--basis", thresh_basis, "memory basis, Z or X")->capture_default_str();
    thresh->add_option("--d", thresh_d, "distances")->delimiter(',')->capture_default_str();
    thresh->add_option("--sweep", thresh_sweep, "p_gate | t2_qd | t2_bus")
        ->capture_default_str();
    thresh->add_option("--values", thresh_values, "sweep grid")->delimiter(',')->required();
    thresh->add_option("--rounds", thresh_rounds, "cycle count, 0 = 3d")->capture_default_str();
    thresh->add_option("--out", thresh_out, "CSV output file, default stdout");
    thresh->add_option("--json", thresh_json, "threshold estimate JSON file, default stdout");

    // archsweep
    auto* archs = app.add_subcommand("archsweep", "sweep pitch and velocity");
    ParamOpts archs_params;
    SampleOpts archs_sample;
    std::string archs_strategy = "zigzag", archs_basis = "X", archs_out;
    std::vector<int> archs_d = {3, 5};
    std::vector<double> archs_dqu, archs_vsh;
    int archs_rounds = 0;
    archs_params.add(archs);
    archs_sample.add(archs);
    archs->add_option("--strategy", archs_strategy, "naive | zigzag | optimal")
        ->capture_default_str();
    archs->add_option("--basis", archs_basis, "memory basis, Z or X")->capture_default_str();
    archs->add_option("--d", archs_d, "distances")->delimiter(',')->capture_default_str();
    archs->add_option("--d-qu-values", archs_dqu, "pitch grid [m]")->delimiter(',')->required();
    archs->add_option("--v-sh-values", archs_vsh, "velocity grid [m/s]")
        ->delimiter(',')
        ->required();
    archs->add_option("--rounds", archs_rounds, "cycle count, 0 = 3d")->capture_default_str();
    archs->add_option("--out", archs_out, "CSV output file, default stdout");

    // compare
    auto* comp = app.add_subcommand("compare", "compare placement strategies");
    ParamOpts comp_params;
    SampleOpts comp_sample;
    std::string comp_basis = "X", comp_out;
    std::vector<std::string> comp_strategies = {"zigzag", "naive"};
    std::vector<int> comp_d = {3, 5, 7};
    int comp_rounds = 0;
    comp_params.add(comp);
    comp_sample.add(comp);
    comp->add_option("--strategies", comp_strategies, "strategy list")
        ->delimiter(',')
        ->capture_default_str();
    comp->add_option("--basis", comp_basis, "memory basis, Z or X")->capture_default_str();
    comp->add_option("--d", comp_d, "distances")->delimiter(',')->capture_default_str();
    comp->add_option("--rounds", comp_rounds, "cycle count, 0 = 3d")->capture_default_str();
    comp->add_option("--out", comp_out, "CSV output file, default stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (app.got_subcommand(synth)) {
            synth_params.resolve();
            return cmd_synth(synth_code, synth_params, synth_strategy, synth_budget, synth_out);
        }
        if (app.got_subcommand(scaling)) {
            scaling_params.resolve();
            return cmd_scaling(scaling_params, scaling_strategy, scaling_dmin, scaling_dmax,
                               scaling_budget, scaling_out);
        }
        if (app.got_subcommand(emit)) {
            emit_params.resolve();
            return cmd_emit(emit_code, emit_params, emit_strategy, emit_basis, emit_rounds,
                            emit_budget, emit_out);
        }
        if (app.got_subcommand(sampc)) {
            sample_params.resolve();
            return cmd_sample(sample_code, sample_params, sample_strategy, sample_basis,
                              sample_rounds, sample_budget, sample_shots, sample_seed,
                              sample_decode, sample_out);
        }
        if (app.got_subcommand(thresh)) {
            thresh_params.resolve();
            return cmd_threshold(thresh_params, thresh_sample, thresh_strategy, thresh_basis,
                                 thresh_d, thresh_sweep, thresh_values, thresh_rounds, thresh_out,
                                 thresh_json);
        }
        if (app.got_subcommand(archs)) {
            archs_params.resolve();
            return cmd_archsweep(archs_params, archs_sample, archs_strategy, archs_basis, archs_d,
                                 archs_dqu, archs_vsh, archs_rounds, archs_out);
        }
        if (app.got_subcommand(comp)) {
            comp_params.resolve();
            return cmd_compare(comp_params, comp_sample, comp_strategies, comp_basis, comp_d,
                               comp_rounds, comp_out);
        }
    } catch (const CyclicDependency& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
