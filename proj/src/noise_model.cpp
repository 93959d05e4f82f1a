#include "sbus/noise_model.h"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace sbus {

void NoiseParams::validate() const {
    if (p_gate < 0 || p_gate > 1) throw std::invalid_argument("p_gate outside [0,1]");
    if (!(t2_qd > 0) || !(t2_bus > 0)) throw std::invalid_argument("T2 values must be positive");
    if (!(l_c > 0)) throw std::invalid_argument("correlation length must be positive");
}

double dephasing_prob(double t, double t2) {
    if (t < 0) throw std::invalid_argument("negative duration");
    if (std::isinf(t2)) return 0.0;
    return (1.0 - std::exp(-t / (2.0 * t2))) / 2.0;
}

double shuttle_t2(double t2_bus, double d_sh, double l_c) {
    if (d_sh < 0) throw std::invalid_argument("negative shuttle distance");
    if (!(l_c > 0)) throw std::invalid_argument("correlation length must be positive");
    return t2_bus * std::sqrt((d_sh + l_c) / l_c);
}

double shuttle_dephasing_prob(double d_sh, const ArchParams& arch, const NoiseParams& noise) {
    if (d_sh == 0 || std::isinf(noise.t2_bus)) return 0.0;
    return dephasing_prob(d_sh / arch.v_sh, shuttle_t2(noise.t2_bus, d_sh, noise.l_c));
}

namespace {

void add_idle(TimelineSegment& seg, int qubit, double idle_s, const NoiseParams& noise) {
    if (idle_s <= 0) return;
    double p = dephasing_prob(idle_s, noise.t2_qd);
    if (p <= 0) return;
    NoiseEvent e;
    e.kind = NoiseKind::PauliZ;
    e.q0 = qubit;
    e.probability = p;
    e.provenance = NoiseProvenance::Idle;
    e.duration_s = idle_s;
    seg.events.push_back(e);
}

void add_shuttle(TimelineSegment& seg, int qubit, double dist_m, const ArchParams& arch,
                 const NoiseParams& noise) {
    double p = shuttle_dephasing_prob(dist_m, arch, noise);
    if (p <= 0) return;
    NoiseEvent e;
    e.kind = NoiseKind::PauliZ;
    e.q0 = qubit;
    e.probability = p;
    e.provenance = NoiseProvenance::Shuttle;
    e.distance_m = dist_m;
    seg.events.push_back(e);
}

void add_depolarize(TimelineSegment& seg, int q0, int q1, const NoiseParams& noise) {
    if (noise.p_gate <= 0) return;
    NoiseEvent e;
    e.kind = q1 < 0 ? NoiseKind::Depolarize1 : NoiseKind::Depolarize2;
    e.q0 = q0;
    e.q1 = q1;
    e.probability = noise.p_gate;
    e.provenance = NoiseProvenance::Gate;
    seg.events.push_back(e);
}

}  // namespace

std::vector<TimelineSegment> build_noise_timeline(const AugmentedLayout& layout,
                                                  const ArchParams& arch,
                                                  const NoiseParams& noise) {
    arch.validate();
    noise.validate();
    auto pos = layout.placement.position_map();
    const int nc = static_cast<int>(layout.chains.size());

    // Qubit number = physical dot of the home position.
    auto dot_of = [&](QubitId q) { return layout.qubit_dot[pos.at(q)]; };
    std::vector<int> all_qubits;
    for (const auto& q : layout.placement.order) all_qubits.push_back(dot_of(q));

    std::vector<int> x_ancillas;
    for (const auto& q : layout.placement.order) {
        if (q.kind == QubitKind::AncillaX) x_ancillas.push_back(dot_of(q));
    }

    auto slice_times = layout_slice_times(layout);
    double shuttle_unit = arch.d_qu / arch.v_sh;
    std::vector<TimelineSegment> timeline;

    auto basis_segment = [&](const char* label) {
        TimelineSegment seg;
        seg.label = label;
        seg.duration_s = arch.t_1q;
        for (int q : x_ancillas) add_depolarize(seg, q, -1, noise);
        std::set<int> busy(x_ancillas.begin(), x_ancillas.end());
        for (int q : all_qubits) {
            if (!busy.count(q)) add_idle(seg, q, seg.duration_s, noise);
        }
        timeline.push_back(std::move(seg));
    };

    basis_segment("prep");

    for (int s = 1; s <= 4; ++s) {
        TimelineSegment shuttle;
        shuttle.label = "shuttle" + std::to_string(s);
        shuttle.duration_s = double(slice_times[s - 1]) * shuttle_unit;
        for (int i = 0; i < nc; ++i) {
            int disp = std::abs(layout.data_path[i][s] - layout.data_path[i][s - 1]);
            int q = dot_of(layout.chains[i].data);
            if (disp > 0) add_shuttle(shuttle, q, double(disp) * arch.d_qu, arch, noise);
            add_idle(shuttle, q, shuttle.duration_s - double(disp) * shuttle_unit, noise);
        }
        for (const auto& q : layout.placement.order) {
            if (q.kind != QubitKind::Data) add_idle(shuttle, dot_of(q), shuttle.duration_s, noise);
        }
        timeline.push_back(std::move(shuttle));

        TimelineSegment gate;
        gate.label = "cnot" + std::to_string(s);
        gate.duration_s = arch.t_2q;
        std::set<int> busy;
        for (int i = 0; i < nc; ++i) {
            if (!layout.chains[i].steps[s - 1]) continue;
            int dq = dot_of(layout.chains[i].data);
            int aq = dot_of(*layout.chains[i].steps[s - 1]);
            add_depolarize(gate, dq, aq, noise);
            busy.insert(dq);
            busy.insert(aq);
        }
        for (int q : all_qubits) {
            if (!busy.count(q)) add_idle(gate, q, gate.duration_s, noise);
        }
        timeline.push_back(std::move(gate));
    }

    basis_segment("unprep");

    TimelineSegment ret;
    ret.label = "return";
    ret.duration_s = double(slice_times[4]) * shuttle_unit;
    for (int i = 0; i < nc; ++i) {
        int disp = std::abs(layout.data_path[i][5] - layout.data_path[i][4]);
        int q = dot_of(layout.chains[i].data);
        if (disp > 0) add_shuttle(ret, q, double(disp) * arch.d_qu, arch, noise);
        add_idle(ret, q, ret.duration_s - double(disp) * shuttle_unit, noise);
    }
    for (const auto& q : layout.placement.order) {
        if (q.kind != QubitKind::Data) add_idle(ret, dot_of(q), ret.duration_s, noise);
    }
    timeline.push_back(std::move(ret));

    TimelineSegment readout;
    readout.label = "readout";
    readout.duration_s = arch.t_meas;
    for (const auto& q : layout.placement.order) {
        // Ancillas are occupied by the measurement; data qubits wait.
        if (q.kind == QubitKind::Data) add_idle(readout, dot_of(q), readout.duration_s, noise);
    }
    timeline.push_back(std::move(readout));

    return timeline;
}

void load_params_file(const std::string& path, ArchParams& arch, NoiseParams& noise) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open parameter file: " + path);
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string key, value;
        if (!(ls >> key >> value)) continue;
        double v;
        if (value == "inf" || value == "INF" || value == "Inf") {
            v = kInfT2;
        } else {
            try {
                v = std::stod(value);
            } catch (const std::exception&) {
                throw std::runtime_error("bad value for " + key + ": " + value);
            }
        }
        if (key == "d_qu") arch.d_qu = v;
        else if (key == "v_sh") arch.v_sh = v;
        else if (key == "t_1q") arch.t_1q = v;
        else if (key == "t_2q") arch.t_2q = v;
        else if (key == "t_meas") arch.t_meas = v;
        else if (key == "p_gate") noise.p_gate = v;
        else if (key == "t2_qd") noise.t2_qd = v;
        else if (key == "t2_bus") noise.t2_bus = v;
        else if (key == "l_c") noise.l_c = v;
        else throw std::runtime_error("unknown parameter key: " + key);
    }
    arch.validate();
    noise.validate();
}

}  // namespace sbus
