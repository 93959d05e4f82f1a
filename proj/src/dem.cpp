#include "sbus/dem.h"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace sbus {

namespace {

// Detector/observable signature as a bitset; observables occupy the
// bits after the detectors.
struct Signature {
    std::vector<uint64_t> w;

    explicit Signature(int bits = 0) : w((bits + 63) / 64, 0) {}
    void flip(int i) { w[i >> 6] ^= uint64_t(1) << (i & 63); }
    void operator^=(const Signature& o) {
        for (size_t i = 0; i < w.size(); ++i) w[i] ^= o.w[i];
    }
    bool any() const {
        for (uint64_t x : w) {
            if (x) return true;
        }
        return false;
    }
    bool operator<(const Signature& o) const { return w < o.w; }
};

}  // namespace

DetectorErrorModel derive_detector_model(const Circuit& circuit, bool decompose) {
    // Forward pass: absolute measurement index of every record lookback,
    // then which detectors/observables each measurement feeds.
    int n_meas = 0, n_det = 0, n_obs = 0;
    struct Annotation {
        bool observable;
        int id;
        std::vector<int> meas;  // absolute measurement indices
    };
    std::vector<Annotation> annotations;
    for (const auto& ins : circuit.instructions) {
        if (ins.op == Op::Measure) {
            n_meas += static_cast<int>(ins.targets.size());
        } else if (ins.op == Op::Detector || ins.op == Op::Observable) {
            Annotation a;
            a.observable = ins.op == Op::Observable;
            a.id = a.observable ? int(ins.arg) : n_det;
            for (int k : ins.targets) {
                int abs = n_meas - k;
                if (abs < 0) throw std::invalid_argument("record lookback before first measurement");
                a.meas.push_back(abs);
            }
            if (a.observable) {
                n_obs = std::max(n_obs, a.id + 1);
            } else {
                ++n_det;
            }
            annotations.push_back(std::move(a));
        }
    }
    const int bits = n_det + n_obs;
    // meas_sig[m]: detector/observable bits fed by measurement m.
    std::vector<Signature> meas_sig(n_meas, Signature(bits));
    for (const auto& a : annotations) {
        for (int m : a.meas) meas_sig[m].flip(a.observable ? n_det + a.id : a.id);
    }

    // Backward sweep. sig_x[q] is the signature an X error at the
    // current location would produce; likewise sig_z.
    std::vector<Signature> sig_x(circuit.n_qubits, Signature(bits));
    std::vector<Signature> sig_z(circuit.n_qubits, Signature(bits));

    struct Term {
        double probability;
        Signature sig;
        // Copies of the per-qubit X/Z factor signatures at the fault
        // location (the live arrays keep mutating as the sweep runs).
        std::vector<Signature> parts;
    };
    std::vector<Term> terms;

    auto add_term = [&](double p, std::initializer_list<const Signature*> parts) {
        if (p <= 0) return;
        Term t{p, Signature(bits), {}};
        for (const Signature* part : parts) {
            t.sig ^= *part;
            t.parts.push_back(*part);
        }
        if (t.sig.any()) terms.push_back(std::move(t));
    };

    int meas_cursor = n_meas;
    for (auto it = circuit.instructions.rbegin(); it != circuit.instructions.rend(); ++it) {
        const auto& ins = *it;
        switch (ins.op) {
            case Op::Measure:
                for (size_t j = ins.targets.size(); j-- > 0;) {
                    --meas_cursor;
                    sig_x[ins.targets[j]] ^= meas_sig[meas_cursor];
                }
                break;
            case Op::Reset:
                for (int q : ins.targets) {
                    sig_x[q] = Signature(bits);
                    sig_z[q] = Signature(bits);
                }
                break;
            case Op::Hadamard:
                for (int q : ins.targets) std::swap(sig_x[q], sig_z[q]);
                break;
            case Op::Cnot: {
                int c = ins.targets[0], t = ins.targets[1];
                sig_x[c] ^= sig_x[t];  // X on control fans out to target
                sig_z[t] ^= sig_z[c];  // Z on target backs onto control
                break;
            }
            case Op::ZError:
                add_term(ins.arg, {&sig_z[ins.targets[0]]});
                break;
            case Op::XError:
                add_term(ins.arg, {&sig_x[ins.targets[0]]});
                break;
            case Op::Depolarize1: {
                int q = ins.targets[0];
                double p = ins.arg / 3.0;
                add_term(p, {&sig_x[q]});
                add_term(p, {&sig_x[q], &sig_z[q]});
                add_term(p, {&sig_z[q]});
                break;
            }
            case Op::Depolarize2: {
                int a = ins.targets[0], b = ins.targets[1];
                double p = ins.arg / 15.0;
                const Signature* parts[4] = {&sig_x[a], &sig_z[a], &sig_x[b], &sig_z[b]};
                for (int combo = 1; combo < 16; ++combo) {
                    Term t{p, Signature(bits), {}};
                    for (int j = 0; j < 4; ++j) {
                        if (combo >> j & 1) {
                            t.sig ^= *parts[j];
                            t.parts.push_back(*parts[j]);
                        }
                    }
                    if (p > 0 && t.sig.any()) terms.push_back(std::move(t));
                }
                break;
            }
            case Op::Tick:
            case Op::Detector:
            case Op::Observable:
                break;
        }
    }

    auto detector_weight = [&](const Signature& s) {
        int w = 0;
        for (int i = 0; i < n_det; ++i) {
            if (s.w[i >> 6] >> (i & 63) & 1) ++w;
        }
        return w;
    };

    // Merge identical signatures; optionally split hyperedges first.
    std::map<std::vector<uint64_t>, double> merged;
    auto accumulate = [&](const Signature& sig, double p) {
        double& slot = merged[sig.w];
        slot = slot + p - 2 * slot * p;
    };
    for (const auto& t : terms) {
        if (!decompose || detector_weight(t.sig) <= 2) {
            accumulate(t.sig, t.probability);
            continue;
        }
        for (const Signature& part : t.parts) {
            if (!part.any()) continue;
            if (detector_weight(part) > 2) {
                throw NonGraphlikeModel("single-Pauli factor flips more than two detectors");
            }
            accumulate(part, t.probability);
        }
    }

    DetectorErrorModel dem;
    dem.n_detectors = n_det;
    dem.n_observables = n_obs;
    for (const auto& [bits_vec, p] : merged) {
        Fault f;
        f.probability = p;
        for (int i = 0; i < n_det + n_obs; ++i) {
            if (bits_vec[i >> 6] >> (i & 63) & 1) {
                if (i < n_det) {
                    f.detectors.push_back(i);
                } else {
                    f.observables.push_back(i - n_det);
                }
            }
        }
        dem.faults.push_back(std::move(f));
    }
    return dem;
}

}  // namespace sbus
