#include "sbus/sampler.h"

#include <algorithm>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace sbus {

namespace {

struct SplitMix {
    uint64_t state;

    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
};

// 64 independent Bernoulli(p) draws, one per bit lane, by lazy binary
// comparison of a uniform fraction against p. Expected words consumed
// is about two regardless of p.
uint64_t bernoulli_mask(SplitMix& rng, uint64_t p_fixed) {
    if (p_fixed == 0) return 0;
    uint64_t undecided = ~uint64_t(0), fire = 0;
    for (int j = 62; j >= 0 && undecided; --j) {
        uint64_t w = rng.next();
        if (p_fixed >> j & 1) {
            fire |= undecided & ~w;
            undecided &= w;
        } else {
            undecided &= ~w;
        }
    }
    return fire;
}

}  // namespace

struct FrameSampler::Step {
    Op op;
    int q0 = -1;
    int q1 = -1;
    uint64_t p_fixed = 0;  // probability in 0.63 fixed point
    int meas_base = -1;    // Measure: index of first result
    std::vector<int> targets;  // Measure / multi-target gates
};

FrameSampler::~FrameSampler() = default;
FrameSampler::FrameSampler(FrameSampler&&) noexcept = default;
FrameSampler& FrameSampler::operator=(FrameSampler&&) noexcept = default;

FrameSampler::FrameSampler(const Circuit& circuit) {
    n_qubits_ = circuit.n_qubits;
    auto fixed = [](double p) {
        if (p < 0 || p > 1) throw std::invalid_argument("probability outside [0,1]");
        if (p >= 1) return ~uint64_t(0);
        return uint64_t(p * 9223372036854775808.0);  // 2^63
    };
    for (const auto& ins : circuit.instructions) {
        switch (ins.op) {
            case Op::Tick:
                break;
            case Op::Detector:
            case Op::Observable: {
                bool obs = ins.op == Op::Observable;
                std::vector<int> meas;
                for (int k : ins.targets) {
                    int abs = n_meas_ - k;
                    if (abs < 0) throw std::invalid_argument("record lookback out of range");
                    meas.push_back(abs);
                }
                if (obs) {
                    int id = int(ins.arg);
                    n_obs_ = std::max(n_obs_, id + 1);
                    obs_meas_.resize(std::max<size_t>(obs_meas_.size(), id + 1));
                    auto& dst = obs_meas_[id];
                    dst.insert(dst.end(), meas.begin(), meas.end());
                } else {
                    det_meas_.push_back(std::move(meas));
                    ++n_det_;
                }
                break;
            }
            case Op::Measure: {
                Step s;
                s.op = ins.op;
                s.meas_base = n_meas_;
                s.targets = ins.targets;
                n_meas_ += static_cast<int>(ins.targets.size());
                steps_.push_back(std::move(s));
                break;
            }
            case Op::Reset:
            case Op::Hadamard: {
                Step s;
                s.op = ins.op;
                s.targets = ins.targets;
                steps_.push_back(std::move(s));
                break;
            }
            case Op::Cnot: {
                if (ins.targets.size() % 2) throw std::invalid_argument("odd CX target count");
                for (size_t j = 0; j + 1 < ins.targets.size(); j += 2) {
                    Step s;
                    s.op = ins.op;
                    s.q0 = ins.targets[j];
                    s.q1 = ins.targets[j + 1];
                    steps_.push_back(std::move(s));
                }
                break;
            }
            case Op::Depolarize1:
            case Op::ZError:
            case Op::XError: {
                Step s;
                s.op = ins.op;
                s.q0 = ins.targets[0];
                s.p_fixed = fixed(ins.arg);
                if (s.p_fixed) steps_.push_back(std::move(s));
                break;
            }
            case Op::Depolarize2: {
                Step s;
                s.op = ins.op;
                s.q0 = ins.targets[0];
                s.q1 = ins.targets[1];
                s.p_fixed = fixed(ins.arg);
                if (s.p_fixed) steps_.push_back(std::move(s));
                break;
            }
        }
    }
}

void FrameSampler::run_block(uint64_t seed, long block, uint64_t* det_words,
                             uint64_t* obs_words) const {
    SplitMix rng{seed ^ (0x6a09e667f3bcc909ull + uint64_t(block) * 0x9e3779b97f4a7c15ull)};
    rng.next();

    std::vector<uint64_t> fx(n_qubits_, 0), fz(n_qubits_, 0), meas(n_meas_, 0);

    for (const auto& s : steps_) {
        switch (s.op) {
            case Op::Reset:
                for (int q : s.targets) {
                    fx[q] = 0;
                    fz[q] = 0;
                }
                break;
            case Op::Hadamard:
                for (int q : s.targets) std::swap(fx[q], fz[q]);
                break;
            case Op::Cnot:
                fx[s.q1] ^= fx[s.q0];
                fz[s.q0] ^= fz[s.q1];
                break;
            case Op::Measure:
                for (size_t j = 0; j < s.targets.size(); ++j) {
                    meas[s.meas_base + j] = fx[s.targets[j]];
                }
                break;
            case Op::ZError:
                fz[s.q0] ^= bernoulli_mask(rng, s.p_fixed);
                break;
            case Op::XError:
                fx[s.q0] ^= bernoulli_mask(rng, s.p_fixed);
                break;
            case Op::Depolarize1: {
                uint64_t f = bernoulli_mask(rng, s.p_fixed);
                if (!f) break;
                // Two selector bits per lane, uniform over {X, Y, Z}.
                uint64_t b1 = rng.next(), b2 = rng.next();
                for (uint64_t bad; (bad = f & b1 & b2);) {
                    uint64_t n1 = rng.next(), n2 = rng.next();
                    b1 = (b1 & ~bad) | (n1 & bad);
                    b2 = (b2 & ~bad) | (n2 & bad);
                }
                fx[s.q0] ^= f & ~b2;        // X or Y
                fz[s.q0] ^= f & (b1 | b2);  // Y or Z
                break;
            }
            case Op::Depolarize2: {
                uint64_t f = bernoulli_mask(rng, s.p_fixed);
                if (!f) break;
                // Four Pauli bits per lane, uniform over the 15
                // non-identity two-qubit Paulis.
                uint64_t a = rng.next(), b = rng.next(), c = rng.next(), d = rng.next();
                for (uint64_t bad; (bad = f & ~(a | b | c | d));) {
                    a |= rng.next() & bad;
                    b |= rng.next() & bad;
                    c |= rng.next() & bad;
                    d |= rng.next() & bad;
                }
                fx[s.q0] ^= f & a;
                fz[s.q0] ^= f & b;
                fx[s.q1] ^= f & c;
                fz[s.q1] ^= f & d;
                break;
            }
            default:
                break;
        }
    }

    for (int i = 0; i < n_det_; ++i) {
        uint64_t w = 0;
        for (int m : det_meas_[i]) w ^= meas[m];
        det_words[i] = w;
    }
    for (int i = 0; i < n_obs_; ++i) {
        uint64_t w = 0;
        for (int m : obs_meas_[i]) w ^= meas[m];
        obs_words[i] = w;
    }
}

void FrameSampler::run(uint64_t seed, long first, long count,
                       const std::function<void(long, const uint8_t*)>& sink) const {
    if (count <= 0) return;
    const size_t det_bytes = (size_t(n_det_) + 7) / 8;
    const size_t obs_bytes = (size_t(n_obs_) + 7) / 8;
    std::vector<uint64_t> det_words(n_det_), obs_words(n_obs_);
    std::vector<uint8_t> record(det_bytes + obs_bytes);

    long last = first + count - 1;
    for (long block = first / 64; block <= last / 64; ++block) {
        run_block(seed, block, det_words.data(), obs_words.data());
        long lane_lo = std::max(first, block * 64) - block * 64;
        long lane_hi = std::min(last, block * 64 + 63) - block * 64;
        for (long lane = lane_lo; lane <= lane_hi; ++lane) {
            std::memset(record.data(), 0, record.size());
            for (int i = 0; i < n_det_; ++i) {
                record[i >> 3] |= uint8_t((det_words[i] >> lane & 1) << (i & 7));
            }
            for (int i = 0; i < n_obs_; ++i) {
                record[det_bytes + (i >> 3)] |= uint8_t((obs_words[i] >> lane & 1) << (i & 7));
            }
            sink(block * 64 + lane, record.data());
        }
    }
}

ShotBatch FrameSampler::sample(uint64_t seed, long n_shots) const {
    if (n_shots < 1) throw std::invalid_argument("need at least one shot");
    ShotBatch batch;
    batch.n_shots = n_shots;
    batch.seed = seed;
    batch.n_detectors = n_det_;
    batch.n_observables = n_obs_;
    batch.data.resize(size_t(n_shots) * batch.record_bytes());
    run(seed, 0, n_shots, [&](long shot, const uint8_t* record) {
        std::memcpy(batch.data.data() + size_t(shot) * batch.record_bytes(), record,
                    batch.record_bytes());
    });
    return batch;
}

ShotBatch sample_shots(const Circuit& circuit, long n_shots, uint64_t seed) {
    return FrameSampler(circuit).sample(seed, n_shots);
}

void write_shot_batch(const ShotBatch& batch, std::ostream& out) {
    out << "shots " << batch.n_shots << " seed " << batch.seed << " detectors "
        << batch.n_detectors << " observables " << batch.n_observables << "\n";
    out.write(reinterpret_cast<const char*>(batch.data.data()),
              static_cast<std::streamsize>(batch.data.size()));
}

ShotBatch read_shot_batch(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw std::runtime_error("missing shot batch header");
    std::istringstream hs(header);
    std::string k1, k2, k3, k4;
    ShotBatch batch;
    if (!(hs >> k1 >> batch.n_shots >> k2 >> batch.seed >> k3 >> batch.n_detectors >> k4 >>
          batch.n_observables) ||
        k1 != "shots" || k2 != "seed" || k3 != "detectors" || k4 != "observables") {
        throw std::runtime_error("malformed shot batch header");
    }
    batch.data.resize(size_t(batch.n_shots) * batch.record_bytes());
    in.read(reinterpret_cast<char*>(batch.data.data()),
            static_cast<std::streamsize>(batch.data.size()));
    if (in.gcount() != static_cast<std::streamsize>(batch.data.size())) {
        throw std::runtime_error("truncated shot batch payload");
    }
    return batch;
}

}  // namespace sbus
