#include "sbus/synthesis.h"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <cmath>
#include <cstring>
#include <fstream>
#include <functional>
#include <limits>
#include <set>
#include <sstream>
#include <unordered_map>

namespace sbus {

int Placement::position_of(QubitId q) const {
    for (size_t p = 0; p < order.size(); ++p) {
        if (order[p] == q) return static_cast<int>(p);
    }
    throw std::invalid_argument("qubit not in placement: " + to_string(q));
}

std::map<QubitId, int> Placement::position_map() const {
    std::map<QubitId, int> m;
    for (size_t p = 0; p < order.size(); ++p) m[order[p]] = static_cast<int>(p);
    return m;
}

Placement naive_topological(const ChainDag& dag) {
    return Placement{kahn_toposort(dag)};
}

namespace detail {

Placement zigzag_impl(const CodeSpec& code, const ChainDag& dag, bool column_major) {
    if (code.distance <= 0 || code.data_qubits.size() != size_t(code.distance) * code.distance) {
        throw std::invalid_argument("zigzag placement requires a rotated surface code");
    }
    const int d = code.distance;
    const auto& g = dag.graph;
    const int n = static_cast<int>(g.nodes.size());

    std::vector<int> unplaced_preds(n);
    for (int v = 0; v < n; ++v) unplaced_preds[v] = static_cast<int>(g.in[v].size());
    std::vector<char> placed(n, 0);

    Placement placement;
    placement.order.reserve(n);
    auto place = [&](int v) {
        placement.order.push_back(g.nodes[v]);
        placed[v] = 1;
        for (int w : g.out[v]) --unplaced_preds[w];
    };

    // Ancillas ready for placement: Z checks ahead of X checks, then by
    // index. Releasing Z ancillas first keeps the snake order tight.
    auto ancilla_less = [&](QubitId a, QubitId b) {
        if (a.kind != b.kind) return a.kind == QubitKind::AncillaZ;
        return a.index < b.index;
    };
    auto flush_ready_ancillas = [&] {
        bool progress = true;
        while (progress) {
            progress = false;
            int best = -1;
            for (int v = 0; v < n; ++v) {
                if (placed[v] || unplaced_preds[v] != 0) continue;
                if (g.nodes[v].kind == QubitKind::Data) continue;
                if (best < 0 || ancilla_less(g.nodes[v], g.nodes[best])) best = v;
            }
            if (best >= 0) {
                place(best);
                progress = true;
            }
        }
    };

    // Anti-diagonal snake over the data grid, starting at the top-left
    // qubit and alternating direction on each diagonal.
    for (int diag = 0; diag <= 2 * (d - 1); ++diag) {
        std::vector<std::pair<int, int>> cells;
        for (int r = std::max(0, diag - (d - 1)); r <= std::min(diag, d - 1); ++r) {
            cells.push_back({r, diag - r});
        }
        if (diag % 2 == 0) std::reverse(cells.begin(), cells.end());  // bottom-up
        if (column_major) {
            for (auto& [r, c] : cells) std::swap(r, c);
            std::reverse(cells.begin(), cells.end());
        }
        for (auto [r, c] : cells) {
            place(g.index_of(QubitId{QubitKind::Data, r * d + c}));
            flush_ready_ancillas();
        }
    }
    if (static_cast<int>(placement.order.size()) != n) {
        auto cycle = check_acyclic(g);
        throw CyclicDependency(cycle ? *cycle : std::vector<QubitId>{});
    }
    return placement;
}

}  // namespace detail

Placement zigzag(const CodeSpec& code, const ChainDag& dag) {
    return detail::zigzag_impl(code, dag, false);
}

std::vector<ChainViolation> verify_placement(const Placement& placement,
                                             const std::vector<Chain>& chains) {
    std::vector<ChainViolation> violations;
    auto pos = placement.position_map();
    for (const auto& chain : chains) {
        QubitId prev = chain.data;
        for (const auto& step : chain.steps) {
            if (!step) continue;
            auto it_prev = pos.find(prev), it_cur = pos.find(*step);
            if (it_prev == pos.end() || it_cur == pos.end() ||
                it_prev->second >= it_cur->second) {
                violations.push_back({chain.data, prev, *step});
            }
            prev = *step;
        }
    }
    return violations;
}

namespace {

// A chain transition that contributes to slice time t_{slice+1}:
// displacement pos[to] - pos[from], measured from the previous occupied
// location (idle slices contribute nothing).
struct Transition {
    int from = -1;
    int to = -1;
    int slice = 0;  // 0..3
};

struct ChainSpan {
    int data = -1;
    int last = -1;
    int steps = 0;  // number of non-idle steps; span >= steps
};

void collect_transitions(const ChainDag& dag, std::vector<Transition>& transitions,
                         std::vector<ChainSpan>& spans) {
    for (size_t i = 0; i < dag.chain_nodes.size(); ++i) {
        const auto& nodes = dag.chain_nodes[i];
        if (nodes.size() < 2) continue;
        int prev = nodes[0];
        for (int s = 0; s < 4; ++s) {
            int cur = dag.slice_node[i][s];
            if (cur < 0) continue;
            transitions.push_back({prev, cur, s});
            prev = cur;
        }
        spans.push_back({nodes[0], nodes.back(), static_cast<int>(nodes.size()) - 1});
    }
}

}  // namespace

SynthesisResult evaluate_placement(const Placement& placement, const ChainDag& dag,
                                   const ObjectiveWeights& weights, Optimality optimality) {
    std::vector<Transition> transitions;
    std::vector<ChainSpan> spans;
    collect_transitions(dag, transitions, spans);

    std::vector<int> pos(dag.graph.nodes.size(), -1);
    auto pmap = placement.position_map();
    for (size_t v = 0; v < dag.graph.nodes.size(); ++v) {
        auto it = pmap.find(dag.graph.nodes[v]);
        if (it == pmap.end()) throw std::invalid_argument("placement misses a DAG qubit");
        pos[v] = it->second;
    }

    SynthesisResult result;
    result.placement = placement;
    result.optimality = optimality;
    for (const auto& t : transitions) {
        result.slice_times[t.slice] =
            std::max(result.slice_times[t.slice], long(pos[t.to] - pos[t.from]));
    }
    for (const auto& s : spans) {
        long span = pos[s.last] - pos[s.data];
        result.slice_times[4] = std::max(result.slice_times[4], span);
        result.total_distance += 2 * span;
    }
    long time_sum = 0;
    for (long t : result.slice_times) time_sum += t;
    result.objective = weights.time * double(time_sum) + weights.dist * double(result.total_distance);
    return result;
}

// ---------------------------------------------------------------------------
// Exact solve by budget refutation.
//
// The search certifies the time objective V = sum of slice times: every
// slice-budget vector (b1..b5) summing to V-1 is refuted, either by
// window propagation over the difference constraints (precedence gaps
// versus budget caps, plus a Hall check on the position windows) or by
// an exhaustive ordering search under the caps. A feasible ordering
// found along the way becomes the new incumbent and lowers V.
// ---------------------------------------------------------------------------

namespace {

constexpr int kMaskWords = 8;  // up to 512 qubits

struct NodeMask {
    std::array<uint64_t, kMaskWords> w{};

    void set(int i) { w[i >> 6] |= uint64_t(1) << (i & 63); }
    bool test(int i) const { return (w[i >> 6] >> (i & 63)) & 1; }
};

int intersection_size(const NodeMask& a, const NodeMask& b) {
    int n = 0;
    for (int i = 0; i < kMaskWords; ++i) n += __builtin_popcountll(a.w[i] & b.w[i]);
    return n;
}

class ExactSolver {
  public:
    explicit ExactSolver(const ChainDag& dag) : dag_(dag) {
        n_ = static_cast<int>(dag.graph.nodes.size());
        if (n_ > kMaskWords * 64) {
            throw std::invalid_argument("exact solver supports at most 512 qubits");
        }
        compute_closure();
        std::vector<Transition> transitions;
        std::vector<ChainSpan> spans;
        collect_transitions(dag, transitions, spans);
        for (const auto& t : transitions) arcs_.push_back({t.from, t.to, t.slice});
        for (const auto& s : spans) {
            arcs_.push_back({s.data, s.last, 4});
            spans_.push_back({s.data, s.last});
        }
        arcs_from_.assign(n_, {});
        arcs_to_.assign(n_, {});
        for (size_t a = 0; a < arcs_.size(); ++a) {
            arcs_from_[arcs_[a].from].push_back(static_cast<int>(a));
            arcs_to_[arcs_[a].to].push_back(static_cast<int>(a));
        }
        mins_.fill(0);
        for (const auto& a : arcs_) {
            mins_[a.slice] = std::max(mins_[a.slice], int(gap(a.from, a.to)));
        }
        minsum_ = 0;
        for (int m : mins_) minsum_ += m;
        // Largest useful cap per slice, from precedence-only windows: a
        // bigger budget cannot be saturated by any ordering.
        std::array<int, 5> uncapped;
        uncapped.fill(n_);
        std::vector<int> lo, hi;
        propagate_windows(uncapped, lo, hi);
        maxs_.fill(0);
        for (const auto& a : arcs_) {
            maxs_[a.slice] = std::max(maxs_[a.slice], hi[a.to] - lo[a.from]);
        }
    }

    SynthesisResult run(const ObjectiveWeights& weights, double budget_seconds,
                        const Placement& seed) {
        if (!weights.lexicographic && weights.dist != 0.0) {
            throw std::invalid_argument(
                "exact solver certifies the time objective; distance-weighted "
                "scalar objectives are unsupported");
        }
        check_seed(seed);
        deadline_ = std::chrono::steady_clock::time_point::max();
        if (budget_seconds > 0) {
            deadline_ = std::chrono::steady_clock::now() +
                        std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                            std::chrono::duration<double>(budget_seconds));
        }

        Placement incumbent = seed;
        while (true) {
            auto eval = evaluate_placement(incumbent, dag_, weights, Optimality::Heuristic);
            long v = 0;
            for (long t : eval.slice_times) v += t;
            long target = v - 1;
            if (target < minsum_) {
                return certify_distance(weights, incumbent, v);
            }
            std::array<long, 5> profile;
            for (int s = 0; s < 5; ++s) profile[s] = eval.slice_times[s];
            std::vector<QubitId> witness;
            Verdict verdict = vector_count(target) <= kFullEnumCap
                                  ? refute_all(target, &witness)
                                  : hunt_witness(target, profile, &witness);
            if (verdict == Verdict::Refuted) {
                return certify_distance(weights, incumbent, v);
            }
            if (verdict != Verdict::Witness) {
                return evaluate_placement(incumbent, dag_, weights, Optimality::Heuristic);
            }
            incumbent = Placement{witness};
        }
    }

  private:
    struct Arc {
        int from = -1;
        int to = -1;
        int slice = 0;  // 0..3 slice transition, 4 return span
    };

    enum class Verdict { Refuted, Witness, Unknown };

    int16_t gap(int u, int v) const { return gap_[size_t(u) * n_ + v]; }
    bool reaches(int u, int v) const { return desc_[u].test(v); }

    void compute_closure() {
        desc_.assign(n_, NodeMask{});
        anc_.assign(n_, NodeMask{});
        std::vector<int> indeg(n_), topo;
        for (int v = 0; v < n_; ++v) {
            indeg[v] = static_cast<int>(dag_.graph.in[v].size());
            if (indeg[v] == 0) topo.push_back(v);
        }
        for (size_t head = 0; head < topo.size(); ++head) {
            int u = topo[head];
            for (int v : dag_.graph.out[u]) {
                for (int w = 0; w < kMaskWords; ++w) anc_[v].w[w] |= anc_[u].w[w];
                anc_[v].set(u);
                if (--indeg[v] == 0) topo.push_back(v);
            }
        }
        for (size_t i = topo.size(); i-- > 0;) {
            int u = topo[i];
            for (int v : dag_.graph.out[u]) {
                for (int w = 0; w < kMaskWords; ++w) desc_[u].w[w] |= desc_[v].w[w];
                desc_[u].set(v);
            }
        }
        anc_count_.resize(n_);
        des_count_.resize(n_);
        for (int v = 0; v < n_; ++v) {
            anc_count_[v] = intersection_size(anc_[v], full_mask());
            des_count_[v] = intersection_size(desc_[v], full_mask());
        }
        // gap(u,v): minimum position difference for u before v, one plus
        // the number of nodes forced strictly between them.
        gap_.assign(size_t(n_) * n_, 0);
        pairs_.clear();
        for (int u = 0; u < n_; ++u) {
            for (int v = 0; v < n_; ++v) {
                if (!desc_[u].test(v)) continue;
                int16_t g = static_cast<int16_t>(1 + intersection_size(desc_[u], anc_[v]));
                gap_[size_t(u) * n_ + v] = g;
                pairs_.push_back({u, v});
            }
        }
    }

    static NodeMask full_mask() {
        NodeMask m;
        for (auto& w : m.w) w = ~uint64_t(0);
        return m;
    }

    void check_seed(const Placement& seed) const {
        if (static_cast<int>(seed.order.size()) != n_) {
            throw std::invalid_argument("seed placement size mismatch");
        }
        auto pos = seed.position_map();
        for (int u = 0; u < n_; ++u) {
            for (int v : dag_.graph.out[u]) {
                if (pos.at(dag_.graph.nodes[u]) >= pos.at(dag_.graph.nodes[v])) {
                    throw std::invalid_argument("seed placement violates the DAG");
                }
            }
        }
    }

    bool out_of_time() const { return std::chrono::steady_clock::now() > deadline_; }

    // Number of budget vectors with the given sum.
    long double vector_count(long target) const {
        long double slack = static_cast<long double>(target - minsum_);
        long double c = 1;
        for (int i = 1; i <= 4; ++i) c = c * (slack + i) / i;
        return c;
    }

    Verdict refute_all(long target, std::vector<QubitId>* witness) {
        bool unresolved = false;
        std::array<int, 5> b{};
        std::function<Verdict(int, long)> rec = [&](int s, long left) -> Verdict {
            if (out_of_time()) {
                unresolved = true;
                return Verdict::Unknown;
            }
            if (s == 4) {
                if (left < mins_[4]) return Verdict::Refuted;
                b[4] = static_cast<int>(left);
                Verdict v = check_vector(b, witness);
                if (v == Verdict::Unknown) unresolved = true;
                return v == Verdict::Witness ? v : Verdict::Refuted;
            }
            long rest = 0;
            for (int t = s + 1; t < 5; ++t) rest += mins_[t];
            for (long x = mins_[s]; x <= left - rest; ++x) {
                b[s] = static_cast<int>(x);
                Verdict v = rec(s + 1, left - x);
                if (v == Verdict::Witness || unresolved) return v;
            }
            return Verdict::Refuted;
        };
        Verdict v = rec(0, target);
        if (v == Verdict::Witness) return v;
        return unresolved ? Verdict::Unknown : Verdict::Refuted;
    }

    // With too many vectors to enumerate, look for an improving ordering
    // near the incumbent's slice-time profile.
    Verdict hunt_witness(long target, const std::array<long, 5>& profile,
                         std::vector<QubitId>* witness) {
        std::vector<std::pair<long, std::array<int, 5>>> candidates;
        std::array<int, 5> b{};
        std::function<void(int, long)> rec = [&](int s, long left) {
            if (s == 4) {
                if (left < mins_[4]) return;
                b[4] = static_cast<int>(left);
                long dist = 0;
                for (int t = 0; t < 5; ++t) dist += std::abs(long(b[t]) - profile[t]);
                if (dist <= kHuntRadius) candidates.push_back({dist, b});
                return;
            }
            long rest = 0;
            for (int t = s + 1; t < 5; ++t) rest += mins_[t];
            long lo = std::max(long(mins_[s]), profile[s] - kHuntRadius);
            long hi = std::min(left - rest, profile[s] + kHuntRadius);
            for (long x = lo; x <= hi; ++x) {
                b[s] = static_cast<int>(x);
                rec(s + 1, left - x);
            }
        };
        rec(0, target);
        std::sort(candidates.begin(), candidates.end());
        for (const auto& [dist, vec] : candidates) {
            if (out_of_time()) return Verdict::Unknown;
            if (check_vector(vec, witness) == Verdict::Witness) return Verdict::Witness;
        }
        return Verdict::Unknown;  // nothing nearby; cannot conclude
    }

    // Distance phase of the lexicographic objective: with the minimal
    // time sum vstar certified, minimize the chain-span distance over
    // every ordering whose slice times sum to vstar. Profiles are
    // enumerated within [mins, maxs] and each is searched exhaustively
    // with branch-and-bound on a distance lower bound. Deadline
    // exhaustion downgrades the result to Heuristic.
    SynthesisResult certify_distance(const ObjectiveWeights& weights, const Placement& incumbent,
                                     long vstar) {
        auto best = evaluate_placement(incumbent, dag_, weights, Optimality::Certified);
        if (!weights.lexicographic) return best;  // pure time objective
        long best_dist = best.total_distance;
        std::vector<int> best_seq;
        bool timed_out = false;
        std::array<int, 5> b{};
        std::function<void(int, long)> rec = [&](int s, long left) {
            if (timed_out || out_of_time()) {
                timed_out = true;
                return;
            }
            if (s == 4) {
                if (left < mins_[4] || left > maxs_[4]) return;
                b[4] = static_cast<int>(left);
                if (!min_dist_vector(b, best_dist, best_seq)) timed_out = true;
                return;
            }
            long rest = 0;
            for (int t = s + 1; t < 5; ++t) rest += mins_[t];
            long cap = std::min<long>(maxs_[s], left - rest);
            for (long x = mins_[s]; x <= cap && !timed_out; ++x) {
                b[s] = static_cast<int>(x);
                rec(s + 1, left - x);
            }
        };
        rec(0, vstar);
        Placement out = incumbent;
        if (!best_seq.empty()) {
            out.order.clear();
            for (int v : best_seq) out.order.push_back(dag_.graph.nodes[v]);
        }
        return evaluate_placement(out, dag_, weights,
                                  timed_out ? Optimality::Heuristic : Optimality::Certified);
    }

    // Exhaustive minimum-distance ordering search under one profile's
    // caps. Updates best_dist/best_seq in place; false on deadline.
    bool min_dist_vector(const std::array<int, 5>& b, long& best_dist,
                         std::vector<int>& best_seq) {
        std::vector<int> lo, hi;
        if (!propagate_windows(b, lo, hi)) return true;

        std::vector<int> pos(n_, -1), deadline(n_), indeg(n_);
        for (int v = 0; v < n_; ++v) {
            indeg[v] = static_cast<int>(dag_.graph.in[v].size());
            deadline[v] = hi[v];
        }
        std::vector<int> sequence;
        sequence.reserve(n_);
        uint64_t nodes = 0;
        bool timed_out = false;
        std::vector<int> slack(n_);

        // 2 * sum over spans of a lower bound on pos[last] - pos[data]
        // given the partial placement at depth k.
        auto dist_bound = [&](int k) {
            long bound = 0;
            for (const auto& [d, l] : spans_) {
                if (pos[l] >= 0) {
                    bound += pos[l] - pos[d];
                } else if (pos[d] >= 0) {
                    bound += std::max({lo[l], k, pos[d] + int(gap(d, l))}) - pos[d];
                } else {
                    bound += std::max(int(gap(d, l)), lo[l] - hi[d]);
                }
            }
            return 2 * bound;
        };

        std::function<void(int)> dfs = [&](int k) {
            if (timed_out) return;
            if (++nodes % 16384 == 0 && out_of_time()) {
                timed_out = true;
                return;
            }
            if (k == n_) {
                long dist = dist_bound(k);  // exact: everything placed
                if (dist < best_dist) {
                    best_dist = dist;
                    best_seq = sequence;
                }
                return;
            }
            for (int v = 0; v < n_; ++v) {
                if (pos[v] >= 0 || indeg[v] != 0) continue;
                if (lo[v] > k || deadline[v] < k) continue;
                bool capped = false;
                for (int a : arcs_to_[v]) {
                    int f = arcs_[a].from;
                    if (pos[f] >= 0 && k - pos[f] > b[arcs_[a].slice]) {
                        capped = true;
                        break;
                    }
                }
                if (capped) continue;
                pos[v] = k;
                sequence.push_back(v);
                for (int w : dag_.graph.out[v]) --indeg[w];
                std::vector<std::pair<int, int>> saved;
                for (int a : arcs_from_[v]) {
                    int to = arcs_[a].to;
                    int d = k + b[arcs_[a].slice];
                    if (d < deadline[to]) {
                        saved.push_back({to, deadline[to]});
                        deadline[to] = d;
                    }
                }
                slack.clear();
                for (int u = 0; u < n_; ++u) {
                    if (pos[u] < 0) slack.push_back(deadline[u]);
                }
                std::sort(slack.begin(), slack.end());
                bool viable = true;
                for (size_t j = 0; j < slack.size(); ++j) {
                    if (slack[j] < k + 1 + static_cast<int>(j)) {
                        viable = false;
                        break;
                    }
                }
                if (viable && dist_bound(k + 1) < best_dist) dfs(k + 1);
                for (auto& [to, old] : saved) deadline[to] = old;
                for (int w : dag_.graph.out[v]) ++indeg[w];
                sequence.pop_back();
                pos[v] = -1;
                if (timed_out) return;
            }
        };
        dfs(0);
        return !timed_out;
    }

    // Position windows from bounds-consistency sweeps plus a Hall
    // check; false means the caps are inconsistent.
    bool propagate_windows(const std::array<int, 5>& b, std::vector<int>& lo,
                           std::vector<int>& hi) {
        lo.resize(n_);
        hi.resize(n_);
        for (int v = 0; v < n_; ++v) {
            lo[v] = anc_count_[v];
            hi[v] = n_ - 1 - des_count_[v];
        }
        for (int sweep = 0; sweep < 64; ++sweep) {
            bool changed = false;
            for (const auto& a : arcs_) {
                int cap = b[a.slice];
                if (lo[a.from] < lo[a.to] - cap) {
                    lo[a.from] = lo[a.to] - cap;
                    changed = true;
                }
                if (hi[a.to] > hi[a.from] + cap) {
                    hi[a.to] = hi[a.from] + cap;
                    changed = true;
                }
            }
            for (const auto& [u, v] : pairs_) {
                int g = gap(u, v);
                if (lo[v] < lo[u] + g) {
                    lo[v] = lo[u] + g;
                    changed = true;
                }
                if (hi[u] > hi[v] - g) {
                    hi[u] = hi[v] - g;
                    changed = true;
                }
            }
            for (int v = 0; v < n_; ++v) {
                if (lo[v] > hi[v]) return false;
            }
            if (!changed) break;
        }
        // Hall check: greedily give each node the leftmost free slot.
        std::vector<int> order(n_);
        for (int v = 0; v < n_; ++v) order[v] = v;
        std::sort(order.begin(), order.end(), [&](int a, int c) { return hi[a] < hi[c]; });
        std::vector<char> used(n_, 0);
        for (int v : order) {
            int slot = lo[v];
            while (slot < n_ && used[slot]) ++slot;
            if (slot >= n_ || slot > hi[v]) return false;
            used[slot] = 1;
        }
        return true;
    }

    // One budget vector: Refuted (infeasible), Witness (ordering found,
    // stored in *witness), or Unknown (deadline hit mid-search).
    Verdict check_vector(const std::array<int, 5>& b, std::vector<QubitId>* witness) {
        std::vector<int> lo, hi;
        if (!propagate_windows(b, lo, hi)) return Verdict::Refuted;
        return search_vector(b, lo, hi, witness);
    }

    // Exhaustive ordering search under the caps; complete, so exhausting
    // it refutes the budget vector.
    Verdict search_vector(const std::array<int, 5>& b, const std::vector<int>& lo,
                          const std::vector<int>& hi, std::vector<QubitId>* witness) {
        std::vector<int> pos(n_, -1), deadline(n_);
        std::vector<int> indeg(n_);
        for (int v = 0; v < n_; ++v) {
            indeg[v] = static_cast<int>(dag_.graph.in[v].size());
            deadline[v] = hi[v];
        }
        std::vector<int> sequence;
        sequence.reserve(n_);
        uint64_t nodes = 0;
        bool timed_out = false;
        std::vector<int> slack(n_);

        std::function<bool(int)> dfs = [&](int k) -> bool {
            if (timed_out) return false;
            if (++nodes % 16384 == 0 && out_of_time()) {
                timed_out = true;
                return false;
            }
            if (k == n_) return true;
            for (int v = 0; v < n_; ++v) {
                if (pos[v] >= 0 || indeg[v] != 0) continue;
                if (lo[v] > k || deadline[v] < k) continue;
                bool capped = false;
                for (int a : arcs_to_[v]) {
                    int f = arcs_[a].from;
                    if (pos[f] >= 0 && k - pos[f] > b[arcs_[a].slice]) {
                        capped = true;
                        break;
                    }
                }
                if (capped) continue;
                pos[v] = k;
                sequence.push_back(v);
                for (int w : dag_.graph.out[v]) --indeg[w];
                std::vector<std::pair<int, int>> saved;
                for (int a : arcs_from_[v]) {
                    int to = arcs_[a].to;
                    int d = k + b[arcs_[a].slice];
                    if (d < deadline[to]) {
                        saved.push_back({to, deadline[to]});
                        deadline[to] = d;
                    }
                }
                // Unplaced deadlines must fit the remaining slots.
                slack.clear();
                for (int u = 0; u < n_; ++u) {
                    if (pos[u] < 0) slack.push_back(deadline[u]);
                }
                std::sort(slack.begin(), slack.end());
                bool viable = true;
                for (size_t j = 0; j < slack.size(); ++j) {
                    if (slack[j] < k + 1 + static_cast<int>(j)) {
                        viable = false;
                        break;
                    }
                }
                if (viable && dfs(k + 1)) return true;
                for (auto& [to, old] : saved) deadline[to] = old;
                for (int w : dag_.graph.out[v]) ++indeg[w];
                sequence.pop_back();
                pos[v] = -1;
                if (timed_out) return false;
            }
            return false;
        };
        if (dfs(0)) {
            witness->clear();
            for (int v : sequence) witness->push_back(dag_.graph.nodes[v]);
            return Verdict::Witness;
        }
        return timed_out ? Verdict::Unknown : Verdict::Refuted;
    }

    static constexpr long double kFullEnumCap = 500'000;
    static constexpr long kHuntRadius = 9;

    const ChainDag& dag_;
    int n_ = 0;
    std::vector<NodeMask> desc_, anc_;
    std::vector<int> anc_count_, des_count_;
    std::vector<int16_t> gap_;
    std::vector<std::pair<int, int>> pairs_;
    std::vector<Arc> arcs_;
    std::vector<std::vector<int>> arcs_from_, arcs_to_;
    std::array<int, 5> mins_{}, maxs_{};
    long minsum_ = 0;
    std::vector<std::pair<int, int>> spans_;
    std::chrono::steady_clock::time_point deadline_;
};

}  // namespace

SynthesisResult optimal(const ChainDag& dag, const ObjectiveWeights& weights,
                        double budget_seconds, const Placement* seed) {
    ExactSolver solver(dag);
    if (seed) return solver.run(weights, budget_seconds, *seed);
    // Any linear extension works as the starting incumbent.
    Placement naive = naive_topological(dag);
    return solver.run(weights, budget_seconds, naive);
}

// ---------------------------------------------------------------------------
// Greedy idle-dot insertion.
// ---------------------------------------------------------------------------

AugmentedLayout insert_idle_dots(const Placement& placement, const std::vector<Chain>& chains) {
    if (!verify_placement(placement, chains).empty()) {
        throw std::invalid_argument("placement violates chain orderings");
    }
    auto pos = placement.position_map();
    const int n = placement.size();

    std::set<double> ancilla_coords;
    for (const auto& q : placement.order) {
        if (q.kind != QubitKind::Data) ancilla_coords.insert(double(pos.at(q)));
    }
    // Ancilla dots hosting a gate, per slice.
    std::array<std::set<double>, 4> busy_ancilla;
    for (const auto& chain : chains) {
        for (int s = 0; s < 4; ++s) {
            if (chain.steps[s]) busy_ancilla[s].insert(double(pos.at(*chain.steps[s])));
        }
    }

    const int nc = static_cast<int>(chains.size());
    // loc[i][s]: coordinate of chain i's data spin during slice s (0 = at home).
    std::vector<std::array<double, 6>> loc(nc);
    std::vector<double> home(nc);
    std::map<double, int> owner_of_coord;
    for (int i = 0; i < nc; ++i) {
        home[i] = double(pos.at(chains[i].data));
        loc[i][0] = home[i];
        owner_of_coord[home[i]] = i;
    }

    std::vector<double> extra;  // coordinates of inserted dots

    auto next_interaction_coord = [&](int i, int after_slice) -> double {
        for (int s = after_slice + 1; s <= 4; ++s) {
            if (chains[i].steps[s - 1]) return double(pos.at(*chains[i].steps[s - 1]));
        }
        return std::numeric_limits<double>::infinity();
    };

    for (int s = 1; s <= 4; ++s) {
        std::set<double> claimed;
        for (int i = 0; i < nc; ++i) {
            if (chains[i].steps[s - 1]) {
                loc[i][s] = double(pos.at(*chains[i].steps[s - 1]));
            }
        }
        auto is_free = [&](double c, int self) {
            if (claimed.count(c)) return false;
            // An ancilla site can host one waiting spin unless a gate
            // runs there this slice.
            if (ancilla_coords.count(c)) return !busy_ancilla[s - 1].count(c);
            auto owner_it = owner_of_coord.find(c);
            if (owner_it != owner_of_coord.end() && owner_it->second != self) {
                int j = owner_it->second;
                // Home dot is free when its owner is interacting elsewhere
                // this slice or has already shuttled past it.
                if (chains[j].steps[s - 1]) return true;
                return loc[j][s - 1] > c;
            }
            return true;
        };

        std::vector<int> idle;
        for (int i = 0; i < nc; ++i) {
            if (!chains[i].steps[s - 1]) idle.push_back(i);
        }
        std::sort(idle.begin(), idle.end(),
                  [&](int a, int b) { return loc[a][s - 1] < loc[b][s - 1]; });

        for (int i : idle) {
            double prev = loc[i][s - 1];
            double ub = next_interaction_coord(i, s);
            double chosen = std::numeric_limits<double>::quiet_NaN();
            if (is_free(prev, i)) {
                chosen = prev;
            } else {
                // Nearest reachable resting dot to the right.
                std::set<double> candidates;
                for (auto& [c, owner] : owner_of_coord) candidates.insert(c);
                for (double c : ancilla_coords) candidates.insert(c);
                for (double c : extra) candidates.insert(c);
                for (double c : candidates) {
                    // Strictly below ub: waiting at the partner of the
                    // next interaction would trigger the gate early.
                    if (c <= prev || c >= ub) continue;
                    if (is_free(c, i)) {
                        chosen = c;
                        break;
                    }
                }
                if (std::isnan(chosen)) {
                    // Insert a fresh dot in the gap just right of the
                    // current location.
                    double limit = std::min(ub, prev + 1.0);
                    double delta = (limit - prev) / 2.0;
                    double coord = prev + delta;
                    while (std::count(extra.begin(), extra.end(), coord) ||
                           owner_of_coord.count(coord)) {
                        delta /= 2.0;
                        coord = prev + delta;
                    }
                    extra.push_back(coord);
                    chosen = coord;
                }
            }
            loc[i][s] = chosen;
            claimed.insert(chosen);
        }
    }
    for (int i = 0; i < nc; ++i) loc[i][5] = home[i];

    // Discretize: integer home dots plus fractional extras -> physical
    // dot indices along the final bus.
    std::vector<double> all_coords;
    for (int p = 0; p < n; ++p) all_coords.push_back(double(p));
    for (double c : extra) all_coords.push_back(c);
    std::sort(all_coords.begin(), all_coords.end());
    auto phys = [&](double c) {
        auto it = std::lower_bound(all_coords.begin(), all_coords.end(), c);
        return static_cast<int>(it - all_coords.begin());
    };

    AugmentedLayout layout;
    layout.placement = placement;
    layout.chains = chains;
    layout.bus_length = static_cast<int>(all_coords.size());
    layout.qubit_dot.resize(n);
    for (int p = 0; p < n; ++p) layout.qubit_dot[p] = phys(double(p));
    for (double c : extra) layout.extra_dots.push_back(phys(c));
    std::sort(layout.extra_dots.begin(), layout.extra_dots.end());
    layout.data_path.resize(nc);
    for (int i = 0; i < nc; ++i) {
        for (int k = 0; k < 6; ++k) layout.data_path[i][k] = phys(loc[i][k]);
    }
    return layout;
}

void save_placement(const Placement& placement, std::ostream& out) {
    for (size_t p = 0; p < placement.order.size(); ++p) {
        out << to_string(placement.order[p]) << " " << p << "\n";
    }
}

Placement parse_placement(std::istream& in) {
    std::vector<std::pair<int, QubitId>> entries;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string name;
        int p;
        if (!(ls >> name >> p)) continue;
        entries.push_back({p, qubit_from_string(name)});
    }
    std::sort(entries.begin(), entries.end());
    Placement placement;
    for (size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].first != static_cast<int>(i)) {
            throw std::invalid_argument("placement positions are not a permutation of 0..n-1");
        }
        placement.order.push_back(entries[i].second);
    }
    return placement;
}

Placement load_placement_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open placement file: " + path);
    return parse_placement(in);
}

}  // namespace sbus
