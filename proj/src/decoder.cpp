#include "sbus/decoder.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sbus {

namespace {
constexpr double kMinProb = 1e-15;
}

// Per-decode state, version-stamped so a fresh decode only pays for
// what the previous one touched.
struct UnionFindDecoder::Scratch {
    uint32_t epoch = 0;
    std::vector<uint32_t> node_ver, edge_ver;
    std::vector<int> parent;
    std::vector<uint8_t> parity;      // root: defect count mod 2
    std::vector<uint8_t> boundary;    // root: touches the boundary
    std::vector<int> boundary_edge;   // root: a completed boundary edge
    std::vector<int> head, tail, next_node;  // root: member list
    std::vector<double> grown;
    std::vector<uint8_t> defect;
    std::vector<uint32_t> defect_ver;
    // Root: frontier edge candidates, spliced on union, filtered lazily.
    std::vector<std::vector<int>> frontier;
    std::vector<uint32_t> edge_mark;
    std::vector<int> edge_rate;
    const std::vector<std::vector<int>>* incident = nullptr;
    // Peeling adjacency over completed edges.
    std::vector<std::vector<int>> adj;
    std::vector<uint32_t> adj_ver;
    std::vector<uint32_t> visited_ver;

    void ensure(int n_nodes, int n_edges) {
        if (static_cast<int>(parent.size()) < n_nodes) {
            node_ver.resize(n_nodes, 0);
            parent.resize(n_nodes);
            parity.resize(n_nodes);
            boundary.resize(n_nodes);
            boundary_edge.resize(n_nodes);
            head.resize(n_nodes);
            tail.resize(n_nodes);
            next_node.resize(n_nodes);
            defect.resize(n_nodes);
            defect_ver.resize(n_nodes, 0);
            frontier.resize(n_nodes);
            adj.resize(n_nodes);
            adj_ver.resize(n_nodes, 0);
            visited_ver.resize(n_nodes, 0);
        }
        if (static_cast<int>(grown.size()) < n_edges) {
            edge_ver.resize(n_edges, 0);
            grown.resize(n_edges);
            edge_mark.resize(n_edges, 0);
            edge_rate.resize(n_edges);
        }
        ++epoch;
    }

    void touch(int v) {
        if (node_ver[v] == epoch) return;
        node_ver[v] = epoch;
        parent[v] = v;
        parity[v] = 0;
        boundary[v] = 0;
        boundary_edge[v] = -1;
        head[v] = v;
        tail[v] = v;
        next_node[v] = -1;
        frontier[v] = (*incident)[v];
    }

    int find(int v) {
        touch(v);
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    }

    // Union by member-list splice; returns the surviving root. The root
    // with the bigger frontier survives so frontier appends stay cheap.
    int unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return a;
        if (frontier[a].size() < frontier[b].size()) std::swap(a, b);
        next_node[tail[a]] = head[b];
        tail[a] = tail[b];
        parent[b] = a;
        parity[a] ^= parity[b];
        boundary[a] |= boundary[b];
        if (boundary_edge[a] < 0) boundary_edge[a] = boundary_edge[b];
        frontier[a].insert(frontier[a].end(), frontier[b].begin(), frontier[b].end());
        frontier[b].clear();
        return a;
    }

    double& edge_grown(int e) {
        if (edge_ver[e] != epoch) {
            edge_ver[e] = epoch;
            grown[e] = 0.0;
        }
        return grown[e];
    }

    std::vector<int>& adjacency(int v) {
        if (adj_ver[v] != epoch) {
            adj_ver[v] = epoch;
            adj[v].clear();
        }
        return adj[v];
    }

    uint8_t& defect_bit(int v) {
        if (defect_ver[v] != epoch) {
            defect_ver[v] = epoch;
            defect[v] = 0;
        }
        return defect[v];
    }
};

UnionFindDecoder::UnionFindDecoder(const DetectorErrorModel& dem) {
    n_det_ = dem.n_detectors;
    n_obs_ = dem.n_observables;
    if (n_obs_ > 64) throw std::invalid_argument("at most 64 observables supported");
    boundary_node_ = n_det_;
    incident_.resize(n_det_ + 1);
    for (const auto& fault : dem.faults) {
        if (fault.detectors.empty()) continue;  // undetectable, nothing to match
        if (fault.detectors.size() > 2) {
            throw NonGraphlikeModel("fault flips more than two detectors");
        }
        Edge e;
        e.u = fault.detectors[0];
        e.v = fault.detectors.size() == 2 ? fault.detectors[1] : boundary_node_;
        double p = std::clamp(fault.probability, kMinProb, 0.5);
        e.weight = std::log((1.0 - p) / p);
        for (int o : fault.observables) e.obs_mask |= uint64_t(1) << o;
        incident_[e.u].push_back(static_cast<int>(edges_.size()));
        if (e.v != boundary_node_) incident_[e.v].push_back(static_cast<int>(edges_.size()));
        edges_.push_back(e);
    }
}

UnionFindDecoder::Scratch& UnionFindDecoder::scratch() const {
    static thread_local Scratch s;
    return s;
}

uint64_t UnionFindDecoder::decode(const uint8_t* detector_bits) const {
    Scratch& s = scratch();
    s.ensure(n_det_ + 1, static_cast<int>(edges_.size()));
    s.incident = &incident_;

    std::vector<int> defects;
    for (int i = 0; i < n_det_; ++i) {
        if (detector_bits[i >> 3] >> (i & 7) & 1) defects.push_back(i);
    }
    if (defects.empty()) return 0;

    for (int v : defects) {
        s.touch(v);
        s.parity[v] = 1;
        s.defect_bit(v) = 1;
    }

    std::vector<int> completed;  // completed edges, for peeling

    // Cluster growth: every odd, boundary-free cluster grows all its
    // frontier edges by the smallest remaining slack among them. An edge
    // grows once per active cluster touching it, so an edge between two
    // active clusters fills at double rate, as in matching: meeting in
    // the middle beats two boundary exits. Rates are fixed before any
    // growth is applied because the unions below change roots mid-loop.
    std::vector<int> active, cand;
    while (true) {
        active.clear();
        for (int v : defects) {
            int r = s.find(v);
            if (s.parity[r] && !s.boundary[r]) active.push_back(r);
        }
        std::sort(active.begin(), active.end());
        active.erase(std::unique(active.begin(), active.end()), active.end());
        if (active.empty()) break;

        // Walk each active cluster's frontier list, dropping edges that
        // finished growing or became internal. The rate of an edge is the
        // number of active frontiers it shows up on.
        cand.clear();
        for (int r : active) {
            auto& fr = s.frontier[r];
            size_t keep = 0;
            for (int e : fr) {
                if (s.edge_grown(e) >= edges_[e].weight) continue;
                if (edges_[e].v != boundary_node_ &&
                    s.find(edges_[e].u) == s.find(edges_[e].v)) {
                    continue;
                }
                fr[keep++] = e;
                if (s.edge_mark[e] != s.epoch) {
                    s.edge_mark[e] = s.epoch;
                    s.edge_rate[e] = 1;
                    cand.push_back(e);
                } else {
                    ++s.edge_rate[e];
                }
            }
            fr.resize(keep);
        }
        if (cand.empty()) break;  // disconnected defect; give up on it

        double min_step = -1.0;
        for (int e : cand) {
            double step = (edges_[e].weight - s.edge_grown(e)) / s.edge_rate[e];
            if (min_step < 0 || step < min_step) min_step = step;
        }

        for (int e : cand) {
            double& g = s.edge_grown(e);
            g += min_step * s.edge_rate[e];
            if (g + 1e-12 < edges_[e].weight) continue;
            g = edges_[e].weight;
            completed.push_back(e);
            if (edges_[e].v == boundary_node_) {
                int ru = s.find(edges_[e].u);
                s.boundary[ru] = 1;
                if (s.boundary_edge[ru] < 0) s.boundary_edge[ru] = e;
            } else {
                s.unite(edges_[e].u, edges_[e].v);
            }
        }
        // Marks are per-iteration; bump the epoch stand-in cheaply by
        // clearing them so the next pass recounts rates from scratch.
        for (int e : cand) s.edge_mark[e] = s.epoch - 1;
    }

    // Peeling: spanning forest over completed internal edges, defects
    // pushed towards each root, residual parity matched to the boundary.
    for (int e : completed) {
        if (edges_[e].v == boundary_node_) continue;
        s.adjacency(edges_[e].u).push_back(e);
        s.adjacency(edges_[e].v).push_back(e);
    }

    uint64_t correction = 0;
    std::vector<std::pair<int, int>> bfs;  // (node, tree edge into it)
    for (int seed : defects) {
        int root = s.find(seed);
        if (s.visited_ver[root] == s.epoch) continue;  // cluster already peeled

        bfs.clear();
        // Root the tree at the boundary exit when there is one, so a
        // residual defect walks the tree to the boundary edge and flips
        // every edge on the way out.
        int start = s.boundary_edge[root] >= 0 ? edges_[s.boundary_edge[root]].u : s.head[root];
        bfs.push_back({start, -1});
        s.visited_ver[start] = s.epoch;
        for (size_t i = 0; i < bfs.size(); ++i) {
            int v = bfs[i].first;
            for (int e : s.adjacency(v)) {
                int w = edges_[e].u == v ? edges_[e].v : edges_[e].u;
                if (s.visited_ver[w] == s.epoch) continue;
                s.visited_ver[w] = s.epoch;
                bfs.push_back({w, e});
            }
        }
        s.visited_ver[root] = s.epoch;
        // Leaves first: flip each defect's tree edge and hand the
        // defect to the parent; a leftover at the tree root exits
        // through the cluster's boundary edge.
        for (size_t i = bfs.size(); i-- > 1;) {
            auto [v, e] = bfs[i];
            if (!s.defect_bit(v)) continue;
            s.defect_bit(v) = 0;
            int w = edges_[e].u == v ? edges_[e].v : edges_[e].u;
            s.defect_bit(w) ^= 1;
            correction ^= edges_[e].obs_mask;
        }
        if (s.defect_bit(bfs[0].first)) {
            s.defect_bit(bfs[0].first) = 0;
            if (s.boundary_edge[root] >= 0) {
                correction ^= edges_[s.boundary_edge[root]].obs_mask;
            }
        }
    }
    return correction;
}

}  // namespace sbus
