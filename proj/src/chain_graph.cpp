#include "sbus/chain_graph.h"

#include <algorithm>
#include <map>
#include <ostream>
#include <queue>
#include <set>

namespace sbus {

std::vector<QubitId> Chain::active_steps() const {
    std::vector<QubitId> result;
    for (const auto& s : steps) {
        if (s) result.push_back(*s);
    }
    return result;
}

int Chain::slice_of_last() const {
    for (int s = 4; s >= 1; --s) {
        if (steps[s - 1]) return s;
    }
    return 0;
}

int DiGraph::index_of(QubitId q) const {
    auto it = std::find(nodes.begin(), nodes.end(), q);
    return it == nodes.end() ? -1 : static_cast<int>(it - nodes.begin());
}

int DiGraph::add_node(QubitId q) {
    int idx = index_of(q);
    if (idx >= 0) return idx;
    nodes.push_back(q);
    out.emplace_back();
    in.emplace_back();
    return static_cast<int>(nodes.size()) - 1;
}

void DiGraph::add_edge(QubitId u, QubitId v) { add_edge_idx(add_node(u), add_node(v)); }

void DiGraph::add_edge_idx(int u, int v) {
    if (std::find(out[u].begin(), out[u].end(), v) != out[u].end()) return;
    out[u].push_back(v);
    in[v].push_back(u);
}

size_t DiGraph::edge_count() const {
    size_t n = 0;
    for (const auto& adj : out) n += adj.size();
    return n;
}

std::vector<Chain> extract_chains(const CodeSpec& code, const ScheduleSpec& schedule) {
    std::map<QubitId, Chain> by_data;
    for (const auto& dq : code.data_qubits) {
        by_data[dq.id] = Chain{dq.id, {}};
    }
    for (int s = 0; s < 4; ++s) {
        for (auto [data, anc] : schedule.slices[s]) {
            by_data.at(data).steps[s] = anc;
        }
    }
    std::vector<Chain> chains;
    chains.reserve(by_data.size());
    for (auto& [id, chain] : by_data) chains.push_back(std::move(chain));
    return chains;
}

DiGraph build_composite_graph(const std::vector<Chain>& chains) {
    DiGraph g;
    for (const auto& chain : chains) g.add_node(chain.data);
    for (const auto& chain : chains) {
        QubitId prev = chain.data;
        for (const auto& step : chain.steps) {
            if (!step) continue;
            g.add_edge(prev, *step);
            prev = *step;
        }
    }
    return g;
}

std::optional<std::vector<QubitId>> check_acyclic(const DiGraph& graph) {
    const int n = static_cast<int>(graph.nodes.size());
    std::vector<int> color(n, 0);  // 0 white, 1 on stack, 2 done
    std::vector<int> parent(n, -1);

    for (int root = 0; root < n; ++root) {
        if (color[root] != 0) continue;
        std::vector<std::pair<int, size_t>> stack{{root, 0}};
        color[root] = 1;
        while (!stack.empty()) {
            auto& [u, next] = stack.back();
            if (next < graph.out[u].size()) {
                int v = graph.out[u][next++];
                if (color[v] == 1) {
                    // Unwind the stack from u back to v.
                    std::vector<QubitId> cycle;
                    for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
                        cycle.push_back(graph.nodes[it->first]);
                        if (it->first == v) break;
                    }
                    std::reverse(cycle.begin(), cycle.end());
                    return cycle;
                }
                if (color[v] == 0) {
                    color[v] = 1;
                    stack.push_back({v, 0});
                }
            } else {
                color[u] = 2;
                stack.pop_back();
            }
        }
    }
    return std::nullopt;
}

ChainDag build_chain_dag(const std::vector<Chain>& chains) {
    ChainDag dag;
    dag.graph = build_composite_graph(chains);
    if (auto cycle = check_acyclic(dag.graph)) {
        throw CyclicDependency(*cycle);
    }
    dag.chains = chains;
    for (const auto& chain : chains) {
        std::vector<int> nodes{dag.graph.index_of(chain.data)};
        std::array<int, 4> per_slice{-1, -1, -1, -1};
        for (int s = 0; s < 4; ++s) {
            if (chain.steps[s]) {
                per_slice[s] = dag.graph.index_of(*chain.steps[s]);
                nodes.push_back(per_slice[s]);
            }
        }
        dag.chain_nodes.push_back(std::move(nodes));
        dag.slice_node.push_back(per_slice);
    }
    return dag;
}

std::vector<QubitId> kahn_toposort(const ChainDag& dag) {
    const auto& g = dag.graph;
    const int n = static_cast<int>(g.nodes.size());
    std::vector<int> indeg(n);
    for (int v = 0; v < n; ++v) indeg[v] = static_cast<int>(g.in[v].size());

    auto cmp = [&g](int a, int b) { return g.nodes[a] > g.nodes[b]; };
    std::priority_queue<int, std::vector<int>, decltype(cmp)> ready(cmp);
    for (int v = 0; v < n; ++v) {
        if (indeg[v] == 0) ready.push(v);
    }

    std::vector<QubitId> order;
    order.reserve(n);
    while (!ready.empty()) {
        int u = ready.top();
        ready.pop();
        order.push_back(g.nodes[u]);
        for (int v : g.out[u]) {
            if (--indeg[v] == 0) ready.push(v);
        }
    }
    if (static_cast<int>(order.size()) != n) {
        auto cycle = check_acyclic(g);
        throw CyclicDependency(cycle ? *cycle : std::vector<QubitId>{});
    }
    return order;
}

void write_dot(const DiGraph& graph, std::ostream& out) {
    out << "digraph chains {\n";
    for (const auto& q : graph.nodes) {
        out << "  \"" << to_string(q) << "\";\n";
    }
    for (size_t u = 0; u < graph.nodes.size(); ++u) {
        for (int v : graph.out[u]) {
            out << "  \"" << to_string(graph.nodes[u]) << "\" -> \""
                << to_string(graph.nodes[v]) << "\";\n";
        }
    }
    out << "}\n";
}

}  // namespace sbus
