#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <vector>

#include "sbus/code_model.h"

namespace sbus {

// One data qubit's ancilla interactions across the four syndrome
// extraction slices. Idle slices are kept (timing and idle-dot
// insertion need them).
struct Chain {
    QubitId data;
    std::array<std::optional<QubitId>, 4> steps;

    // Non-idle steps in slice order.
    std::vector<QubitId> active_steps() const;
    int slice_of_last() const;  // 1-based slice of last non-idle step, 0 if none
};

struct DiGraph {
    std::vector<QubitId> nodes;
    std::vector<std::vector<int>> out;
    std::vector<std::vector<int>> in;

    int index_of(QubitId q) const;  // -1 when absent
    int add_node(QubitId q);        // idempotent
    void add_edge(QubitId u, QubitId v);
    void add_edge_idx(int u, int v);  // deduplicated
    size_t edge_count() const;
};

// The chain-preserving DAG: node set = all qubits, edge u -> v means
// u must sit left of v on the bus. Chains are kept alongside in dense
// node-index form for the placement optimizers.
struct ChainDag {
    DiGraph graph;
    std::vector<Chain> chains;
    // chain_nodes[i] = node indices of chain i: data then non-idle ancillas.
    std::vector<std::vector<int>> chain_nodes;
    // slice_node[i][s] = node index interacting with chain i at slice s+1, -1 when idle.
    std::vector<std::array<int, 4>> slice_node;
};

std::vector<Chain> extract_chains(const CodeSpec& code, const ScheduleSpec& schedule);

DiGraph build_composite_graph(const std::vector<Chain>& chains);

// Returns a witness cycle (vertex sequence, first == entry point of the
// cycle) or nullopt when the graph is acyclic.
std::optional<std::vector<QubitId>> check_acyclic(const DiGraph& graph);

ChainDag build_chain_dag(const std::vector<Chain>& chains);  // throws CyclicDependency

// Kahn's algorithm; the ready set is processed in ascending
// (kind, index) order, so data qubits come out first.
std::vector<QubitId> kahn_toposort(const ChainDag& dag);

// Node/edge list export for external visualization (DOT).
void write_dot(const DiGraph& graph, std::ostream& out);

}  // namespace sbus
