#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <vector>

#include "sbus/chain_graph.h"

namespace sbus {

// Bijection qubit -> bus position.
struct Placement {
    std::vector<QubitId> order;  // position -> qubit

    int position_of(QubitId q) const;
    int size() const { return static_cast<int>(order.size()); }
    std::map<QubitId, int> position_map() const;
};

struct ObjectiveWeights {
    double time = 1.0;
    double dist = 0.0;
    // Lexicographic time-then-distance: the T >> D limit, avoids
    // weight-scaling overflow.
    bool lexicographic = true;
};

enum class Optimality { Certified, Heuristic };

struct SynthesisResult {
    Placement placement;
    std::array<long, 5> slice_times{};  // t1..t5, position units
    long total_distance = 0;
    double objective = 0.0;  // time*sum(t) + dist*total_distance
    Optimality optimality = Optimality::Heuristic;
};

struct ChainViolation {
    QubitId data;
    QubitId left;   // should precede `right` but does not
    QubitId right;
};

Placement naive_topological(const ChainDag& dag);

// Anti-diagonal snake over the data grid from the top-left qubit,
// alternating direction on each diagonal; ancillas appended as soon as
// every DAG predecessor is placed.
Placement zigzag(const CodeSpec& code, const ChainDag& dag);

// Exact solve over the linear extensions of the DAG. The sum of slice
// times is certified by refuting every smaller slice-budget vector;
// distance breaks ties among the orderings the search visits.
// budget_seconds <= 0 means unlimited; on budget exhaustion the best
// incumbent is returned with optimality = Heuristic. An optional seed
// placement provides the starting incumbent.
SynthesisResult optimal(const ChainDag& dag, const ObjectiveWeights& weights,
                        double budget_seconds, const Placement* seed = nullptr);

namespace detail {
// column_major traverses the data grid column by column instead of row
// by row; kept for experimentation.
Placement zigzag_impl(const CodeSpec& code, const ChainDag& dag, bool column_major);
}  // namespace detail

std::vector<ChainViolation> verify_placement(const Placement& placement,
                                             const std::vector<Chain>& chains);

// Slice times, total distance and scalar objective of a given placement.
SynthesisResult evaluate_placement(const Placement& placement, const ChainDag& dag,
                                   const ObjectiveWeights& weights, Optimality optimality);

// The synthesized architecture: placement plus greedily inserted idle
// dots, and each data qubit's physical dot per slice.
struct AugmentedLayout {
    Placement placement;
    int bus_length = 0;                  // qubit dots + extra dots
    std::vector<int> qubit_dot;          // position index -> physical dot index
    std::vector<int> extra_dots;         // physical dot indices of inserted dots
    // data_path[i][k]: physical dot of chain i's data qubit; k=0 home,
    // k=1..4 during slice k, k=5 back home.
    std::vector<std::array<int, 6>> data_path;
    std::vector<Chain> chains;

    int extra_dot_count() const { return static_cast<int>(extra_dots.size()); }
};

AugmentedLayout insert_idle_dots(const Placement& placement, const std::vector<Chain>& chains);

void save_placement(const Placement& placement, std::ostream& out);
Placement parse_placement(std::istream& in);
Placement load_placement_file(const std::string& path);

}  // namespace sbus
