#ifndef SPINZ_DECOMPOSITION_HPP
#define SPINZ_DECOMPOSITION_HPP

#include <map>
#include <string>
#include <vector>

#include "spinz/encoding.hpp"
#include "spinz/graph.hpp"
#include "spinz/model.hpp"

namespace spinz {

// Leaves of a branch decomposition. For psi each leaf is one edge column, for
// phi one column of (1|B). For the GHZ and k-body schemes a leaf is a
// contraction site: the group of columns absorbed against one weight tensor.
struct LeafStructure {
    int num_vertices = 0;
    std::vector<EncodingColumn> columns;
    std::vector<std::vector<int>> leaf_columns;  // column ids per leaf

    int num_leaves() const { return static_cast<int>(leaf_columns.size()); }
    std::vector<int> columns_of_leaves(const std::vector<int>& leaves) const;
};

LeafStructure leaf_structure(const SpinGraph& graph, Encoding enc);
LeafStructure leaf_structure(const Hamiltonian& h, Encoding enc);

// Subcubic tree over the leaves, stored rooted: every internal node has two
// children and the (transient) degree-2 root is spliced away in the unrooted
// view. leaf of nodes[i] iff leaf_id >= 0.
struct BranchDecomposition {
    struct Node {
        int left = -1;
        int right = -1;
        int leaf_id = -1;  // index into LeafStructure::leaf_columns
    };
    std::vector<Node> nodes;
    int root = -1;

    int num_leaves() const;
    bool is_leaf(int n) const { return nodes[n].leaf_id >= 0; }
    void validate(int expected_leaves) const;

    // Unrooted adjacency (root spliced) plus node -> leaf id; for structure
    // checks in tests.
    std::pair<std::vector<std::vector<int>>, std::vector<int>> unrooted() const;

    // leaf ids under each node, in left-to-right order
    std::vector<int> leaves_below(int node) const;

    std::string serialize() const;
    static BranchDecomposition parse(const std::string& text);
};

struct WidthReport {
    std::map<int, int> per_edge_lambda;  // keyed by tree node (edge above it)
    int width = 1;
};

WidthReport width(const BranchDecomposition& bd, const LeafStructure& ls);

enum class Strategy { GreedyMerge, MinDegreeElimination, ExhaustiveSmall, Auto };

std::string to_string(Strategy s);
Strategy strategy_from_string(const std::string& s);

// Builds a valid decomposition. exhaustive-small searches all subcubic trees
// (leaf count <= 8) and is optimal; the two heuristics only guarantee
// validity. greedy-merge repeatedly joins the cluster pair of least merged
// connectivity; min-degree-elimination orders leaves along a min-degree
// vertex elimination and returns a caterpillar.
BranchDecomposition heuristic_branch_decompose(const LeafStructure& ls, Strategy strategy);

uint64_t decomposition_digest(const BranchDecomposition& bd);

}  // namespace spinz

#endif
