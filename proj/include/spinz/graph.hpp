#ifndef SPINZ_GRAPH_HPP
#define SPINZ_GRAPH_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace spinz {

// Oriented multigraph of interacting q-state spins. Edge e = (tail, head);
// the orientation is fixed by the input order and edge ids are list indices.
// Parallel edges are allowed, self-loops are not.
struct SpinGraph {
    int q = 2;
    int num_vertices = 0;
    std::vector<std::pair<int, int>> edges;

    SpinGraph() = default;
    SpinGraph(int q_, int n_, std::vector<std::pair<int, int>> e_)
        : q(q_), num_vertices(n_), edges(std::move(e_)) {
        validate();
    }

    void validate() const {
        if (q < 2) throw std::invalid_argument("spin dimension q must be >= 2");
        if (num_vertices < 1) throw std::invalid_argument("graph needs at least one vertex");
        for (size_t i = 0; i < edges.size(); ++i) {
            auto [t, h] = edges[i];
            if (t < 0 || t >= num_vertices || h < 0 || h >= num_vertices)
                throw std::invalid_argument("edge " + std::to_string(i) + " references unknown vertex");
            if (t == h)
                throw std::invalid_argument("edge " + std::to_string(i) + " is a self-loop");
        }
    }

    int num_edges() const { return static_cast<int>(edges.size()); }

    std::vector<int> degrees() const {
        std::vector<int> d(num_vertices, 0);
        for (auto [t, h] : edges) {
            d[t]++;
            d[h]++;
        }
        return d;
    }

    // Connected components over the full vertex set; isolated vertices count.
    int num_components() const;

    // Components of the subgraph induced by an edge subset, again counting
    // every vertex of the graph.
    int num_components(const std::vector<int>& edge_subset) const;
};

// Small union-find used throughout for component bookkeeping.
class UnionFind {
  public:
    explicit UnionFind(int n) : parent_(n), rank_(n, 0) {
        for (int i = 0; i < n; ++i) parent_[i] = i;
    }
    int find(int x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (rank_[a] < rank_[b]) std::swap(a, b);
        parent_[b] = a;
        if (rank_[a] == rank_[b]) rank_[a]++;
        return true;
    }
    int num_sets() {
        int c = 0;
        for (size_t i = 0; i < parent_.size(); ++i)
            if (find(static_cast<int>(i)) == static_cast<int>(i)) c++;
        return c;
    }

  private:
    std::vector<int> parent_;
    std::vector<int> rank_;
};

inline int SpinGraph::num_components() const {
    UnionFind uf(num_vertices);
    for (auto [t, h] : edges) uf.unite(t, h);
    return uf.num_sets();
}

inline int SpinGraph::num_components(const std::vector<int>& edge_subset) const {
    UnionFind uf(num_vertices);
    for (int e : edge_subset) uf.unite(edges[e].first, edges[e].second);
    return uf.num_sets();
}

}  // namespace spinz

#endif
