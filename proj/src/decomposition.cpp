#include "spinz/decomposition.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

namespace spinz {

std::vector<int> LeafStructure::columns_of_leaves(const std::vector<int>& leaves) const {
    std::vector<int> cols;
    for (int l : leaves)
        for (int c : leaf_columns[l]) cols.push_back(c);
    return cols;
}

LeafStructure leaf_structure(const SpinGraph& graph, Encoding enc) {
    if (enc != Encoding::Psi && enc != Encoding::Phi)
        throw std::invalid_argument("leaf structure for ghz/kbody needs the Hamiltonian");
    LeafStructure ls;
    ls.num_vertices = graph.num_vertices;
    ls.columns = encoding_columns(graph, enc);
    for (int c = 0; c < static_cast<int>(ls.columns.size()); ++c) ls.leaf_columns.push_back({c});
    return ls;
}

LeafStructure leaf_structure(const Hamiltonian& h, Encoding enc) {
    if (enc == Encoding::Psi || enc == Encoding::Phi) return leaf_structure(h.graph, enc);
    LeafStructure ls;
    ls.num_vertices = h.graph.num_vertices;
    if (enc == Encoding::Ghz) {
        // two pinned copies per edge, grouped as one contraction site
        for (auto [t, hd] : h.graph.edges) {
            int base = static_cast<int>(ls.columns.size());
            ls.columns.push_back(EncodingColumn::pin(t));
            ls.columns.push_back(EncodingColumn::pin(hd));
            ls.leaf_columns.push_back({base, base + 1});
        }
        for (const auto& term : h.kbody_terms) {
            std::vector<int> group;
            for (int v : term.sites) {
                group.push_back(static_cast<int>(ls.columns.size()));
                ls.columns.push_back(EncodingColumn::pin(v));
            }
            ls.leaf_columns.push_back(std::move(group));
        }
    } else {  // KBody: one contraction site per term, plus one per field
        for (const auto& term : h.kbody_terms) {
            std::vector<int> group;
            for (int v : term.sites) {
                group.push_back(static_cast<int>(ls.columns.size()));
                ls.columns.push_back(EncodingColumn::pin(v));
            }
            ls.leaf_columns.push_back(std::move(group));
        }
        for (const auto& [v, t] : h.vertex_terms) {
            int base = static_cast<int>(ls.columns.size());
            ls.columns.push_back(EncodingColumn::pin(v));
            ls.leaf_columns.push_back({base});
        }
    }
    return ls;
}

int BranchDecomposition::num_leaves() const {
    int c = 0;
    for (const auto& n : nodes)
        if (n.leaf_id >= 0) c++;
    return c;
}

void BranchDecomposition::validate(int expected_leaves) const {
    if (nodes.empty() || root < 0 || root >= static_cast<int>(nodes.size()))
        throw std::invalid_argument("empty or rootless decomposition");
    std::vector<char> seen_leaf(expected_leaves, 0);
    std::vector<char> visited(nodes.size(), 0);
    std::vector<int> stack{root};
    int count = 0;
    while (!stack.empty()) {
        int n = stack.back();
        stack.pop_back();
        if (visited[n]) throw std::invalid_argument("decomposition tree has a cycle");
        visited[n] = 1;
        count++;
        const Node& nd = nodes[n];
        if (nd.leaf_id >= 0) {
            if (nd.left != -1 || nd.right != -1)
                throw std::invalid_argument("leaf node with children");
            if (nd.leaf_id >= expected_leaves || seen_leaf[nd.leaf_id])
                throw std::invalid_argument("leaf map is not a bijection");
            seen_leaf[nd.leaf_id] = 1;
        } else {
            if (nd.left < 0 || nd.right < 0) throw std::invalid_argument("internal node needs two children");
            stack.push_back(nd.left);
            stack.push_back(nd.right);
        }
    }
    if (count != static_cast<int>(nodes.size()))
        throw std::invalid_argument("decomposition has unreachable nodes");
    for (char c : seen_leaf)
        if (!c) throw std::invalid_argument("leaf map is not total");
}

std::pair<std::vector<std::vector<int>>, std::vector<int>> BranchDecomposition::unrooted() const {
    std::vector<std::vector<int>> adj(nodes.size());
    std::vector<int> leaf_map(nodes.size(), -1);
    for (size_t i = 0; i < nodes.size(); ++i) {
        leaf_map[i] = nodes[i].leaf_id;
        if (nodes[i].leaf_id >= 0) continue;
        if (static_cast<int>(i) == root) continue;
        adj[i].push_back(nodes[i].left);
        adj[nodes[i].left].push_back(static_cast<int>(i));
        adj[i].push_back(nodes[i].right);
        adj[nodes[i].right].push_back(static_cast<int>(i));
    }
    if (!is_leaf(root)) {  // splice the degree-2 root
        int l = nodes[root].left, r = nodes[root].right;
        adj[l].push_back(r);
        adj[r].push_back(l);
    }
    return {adj, leaf_map};
}

std::vector<int> BranchDecomposition::leaves_below(int node) const {
    std::vector<int> out;
    std::vector<int> stack{node};
    while (!stack.empty()) {
        int n = stack.back();
        stack.pop_back();
        if (nodes[n].leaf_id >= 0) {
            out.push_back(nodes[n].leaf_id);
        } else {
            stack.push_back(nodes[n].right);
            stack.push_back(nodes[n].left);
        }
    }
    return out;
}

namespace {

void serialize_node(const BranchDecomposition& bd, int n, std::ostringstream& out) {
    if (bd.nodes[n].leaf_id >= 0) {
        out << bd.nodes[n].leaf_id;
        return;
    }
    out << '(';
    serialize_node(bd, bd.nodes[n].left, out);
    out << ' ';
    serialize_node(bd, bd.nodes[n].right, out);
    out << ')';
}

int parse_node(const std::string& s, size_t& pos, BranchDecomposition& bd) {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) pos++;
    if (pos >= s.size()) throw std::invalid_argument("unexpected end of decomposition text");
    if (s[pos] == '(') {
        pos++;
        int l = parse_node(s, pos, bd);
        int r = parse_node(s, pos, bd);
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) pos++;
        if (pos >= s.size() || s[pos] != ')') throw std::invalid_argument("expected ) in decomposition text");
        pos++;
        bd.nodes.push_back({l, r, -1});
        return static_cast<int>(bd.nodes.size()) - 1;
    }
    if (!std::isdigit(static_cast<unsigned char>(s[pos])))
        throw std::invalid_argument("expected leaf id in decomposition text");
    int v = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
        v = v * 10 + (s[pos] - '0');
        pos++;
    }
    bd.nodes.push_back({-1, -1, v});
    return static_cast<int>(bd.nodes.size()) - 1;
}

}  // namespace

std::string BranchDecomposition::serialize() const {
    if (root < 0 || nodes.empty()) throw std::logic_error("cannot serialize an empty decomposition");
    std::ostringstream out;
    serialize_node(*this, root, out);
    return out.str();
}

BranchDecomposition BranchDecomposition::parse(const std::string& text) {
    BranchDecomposition bd;
    size_t pos = 0;
    bd.root = parse_node(text, pos, bd);
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) pos++;
    if (pos != text.size()) throw std::invalid_argument("trailing characters in decomposition text");
    return bd;
}

uint64_t decomposition_digest(const BranchDecomposition& bd) {
    std::string s = bd.serialize();
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

WidthReport width(const BranchDecomposition& bd, const LeafStructure& ls) {
    bd.validate(ls.num_leaves());
    WidthReport rep;
    rep.width = 1;
    if (bd.num_leaves() < 2) return rep;
    for (int n = 0; n < static_cast<int>(bd.nodes.size()); ++n) {
        if (n == bd.root) continue;
        // the root's right child duplicates the cut of its left sibling
        if (!bd.is_leaf(bd.root) && n == bd.nodes[bd.root].right) continue;
        std::vector<int> below = ls.columns_of_leaves(bd.leaves_below(n));
        int lambda = connectivity(ls.num_vertices, ls.columns, below);
        rep.per_edge_lambda[n] = lambda;
        rep.width = std::max(rep.width, lambda);
    }
    return rep;
}

namespace {

int lambda_of_leafset(const LeafStructure& ls, const std::vector<int>& leaves) {
    return connectivity(ls.num_vertices, ls.columns, ls.columns_of_leaves(leaves));
}

// All unrooted subcubic trees by inserting leaves onto existing edges.
struct EdgeTree {
    // nodes 0..num_leaves-1 are leaves; edges between node ids
    std::vector<std::pair<int, int>> tree_edges;
    int next_node;
};

void enumerate_trees(const LeafStructure& ls, EdgeTree cur, int next_leaf, int& best_width,
                     BranchDecomposition& best) {
    const int L = ls.num_leaves();
    if (next_leaf == L) {
        // Root the unrooted tree on the edge at leaf 0: an artificial root
        // gets children {leaf 0, its neighbor}; every other internal node
        // keeps its two non-parent neighbors as children.
        std::vector<std::vector<int>> adj(cur.next_node);
        for (auto [a, b] : cur.tree_edges) {
            adj[a].push_back(b);
            adj[b].push_back(a);
        }
        BranchDecomposition bd;
        bd.nodes.resize(cur.next_node);
        for (int i = 0; i < L; ++i) bd.nodes[i].leaf_id = i;
        int top = adj[0][0];
        std::vector<int> stack{top};
        std::vector<int> parent(cur.next_node, -1);
        parent[top] = 0;
        while (!stack.empty()) {
            int n = stack.back();
            stack.pop_back();
            std::vector<int> kids;
            for (int m : adj[n])
                if (m != parent[n]) {
                    parent[m] = n;
                    kids.push_back(m);
                    stack.push_back(m);
                }
            if (!kids.empty()) {
                bd.nodes[n].left = kids[0];
                bd.nodes[n].right = kids[1];
            }
        }
        bd.nodes.push_back({0, top, -1});
        bd.root = static_cast<int>(bd.nodes.size()) - 1;
        WidthReport w = width(bd, ls);
        if (w.width < best_width) {
            best_width = w.width;
            best = bd;
        }
        return;
    }
    for (size_t e = 0; e < cur.tree_edges.size(); ++e) {
        EdgeTree next = cur;
        auto [a, b] = next.tree_edges[e];
        int mid = next.next_node++;
        next.tree_edges[e] = {a, mid};
        next.tree_edges.push_back({mid, b});
        next.tree_edges.push_back({mid, next_leaf});
        enumerate_trees(ls, next, next_leaf + 1, best_width, best);
    }
}

BranchDecomposition exhaustive_small(const LeafStructure& ls) {
    const int L = ls.num_leaves();
    if (L > 8) throw std::invalid_argument("exhaustive-small supports at most 8 leaves");
    EdgeTree base;
    base.next_node = L;
    base.tree_edges.push_back({0, 1});
    int best_width = std::numeric_limits<int>::max();
    BranchDecomposition best;
    enumerate_trees(ls, base, 2, best_width, best);
    return best;
}

BranchDecomposition caterpillar_from_order(const std::vector<int>& order) {
    BranchDecomposition bd;
    bd.nodes.push_back({-1, -1, order[0]});
    int cur = 0;
    for (size_t k = 1; k < order.size(); ++k) {
        int leaf = static_cast<int>(bd.nodes.size());
        bd.nodes.push_back({-1, -1, order[k]});
        int internal = static_cast<int>(bd.nodes.size());
        bd.nodes.push_back({cur, leaf, -1});
        cur = internal;
    }
    bd.root = cur;
    return bd;
}

BranchDecomposition greedy_merge(const LeafStructure& ls) {
    const int L = ls.num_leaves();
    BranchDecomposition bd;
    struct Cluster {
        int node;
        std::vector<int> leaves;
    };
    std::vector<Cluster> clusters;
    for (int i = 0; i < L; ++i) {
        bd.nodes.push_back({-1, -1, i});
        clusters.push_back({i, {i}});
    }
    while (clusters.size() > 1) {
        int best_i = 0, best_j = 1;
        int best_lambda = std::numeric_limits<int>::max();
        for (size_t i = 0; i < clusters.size(); ++i) {
            for (size_t j = i + 1; j < clusters.size(); ++j) {
                std::vector<int> merged = clusters[i].leaves;
                merged.insert(merged.end(), clusters[j].leaves.begin(), clusters[j].leaves.end());
                int lambda = static_cast<int>(merged.size()) == L
                                 ? 1
                                 : lambda_of_leafset(ls, merged);
                if (lambda < best_lambda) {
                    best_lambda = lambda;
                    best_i = static_cast<int>(i);
                    best_j = static_cast<int>(j);
                }
            }
        }
        Cluster a = clusters[best_i];
        Cluster b = clusters[best_j];
        clusters.erase(clusters.begin() + best_j);
        clusters.erase(clusters.begin() + best_i);
        int node = static_cast<int>(bd.nodes.size());
        bd.nodes.push_back({a.node, b.node, -1});
        Cluster merged{node, a.leaves};
        merged.leaves.insert(merged.leaves.end(), b.leaves.begin(), b.leaves.end());
        clusters.push_back(std::move(merged));
    }
    bd.root = clusters[0].node;
    return bd;
}

BranchDecomposition min_degree_elimination(const LeafStructure& ls) {
    const int nv = ls.num_vertices;
    const int L = ls.num_leaves();
    // min-degree vertex elimination on the leaf-vertex incidence
    std::vector<std::set<int>> leaves_at(nv);
    for (int l = 0; l < L; ++l)
        for (int c : ls.leaf_columns[l]) {
            const auto& col = ls.columns[c];
            if (col.type == EncodingColumn::Type::Difference) {
                leaves_at[col.tail].insert(l);
                leaves_at[col.head].insert(l);
            } else {
                leaves_at[col.vertex].insert(l);
            }
        }
    std::vector<std::set<int>> adj(nv);
    for (int l = 0; l < L; ++l)
        for (int c : ls.leaf_columns[l]) {
            const auto& col = ls.columns[c];
            if (col.type == EncodingColumn::Type::Difference) {
                adj[col.tail].insert(col.head);
                adj[col.head].insert(col.tail);
            }
        }
    std::set<std::pair<int, int>> queue;  // (degree, vertex)
    for (int v = 0; v < nv; ++v) queue.insert({static_cast<int>(adj[v].size()), v});
    std::vector<int> position(nv, -1);
    std::vector<char> eliminated(nv, 0);
    int step = 0;
    while (!queue.empty()) {
        auto [d, v] = *queue.begin();
        queue.erase(queue.begin());
        if (eliminated[v]) continue;
        eliminated[v] = 1;
        position[v] = step++;
        for (int u : adj[v]) {
            if (eliminated[u]) continue;
            queue.erase({static_cast<int>(adj[u].size()), u});
            adj[u].erase(v);
            queue.insert({static_cast<int>(adj[u].size()), u});
        }
    }
    // place each leaf at the elimination step of its earliest vertex
    std::vector<std::pair<std::pair<int, int>, int>> keyed;  // ((min pos, tiebreak), leaf)
    for (int l = 0; l < L; ++l) {
        int best = std::numeric_limits<int>::max();
        for (int c : ls.leaf_columns[l]) {
            const auto& col = ls.columns[c];
            if (col.type == EncodingColumn::Type::Difference) {
                best = std::min({best, position[col.tail], position[col.head]});
            } else {
                best = std::min(best, position[col.vertex]);
            }
        }
        keyed.push_back({{best, l}, l});
    }
    std::sort(keyed.begin(), keyed.end());
    std::vector<int> order;
    for (const auto& k : keyed) order.push_back(k.second);
    return caterpillar_from_order(order);
}

}  // namespace

std::string to_string(Strategy s) {
    switch (s) {
        case Strategy::GreedyMerge: return "greedy-merge";
        case Strategy::MinDegreeElimination: return "min-degree-elimination";
        case Strategy::ExhaustiveSmall: return "exhaustive-small";
        case Strategy::Auto: return "auto";
    }
    return "?";
}

Strategy strategy_from_string(const std::string& s) {
    if (s == "greedy-merge") return Strategy::GreedyMerge;
    if (s == "min-degree-elimination") return Strategy::MinDegreeElimination;
    if (s == "exhaustive-small") return Strategy::ExhaustiveSmall;
    if (s == "auto") return Strategy::Auto;
    throw std::invalid_argument("unknown strategy: " + s);
}

BranchDecomposition heuristic_branch_decompose(const LeafStructure& ls, Strategy strategy) {
    const int L = ls.num_leaves();
    if (L == 0) throw std::invalid_argument("no leaves to decompose");
    if (L == 1) {
        BranchDecomposition bd;
        bd.nodes.push_back({-1, -1, 0});
        bd.root = 0;
        return bd;
    }
    if (strategy == Strategy::Auto) {
        if (L <= 8) strategy = Strategy::ExhaustiveSmall;
        else if (L <= 48) strategy = Strategy::GreedyMerge;
        else strategy = Strategy::MinDegreeElimination;
    }
    BranchDecomposition bd;
    switch (strategy) {
        case Strategy::ExhaustiveSmall: bd = exhaustive_small(ls); break;
        case Strategy::GreedyMerge: bd = greedy_merge(ls); break;
        case Strategy::MinDegreeElimination: bd = min_degree_elimination(ls); break;
        case Strategy::Auto: throw std::logic_error("unreachable");
    }
    bd.validate(L);
    return bd;
}

}  // namespace spinz
