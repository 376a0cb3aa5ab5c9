#include "spinz/pauli.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace spinz {

std::string to_string(Encoding e) {
    switch (e) {
        case Encoding::Psi: return "psi";
        case Encoding::Phi: return "phi";
        case Encoding::Ghz: return "ghz";
        case Encoding::KBody: return "kbody";
    }
    return "?";
}

Encoding encoding_from_string(const std::string& s) {
    if (s == "psi") return Encoding::Psi;
    if (s == "phi") return Encoding::Phi;
    if (s == "ghz") return Encoding::Ghz;
    if (s == "kbody") return Encoding::KBody;
    throw std::invalid_argument("unknown encoding: " + s);
}

std::vector<EncodingColumn> encoding_columns(const SpinGraph& graph, Encoding enc) {
    std::vector<EncodingColumn> cols;
    switch (enc) {
        case Encoding::Psi:
            for (auto [t, h] : graph.edges) cols.push_back(EncodingColumn::edge(t, h));
            break;
        case Encoding::Phi:
            for (int v = 0; v < graph.num_vertices; ++v) cols.push_back(EncodingColumn::pin(v));
            for (auto [t, h] : graph.edges) cols.push_back(EncodingColumn::edge(t, h));
            break;
        case Encoding::Ghz:
            for (auto [t, h] : graph.edges) {
                cols.push_back(EncodingColumn::pin(t));
                cols.push_back(EncodingColumn::pin(h));
            }
            break;
        case Encoding::KBody:
            throw std::invalid_argument("k-body column layout depends on the Hamiltonian terms");
    }
    return cols;
}

int kernel_exponent(int num_vertices, const std::vector<EncodingColumn>& columns,
                    const std::vector<int>& subset) {
    UnionFind uf(num_vertices);
    std::vector<char> pinned(num_vertices, 0);
    for (int c : subset) {
        const auto& col = columns[c];
        if (col.type == EncodingColumn::Type::Difference)
            uf.unite(col.tail, col.head);
        else
            pinned[col.vertex] = 1;
    }
    std::vector<char> root_pinned(num_vertices, 0);
    for (int v = 0; v < num_vertices; ++v)
        if (pinned[v]) root_pinned[uf.find(v)] = 1;
    int free_components = 0;
    for (int v = 0; v < num_vertices; ++v)
        if (uf.find(v) == v && !root_pinned[v]) free_components++;
    return free_components;
}

int connectivity(int num_vertices, const std::vector<EncodingColumn>& columns,
                 const std::vector<int>& subset) {
    const int total = static_cast<int>(columns.size());
    if (subset.empty() || static_cast<int>(subset.size()) >= total)
        throw std::invalid_argument("connectivity needs a proper nonempty column subset");
    std::vector<char> in(total, 0);
    for (int c : subset) {
        if (c < 0 || c >= total) throw std::invalid_argument("column id out of range");
        in[c] = 1;
    }
    std::vector<int> all(total), rest;
    for (int c = 0; c < total; ++c) {
        all[c] = c;
        if (!in[c]) rest.push_back(c);
    }
    int ce = kernel_exponent(num_vertices, columns, all);
    int ca = kernel_exponent(num_vertices, columns, subset);
    int cb = kernel_exponent(num_vertices, columns, rest);
    return num_vertices + ce - ca - cb + 1;
}

int connectivity(const SpinGraph& graph, const std::vector<int>& subset, Encoding enc) {
    return connectivity(graph.num_vertices, encoding_columns(graph, enc), subset);
}

bool commutes(const PauliWord& a, const PauliWord& b) {
    if (a.n != b.n || a.q != b.q) throw std::invalid_argument("pauli word size mismatch");
    long long s = 0;
    for (int i = 0; i < a.n; ++i)
        s += static_cast<long long>(b.xi[i]) * a.zeta[i] - static_cast<long long>(a.xi[i]) * b.zeta[i];
    return mod_q(s, a.q) == 0;
}

PauliWord multiply(const PauliWord& a, const PauliWord& b) {
    if (a.n != b.n || a.q != b.q) throw std::invalid_argument("pauli word size mismatch");
    PauliWord r;
    r.n = a.n;
    r.q = a.q;
    r.xi.resize(a.n);
    r.zeta.resize(a.n);
    long long phase = a.phase_num + b.phase_num;
    for (int i = 0; i < a.n; ++i) {
        r.xi[i] = mod_q(a.xi[i] + b.xi[i], a.q);
        r.zeta[i] = mod_q(a.zeta[i] + b.zeta[i], a.q);
        phase += static_cast<long long>(b.xi[i]) * a.zeta[i];
    }
    r.phase_num = mod_q(phase, a.q);
    return r;
}

bool StabilizerGenSet::all_commute() const {
    for (size_t i = 0; i < generators.size(); ++i)
        for (size_t j = i + 1; j < generators.size(); ++j)
            if (!commutes(generators[i], generators[j])) return false;
    return true;
}

StabilizerGenSet psi_generators(const SpinGraph& graph) {
    if (graph.num_edges() == 0) throw std::invalid_argument("psi encoding needs at least one edge");
    ZqSubmodule cut = cut_space(graph);
    ZqSubmodule comp = orthogonal_complement(cut);
    StabilizerGenSet s;
    s.n = graph.num_edges();
    s.q = graph.q;
    for (const auto& v : cut.canonical.rows()) s.generators.push_back(PauliWord::x_word(graph.q, v));
    for (const auto& u : comp.canonical.rows()) s.generators.push_back(PauliWord::z_word(graph.q, u));
    return s;
}

StabilizerGenSet phi_generators(const SpinGraph& graph) {
    graph.validate();
    const int nv = graph.num_vertices;
    const int ne = graph.num_edges();
    const int q = graph.q;
    StabilizerGenSet s;
    s.n = nv + ne;
    s.q = q;
    // X-type word per vertex a: X on the vertex qudit and X^{B_{a,e}} on each
    // incident edge qudit.
    for (int a = 0; a < nv; ++a) {
        PauliWord w = PauliWord::identity(s.n, q);
        w.xi[a] = 1;
        for (int e = 0; e < ne; ++e) {
            auto [t, h] = graph.edges[e];
            int exp = 0;
            if (t == a) exp -= 1;
            if (h == a) exp += 1;
            w.xi[nv + e] = mod_q(exp, q);
        }
        s.generators.push_back(std::move(w));
    }
    // Z-type word per edge e: Z on the edge qudit, cancelled by inverse
    // phases on the endpoint vertex qudits.
    for (int e = 0; e < ne; ++e) {
        auto [t, h] = graph.edges[e];
        PauliWord w = PauliWord::identity(s.n, q);
        w.zeta[nv + e] = 1;
        w.zeta[t] = mod_q(w.zeta[t] + 1, q);   // -B_{t,e} = +1
        w.zeta[h] = mod_q(w.zeta[h] - 1, q);   // -B_{h,e} = -1
        s.generators.push_back(std::move(w));
    }
    return s;
}

StabilizerGenSet kitaev_generators(const SpinGraph& graph, const std::vector<std::vector<int>>& loops) {
    graph.validate();
    const int ne = graph.num_edges();
    const int q = graph.q;
    StabilizerGenSet s;
    s.n = ne;
    s.q = q;

    std::set<int> covered;  // edges appearing in some loop
    for (const auto& loop : loops)
        for (int e : loop) {
            if (e < 0 || e >= ne) throw std::invalid_argument("loop references unknown edge");
            covered.insert(e);
        }

    // star words: X^{B_{a,e}} over covered edges at each covered vertex
    std::set<int> star_vertices;
    for (int e : covered) {
        star_vertices.insert(graph.edges[e].first);
        star_vertices.insert(graph.edges[e].second);
    }
    for (int a : star_vertices) {
        PauliWord w = PauliWord::identity(ne, q);
        for (int e : covered) {
            auto [t, h] = graph.edges[e];
            int exp = 0;
            if (t == a) exp -= 1;
            if (h == a) exp += 1;
            w.xi[e] = mod_q(exp, q);
        }
        s.generators.push_back(std::move(w));
    }

    // plaquette words: walk each loop; the Z exponent is +1 along the edge
    // orientation and -1 against it
    for (const auto& loop : loops) {
        std::map<int, std::vector<int>> at_vertex;
        for (int e : loop) {
            at_vertex[graph.edges[e].first].push_back(e);
            at_vertex[graph.edges[e].second].push_back(e);
        }
        for (const auto& [v, es] : at_vertex)
            if (es.size() != 2)
                throw std::invalid_argument("loop is not closed at vertex " + std::to_string(v));
        PauliWord w = PauliWord::identity(ne, q);
        int first = *std::min_element(loop.begin(), loop.end());
        int cur_edge = first;
        int cur_vertex = graph.edges[first].second;  // traverse tail -> head
        w.zeta[first] = 1;
        std::set<int> used{first};
        while (used.size() < loop.size()) {
            const auto& es = at_vertex[cur_vertex];
            int next = (es[0] == cur_edge) ? es[1] : es[0];
            auto [t, h] = graph.edges[next];
            if (t == cur_vertex) {
                w.zeta[next] = mod_q(w.zeta[next] + 1, q);
                cur_vertex = h;
            } else {
                w.zeta[next] = mod_q(w.zeta[next] - 1, q);
                cur_vertex = t;
            }
            cur_edge = next;
            used.insert(next);
        }
        if (cur_vertex != graph.edges[first].first)
            throw std::invalid_argument("loop edges do not form a single closed cycle");
        s.generators.push_back(std::move(w));
    }
    return s;
}

std::vector<PauliWord> enumerate_group(const StabilizerGenSet& gens, size_t cap) {
    std::set<PauliWord> seen;
    std::vector<PauliWord> frontier;
    PauliWord id = PauliWord::identity(gens.n, gens.q);
    seen.insert(id);
    frontier.push_back(id);
    while (!frontier.empty()) {
        std::vector<PauliWord> next;
        for (const auto& w : frontier) {
            for (const auto& g : gens.generators) {
                PauliWord p = multiply(w, g);
                if (seen.size() >= cap && !seen.count(p))
                    throw std::runtime_error("group enumeration exceeded cap");
                if (seen.insert(p).second) next.push_back(std::move(p));
            }
        }
        frontier = std::move(next);
    }
    return std::vector<PauliWord>(seen.begin(), seen.end());
}

unsigned long long schmidt_rank(const SpinGraph& graph, const std::vector<int>& column_subset,
                                Encoding enc) {
    int lambda = connectivity(graph, column_subset, enc);
    unsigned long long r = 1;
    for (int i = 1; i < lambda; ++i) r *= static_cast<unsigned long long>(graph.q);
    return r;
}

}  // namespace spinz
