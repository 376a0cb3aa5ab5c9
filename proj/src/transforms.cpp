#include "spinz/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "spinz/zq.hpp"

namespace spinz {

void RotationSystem::validate(const SpinGraph& graph) const {
    if (static_cast<int>(order.size()) != graph.num_vertices)
        throw std::invalid_argument("rotation system needs one cycle per vertex");
    std::vector<int> count(graph.num_edges(), 0);
    for (int v = 0; v < graph.num_vertices; ++v) {
        for (int e : order[v]) {
            if (e < 0 || e >= graph.num_edges())
                throw std::invalid_argument("rotation system references unknown edge");
            auto [t, h] = graph.edges[e];
            if (t != v && h != v)
                throw std::invalid_argument("rotation at vertex lists a non-incident edge");
            count[e]++;
        }
    }
    for (int e = 0; e < graph.num_edges(); ++e)
        if (count[e] != 2)
            throw std::invalid_argument("every edge end must appear exactly once");
}

RotationSystem embedding_from_coordinates(const SpinGraph& graph,
                                          const std::vector<std::pair<double, double>>& pos) {
    if (static_cast<int>(pos.size()) != graph.num_vertices)
        throw std::invalid_argument("one coordinate per vertex required");
    RotationSystem rot;
    rot.order.resize(graph.num_vertices);
    for (int v = 0; v < graph.num_vertices; ++v) {
        std::vector<std::pair<double, int>> angled;
        for (int e = 0; e < graph.num_edges(); ++e) {
            auto [t, h] = graph.edges[e];
            if (t != v && h != v) continue;
            int other = t == v ? h : t;
            double ang = std::atan2(pos[other].second - pos[v].second,
                                    pos[other].first - pos[v].first);
            angled.push_back({ang, e});
        }
        std::sort(angled.begin(), angled.end());
        for (auto& [a, e] : angled) rot.order[v].push_back(e);
    }
    rot.validate(graph);
    return rot;
}

ScaledVector fourier_weights(const ScaledVector& w) {
    const int q = static_cast<int>(w.amplitudes.size());
    ScaledVector out;
    out.log_scale = w.log_scale;
    out.amplitudes.assign(q, cplx(0.0));
    double norm = 1.0 / std::sqrt(static_cast<double>(q));
    for (int j = 0; j < q; ++j) {
        cplx s(0.0);
        for (int k = 0; k < q; ++k)
            s += std::polar(1.0, -2.0 * std::numbers::pi * k * j / q) * w.amplitudes[k];
        out.amplitudes[j] = norm * s;
    }
    out.normalize();
    return out;
}

cplx potts_dual_coupling(cplx e_beta_j, int q) {
    cplx denom = e_beta_j - 1.0;
    if (denom == cplx(0.0)) throw std::domain_error("dual Potts coupling diverges at e^{beta J} = 1");
    return (e_beta_j + static_cast<double>(q - 1)) / denom;
}

PlanarDual planar_dual(const SpinGraph& graph, const RotationSystem& embedding) {
    graph.validate();
    embedding.validate(graph);
    if (graph.num_components() != 1)
        throw std::invalid_argument("planar dual needs a connected graph");
    const int ne = graph.num_edges();

    // half-edge h = 2e + dir; dir 0 runs tail->head
    auto target = [&](int h) {
        auto [t, hd] = graph.edges[h / 2];
        return h % 2 == 0 ? hd : t;
    };
    // successor of edge e in the rotation at vertex v
    std::vector<std::map<int, int>> next_at(graph.num_vertices);
    for (int v = 0; v < graph.num_vertices; ++v) {
        const auto& cyc = embedding.order[v];
        for (size_t i = 0; i < cyc.size(); ++i) next_at[v][cyc[i]] = cyc[(i + 1) % cyc.size()];
    }
    auto next_half_edge = [&](int h) {
        int w = target(h);
        int e2 = next_at[w].at(h / 2);
        auto [t2, h2] = graph.edges[e2];
        return 2 * e2 + (t2 == w ? 0 : 1);
    };

    std::vector<int> face_of(2 * ne, -1);
    int num_faces = 0;
    for (int start = 0; start < 2 * ne; ++start) {
        if (face_of[start] >= 0) continue;
        int h = start;
        do {
            face_of[h] = num_faces;
            h = next_half_edge(h);
        } while (h != start);
        num_faces++;
    }
    for (int e = 0; e < ne; ++e)
        if (face_of[2 * e] == face_of[2 * e + 1])
            throw std::invalid_argument("edge " + std::to_string(e) +
                                        " is a bridge; its dual would be a self-loop");
    if (graph.num_vertices - ne + num_faces != 2)
        throw std::invalid_argument("embedding fails the Euler check (not planar?)");

    PlanarDual d;
    d.num_faces = num_faces;
    std::vector<std::pair<int, int>> dual_edges;
    d.edge_map.resize(ne);
    for (int e = 0; e < ne; ++e) {
        d.edge_map[e] = e;
        dual_edges.push_back({face_of[2 * e], face_of[2 * e + 1]});
    }
    d.dual = SpinGraph(graph.q, num_faces, std::move(dual_edges));
    return d;
}

Hamiltonian dual_model(const Hamiltonian& h, const RotationSystem& embedding, double beta) {
    h.validate();
    if (h.form != TermForm::Difference || h.has_fields() || !h.kbody_terms.empty())
        throw std::invalid_argument("duality applies to difference-form models without fields");
    if (beta == 0.0) throw std::invalid_argument("dual energy tables need beta != 0");
    PlanarDual pd = planar_dual(h.graph, embedding);
    const int q = h.graph.q;
    Hamiltonian out;
    out.graph = pd.dual;
    out.form = TermForm::Difference;
    out.edge_terms.resize(h.graph.num_edges());
    for (int e = 0; e < h.graph.num_edges(); ++e) {
        ScaledVector w = fourier_weights(boltzmann_weights(h.edge_terms[e], q, beta));
        EdgeEnergyTable t;
        t.values.resize(q);
        for (int j = 0; j < q; ++j) {
            cplx amp = w.amplitudes[j];
            if (amp == cplx(0.0))
                throw std::domain_error("vanishing dual weight; dual energy undefined for edge " +
                                        std::to_string(e));
            t.values[j] = -(std::log(amp) + w.log_scale) / beta;
        }
        out.edge_terms[pd.edge_map[e]] = std::move(t);
    }
    out.validate();
    return out;
}

Hamiltonian vertex_flip(const Hamiltonian& h, int vertex) {
    h.validate();
    if (h.graph.q != 2) throw std::invalid_argument("vertex_flip is the q = 2 form; use apply_symmetry otherwise");
    if (h.form != TermForm::Difference)
        throw std::invalid_argument("vertex_flip applies to difference-form models");
    if (vertex < 0 || vertex >= h.graph.num_vertices)
        throw std::invalid_argument("unknown vertex");
    Hamiltonian out = h;
    for (int e = 0; e < h.graph.num_edges(); ++e) {
        auto [t, hd] = h.graph.edges[e];
        if (t == vertex || hd == vertex)
            std::swap(out.edge_terms[e].values[0], out.edge_terms[e].values[1]);
    }
    if (auto it = out.vertex_terms.find(vertex); it != out.vertex_terms.end())
        std::swap(it->second.values[0], it->second.values[1]);
    return out;
}

namespace {

// canonical phase of the stabilizer element with the given exponents, or
// nullopt if (xi|zeta) is not generated
std::optional<int> stabilizer_phase(const StabilizerGenSet& gens, const PauliWord& word) {
    const int n = gens.n;
    const int q = gens.q;
    std::vector<ZqVec> rows;
    for (const auto& g : gens.generators) {
        ZqVec r(2 * n);
        std::copy(g.xi.begin(), g.xi.end(), r.begin());
        std::copy(g.zeta.begin(), g.zeta.end(), r.begin() + n);
        rows.push_back(std::move(r));
    }
    ZqVec target(2 * n);
    std::copy(word.xi.begin(), word.xi.end(), target.begin());
    std::copy(word.zeta.begin(), word.zeta.end(), target.begin() + n);
    auto combo = solve_combination(q, 2 * n, rows, target);
    if (!combo) return std::nullopt;
    PauliWord acc = PauliWord::identity(n, q);
    for (size_t i = 0; i < combo->size(); ++i)
        for (int rep = 0; rep < (*combo)[i]; ++rep) acc = multiply(acc, gens.generators[i]);
    return acc.phase_num;
}

}  // namespace

std::vector<ScaledVector> apply_symmetry(const std::vector<ScaledVector>& weights,
                                         const PauliWord& word, const SpinGraph& graph,
                                         Encoding enc) {
    if (enc != Encoding::Psi && enc != Encoding::Phi)
        throw std::invalid_argument("stabilizer symmetries cover the psi and phi encodings");
    const int q = graph.q;
    StabilizerGenSet gens = enc == Encoding::Psi ? psi_generators(graph) : phi_generators(graph);
    if (word.n != gens.n || word.q != q) throw std::invalid_argument("word size mismatch");
    if (static_cast<int>(weights.size()) != gens.n)
        throw std::invalid_argument("one weight vector per site required");
    std::optional<int> phase = stabilizer_phase(gens, word);
    if (!phase || *phase != word.phase_num)
        throw std::invalid_argument("word is not an element of the stabilizer; Z would change");

    std::vector<ScaledVector> out(weights.size());
    for (int site = 0; site < gens.n; ++site) {
        const ScaledVector& w = weights[site];
        if (static_cast<int>(w.amplitudes.size()) != q)
            throw std::invalid_argument("site weight vectors must have length q");
        ScaledVector t;
        t.log_scale = w.log_scale;
        t.amplitudes.resize(q);
        int v = word.xi[site];
        int u = word.zeta[site];
        for (int j = 0; j < q; ++j) {
            int src = mod_q(j - v, q);
            t.amplitudes[j] =
                w.amplitudes[src] * std::polar(1.0, 2.0 * std::numbers::pi * u * src / q);
        }
        out[site] = std::move(t);
    }
    // global phase of the word
    if (word.phase_num != 0 && !out.empty())
        for (auto& a : out[0].amplitudes)
            a *= std::polar(1.0, 2.0 * std::numbers::pi * word.phase_num / q);
    return out;
}

PauliWord sample_stabilizer_word(const StabilizerGenSet& gens, std::mt19937_64& rng) {
    PauliWord acc = PauliWord::identity(gens.n, gens.q);
    std::uniform_int_distribution<int> exp(0, gens.q - 1);
    for (const auto& g : gens.generators) {
        int k = exp(rng);
        for (int i = 0; i < k; ++i) acc = multiply(acc, g);
    }
    return acc;
}

namespace families {

SpinGraph path(int num_vertices, int q) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i + 1 < num_vertices; ++i) edges.push_back({i, i + 1});
    return SpinGraph(q, num_vertices, std::move(edges));
}

SpinGraph cycle(int num_vertices, int q) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < num_vertices; ++i) edges.push_back({i, (i + 1) % num_vertices});
    return SpinGraph(q, num_vertices, std::move(edges));
}

SpinGraph grid(int rows, int cols, int q) {
    std::vector<std::pair<int, int>> edges;
    auto id = [&](int r, int c) { return r * cols + c; };
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols) edges.push_back({id(r, c), id(r, c + 1)});
            if (r + 1 < rows) edges.push_back({id(r, c), id(r + 1, c)});
        }
    return SpinGraph(q, rows * cols, std::move(edges));
}

SpinGraph ladder(int rungs, int q) { return grid(2, rungs, q); }

SpinGraph wheel(int rim_vertices, int q) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < rim_vertices; ++i)
        edges.push_back({1 + i, 1 + (i + 1) % rim_vertices});
    for (int i = 0; i < rim_vertices; ++i) edges.push_back({0, 1 + i});
    return SpinGraph(q, rim_vertices + 1, std::move(edges));
}

SpinGraph complete(int num_vertices, int q) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < num_vertices; ++i)
        for (int j = i + 1; j < num_vertices; ++j) edges.push_back({i, j});
    return SpinGraph(q, num_vertices, std::move(edges));
}

std::pair<SpinGraph, std::vector<std::vector<int>>> toric(int rows, int cols, int q) {
    // edge ids: right edges first (r*cols+c), then down edges
    std::vector<std::pair<int, int>> edges;
    auto id = [&](int r, int c) { return ((r + rows) % rows) * cols + ((c + cols) % cols); };
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) edges.push_back({id(r, c), id(r, c + 1)});
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) edges.push_back({id(r, c), id(r + 1, c)});
    SpinGraph g(q, rows * cols, std::move(edges));
    auto right = [&](int r, int c) { return ((r + rows) % rows) * cols + ((c + cols) % cols); };
    auto down = [&](int r, int c) { return rows * cols + ((r + rows) % rows) * cols + ((c + cols) % cols); };
    std::vector<std::vector<int>> plaquettes;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            plaquettes.push_back({right(r, c), down(r, c + 1), right(r + 1, c), down(r, c)});
    return {g, plaquettes};
}

RotationSystem cycle_embedding(const SpinGraph& g) {
    std::vector<std::pair<double, double>> pos(g.num_vertices);
    for (int i = 0; i < g.num_vertices; ++i) {
        double a = 2.0 * std::numbers::pi * i / g.num_vertices;
        pos[i] = {std::cos(a), std::sin(a)};
    }
    return embedding_from_coordinates(g, pos);
}

RotationSystem grid_embedding(const SpinGraph& g, int rows, int cols) {
    std::vector<std::pair<double, double>> pos(g.num_vertices);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) pos[r * cols + c] = {static_cast<double>(c), -static_cast<double>(r)};
    return embedding_from_coordinates(g, pos);
}

RotationSystem wheel_embedding(const SpinGraph& g, int rim_vertices) {
    std::vector<std::pair<double, double>> pos(g.num_vertices);
    pos[0] = {0.0, 0.0};
    for (int i = 0; i < rim_vertices; ++i) {
        double a = 2.0 * std::numbers::pi * i / rim_vertices;
        pos[1 + i] = {std::cos(a), std::sin(a)};
    }
    return embedding_from_coordinates(g, pos);
}

}  // namespace families
}  // namespace spinz
