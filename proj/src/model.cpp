#include "spinz/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "spinz/zq.hpp"

namespace spinz {

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::Ising: return "ising";
        case ModelKind::Potts: return "potts";
        case ModelKind::Clock: return "clock";
        case ModelKind::CustomDifference: return "custom-difference";
        case ModelKind::CustomPairwise: return "custom-pairwise";
        case ModelKind::CustomKBody: return "custom-kbody";
    }
    return "?";
}

ModelKind model_kind_from_string(const std::string& s) {
    if (s == "ising") return ModelKind::Ising;
    if (s == "potts") return ModelKind::Potts;
    if (s == "clock") return ModelKind::Clock;
    if (s == "custom-difference") return ModelKind::CustomDifference;
    if (s == "custom-pairwise") return ModelKind::CustomPairwise;
    if (s == "custom-kbody") return ModelKind::CustomKBody;
    throw std::invalid_argument("unknown model kind: " + s);
}

void Hamiltonian::validate() const {
    graph.validate();
    const int q = graph.q;
    const size_t ne = graph.edges.size();
    switch (form) {
        case TermForm::Difference:
            if (edge_terms.size() != ne) throw std::invalid_argument("one edge table per edge required");
            for (const auto& t : edge_terms)
                if (static_cast<int>(t.values.size()) != q)
                    throw std::invalid_argument("edge table length must equal q");
            break;
        case TermForm::Pairwise:
            if (pairwise_terms.size() != ne) throw std::invalid_argument("one pairwise table per edge required");
            for (const auto& t : pairwise_terms)
                if (static_cast<int>(t.values.size()) != q * q)
                    throw std::invalid_argument("pairwise table length must equal q*q");
            if (!vertex_terms.empty())
                throw std::invalid_argument("pairwise models carry fields inside their tables");
            break;
        case TermForm::KBody:
            for (const auto& t : kbody_terms) {
                if (t.sites.empty()) throw std::invalid_argument("k-body term needs at least one site");
                size_t want = 1;
                for (size_t i = 0; i < t.sites.size(); ++i) {
                    int v = t.sites[i];
                    if (v < 0 || v >= graph.num_vertices)
                        throw std::invalid_argument("k-body term references unknown vertex");
                    for (size_t j = i + 1; j < t.sites.size(); ++j)
                        if (t.sites[j] == v) throw std::invalid_argument("k-body sites must be distinct");
                    want *= static_cast<size_t>(q);
                }
                if (t.values.size() != want)
                    throw std::invalid_argument("k-body table length must equal q^k");
            }
            break;
    }
    for (const auto& [v, t] : vertex_terms) {
        if (v < 0 || v >= graph.num_vertices)
            throw std::invalid_argument("field references unknown vertex");
        if (static_cast<int>(t.values.size()) != q)
            throw std::invalid_argument("field table length must equal q");
    }
}

Hamiltonian make_model(ModelKind kind, const SpinGraph& graph, const ModelParams& params) {
    graph.validate();
    const int q = graph.q;
    const int ne = graph.num_edges();
    Hamiltonian h;
    h.graph = graph;

    auto edge_coupling = [&](int e) -> cplx {
        if (e >= static_cast<int>(params.edge_coupling.size()))
            throw std::invalid_argument("missing coupling for edge " + std::to_string(e));
        return params.edge_coupling[e];
    };

    switch (kind) {
        case ModelKind::Ising: {
            if (q != 2) throw std::invalid_argument("ising requires q = 2");
            h.form = TermForm::Difference;
            for (int e = 0; e < ne; ++e) {
                cplx j = edge_coupling(e);
                h.edge_terms.push_back({{cplx(0.0), j}});  // h_e(d) = J_e * d
            }
            for (const auto& [v, b] : params.vertex_field) {
                if (v < 0 || v >= graph.num_vertices)
                    throw std::invalid_argument("field references unknown vertex " + std::to_string(v));
                h.vertex_terms[v] = {{-0.5 * b, 0.5 * b}};  // b_v(s) = B_v (s - 1/2)
            }
            break;
        }
        case ModelKind::Potts: {
            h.form = TermForm::Difference;
            for (int e = 0; e < ne; ++e) {
                cplx eps = edge_coupling(e);
                std::vector<cplx> t(q, cplx(0.0));
                t[0] = -eps;
                h.edge_terms.push_back({std::move(t)});
            }
            break;
        }
        case ModelKind::Clock: {
            h.form = TermForm::Difference;
            for (int e = 0; e < ne; ++e) {
                cplx eps = edge_coupling(e);
                std::vector<cplx> t(q);
                for (int j = 0; j < q; ++j)
                    t[j] = -eps * std::cos(2.0 * std::numbers::pi * j / q);
                h.edge_terms.push_back({std::move(t)});
            }
            break;
        }
        case ModelKind::CustomDifference: {
            h.form = TermForm::Difference;
            if (static_cast<int>(params.edge_tables.size()) != ne)
                throw std::invalid_argument("custom-difference needs one table per edge");
            for (const auto& t : params.edge_tables) h.edge_terms.push_back({t});
            for (const auto& [v, t] : params.vertex_tables) h.vertex_terms[v] = {t};
            break;
        }
        case ModelKind::CustomPairwise: {
            h.form = TermForm::Pairwise;
            if (static_cast<int>(params.edge_tables.size()) != ne)
                throw std::invalid_argument("custom-pairwise needs one table per edge");
            for (const auto& t : params.edge_tables) h.pairwise_terms.push_back({t});
            break;
        }
        case ModelKind::CustomKBody: {
            h.form = TermForm::KBody;
            h.kbody_terms = params.kbody;
            break;
        }
    }
    h.validate();
    return h;
}

ScaledVector boltzmann_weights(const std::vector<cplx>& table, int q, double beta,
                               int cos_multiplicity, bool is_vertex_table) {
    if (!std::isfinite(beta)) throw std::invalid_argument("beta must be finite");
    if (cos_multiplicity < 0) throw std::invalid_argument("cos multiplicity must be >= 0");
    if (cos_multiplicity > 0 && !is_vertex_table)
        throw std::invalid_argument("cos weights only apply to vertex tables");
    ScaledVector w;
    w.amplitudes.resize(table.size());
    for (size_t j = 0; j < table.size(); ++j) {
        cplx a = std::exp(-beta * table[j]);
        if (cos_multiplicity > 0) {
            double c = std::cos(2.0 * std::numbers::pi * static_cast<double>(j) / q);
            a *= std::pow(c, cos_multiplicity);
        }
        w.amplitudes[j] = a;
    }
    w.normalize();
    return w;
}

ScaledVector boltzmann_weights(const EdgeEnergyTable& t, int q, double beta) {
    if (static_cast<int>(t.values.size()) != q) throw std::invalid_argument("edge table length mismatch");
    return boltzmann_weights(t.values, q, beta);
}

ScaledVector boltzmann_weights(const VertexFieldTable& t, int q, double beta, int cos_multiplicity) {
    if (static_cast<int>(t.values.size()) != q) throw std::invalid_argument("field table length mismatch");
    return boltzmann_weights(t.values, q, beta, cos_multiplicity, true);
}

ScaledVector boltzmann_weights(const PairwiseTable& t, int q, double beta) {
    if (static_cast<int>(t.values.size()) != q * q) throw std::invalid_argument("pairwise table length mismatch");
    return boltzmann_weights(t.values, q, beta);
}

ScaledVector boltzmann_weights(const KBodyTerm& t, int q, double beta) {
    return boltzmann_weights(t.values, q, beta);
}

cplx energy(const Hamiltonian& h, const std::vector<int>& config) {
    const int q = h.graph.q;
    if (static_cast<int>(config.size()) != h.graph.num_vertices)
        throw std::invalid_argument("configuration length mismatch");
    for (int s : config)
        if (s < 0 || s >= q) throw std::invalid_argument("spin value out of range");
    cplx total(0.0);
    switch (h.form) {
        case TermForm::Difference:
            for (int e = 0; e < h.graph.num_edges(); ++e) {
                auto [t, hd] = h.graph.edges[e];
                int d = mod_q(config[hd] - config[t], q);
                total += h.edge_terms[e].values[d];
            }
            break;
        case TermForm::Pairwise:
            for (int e = 0; e < h.graph.num_edges(); ++e) {
                auto [t, hd] = h.graph.edges[e];
                total += h.pairwise_terms[e].values[config[t] * q + config[hd]];
            }
            break;
        case TermForm::KBody:
            for (const auto& term : h.kbody_terms) {
                size_t idx = 0;
                for (int v : term.sites) idx = idx * q + config[v];
                total += term.values[idx];
            }
            break;
    }
    for (const auto& [v, t] : h.vertex_terms) total += t.values[config[v]];
    return total;
}

Hamiltonian to_pairwise(const Hamiltonian& h) {
    if (h.form != TermForm::Difference)
        throw std::invalid_argument("to_pairwise expects a difference-form model");
    const int q = h.graph.q;
    Hamiltonian p;
    p.graph = h.graph;
    p.form = TermForm::Pairwise;
    std::vector<int> deg = h.graph.degrees();
    for (int e = 0; e < h.graph.num_edges(); ++e) {
        auto [t, hd] = h.graph.edges[e];
        PairwiseTable tab;
        tab.values.resize(static_cast<size_t>(q) * q);
        for (int si = 0; si < q; ++si)
            for (int sj = 0; sj < q; ++sj) {
                cplx v = h.edge_terms[e].values[mod_q(sj - si, q)];
                if (auto it = h.vertex_terms.find(t); it != h.vertex_terms.end())
                    v += it->second.values[si] / static_cast<double>(deg[t]);
                if (auto it = h.vertex_terms.find(hd); it != h.vertex_terms.end())
                    v += it->second.values[sj] / static_cast<double>(deg[hd]);
                tab.values[static_cast<size_t>(si) * q + sj] = v;
            }
        p.pairwise_terms.push_back(std::move(tab));
    }
    // a field on an isolated vertex has no edge to ride on
    for (const auto& [v, t] : h.vertex_terms)
        if (deg[v] == 0) p.kbody_terms.push_back({{v}, t.values});
    p.validate();
    return p;
}

Hamiltonian to_kbody(const Hamiltonian& h) {
    const int q = h.graph.q;
    Hamiltonian k;
    k.graph = h.graph;
    k.form = TermForm::KBody;
    if (h.form == TermForm::KBody) {
        k.kbody_terms = h.kbody_terms;
    } else {
        for (int e = 0; e < h.graph.num_edges(); ++e) {
            auto [t, hd] = h.graph.edges[e];
            KBodyTerm term;
            term.sites = {t, hd};
            term.values.resize(static_cast<size_t>(q) * q);
            for (int si = 0; si < q; ++si)
                for (int sj = 0; sj < q; ++sj)
                    term.values[static_cast<size_t>(si) * q + sj] =
                        h.form == TermForm::Difference
                            ? h.edge_terms[e].values[mod_q(sj - si, q)]
                            : h.pairwise_terms[e].values[static_cast<size_t>(si) * q + sj];
            k.kbody_terms.push_back(std::move(term));
        }
    }
    for (const auto& [v, t] : h.vertex_terms) k.kbody_terms.push_back({{v}, t.values});
    k.validate();
    return k;
}

}  // namespace spinz
