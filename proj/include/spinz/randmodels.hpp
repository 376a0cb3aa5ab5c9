#ifndef SPINZ_RANDMODELS_HPP
#define SPINZ_RANDMODELS_HPP

#include <random>

#include "spinz/model.hpp"

namespace spinz {

// Random desk-scale instances for validation and acceptance runs.
struct RandomModelGen {
    std::mt19937_64 rng;
    explicit RandomModelGen(uint64_t seed) : rng(seed) {}

    int uniform_int(int lo, int hi) {  // inclusive
        return lo + static_cast<int>(rng() % static_cast<uint64_t>(hi - lo + 1));
    }
    double coupling() {
        std::uniform_real_distribution<double> d(-2.0, 2.0);
        return d(rng);
    }
    double beta() {
        std::uniform_real_distribution<double> d(0.05, 2.0);
        return d(rng);
    }

    SpinGraph graph(int q, int max_vertices = 8, int max_edges = 12) {
        int nv = uniform_int(2, max_vertices);
        int ne = uniform_int(1, max_edges);
        std::vector<std::pair<int, int>> edges;
        for (int e = 0; e < ne; ++e) {
            int t = uniform_int(0, nv - 1);
            int h = uniform_int(0, nv - 1);
            if (t == h) h = (h + 1) % nv;
            edges.push_back({t, h});
        }
        return SpinGraph(q, nv, std::move(edges));
    }

    Hamiltonian difference_model(const SpinGraph& g, bool with_fields) {
        ModelParams p;
        for (int e = 0; e < g.num_edges(); ++e) {
            std::vector<cplx> t(g.q);
            for (auto& x : t) x = coupling();
            p.edge_tables.push_back(std::move(t));
        }
        if (with_fields)
            for (int v = 0; v < g.num_vertices; ++v) {
                std::vector<cplx> t(g.q);
                for (auto& x : t) x = coupling();
                p.vertex_tables[v] = std::move(t);
            }
        return make_model(ModelKind::CustomDifference, g, p);
    }

    Hamiltonian pairwise_model(const SpinGraph& g) {
        ModelParams p;
        for (int e = 0; e < g.num_edges(); ++e) {
            std::vector<cplx> t(static_cast<size_t>(g.q) * g.q);
            for (auto& x : t) x = coupling();
            p.edge_tables.push_back(std::move(t));
        }
        return make_model(ModelKind::CustomPairwise, g, p);
    }

    Hamiltonian kbody_model(int q, int nv, int num_terms, int max_k) {
        SpinGraph g(q, nv, {});
        ModelParams p;
        for (int t = 0; t < num_terms; ++t) {
            int k = uniform_int(1, std::min(max_k, nv));
            std::vector<int> sites;
            while (static_cast<int>(sites.size()) < k) {
                int v = uniform_int(0, nv - 1);
                if (std::find(sites.begin(), sites.end(), v) == sites.end()) sites.push_back(v);
            }
            size_t len = 1;
            for (int i = 0; i < k; ++i) len *= static_cast<size_t>(q);
            std::vector<cplx> tab(len);
            for (auto& x : tab) x = coupling();
            p.kbody.push_back({std::move(sites), std::move(tab)});
        }
        return make_model(ModelKind::CustomKBody, g, p);
    }
};

}  // namespace spinz

#endif
