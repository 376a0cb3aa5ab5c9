#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "spinz/model.hpp"
#include "spinz/zq.hpp"

using namespace spinz;

namespace {
double dist(cplx a, cplx b) { return std::abs(a - b); }
}  // namespace

TEST_CASE("named model tables") {
    SpinGraph edge(2, 2, {{0, 1}});
    ModelParams p;
    p.edge_coupling = {1.0};
    Hamiltonian ising = make_model(ModelKind::Ising, edge, p);
    CHECK(ising.edge_terms[0].values[0] == cplx(0.0));
    CHECK(ising.edge_terms[0].values[1] == cplx(1.0));

    SpinGraph edge3(3, 2, {{0, 1}});
    Hamiltonian potts = make_model(ModelKind::Potts, edge3, p);
    CHECK(potts.edge_terms[0].values[0] == cplx(-1.0));
    CHECK(potts.edge_terms[0].values[1] == cplx(0.0));
    CHECK(potts.edge_terms[0].values[2] == cplx(0.0));

    Hamiltonian clock = make_model(ModelKind::Clock, edge, p);
    CHECK(dist(clock.edge_terms[0].values[0], cplx(-1.0)) < 1e-15);
    CHECK(dist(clock.edge_terms[0].values[1], cplx(1.0)) < 1e-15);
}

TEST_CASE("make_model errors") {
    SpinGraph edge3(3, 2, {{0, 1}});
    ModelParams p;
    p.edge_coupling = {1.0};
    CHECK_THROWS_AS(make_model(ModelKind::Ising, edge3, p), std::invalid_argument);  // q mismatch
    ModelParams empty;
    CHECK_THROWS(make_model(ModelKind::Potts, edge3, empty));  // missing coupling
    ModelParams short_table;
    short_table.edge_tables = {{cplx(1.0), cplx(2.0)}};  // length 2, need 3
    CHECK_THROWS(make_model(ModelKind::CustomDifference, edge3, short_table));
    CHECK_THROWS(model_kind_from_string("heisenberg"));
}

TEST_CASE("boltzmann weight vectors") {
    double beta = 0.8;
    SUBCASE("potts edge") {
        int q = 4;
        std::vector<cplx> table(q, cplx(0.0));
        table[0] = -1.0;
        ScaledVector w = boltzmann_weights(table, q, beta);
        cplx first = w.amplitudes[0] * std::exp(w.log_scale);
        CHECK(dist(first, std::exp(cplx(beta, 0.0))) < 1e-12);
        for (int j = 1; j < q; ++j)
            CHECK(dist(w.amplitudes[j] * std::exp(w.log_scale), cplx(1.0)) < 1e-12);
    }
    SUBCASE("ising edge") {
        std::vector<cplx> table{0.0, 1.0};
        ScaledVector w = boltzmann_weights(table, 2, beta);
        CHECK(dist(w.amplitudes[0] * std::exp(w.log_scale), cplx(1.0)) < 1e-12);
        CHECK(dist(w.amplitudes[1] * std::exp(w.log_scale), std::exp(cplx(-beta, 0.0))) < 1e-12);
    }
    SUBCASE("beta zero is all ones") {
        std::vector<cplx> table{0.3, -1.2, 2.0};
        ScaledVector w = boltzmann_weights(table, 3, 0.0);
        for (int j = 0; j < 3; ++j)
            CHECK(dist(w.amplitudes[j] * std::exp(w.log_scale), cplx(1.0)) < 1e-12);
    }
    SUBCASE("normalization convention") {
        std::vector<cplx> table{100.0, 101.0};
        ScaledVector w = boltzmann_weights(table, 2, 1.0);
        double m = std::max(std::abs(w.amplitudes[0]), std::abs(w.amplitudes[1]));
        CHECK(m <= 2.0);
        CHECK(m >= 0.5);
    }
    SUBCASE("cos multiplicity restricted to vertex tables") {
        std::vector<cplx> table{0.0, 1.0};
        CHECK_THROWS(boltzmann_weights(table, 2, 1.0, 1, false));
        ScaledVector w = boltzmann_weights(table, 2, 0.0, 1, true);
        CHECK(dist(w.amplitudes[0] * std::exp(w.log_scale), cplx(1.0)) < 1e-12);
        CHECK(dist(w.amplitudes[1] * std::exp(w.log_scale), cplx(-1.0)) < 1e-12);
    }
}

TEST_CASE("energy evaluation") {
    SpinGraph edge(2, 2, {{0, 1}});
    ModelParams p;
    p.edge_coupling = {1.0};
    Hamiltonian ising = make_model(ModelKind::Ising, edge, p);
    CHECK(energy(ising, {0, 0}) == cplx(0.0));
    CHECK(energy(ising, {0, 1}) == cplx(1.0));

    // potts q=3 edge plus field b = (0, 1, 2) on vertex 0, config (2, 2)
    SpinGraph edge3(3, 2, {{0, 1}});
    ModelParams pp;
    pp.edge_coupling = {1.0};
    Hamiltonian potts = make_model(ModelKind::Potts, edge3, pp);
    potts.vertex_terms[0] = {{cplx(0.0), cplx(1.0), cplx(2.0)}};
    CHECK(energy(potts, {2, 2}) == cplx(-1.0 + 2.0));

    CHECK_THROWS(energy(ising, {0}));      // length mismatch
    CHECK_THROWS(energy(ising, {0, 2}));   // out of range
}

TEST_CASE("ising energy from tables matches the closed form") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> cd(-2.0, 2.0);
    SpinGraph g(2, 5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}, {1, 3}});
    ModelParams p;
    std::vector<double> j(g.num_edges());
    for (auto& x : j) x = cd(rng);
    for (double x : j) p.edge_coupling.push_back(x);
    std::map<int, double> b;
    for (int v = 0; v < g.num_vertices; ++v) {
        b[v] = cd(rng);
        p.vertex_field[v] = b[v];
    }
    Hamiltonian h = make_model(ModelKind::Ising, g, p);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<int> s(g.num_vertices);
        for (auto& x : s) x = static_cast<int>(rng() % 2);
        double direct = 0.0;
        for (int e = 0; e < g.num_edges(); ++e)
            direct += j[e] * std::abs(s[g.edges[e].first] - s[g.edges[e].second]);
        for (int v = 0; v < g.num_vertices; ++v) direct += b[v] * (s[v] - 0.5);
        CHECK(dist(energy(h, s), cplx(direct)) < 1e-12);
    }
}

TEST_CASE("weights are multiplicative under table addition") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> cd(-2.0, 2.0);
    int q = 5;
    double beta = 1.3;
    std::vector<cplx> h1(q), h2(q), sum(q);
    for (int j = 0; j < q; ++j) {
        h1[j] = cplx(cd(rng), cd(rng) * 0.2);
        h2[j] = cplx(cd(rng), cd(rng) * 0.2);
        sum[j] = h1[j] + h2[j];
    }
    ScaledVector a = boltzmann_weights(h1, q, beta);
    ScaledVector b = boltzmann_weights(h2, q, beta);
    ScaledVector c = boltzmann_weights(sum, q, beta);
    for (int j = 0; j < q; ++j) {
        cplx prod = a.amplitudes[j] * b.amplitudes[j] * std::exp(a.log_scale + b.log_scale);
        cplx want = c.amplitudes[j] * std::exp(c.log_scale);
        CHECK(dist(prod, want) < 1e-10 * std::abs(want));
    }
}

TEST_CASE("q = 2 clock weights are proportional to ising weights at J = 2 eps") {
    double beta = 0.9, eps = 0.7;
    SpinGraph edge(2, 2, {{0, 1}});
    ModelParams pc;
    pc.edge_coupling = {eps};
    Hamiltonian clock = make_model(ModelKind::Clock, edge, pc);
    ModelParams pi;
    pi.edge_coupling = {2.0 * eps};
    Hamiltonian ising = make_model(ModelKind::Ising, edge, pi);
    ScaledVector wc = boltzmann_weights(clock.edge_terms[0], 2, beta);
    ScaledVector wi = boltzmann_weights(ising.edge_terms[0], 2, beta);
    cplx ratio0 = wc.amplitudes[0] / wi.amplitudes[0];
    cplx ratio1 = wc.amplitudes[1] / wi.amplitudes[1];
    CHECK(dist(ratio0, ratio1) < 1e-12);
}

TEST_CASE("conversions preserve the energy function") {
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> cd(-2.0, 2.0);
    SpinGraph g(3, 4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    ModelParams p;
    for (int e = 0; e < 4; ++e) {
        std::vector<cplx> t(3);
        for (auto& x : t) x = cd(rng);
        p.edge_tables.push_back(t);
    }
    for (int v = 0; v < 4; ++v) {
        std::vector<cplx> t(3);
        for (auto& x : t) x = cd(rng);
        p.vertex_tables[v] = t;
    }
    Hamiltonian h = make_model(ModelKind::CustomDifference, g, p);
    Hamiltonian hp = to_pairwise(h);
    Hamiltonian hk = to_kbody(h);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<int> s(4);
        for (auto& x : s) x = static_cast<int>(rng() % 3);
        cplx e0 = energy(h, s);
        CHECK(dist(energy(hp, s), e0) < 1e-12);
        CHECK(dist(energy(hk, s), e0) < 1e-12);
    }
}
