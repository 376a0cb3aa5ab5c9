#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spinz/contraction.hpp"
#include "spinz/oracle.hpp"
#include "spinz/randmodels.hpp"
#include "spinz/transforms.hpp"

using namespace spinz;

namespace {

cplx entry(const ScaledVector& w, int j) { return w.amplitudes[j] * std::exp(w.log_scale); }

}  // namespace

TEST_CASE("fourier weights") {
    SUBCASE("constant vector") {
        ScaledVector ones;
        ones.amplitudes = {cplx(1.0), cplx(1.0)};
        ScaledVector f = fourier_weights(ones);
        CHECK(std::abs(entry(f, 0) - std::sqrt(2.0)) < 1e-12);
        CHECK(std::abs(entry(f, 1)) < 1e-12);
    }
    SUBCASE("ising weights") {
        double beta = 0.8, j = 1.1;
        double x = std::exp(-beta * j);
        ScaledVector w;
        w.amplitudes = {cplx(1.0), cplx(x)};
        ScaledVector f = fourier_weights(w);
        CHECK(std::abs(entry(f, 0) - (1.0 + x) / std::sqrt(2.0)) < 1e-12);
        CHECK(std::abs(entry(f, 1) - (1.0 - x) / std::sqrt(2.0)) < 1e-12);
    }
    SUBCASE("potts weights") {
        int q = 5;
        double bj = 0.9;
        double e = std::exp(bj);
        ScaledVector w;
        w.amplitudes.assign(q, cplx(1.0));
        w.amplitudes[0] = e;
        ScaledVector f = fourier_weights(w);
        CHECK(std::abs(entry(f, 0) - (e + q - 1) / std::sqrt(double(q))) < 1e-12);
        for (int j = 1; j < q; ++j)
            CHECK(std::abs(entry(f, j) - (e - 1) / std::sqrt(double(q))) < 1e-12);
    }
    SUBCASE("fourth power is the identity") {
        RandomModelGen gen(314);
        for (int q : {2, 3, 4, 6, 7}) {
            ScaledVector w;
            for (int j = 0; j < q; ++j)
                w.amplitudes.push_back(cplx(gen.coupling(), gen.coupling()));
            w.normalize();
            ScaledVector f = fourier_weights(fourier_weights(fourier_weights(fourier_weights(w))));
            for (int j = 0; j < q; ++j) CHECK(std::abs(entry(f, j) - entry(w, j)) < 1e-12);
            // F^2 is index reversal
            ScaledVector f2 = fourier_weights(fourier_weights(w));
            for (int j = 0; j < q; ++j)
                CHECK(std::abs(entry(f2, j) - entry(w, mod_q(-j, q))) < 1e-12);
        }
    }
}

TEST_CASE("potts dual coupling") {
    cplx e2 = potts_dual_coupling(cplx(3.0), 2);
    CHECK(std::abs(e2 - cplx(2.0)) < 1e-14);
    RandomModelGen gen(999);
    for (int trial = 0; trial < 100; ++trial) {
        int q = gen.uniform_int(2, 8);
        double bj = gen.coupling() * 1.5;
        cplx e = std::exp(cplx(bj, 0.0));
        cplx d = potts_dual_coupling(e, q);
        CHECK(std::abs((d - 1.0) * (e - 1.0) - double(q)) < 1e-12);
        CHECK(std::abs(potts_dual_coupling(d, q) - e) < 1e-9 * std::abs(e));
    }
    CHECK_THROWS(potts_dual_coupling(cplx(1.0), 3));
}

TEST_CASE("planar dual fixtures") {
    SUBCASE("triangle: two faces joined by three parallel edges") {
        SpinGraph tri = families::cycle(3, 2);
        PlanarDual d = planar_dual(tri, families::cycle_embedding(tri));
        CHECK(d.num_faces == 2);
        CHECK(d.dual.num_vertices == 2);
        CHECK(d.dual.num_edges() == 3);
    }
    SUBCASE("4-cycle: two faces, four parallel edges") {
        SpinGraph c4 = families::cycle(4, 3);
        PlanarDual d = planar_dual(c4, families::cycle_embedding(c4));
        CHECK(d.dual.num_vertices == 2);
        CHECK(d.dual.num_edges() == 4);
    }
    SUBCASE("2x2 grid passes the Euler check") {
        SpinGraph g = families::grid(2, 2, 2);
        PlanarDual d = planar_dual(g, families::grid_embedding(g, 2, 2));
        CHECK(d.num_faces == 2);  // one inner plus the outer face
    }
    SUBCASE("dual cut space is the orthogonal complement of the primal one") {
        for (int q : {2, 3, 4}) {
            SpinGraph g = families::grid(3, 3, q);
            PlanarDual d = planar_dual(g, families::grid_embedding(g, 3, 3));
            CHECK(cut_space(d.dual).equals(orthogonal_complement(cut_space(g))));
        }
    }
    SUBCASE("bridges are refused") {
        SpinGraph path = families::path(3, 2);
        std::vector<std::pair<double, double>> pos{{0, 0}, {1, 0}, {2, 0}};
        CHECK_THROWS_WITH_AS(planar_dual(path, embedding_from_coordinates(path, pos)),
                             doctest::Contains("bridge"), std::invalid_argument);
    }
    SUBCASE("non-planar graphs fail the Euler check") {
        SpinGraph k5 = families::complete(5, 2);
        std::vector<std::pair<double, double>> pos;
        for (int i = 0; i < 5; ++i)
            pos.push_back({std::cos(2 * std::numbers::pi * i / 5),
                           std::sin(2 * std::numbers::pi * i / 5)});
        CHECK_THROWS_WITH_AS(planar_dual(k5, embedding_from_coordinates(k5, pos)),
                             doctest::Contains("Euler"), std::invalid_argument);
    }
}

TEST_CASE("dual model") {
    SUBCASE("potts dual is a potts model with the dual coupling") {
        int q = 3;
        double beta = 0.7, j = 1.2;
        SpinGraph g = families::grid(2, 2, q);
        ModelParams p;
        p.edge_coupling.assign(g.num_edges(), cplx(j));
        Hamiltonian h = make_model(ModelKind::Potts, g, p);
        Hamiltonian d = dual_model(h, families::grid_embedding(g, 2, 2), beta);
        for (int e = 0; e < d.graph.num_edges(); ++e) {
            // equal energies away from zero difference
            for (int k = 2; k < q; ++k)
                CHECK(std::abs(d.edge_terms[e].values[k] - d.edge_terms[e].values[1]) < 1e-9);
            cplx ratio = std::exp(-beta * (d.edge_terms[e].values[0] - d.edge_terms[e].values[1]));
            cplx want = potts_dual_coupling(std::exp(cplx(beta * j, 0.0)), q);
            CHECK(std::abs(ratio - want) < 1e-9);
        }
    }
    SUBCASE("partition functions agree up to the pinned scalar") {
        RandomModelGen gen(404);
        SpinGraph g = families::grid(3, 3, 2);
        RotationSystem rot = families::grid_embedding(g, 3, 3);
        PlanarDual pd = planar_dual(g, rot);
        double beta = 1.0;
        // pin the scalar with the all-ones weights
        auto z_psi = [&](const SpinGraph& graph, const std::vector<ScaledVector>& w) {
            LeafStructure ls = leaf_structure(graph, Encoding::Psi);
            BranchDecomposition bd = heuristic_branch_decompose(ls, Strategy::GreedyMerge);
            return contract_weights(ls, graph.q, bd, w, uint64_t(1) << 20);
        };
        double log_s;
        {
            std::vector<ScaledVector> ones(g.num_edges()), dw(g.num_edges());
            for (int e = 0; e < g.num_edges(); ++e) {
                ones[e].amplitudes.assign(2, cplx(1.0));
                dw[pd.edge_map[e]] = fourier_weights(ones[e]);
            }
            log_s = (z_psi(g, ones) / z_psi(pd.dual, dw)).log().real();
        }
        for (int trial = 0; trial < 5; ++trial) {
            ModelParams p;
            for (int e = 0; e < g.num_edges(); ++e) p.edge_coupling.push_back(gen.coupling());
            Hamiltonian h = make_model(ModelKind::Ising, g, p);
            Hamiltonian d = dual_model(h, rot, beta);
            ScaledComplex zg = oracle::partition_exact(h, beta);
            ScaledComplex zd = oracle::partition_exact(d, beta);
            ScaledComplex scaled{zd.mantissa, zd.log_scale + log_s};
            CHECK(relative_error(zg, scaled) < 1e-9);
        }
    }
    SUBCASE("models with fields are refused") {
        SpinGraph g = families::cycle(4, 2);
        ModelParams p;
        p.edge_coupling.assign(4, cplx(1.0));
        p.vertex_field[0] = 0.5;
        Hamiltonian h = make_model(ModelKind::Ising, g, p);
        CHECK_THROWS(dual_model(h, families::cycle_embedding(g), 1.0));
    }
}

TEST_CASE("vertex flip") {
    RandomModelGen gen(555);
    SUBCASE("single edge table reorders") {
        SpinGraph g(2, 2, {{0, 1}});
        ModelParams p;
        p.edge_coupling = {1.0};
        Hamiltonian h = make_model(ModelKind::Ising, g, p);
        Hamiltonian f = vertex_flip(h, 0);
        CHECK(f.edge_terms[0].values[0] == cplx(1.0));
        CHECK(f.edge_terms[0].values[1] == cplx(0.0));
        CHECK(relative_error(oracle::partition_exact(h, 0.8),
                             oracle::partition_exact(f, 0.8)) < 1e-12);
    }
    SUBCASE("involution and Z invariance on random models") {
        for (int trial = 0; trial < 10; ++trial) {
            SpinGraph g = gen.graph(2, 5, 7);
            Hamiltonian h = gen.difference_model(g, trial % 2);
            double beta = gen.beta();
            int v = gen.uniform_int(0, g.num_vertices - 1);
            Hamiltonian f = vertex_flip(h, v);
            CHECK(relative_error(oracle::partition_exact(h, beta),
                                 oracle::partition_exact(f, beta)) < 1e-10);
            Hamiltonian back = vertex_flip(f, v);
            for (int e = 0; e < g.num_edges(); ++e)
                CHECK(back.edge_terms[e].values == h.edge_terms[e].values);
        }
    }
    SUBCASE("q != 2 is refused") {
        SpinGraph g = families::cycle(3, 3);
        ModelParams p;
        p.edge_coupling.assign(3, cplx(1.0));
        CHECK_THROWS(vertex_flip(make_model(ModelKind::Potts, g, p), 0));
    }
}

TEST_CASE("apply_symmetry") {
    RandomModelGen gen(808);
    SUBCASE("identity word leaves weights unchanged") {
        SpinGraph g = families::cycle(4, 3);
        Hamiltonian h = gen.difference_model(g, false);
        auto w = encoding_weights(h, 0.9, Encoding::Psi);
        auto out = apply_symmetry(w, PauliWord::identity(4, 3), g, Encoding::Psi);
        for (int e = 0; e < 4; ++e)
            for (int j = 0; j < 3; ++j)
                CHECK(std::abs(out[e].amplitudes[j] - w[e].amplitudes[j]) < 1e-15);
    }
    SUBCASE("Z words attach phases but keep Z") {
        SpinGraph g = families::cycle(5, 3);
        Hamiltonian h = gen.difference_model(g, false);
        double beta = 0.8;
        auto w = encoding_weights(h, beta, Encoding::Psi);
        PauliWord zword = PauliWord::z_word(3, ZqVec(5, 1));  // all-ones is in the complement
        auto tw = apply_symmetry(w, zword, g, Encoding::Psi);
        LeafStructure ls = leaf_structure(g, Encoding::Psi);
        BranchDecomposition bd = heuristic_branch_decompose(ls, Strategy::GreedyMerge);
        ScaledComplex z0 = contract_weights(ls, 3, bd, w, uint64_t(1) << 20);
        ScaledComplex z1 = contract_weights(ls, 3, bd, tw, uint64_t(1) << 20);
        CHECK(relative_error(z0, z1) < 1e-10);
    }
    SUBCASE("X(c_a) on a q=2 model reproduces vertex_flip's weights") {
        SpinGraph g = families::cycle(4, 2);
        Hamiltonian h = gen.difference_model(g, false);
        double beta = 0.7;
        int a = 1;
        auto w = encoding_weights(h, beta, Encoding::Psi);
        ZqMatrix b = incidence(g);
        PauliWord xword = PauliWord::x_word(2, b.row(a));
        auto tw = apply_symmetry(w, xword, g, Encoding::Psi);
        auto fw = encoding_weights(vertex_flip(h, a), beta, Encoding::Psi);
        for (int e = 0; e < 4; ++e)
            for (int j = 0; j < 2; ++j)
                CHECK(std::abs(tw[e].amplitudes[j] * std::exp(tw[e].log_scale) -
                               fw[e].amplitudes[j] * std::exp(fw[e].log_scale)) < 1e-12);
    }
    SUBCASE("sampled words leave Z invariant for psi and phi") {
        for (int trial = 0; trial < 10; ++trial) {
            int q = gen.uniform_int(2, 3);
            SpinGraph g = gen.graph(q, 5, 6);
            bool phi = trial % 2;
            Hamiltonian h = gen.difference_model(g, phi);
            Encoding enc = phi ? Encoding::Phi : Encoding::Psi;
            double beta = gen.beta();
            auto w = encoding_weights(h, beta, enc);
            LeafStructure ls = leaf_structure(h, enc);
            BranchDecomposition bd = heuristic_branch_decompose(ls, Strategy::GreedyMerge);
            ScaledComplex z0 = contract_weights(ls, q, bd, w, uint64_t(1) << 20);
            StabilizerGenSet gens = phi ? phi_generators(g) : psi_generators(g);
            for (int s = 0; s < 5; ++s) {
                PauliWord word = sample_stabilizer_word(gens, gen.rng);
                auto tw = apply_symmetry(w, word, g, enc);
                CHECK(relative_error(contract_weights(ls, q, bd, tw, uint64_t(1) << 20), z0) <
                      1e-10);
            }
        }
    }
    SUBCASE("words outside the stabilizer are refused") {
        SpinGraph g = families::cycle(4, 2);
        Hamiltonian h = gen.difference_model(g, false);
        auto w = encoding_weights(h, 0.5, Encoding::Psi);
        PauliWord bad = PauliWord::x_word(2, {1, 0, 0, 0});
        CHECK_THROWS(apply_symmetry(w, bad, g, Encoding::Psi));
        PauliWord wrong_phase = PauliWord::identity(4, 2);
        wrong_phase.phase_num = 1;
        CHECK_THROWS(apply_symmetry(w, wrong_phase, g, Encoding::Psi));
    }
}

TEST_CASE("rotation system validation") {
    SpinGraph g = families::cycle(3, 2);
    RotationSystem rot = families::cycle_embedding(g);
    rot.validate(g);
    RotationSystem bad = rot;
    bad.order[0].pop_back();
    CHECK_THROWS(bad.validate(g));
}
