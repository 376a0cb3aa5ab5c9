#include "spinz/validate.hpp"

#include <cmath>
#include <functional>
#include <set>
#include <sstream>

#include "spinz/contraction.hpp"
#include "spinz/modelfile.hpp"
#include "spinz/oracle.hpp"
#include "spinz/randmodels.hpp"
#include "spinz/transforms.hpp"

namespace spinz {

namespace {

using Check = std::function<std::string()>;  // returns "" on pass, detail on failure

void run_check(std::vector<CheckResult>& out, const std::string& name, const Check& body) {
    CheckResult r;
    r.name = name;
    try {
        r.detail = body();
        r.pass = r.detail.empty();
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail = e.what();
    }
    out.push_back(std::move(r));
}

std::vector<ZqVec> enumerate_span(int q, int dim, const std::vector<ZqVec>& gens) {
    std::set<ZqVec> seen;
    std::vector<ZqVec> frontier;
    ZqVec zero(dim, 0);
    seen.insert(zero);
    frontier.push_back(zero);
    while (!frontier.empty()) {
        std::vector<ZqVec> next;
        for (const auto& v : frontier)
            for (const auto& g : gens) {
                ZqVec w(dim);
                for (int i = 0; i < dim; ++i) w[i] = mod_q(v[i] + g[i], q);
                if (seen.insert(w).second) next.push_back(std::move(w));
            }
        frontier = std::move(next);
    }
    return {seen.begin(), seen.end()};
}

// ---- linalg ----------------------------------------------------------------

void suite_linalg(std::vector<CheckResult>& out, RandomModelGen& gen) {
    run_check(out, "linalg/howell-membership-vs-enumeration", [&] {
        for (int q : {2, 3, 4, 6}) {
            for (int trial = 0; trial < 8; ++trial) {
                int dim = gen.uniform_int(1, 5);
                int ngens = gen.uniform_int(1, 3);
                std::vector<ZqVec> gens;
                for (int i = 0; i < ngens; ++i) {
                    ZqVec v(dim);
                    for (auto& x : v) x = gen.uniform_int(0, q - 1);
                    gens.push_back(std::move(v));
                }
                ZqSubmodule sub(q, dim, gens);
                auto all = enumerate_span(q, dim, gens);
                if (all.size() != sub.size()) return std::string("span size mismatch");
                std::set<ZqVec> members(all.begin(), all.end());
                // every vector classified correctly
                std::vector<int> probe(dim, 0);
                uint64_t total = 1;
                for (int i = 0; i < dim; ++i) total *= q;
                for (uint64_t idx = 0; idx < total; ++idx) {
                    ZqVec v(dim);
                    uint64_t r = idx;
                    for (int i = 0; i < dim; ++i) {
                        v[i] = static_cast<int>(r % q);
                        r /= q;
                    }
                    if (sub.member(v) != (members.count(v) > 0))
                        return std::string("membership disagrees with enumeration");
                }
            }
        }
        return std::string();
    });

    run_check(out, "linalg/rank-nullity-product", [&] {
        for (int q : {2, 3, 4, 5, 6}) {
            for (int trial = 0; trial < 6; ++trial) {
                SpinGraph g = gen.graph(q, 6, 8);
                ZqSubmodule cs = cut_space(g);
                unsigned long long k1 = kernel_size(g);
                unsigned long long k2 = kernel_size(incidence(g).transposed());
                if (k1 != k2) return std::string("component count vs algebraic kernel mismatch");
                unsigned long long total = 1;
                for (int i = 0; i < g.num_vertices; ++i) total *= q;
                if (cs.size() * k1 != total) return std::string("|C_G| * |ker| != q^|V|");
            }
        }
        return std::string();
    });

    run_check(out, "linalg/complement-duality", [&] {
        for (int q : {2, 3, 4, 6}) {
            for (int trial = 0; trial < 6; ++trial) {
                int dim = gen.uniform_int(1, 5);
                std::vector<ZqVec> gens;
                for (int i = 0; i < gen.uniform_int(1, 3); ++i) {
                    ZqVec v(dim);
                    for (auto& x : v) x = gen.uniform_int(0, q - 1);
                    gens.push_back(std::move(v));
                }
                ZqSubmodule sub(q, dim, gens);
                ZqSubmodule comp = orthogonal_complement(sub);
                unsigned long long total = 1;
                for (int i = 0; i < dim; ++i) total *= q;
                if (sub.size() * comp.size() != total) return std::string("|W||W^perp| != q^n");
                if (!orthogonal_complement(comp).equals(sub))
                    return std::string("double complement differs");
            }
        }
        return std::string();
    });

    run_check(out, "linalg/coset-representatives", [&] {
        ZqSubmodule outer(2, 2, {{1, 0}, {0, 1}});
        ZqSubmodule inner(2, 2, {{1, 1}});
        auto reps = coset_representatives(outer, inner);
        if (reps.size() != 2) return std::string("index-2 subgroup should give 2 cosets");
        ZqSubmodule z4(4, 1, {{1}});
        ZqSubmodule two(4, 1, {{2}});
        if (two.size() != 2) return std::string("span{2} in Z_4 has 2 elements");
        if (coset_representatives(z4, two).size() != 2) return std::string("Z_4 / {0,2} has 2 cosets");
        return std::string();
    });

    run_check(out, "linalg/incidence-fixtures", [&] {
        SpinGraph single(2, 2, {{0, 1}});
        ZqMatrix b = incidence(single);
        if (b.at(0, 0) != 1 || b.at(1, 0) != 1) return std::string("mod-2 single edge incidence");
        SpinGraph path3(3, 3, {{0, 1}, {1, 2}});
        ZqMatrix b3 = incidence(path3);
        if (b3.at(0, 0) != 2 || b3.at(1, 0) != 1 || b3.at(2, 0) != 0)
            return std::string("path column 0");
        if (b3.at(0, 1) != 0 || b3.at(1, 1) != 2 || b3.at(2, 1) != 1)
            return std::string("path column 1");
        return std::string();
    });
}

// ---- stabilizer -------------------------------------------------------------

void suite_stabilizer(std::vector<CheckResult>& out, RandomModelGen& gen) {
    run_check(out, "stabilizer/generators-commute", [&] {
        for (int q : {2, 3}) {
            SpinGraph g = families::cycle(4, q);
            if (!psi_generators(g).all_commute()) return std::string("psi generators");
            if (!phi_generators(g).all_commute()) return std::string("phi generators");
        }
        auto [torus, loops] = families::toric(2, 2, 2);
        if (!kitaev_generators(torus, loops).all_commute()) return std::string("toric generators");
        return std::string();
    });

    run_check(out, "stabilizer/group-size-and-no-scalars", [&] {
        for (int q : {2, 3}) {
            for (int trial = 0; trial < 4; ++trial) {
                SpinGraph g = gen.graph(q, 4, 4);
                StabilizerGenSet s = psi_generators(g);
                auto group = enumerate_group(s, 1 << 14);
                unsigned long long want = 1;
                for (int e = 0; e < g.num_edges(); ++e) want *= q;
                if (group.size() != want) return std::string("psi group size is not q^|E|");
                for (const auto& w : group) {
                    bool trivial = std::all_of(w.xi.begin(), w.xi.end(), [](int x) { return !x; }) &&
                                   std::all_of(w.zeta.begin(), w.zeta.end(), [](int x) { return !x; });
                    if (trivial && w.phase_num != 0) return std::string("group contains a scalar");
                }
            }
        }
        return std::string();
    });

    run_check(out, "stabilizer/fixed-points", [&] {
        for (int q : {2, 3}) {
            for (int trial = 0; trial < 4; ++trial) {
                SpinGraph g = gen.graph(q, 4, 4);
                if (g.num_vertices + g.num_edges() > 8) continue;
                for (Encoding enc : {Encoding::Psi, Encoding::Phi}) {
                    oracle::DenseState st = oracle::dense_state(g, enc);
                    StabilizerGenSet s = enc == Encoding::Psi ? psi_generators(g) : phi_generators(g);
                    for (const auto& w : s.generators) {
                        oracle::DenseState moved = oracle::apply_pauli(st, w);
                        for (size_t i = 0; i < st.amplitudes.size(); ++i)
                            if (std::abs(moved.amplitudes[i] - st.amplitudes[i]) > 1e-12)
                                return std::string("generator does not fix the encoded state");
                    }
                }
            }
        }
        return std::string();
    });

    run_check(out, "stabilizer/schmidt-rank-formula", [&] {
        for (int q : {2, 3}) {
            for (int trial = 0; trial < 5; ++trial) {
                SpinGraph g = gen.graph(q, 4, 5);
                int ne = g.num_edges();
                if (ne < 2) continue;
                oracle::DenseState st = oracle::dense_state(g, Encoding::Psi);
                for (int mask = 1; mask < (1 << ne) - 1; ++mask) {
                    std::vector<int> subset;
                    for (int e = 0; e < ne; ++e)
                        if (mask & (1 << e)) subset.push_back(e);
                    unsigned long long formula = schmidt_rank(g, subset, Encoding::Psi);
                    int dense = oracle::reduced_rank(st, subset);
                    if (formula != static_cast<unsigned long long>(dense)) {
                        std::ostringstream os;
                        os << "schmidt rank mismatch: formula " << formula << " dense " << dense;
                        return os.str();
                    }
                }
            }
        }
        return std::string();
    });
}

// ---- contraction ------------------------------------------------------------

void suite_contraction(std::vector<CheckResult>& out, RandomModelGen& gen, bool inject_bug) {
    run_check(out, "contraction/oracle-equivalence", [&] {
        for (int trial = 0; trial < 40; ++trial) {
            int q = gen.uniform_int(2, 5);
            SpinGraph g = gen.graph(q, 6, 9);
            bool fields = trial % 2;
            Hamiltonian h = gen.difference_model(g, fields);
            double beta = gen.beta();
            ScaledComplex exact = oracle::partition_exact(h, beta);
            ContractOptions o;
            o.encoding = fields ? Encoding::Phi : Encoding::Psi;
            ContractOutcome res = contract(h, beta, o);
            ScaledComplex z = res.z;
            if (inject_bug) z.mantissa *= cplx(1.0 + 1e-6, 0.0);
            if (relative_error(z, exact) > 1e-10) {
                std::ostringstream os;
                os << "first divergent model digest "
                   << digest_hex(write_model_file(h, beta)) << " (rel "
                   << relative_error(z, exact) << ")";
                return os.str();
            }
        }
        return std::string();
    });

    run_check(out, "contraction/encoding-cross-consistency", [&] {
        for (int trial = 0; trial < 10; ++trial) {
            int q = gen.uniform_int(2, 4);
            SpinGraph g = gen.graph(q, 5, 7);
            Hamiltonian h = gen.difference_model(g, true);
            double beta = gen.beta();
            ContractOptions phi;
            phi.encoding = Encoding::Phi;
            ContractOptions ghz;
            ghz.encoding = Encoding::Ghz;
            ScaledComplex a = contract(h, beta, phi).z;
            ScaledComplex b = contract(to_pairwise(h), beta, ghz).z;
            if (relative_error(a, b) > 1e-10) return std::string("phi vs ghz disagree");
        }
        return std::string();
    });

    run_check(out, "contraction/decomposition-independence", [&] {
        for (int trial = 0; trial < 10; ++trial) {
            int q = gen.uniform_int(2, 4);
            SpinGraph g = gen.graph(q, 6, 8);
            Hamiltonian h = gen.difference_model(g, false);
            double beta = gen.beta();
            ContractOptions a, b;
            a.encoding = b.encoding = Encoding::Psi;
            a.strategy = Strategy::GreedyMerge;
            b.strategy = Strategy::MinDegreeElimination;
            if (relative_error(contract(h, beta, a).z, contract(h, beta, b).z) > 1e-10)
                return std::string("two decompositions disagree");
        }
        return std::string();
    });

    run_check(out, "contraction/ttn-reconstruction", [&] {
        for (int q : {2, 3}) {
            for (const SpinGraph& g :
                 {families::path(4, q), families::cycle(5, q), families::grid(2, 3, q)}) {
                LeafStructure ls = leaf_structure(g, Encoding::Psi);
                BranchDecomposition bd = heuristic_branch_decompose(ls, Strategy::GreedyMerge);
                TensorTree tt = build_ttn(g, bd, Encoding::Psi);
                std::vector<cplx> dense = ttn_dense(tt);
                oracle::DenseState ref = oracle::dense_state(g, Encoding::Psi);
                // the TTN carries one unit per cut vector; rescale globally
                double scale = 0.0;
                for (size_t i = 0; i < dense.size(); ++i)
                    if (std::abs(dense[i]) > 0.5) {
                        scale = (ref.amplitudes[i] * std::exp(ref.log_scale) / dense[i]).real();
                        break;
                    }
                for (size_t i = 0; i < dense.size(); ++i)
                    if (std::abs(dense[i] * scale - ref.amplitudes[i] * std::exp(ref.log_scale)) >
                        1e-9 * std::max(1.0, scale))
                        return std::string("ttn amplitudes differ from the dense state");
            }
        }
        return std::string();
    });

    run_check(out, "contraction/log-domain-chain", [&] {
        int n = 2000;
        SpinGraph g = families::path(n, 2);
        ModelParams p;
        p.edge_coupling.assign(n - 1, cplx(1.0));
        Hamiltonian h = make_model(ModelKind::Ising, g, p);
        double beta = 50.0;
        ContractOptions o;
        o.encoding = Encoding::Psi;
        o.strategy = Strategy::MinDegreeElimination;
        ScaledComplex z = contract(h, beta, o).z;
        // chain: Z = q * (1 + e^{-beta J})^(n-1)
        double want = std::log(2.0) + (n - 1) * std::log1p(std::exp(-beta));
        if (!std::isfinite(z.log().real()) || std::abs(z.log().real() - want) > 1e-8 * std::abs(want))
            return std::string("chain log Z mismatch");
        return std::string();
    });
}

// ---- duality ----------------------------------------------------------------

ScaledComplex psi_z_from_weights(const SpinGraph& g, const std::vector<ScaledVector>& w) {
    LeafStructure ls = leaf_structure(g, Encoding::Psi);
    BranchDecomposition bd = heuristic_branch_decompose(
        ls, ls.num_leaves() <= 8 ? Strategy::ExhaustiveSmall : Strategy::GreedyMerge);
    return contract_weights(ls, g.q, bd, w, uint64_t(1) << 20);
}

void suite_duality(std::vector<CheckResult>& out, RandomModelGen& gen) {
    run_check(out, "duality/fourier-fourth-power", [&] {
        for (int q : {2, 3, 5, 6}) {
            ScaledVector w;
            for (int j = 0; j < q; ++j) w.amplitudes.push_back(cplx(gen.coupling(), gen.coupling()));
            w.normalize();
            ScaledVector f = fourier_weights(fourier_weights(fourier_weights(fourier_weights(w))));
            for (int j = 0; j < q; ++j) {
                cplx a = w.amplitudes[j] * std::exp(w.log_scale);
                cplx b = f.amplitudes[j] * std::exp(f.log_scale);
                if (std::abs(a - b) > 1e-12) return std::string("F^4 is not the identity");
            }
        }
        return std::string();
    });

    run_check(out, "duality/potts-relation", [&] {
        for (int trial = 0; trial < 50; ++trial) {
            int q = gen.uniform_int(2, 8);
            double bj = gen.coupling() * 1.5;
            cplx ebj = std::exp(cplx(bj, 0.0));
            cplx ebj2 = potts_dual_coupling(ebj, q);
            if (std::abs((ebj2 - 1.0) * (ebj - 1.0) - static_cast<double>(q)) > 1e-12)
                return std::string("(e^{bJ'}-1)(e^{bJ}-1) != q");
            cplx back = potts_dual_coupling(ebj2, q);
            if (std::abs(back - ebj) > 1e-9) return std::string("dual coupling is not an involution");
        }
        return std::string();
    });

    run_check(out, "duality/z-equality-fixtures", [&] {
        struct Fixture {
            SpinGraph g;
            RotationSystem rot;
            const char* name;
        };
        std::vector<Fixture> fixtures;
        {
            SpinGraph tri = families::cycle(3, 3);
            fixtures.push_back({tri, families::cycle_embedding(tri), "triangle"});
            SpinGraph c4 = families::cycle(4, 2);
            fixtures.push_back({c4, families::cycle_embedding(c4), "4-cycle"});
            SpinGraph g22 = families::grid(2, 2, 2);
            fixtures.push_back({g22, families::grid_embedding(g22, 2, 2), "2x2 grid"});
            SpinGraph g33 = families::grid(3, 3, 2);
            fixtures.push_back({g33, families::grid_embedding(g33, 3, 3), "3x3 grid"});
            SpinGraph wh = families::wheel(5, 2);
            fixtures.push_back({wh, families::wheel_embedding(wh, 5), "wheel"});
        }
        for (const auto& fx : fixtures) {
            PlanarDual pd = planar_dual(fx.g, fx.rot);
            int q = fx.g.q;
            // pin the scalar with all-ones weights (the beta = 0 case)
            double log_s;
            {
                std::vector<ScaledVector> ones(fx.g.num_edges());
                std::vector<ScaledVector> dual_w(fx.g.num_edges());
                for (int e = 0; e < fx.g.num_edges(); ++e) {
                    ones[e].amplitudes.assign(q, cplx(1.0));
                    dual_w[pd.edge_map[e]] = fourier_weights(ones[e]);
                }
                ScaledComplex zg = psi_z_from_weights(fx.g, ones);
                ScaledComplex zd = psi_z_from_weights(pd.dual, dual_w);
                log_s = (zg / zd).log().real();
            }
            for (int trial = 0; trial < 10; ++trial) {
                std::vector<ScaledVector> w(fx.g.num_edges());
                std::vector<ScaledVector> dual_w(fx.g.num_edges());
                for (int e = 0; e < fx.g.num_edges(); ++e) {
                    std::vector<cplx> table(q);
                    for (auto& x : table) x = gen.coupling();
                    w[e] = boltzmann_weights(table, q, 1.0);
                    dual_w[pd.edge_map[e]] = fourier_weights(w[e]);
                }
                ScaledComplex zg = psi_z_from_weights(fx.g, w);
                ScaledComplex zd = psi_z_from_weights(pd.dual, dual_w);
                ScaledComplex scaled{zd.mantissa, zd.log_scale + log_s};
                if (relative_error(zg, scaled) > 1e-9) {
                    std::ostringstream os;
                    os << fx.name << ": Z_G != s(G) Z_D (rel " << relative_error(zg, scaled) << ")";
                    return os.str();
                }
            }
        }
        return std::string();
    });
}

// ---- symmetry ---------------------------------------------------------------

void suite_symmetry(std::vector<CheckResult>& out, RandomModelGen& gen) {
    run_check(out, "symmetry/vertex-flip", [&] {
        for (int trial = 0; trial < 8; ++trial) {
            SpinGraph g = gen.graph(2, 5, 6);
            bool fields = trial % 2;
            Hamiltonian h = gen.difference_model(g, fields);
            double beta = gen.beta();
            int v = gen.uniform_int(0, g.num_vertices - 1);
            Hamiltonian flipped = vertex_flip(h, v);
            ScaledComplex a = oracle::partition_exact(h, beta);
            ScaledComplex b = oracle::partition_exact(flipped, beta);
            if (relative_error(a, b) > 1e-10) return std::string("vertex flip changed Z");
            Hamiltonian twice = vertex_flip(flipped, v);
            if (relative_error(oracle::partition_exact(twice, beta), a) > 1e-12)
                return std::string("double flip is not the identity");
        }
        return std::string();
    });

    run_check(out, "symmetry/stabilizer-words", [&] {
        for (int trial = 0; trial < 12; ++trial) {
            int q = gen.uniform_int(2, 3);
            SpinGraph g = gen.graph(q, 5, 6);
            bool use_phi = trial % 2;
            Encoding enc = use_phi ? Encoding::Phi : Encoding::Psi;
            Hamiltonian h = gen.difference_model(g, use_phi);
            double beta = gen.beta();
            std::vector<ScaledVector> w = encoding_weights(h, beta, enc);
            LeafStructure ls = leaf_structure(h, enc);
            BranchDecomposition bd = heuristic_branch_decompose(ls, Strategy::GreedyMerge);
            ScaledComplex z0 = contract_weights(ls, q, bd, w, uint64_t(1) << 20);
            StabilizerGenSet gens = enc == Encoding::Psi ? psi_generators(g) : phi_generators(g);
            for (int s = 0; s < 4; ++s) {
                PauliWord word = sample_stabilizer_word(gens, gen.rng);
                std::vector<ScaledVector> tw = apply_symmetry(w, word, g, enc);
                ScaledComplex z1 = contract_weights(ls, q, bd, tw, uint64_t(1) << 20);
                if (relative_error(z0, z1) > 1e-10) return std::string("stabilizer word changed Z");
            }
        }
        return std::string();
    });

    run_check(out, "symmetry/identity-and-refusal", [&] {
        SpinGraph g = families::cycle(4, 3);
        Hamiltonian h = gen.difference_model(g, false);
        std::vector<ScaledVector> w = encoding_weights(h, 0.7, Encoding::Psi);
        PauliWord id = PauliWord::identity(4, 3);
        std::vector<ScaledVector> same = apply_symmetry(w, id, g, Encoding::Psi);
        for (int e = 0; e < 4; ++e)
            for (int j = 0; j < 3; ++j)
                if (std::abs(same[e].amplitudes[j] - w[e].amplitudes[j]) > 1e-15)
                    return std::string("identity word changed the weights");
        PauliWord bad = PauliWord::identity(4, 3);
        bad.xi = {1, 0, 0, 0};  // not a cut-space vector of the cycle
        try {
            apply_symmetry(w, bad, g, Encoding::Psi);
            return std::string("non-stabilizer word was not refused");
        } catch (const std::invalid_argument&) {
        }
        return std::string();
    });
}

}  // namespace

std::vector<CheckResult> run_validation(const std::string& suite, const ValidateOptions& opts) {
    std::vector<CheckResult> out;
    RandomModelGen gen(opts.seed);
    bool all = suite == "all";
    if (all || suite == "linalg") suite_linalg(out, gen);
    if (all || suite == "stabilizer") suite_stabilizer(out, gen);
    if (all || suite == "contraction") suite_contraction(out, gen, opts.inject_contraction_bug);
    if (all || suite == "duality") suite_duality(out, gen);
    if (all || suite == "symmetry") suite_symmetry(out, gen);
    if (out.empty()) throw std::invalid_argument("unknown suite: " + suite);
    return out;
}

}  // namespace spinz
