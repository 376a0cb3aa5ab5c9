#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spinz/decomposition.hpp"
#include "spinz/oracle.hpp"
#include "spinz/randmodels.hpp"
#include "spinz/transforms.hpp"

using namespace spinz;

namespace {

BranchDecomposition caterpillar(int leaves) {
    BranchDecomposition bd;
    bd.nodes.push_back({-1, -1, 0});
    int cur = 0;
    for (int k = 1; k < leaves; ++k) {
        int leaf = static_cast<int>(bd.nodes.size());
        bd.nodes.push_back({-1, -1, k});
        int internal = static_cast<int>(bd.nodes.size());
        bd.nodes.push_back({cur, leaf, -1});
        cur = internal;
    }
    bd.root = cur;
    return bd;
}

}  // namespace

TEST_CASE("connectivity function") {
    SpinGraph tree = families::path(6, 2);
    CHECK(connectivity(tree, {0, 1}, Encoding::Psi) == 1);
    CHECK(connectivity(tree, {0, 2, 4}, Encoding::Psi) == 1);

    SpinGraph cyc = families::cycle(6, 3);
    for (int k = 1; k < 6; ++k) {
        std::vector<int> arc;
        for (int e = 0; e < k; ++e) arc.push_back(e);
        CHECK(connectivity(cyc, arc, Encoding::Psi) == 2);
    }

    SpinGraph k4 = families::complete(4, 2);
    CHECK(connectivity(k4, {0}, Encoding::Psi) == 2);

    CHECK_THROWS(connectivity(cyc, {}, Encoding::Psi));
    CHECK_THROWS(connectivity(cyc, {0, 1, 2, 3, 4, 5}, Encoding::Psi));
}

TEST_CASE("connectivity is symmetric under complementation") {
    RandomModelGen gen(61);
    for (int trial = 0; trial < 10; ++trial) {
        SpinGraph g = gen.graph(3, 5, 6);
        int ne = g.num_edges();
        if (ne < 2) continue;
        for (int mask = 1; mask < (1 << ne) - 1; ++mask) {
            std::vector<int> a, b;
            for (int e = 0; e < ne; ++e) ((mask >> e) & 1 ? a : b).push_back(e);
            CHECK(connectivity(g, a, Encoding::Psi) == connectivity(g, b, Encoding::Psi));
        }
    }
}

TEST_CASE("width of fixed decompositions") {
    SUBCASE("caterpillar over a path has width 1") {
        SpinGraph g = families::path(6, 2);
        LeafStructure ls = leaf_structure(g, Encoding::Psi);
        WidthReport w = width(caterpillar(ls.num_leaves()), ls);
        CHECK(w.width == 1);
    }
    SUBCASE("cycles force width 2; the arc order achieves it") {
        SpinGraph g = families::cycle(6, 2);
        LeafStructure ls = leaf_structure(g, Encoding::Psi);
        WidthReport w = width(caterpillar(6), ls);
        CHECK(w.width == 2);
        BranchDecomposition best = heuristic_branch_decompose(ls, Strategy::ExhaustiveSmall);
        CHECK(width(best, ls).width == 2);
    }
    SUBCASE("row-major linear order on an LxL grid grows with L") {
        for (int l = 2; l <= 6; ++l) {
            SpinGraph g = families::grid(l, l, 2);
            LeafStructure ls = leaf_structure(g, Encoding::Psi);
            WidthReport w = width(caterpillar(ls.num_leaves()), ls);
            CHECK(w.width >= (l + 1) / 2);
        }
    }
}

TEST_CASE("heuristic strategies") {
    SUBCASE("paths get width 1 from every strategy") {
        SpinGraph g = families::path(6, 2);
        LeafStructure ls = leaf_structure(g, Encoding::Psi);
        for (Strategy s : {Strategy::GreedyMerge, Strategy::MinDegreeElimination,
                           Strategy::ExhaustiveSmall}) {
            BranchDecomposition bd = heuristic_branch_decompose(ls, s);
            CHECK(width(bd, ls).width == 1);
        }
    }
    SUBCASE("6-cycle: greedy matches the exhaustive optimum") {
        SpinGraph g = families::cycle(6, 2);
        LeafStructure ls = leaf_structure(g, Encoding::Psi);
        int greedy = width(heuristic_branch_decompose(ls, Strategy::GreedyMerge), ls).width;
        int best = width(heuristic_branch_decompose(ls, Strategy::ExhaustiveSmall), ls).width;
        CHECK(greedy == 2);
        CHECK(best == 2);
    }
    SUBCASE("3x3 grid: min-degree stays within width 4") {
        SpinGraph g = families::grid(3, 3, 2);
        LeafStructure ls = leaf_structure(g, Encoding::Psi);
        BranchDecomposition bd = heuristic_branch_decompose(ls, Strategy::MinDegreeElimination);
        CHECK(width(bd, ls).width <= 4);
    }
    SUBCASE("exhaustive is a lower bound for the heuristics") {
        RandomModelGen gen(67);
        for (int trial = 0; trial < 8; ++trial) {
            SpinGraph g = gen.graph(3, 5, 7);
            if (g.num_edges() < 2 || g.num_edges() > 8) continue;
            LeafStructure ls = leaf_structure(g, Encoding::Psi);
            int best = width(heuristic_branch_decompose(ls, Strategy::ExhaustiveSmall), ls).width;
            for (Strategy s : {Strategy::GreedyMerge, Strategy::MinDegreeElimination})
                CHECK(best <= width(heuristic_branch_decompose(ls, s), ls).width);
        }
    }
    SUBCASE("exhaustive refuses more than 8 leaves") {
        SpinGraph g = families::cycle(9, 2);
        LeafStructure ls = leaf_structure(g, Encoding::Psi);
        CHECK_THROWS(heuristic_branch_decompose(ls, Strategy::ExhaustiveSmall));
    }
}

TEST_CASE("produced decompositions are valid subcubic trees") {
    RandomModelGen gen(71);
    for (int trial = 0; trial < 10; ++trial) {
        SpinGraph g = gen.graph(2, 5, 7);
        for (Encoding enc : {Encoding::Psi, Encoding::Phi}) {
            LeafStructure ls = leaf_structure(g, enc);
            if (ls.num_leaves() < 2) continue;
            for (Strategy s : {Strategy::GreedyMerge, Strategy::MinDegreeElimination}) {
                BranchDecomposition bd = heuristic_branch_decompose(ls, s);
                bd.validate(ls.num_leaves());
                auto [adj, leaf_map] = bd.unrooted();
                int leaves = 0;
                for (size_t n = 0; n < adj.size(); ++n) {
                    if (n == static_cast<size_t>(bd.root) && ls.num_leaves() > 1) continue;
                    if (leaf_map[n] >= 0) {
                        CHECK(adj[n].size() == 1);
                        leaves++;
                    } else {
                        CHECK(adj[n].size() == 3);
                    }
                }
                CHECK(leaves == ls.num_leaves());
            }
        }
    }
}

TEST_CASE("q^(lambda-1) matches the dense reduced rank") {
    RandomModelGen gen(73);
    for (int q : {2, 3}) {
        for (int trial = 0; trial < 5; ++trial) {
            SpinGraph g = gen.graph(q, 4, 6);
            int ne = g.num_edges();
            if (ne < 2) continue;
            oracle::DenseState st = oracle::dense_state(g, Encoding::Psi);
            for (int mask = 1; mask < (1 << ne) - 1; ++mask) {
                std::vector<int> cut;
                for (int e = 0; e < ne; ++e)
                    if (mask & (1 << e)) cut.push_back(e);
                int lambda = connectivity(g, cut, Encoding::Psi);
                unsigned long long want = 1;
                for (int i = 1; i < lambda; ++i) want *= q;
                CHECK(want == static_cast<unsigned long long>(oracle::reduced_rank(st, cut)));
            }
        }
    }
}

TEST_CASE("heuristics are deterministic") {
    RandomModelGen gen(97);
    SpinGraph g = gen.graph(3, 6, 9);
    LeafStructure ls = leaf_structure(g, Encoding::Psi);
    if (ls.num_leaves() >= 2) {
        for (Strategy s : {Strategy::GreedyMerge, Strategy::MinDegreeElimination}) {
            std::string a = heuristic_branch_decompose(ls, s).serialize();
            std::string b = heuristic_branch_decompose(ls, s).serialize();
            CHECK(a == b);
        }
    }
}

TEST_CASE("serialization round trip") {
    RandomModelGen gen(79);
    SpinGraph g = gen.graph(2, 6, 7);
    LeafStructure ls = leaf_structure(g, Encoding::Psi);
    BranchDecomposition bd = heuristic_branch_decompose(ls, Strategy::GreedyMerge);
    std::string text = bd.serialize();
    BranchDecomposition back = BranchDecomposition::parse(text);
    back.validate(ls.num_leaves());
    CHECK(back.serialize() == text);
    CHECK(decomposition_digest(back) == decomposition_digest(bd));
    CHECK(width(back, ls).per_edge_lambda.size() == width(bd, ls).per_edge_lambda.size());
    CHECK(width(back, ls).width == width(bd, ls).width);

    CHECK_THROWS(BranchDecomposition::parse("(0 1"));
    CHECK_THROWS(BranchDecomposition::parse("(0 1) x"));
}
