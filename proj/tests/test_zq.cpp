#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "spinz/randmodels.hpp"
#include "spinz/transforms.hpp"
#include "spinz/zq.hpp"

using namespace spinz;

namespace {

std::set<ZqVec> enumerate_span(int q, int dim, const std::vector<ZqVec>& gens) {
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
    return seen;
}

}  // namespace

TEST_CASE("incidence columns") {
    SpinGraph single(2, 2, {{0, 1}});
    ZqMatrix b = incidence(single);
    CHECK(b.at(0, 0) == 1);  // -1 mod 2
    CHECK(b.at(1, 0) == 1);

    SpinGraph path(3, 3, {{0, 1}, {1, 2}});
    ZqMatrix bp = incidence(path);
    CHECK(bp.row(0) == ZqVec{2, 0});
    CHECK(bp.row(1) == ZqVec{1, 2});
    CHECK(bp.row(2) == ZqVec{0, 1});

    for (int q : {2, 3, 5}) {
        SpinGraph tri(q, 3, {{0, 1}, {1, 2}, {2, 0}});
        ZqMatrix bt = incidence(tri);
        for (int e = 0; e < 3; ++e) {
            int sum = 0;
            for (int v = 0; v < 3; ++v) sum += bt.at(v, e);
            CHECK(sum % q == 0);
        }
    }
}

TEST_CASE("kernel size by components and by algebra") {
    SpinGraph tri(3, 3, {{0, 1}, {1, 2}, {2, 0}});
    CHECK(kernel_size(tri) == 3);
    CHECK(kernel_size(incidence(tri).transposed()) == 3);

    SpinGraph two_edges(2, 4, {{0, 1}, {2, 3}});
    CHECK(kernel_size(two_edges) == 4);
    CHECK(kernel_size(incidence(two_edges).transposed()) == 4);

    SpinGraph single(5, 2, {{0, 1}});
    CHECK(kernel_size(single) == 5);
    CHECK(kernel_size(incidence(single).transposed()) == 5);
}

TEST_CASE("submodule size and membership") {
    ZqSubmodule diag(2, 2, {{1, 1}});
    CHECK(diag.size() == 2);
    CHECK(diag.member({0, 0}));
    CHECK(diag.member({1, 1}));
    CHECK(!diag.member({1, 0}));

    ZqSubmodule two(4, 1, {{2}});
    CHECK(two.size() == 2);

    // span of the rows of B(triangle)^T over Z_2: enumerate the images first
    SpinGraph tri(2, 3, {{0, 1}, {1, 2}, {2, 0}});
    ZqMatrix bt = incidence(tri);
    std::set<ZqVec> images;
    for (int s = 0; s < 8; ++s) {
        ZqVec im(3);
        for (int e = 0; e < 3; ++e) {
            auto [t, h] = tri.edges[e];
            im[e] = mod_q(((s >> h) & 1) - ((s >> t) & 1), 2);
        }
        images.insert(im);
    }
    CHECK(images.size() == 4);
    CHECK(cut_space(tri).size() == images.size());
}

TEST_CASE("orthogonal complement") {
    // cycle: the complement of the cut space is spanned by the all-ones vector
    for (int q : {2, 3, 4}) {
        SpinGraph cyc = families::cycle(4, q);
        ZqSubmodule comp = orthogonal_complement(cut_space(cyc));
        ZqSubmodule ones(q, 4, {{1, 1, 1, 1}});
        CHECK(comp.equals(ones));
    }

    ZqSubmodule full(3, 2, {{1, 0}, {0, 1}});
    CHECK(orthogonal_complement(full).size() == 1);
    ZqSubmodule zero(3, 2, {});
    CHECK(orthogonal_complement(zero).size() == 9);
}

TEST_CASE("coset representatives") {
    ZqSubmodule outer(2, 2, {{1, 0}, {0, 1}});
    ZqSubmodule inner(2, 2, {{1, 1}});
    auto reps = coset_representatives(outer, inner);
    REQUIRE(reps.size() == 2);
    CHECK(reps[0] == ZqVec{0, 0});
    CHECK(reps[1] == ZqVec{0, 1});  // lex-min member of the nontrivial coset

    CHECK(coset_representatives(inner, inner).size() == 1);

    // one arc of a 4-cycle, q = 2: enumerate both modules by brute force
    SpinGraph cyc = families::cycle(4, 2);
    std::vector<int> p_cols{0, 1};
    // restrictions of all cut vectors to the arc
    std::set<ZqVec> restricted, vanishing;
    for (int s = 0; s < 16; ++s) {
        ZqVec full(4), arc(2);
        for (int e = 0; e < 4; ++e) {
            auto [t, h] = cyc.edges[e];
            full[e] = mod_q(((s >> h) & 1) - ((s >> t) & 1), 2);
        }
        arc = {full[0], full[1]};
        restricted.insert(arc);
        if (full[2] == 0 && full[3] == 0) vanishing.insert(arc);
    }
    ZqSubmodule outer_arc(2, 2, {restricted.begin(), restricted.end()});
    ZqSubmodule inner_arc(2, 2, {vanishing.begin(), vanishing.end()});
    CHECK(coset_representatives(outer_arc, inner_arc).size() == 2);
}

TEST_CASE("coset representatives are lexicographically minimal") {
    RandomModelGen gen(41);
    for (int q : {2, 3, 4, 6}) {
        for (int trial = 0; trial < 5; ++trial) {
            int dim = gen.uniform_int(2, 4);
            std::vector<ZqVec> og, ig;
            for (int i = 0; i < 2; ++i) {
                ZqVec v(dim);
                for (auto& x : v) x = gen.uniform_int(0, q - 1);
                og.push_back(v);
            }
            ZqSubmodule outer(q, dim, og);
            // inner: a random multiple of the outer generators
            ZqVec m(dim, 0);
            for (int i = 0; i < dim; ++i)
                m[i] = mod_q(2 * og[0][i] + og[1 % og.size()][i], q);
            ZqSubmodule inner(q, dim, {m});
            if (!outer.contains(inner)) continue;
            auto reps = coset_representatives(outer, inner);
            CHECK(reps.size() == outer.size() / inner.size());
            auto inner_all = enumerate_span(q, dim, inner.generators);
            for (const auto& rep : reps) {
                for (const auto& shift : inner_all) {
                    ZqVec member(dim);
                    for (int i = 0; i < dim; ++i) member[i] = mod_q(rep[i] + shift[i], q);
                    CHECK(rep <= member);
                }
            }
        }
    }
}

TEST_CASE("rank-nullity over composite and prime q") {
    RandomModelGen gen(17);
    for (int q : {2, 3, 4, 5, 6}) {
        for (int trial = 0; trial < 6; ++trial) {
            SpinGraph g = gen.graph(q, 6, 8);
            unsigned long long total = 1;
            for (int i = 0; i < g.num_vertices; ++i) total *= q;
            CHECK(cut_space(g).size() * kernel_size(g) == total);
        }
    }
}

TEST_CASE("double complement returns the same submodule") {
    RandomModelGen gen(29);
    for (int q : {2, 3, 4, 5, 6}) {
        for (int trial = 0; trial < 5; ++trial) {
            int dim = gen.uniform_int(1, 5);
            std::vector<ZqVec> gens;
            for (int i = 0; i < gen.uniform_int(1, 3); ++i) {
                ZqVec v(dim);
                for (auto& x : v) x = gen.uniform_int(0, q - 1);
                gens.push_back(v);
            }
            ZqSubmodule sub(q, dim, gens);
            ZqSubmodule comp = orthogonal_complement(sub);
            unsigned long long total = 1;
            for (int i = 0; i < dim; ++i) total *= q;
            CHECK(sub.size() * comp.size() == total);
            CHECK(orthogonal_complement(comp).equals(sub));
        }
    }
}

TEST_CASE("tree incidence columns are independent, cycles are not") {
    for (int q : {2, 3, 4}) {
        SpinGraph tree = families::path(5, q);
        std::vector<ZqVec> cols;
        ZqMatrix b = incidence(tree);
        for (int e = 0; e < b.cols; ++e) {
            ZqVec col(b.rows);
            for (int v = 0; v < b.rows; ++v) col[v] = b.at(v, e);
            cols.push_back(col);
        }
        ZqSubmodule colspan(q, b.rows, cols);
        unsigned long long full = 1;
        for (int e = 0; e < b.cols; ++e) full *= q;
        CHECK(colspan.size() == full);

        SpinGraph cyc = families::cycle(5, q);
        ZqMatrix bc = incidence(cyc);
        std::vector<ZqVec> ccols;
        for (int e = 0; e < bc.cols; ++e) {
            ZqVec col(bc.rows);
            for (int v = 0; v < bc.rows; ++v) col[v] = bc.at(v, e);
            ccols.push_back(col);
        }
        CHECK(ZqSubmodule(q, bc.rows, ccols).size() < full * q);
    }
}

TEST_CASE("membership matches enumeration for small modules") {
    RandomModelGen gen(53);
    for (int q : {2, 3, 4}) {
        for (int trial = 0; trial < 6; ++trial) {
            int dim = q == 2 ? gen.uniform_int(5, 8) : gen.uniform_int(1, 5);
            std::vector<ZqVec> gens;
            for (int i = 0; i < gen.uniform_int(1, 3); ++i) {
                ZqVec v(dim);
                for (auto& x : v) x = gen.uniform_int(0, q - 1);
                gens.push_back(v);
            }
            ZqSubmodule sub(q, dim, gens);
            auto all = enumerate_span(q, dim, gens);
            CHECK(all.size() == sub.size());
            uint64_t total = 1;
            for (int i = 0; i < dim; ++i) total *= q;
            for (uint64_t idx = 0; idx < total; ++idx) {
                ZqVec v(dim);
                uint64_t r = idx;
                for (int i = 0; i < dim; ++i) {
                    v[i] = static_cast<int>(r % q);
                    r /= q;
                }
                CHECK(sub.member(v) == (all.count(v) > 0));
            }
        }
    }
}

TEST_CASE("solver and kernels") {
    // kernel of rows over composite q includes torsion combinations
    std::vector<ZqVec> rows{{2, 0}, {0, 1}};
    auto kernel = left_kernel(4, 2, rows);
    ZqSubmodule k(4, 2, kernel);
    CHECK(k.size() == 2);
    CHECK(k.member({2, 0}));

    std::vector<ZqVec> srows{{2, 1}, {3, 3}};
    auto combo = solve_combination(6, 2, srows, {5, 4});
    REQUIRE(combo.has_value());
    ZqVec check(2, 0);
    for (int i = 0; i < 2; ++i)
        for (int c = 0; c < 2; ++c) check[c] = mod_q(check[c] + (*combo)[i] * srows[i][c], 6);
    CHECK(check == ZqVec{5, 4});
    CHECK(!solve_combination(4, 1, {{2}}, {1}).has_value());
}

TEST_CASE("left kernel matches brute force") {
    RandomModelGen gen(83);
    for (int q : {2, 3, 4, 6}) {
        for (int trial = 0; trial < 6; ++trial) {
            int width = gen.uniform_int(1, 3);
            int k = gen.uniform_int(1, 3);
            std::vector<ZqVec> rows;
            for (int i = 0; i < k; ++i) {
                ZqVec r(width);
                for (auto& x : r) x = gen.uniform_int(0, q - 1);
                rows.push_back(r);
            }
            ZqSubmodule kernel(q, k, left_kernel(q, width, rows));
            uint64_t total = 1;
            for (int i = 0; i < k; ++i) total *= q;
            uint64_t count = 0;
            for (uint64_t idx = 0; idx < total; ++idx) {
                ZqVec x(k);
                uint64_t r = idx;
                for (int i = 0; i < k; ++i) {
                    x[i] = static_cast<int>(r % q);
                    r /= q;
                }
                ZqVec img(width, 0);
                for (int i = 0; i < k; ++i)
                    for (int c = 0; c < width; ++c) img[c] = mod_q(img[c] + x[i] * rows[i][c], q);
                bool in_kernel = std::all_of(img.begin(), img.end(), [](int v) { return !v; });
                if (in_kernel) count++;
                CHECK(kernel.member(x) == in_kernel);
            }
            CHECK(kernel.size() == count);
        }
    }
}

TEST_CASE("errors") {
    CHECK_THROWS(ZqSubmodule(2, 2, {{1, 0, 1}}));
    ZqSubmodule outer(2, 2, {{1, 1}});
    ZqSubmodule big(2, 2, {{1, 0}, {0, 1}});
    CHECK_THROWS(coset_representatives(outer, big));  // inner not contained
    CHECK_THROWS(SpinGraph(2, 2, {{0, 0}}));          // self loop
    CHECK_THROWS(SpinGraph(1, 2, {{0, 1}}));          // q too small
}
