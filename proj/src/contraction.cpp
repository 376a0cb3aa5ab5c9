#include "spinz/contraction.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "spinz/threads.hpp"

namespace spinz {

namespace {

std::vector<ZqVec> range_generators(const std::vector<EncodingColumn>& columns,
                                    const std::vector<int>& side, int num_vertices, int q) {
    // rows of M_side^T: the image of each unit spin vector
    std::vector<ZqVec> gens;
    for (int v = 0; v < num_vertices; ++v) {
        ZqVec g(side.size(), 0);
        bool nonzero = false;
        for (size_t i = 0; i < side.size(); ++i) {
            const auto& col = columns[side[i]];
            int e = 0;
            if (col.type == EncodingColumn::Type::Difference)
                e = (col.head == v ? 1 : 0) - (col.tail == v ? 1 : 0);
            else
                e = col.vertex == v ? 1 : 0;
            g[i] = mod_q(e, q);
            nonzero |= g[i] != 0;
        }
        if (nonzero) gens.push_back(std::move(g));
    }
    return gens;
}

std::vector<ZqVec> local_generators(const std::vector<EncodingColumn>& columns,
                                    const std::vector<int>& side, const std::vector<int>& other,
                                    int num_vertices, int q) {
    // images of the free components of the other side: cut vectors vanishing there
    UnionFind uf(num_vertices);
    std::vector<char> pinned(num_vertices, 0);
    for (int c : other) {
        const auto& col = columns[c];
        if (col.type == EncodingColumn::Type::Difference)
            uf.unite(col.tail, col.head);
        else
            pinned[col.vertex] = 1;
    }
    std::vector<char> root_pinned(num_vertices, 0);
    for (int v = 0; v < num_vertices; ++v)
        if (pinned[v]) root_pinned[uf.find(v)] = 1;
    std::map<int, std::vector<int>> comps;
    for (int v = 0; v < num_vertices; ++v) {
        int r = uf.find(v);
        if (!root_pinned[r]) comps[r].push_back(v);
    }
    std::vector<ZqVec> gens;
    for (const auto& [root, members] : comps) {
        std::vector<char> in_comp(num_vertices, 0);
        for (int v : members) in_comp[v] = 1;
        ZqVec g(side.size(), 0);
        bool nonzero = false;
        for (size_t i = 0; i < side.size(); ++i) {
            const auto& col = columns[side[i]];
            int e = 0;
            if (col.type == EncodingColumn::Type::Difference)
                e = (in_comp[col.head] ? 1 : 0) - (in_comp[col.tail] ? 1 : 0);
            else
                e = in_comp[col.vertex] ? 1 : 0;
            g[i] = mod_q(e, q);
            nonzero |= g[i] != 0;
        }
        if (nonzero) gens.push_back(std::move(g));
    }
    return gens;
}

ZqVec apply_side_map(const std::vector<EncodingColumn>& columns, const std::vector<int>& side,
                     const ZqVec& spin, int q) {
    ZqVec out(side.size(), 0);
    for (size_t i = 0; i < side.size(); ++i) {
        const auto& col = columns[side[i]];
        if (col.type == EncodingColumn::Type::Difference)
            out[i] = mod_q(spin[col.head] - spin[col.tail], q);
        else
            out[i] = spin[col.vertex];
    }
    return out;
}

}  // namespace

SchmidtBasisSpec pair_cosets(const SpinGraph& graph, const std::vector<int>& cut, Encoding enc) {
    const int q = graph.q;
    std::vector<EncodingColumn> columns = encoding_columns(graph, enc);
    const int total = static_cast<int>(columns.size());
    if (cut.empty() || static_cast<int>(cut.size()) >= total)
        throw std::invalid_argument("pair_cosets needs a proper nonempty cut");
    std::vector<char> in(total, 0);
    for (int c : cut) in[c] = 1;
    std::vector<int> p = cut, rest;
    std::sort(p.begin(), p.end());
    for (int c = 0; c < total; ++c)
        if (!in[c]) rest.push_back(c);

    const int nv = graph.num_vertices;
    std::vector<ZqVec> ran_p = range_generators(columns, p, nv, q);
    std::vector<ZqVec> ran_q = range_generators(columns, rest, nv, q);
    ZqSubmodule outer_p(q, static_cast<int>(p.size()), ran_p);
    ZqSubmodule outer_q(q, static_cast<int>(rest.size()), ran_q);
    ZqSubmodule inner_p(q, static_cast<int>(p.size()),
                        local_generators(columns, p, rest, nv, q));
    ZqSubmodule inner_q(q, static_cast<int>(rest.size()),
                        local_generators(columns, rest, p, nv, q));

    SchmidtBasisSpec spec;
    spec.cut = p;
    spec.reps_p = coset_representatives(outer_p, inner_p);
    spec.reps_q = coset_representatives(outer_q, inner_q);
    if (spec.reps_p.size() != spec.reps_q.size())
        throw std::logic_error("coset counts differ across the cut");
    unsigned long long expect = schmidt_rank(graph, p, enc);
    if (spec.reps_p.size() != expect)
        throw std::logic_error("coset count does not match q^(lambda-1)");
    spec.schmidt_value = 1.0 / std::sqrt(static_cast<double>(spec.reps_p.size()));
    spec.local_p = inner_p;
    spec.local_q = inner_q;

    // pair each P-representative through a spin preimage
    // (range generators skip untouched vertices, so rebuild the full list)
    std::vector<ZqVec> ran_p_full;
    for (int v = 0; v < nv; ++v) {
        ZqVec g(p.size(), 0);
        for (size_t i = 0; i < p.size(); ++i) {
            const auto& col = columns[p[i]];
            int e = 0;
            if (col.type == EncodingColumn::Type::Difference)
                e = (col.head == v ? 1 : 0) - (col.tail == v ? 1 : 0);
            else
                e = col.vertex == v ? 1 : 0;
            g[i] = mod_q(e, q);
        }
        ran_p_full.push_back(std::move(g));
    }
    spec.pairing.resize(spec.reps_p.size());
    for (size_t i = 0; i < spec.reps_p.size(); ++i) {
        auto combo = solve_combination(q, static_cast<int>(p.size()), ran_p_full, spec.reps_p[i]);
        if (!combo) throw std::logic_error("no cut vector extends the P-side representative");
        ZqVec a = apply_side_map(columns, rest, *combo, q);
        ZqVec canon = inner_q.canonical.reduce(a);
        auto it = std::lower_bound(spec.reps_q.begin(), spec.reps_q.end(), canon);
        if (it == spec.reps_q.end() || *it != canon)
            throw std::logic_error("paired representative missing from the Q side");
        spec.pairing[i] = static_cast<int>(it - spec.reps_q.begin());
    }
    return spec;
}

namespace {

struct CaterpillarShape {
    bool is_caterpillar = false;
    std::vector<int> node_of_prefix;  // internal node whose cut is order[0..k), index k
    std::vector<int> leaf_order;      // leaf ids deepest-first
};

CaterpillarShape detect_caterpillar(const BranchDecomposition& bd) {
    CaterpillarShape shape;
    if (bd.num_leaves() < 3) return shape;
    std::vector<int> rev_leaves, spine;
    int n = bd.root;
    while (!bd.is_leaf(n)) {
        if (!bd.is_leaf(bd.nodes[n].right)) return shape;
        rev_leaves.push_back(bd.nodes[bd.nodes[n].right].leaf_id);
        spine.push_back(n);
        n = bd.nodes[n].left;
    }
    rev_leaves.push_back(bd.nodes[n].leaf_id);
    shape.is_caterpillar = true;
    shape.leaf_order.assign(rev_leaves.rbegin(), rev_leaves.rend());
    // spine[0] = root holds prefix L, deeper nodes shorter prefixes
    const int L = static_cast<int>(shape.leaf_order.size());
    shape.node_of_prefix.assign(L + 1, -1);
    for (size_t i = 0; i < spine.size(); ++i)
        shape.node_of_prefix[L - static_cast<int>(i)] = spine[i];
    return shape;
}

}  // namespace

ScaledComplex contract_weights(const LeafStructure& ls, int q, const BranchDecomposition& bd,
                               const std::vector<ScaledVector>& leaf_weights,
                               uint64_t max_label_dim, WidthReport* width_out, int threads) {
    const int L = ls.num_leaves();
    if (static_cast<int>(leaf_weights.size()) != L)
        throw std::invalid_argument("one weight vector per leaf required");
    ScaledComplex prefactor = scaled_pow_q(q, global_kernel_exponent(ls));
    if (width_out) *width_out = WidthReport{};
    if (L == 0) return prefactor;
    bd.validate(L);

    if (L == 1) {
        SideView leaf = side_from_leaf(ls, 0, q, leaf_weights[0]);
        cplx sum(0.0);
        for (const auto& a : leaf.amplitudes) sum += a;
        ScaledComplex s{sum, leaf.log_scale};
        s.normalize();
        return prefactor * s;
    }

    CaterpillarShape shape = detect_caterpillar(bd);
    if (shape.is_caterpillar) {
        std::vector<CutLabels> cuts = caterpillar_cut_sequence(ls, shape.leaf_order, max_label_dim, q);
        if (width_out)
            for (int k = 2; k < L; ++k) {
                width_out->per_edge_lambda[shape.node_of_prefix[k]] = cuts[k].lambda;
                width_out->width = std::max(width_out->width, cuts[k].lambda);
            }
        CutLabels root = trivial_cut(q);
        SideView acc = side_from_leaf(ls, shape.leaf_order[0], q, leaf_weights[shape.leaf_order[0]]);
        for (int k = 1; k < L; ++k) {
            SideView leaf = side_from_leaf(ls, shape.leaf_order[k], q, leaf_weights[shape.leaf_order[k]]);
            const CutLabels& parent = (k + 1 <= L - 1) ? cuts[k + 1] : root;
            ScaledVector msg = combine(acc, leaf, parent, q);
            if (k + 1 <= L - 1)
                acc = side_from_labels(cuts[k + 1], std::move(msg.amplitudes), msg.log_scale);
            else
                return prefactor * ScaledComplex{msg.amplitudes[0], msg.log_scale};
        }
        throw std::logic_error("caterpillar contraction fell through");
    }

    // generic path: per-node cuts recomputed from scratch; messages for
    // disjoint subtrees are evaluated concurrently, wave by wave, and each
    // node's value is a pure function of its children, so the result does
    // not depend on the worker count
    std::vector<std::vector<int>> waves;
    {
        std::vector<int> depth(bd.nodes.size(), 0);
        std::vector<int> post;
        std::vector<std::pair<int, bool>> stack{{bd.root, false}};
        while (!stack.empty()) {
            auto [n, expanded] = stack.back();
            stack.pop_back();
            if (bd.is_leaf(n)) continue;
            if (expanded) {
                int l = bd.nodes[n].left, r = bd.nodes[n].right;
                depth[n] = 1 + std::max(bd.is_leaf(l) ? 0 : depth[l],
                                        bd.is_leaf(r) ? 0 : depth[r]);
                if (static_cast<int>(waves.size()) < depth[n]) waves.resize(depth[n]);
                waves[depth[n] - 1].push_back(n);
            } else {
                stack.push_back({n, true});
                stack.push_back({bd.nodes[n].left, false});
                stack.push_back({bd.nodes[n].right, false});
            }
        }
    }
    std::vector<CutLabels> cuts(bd.nodes.size());
    std::vector<ScaledVector> messages(bd.nodes.size());
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (const auto& wave : waves) {
        parallel_chunks(static_cast<int>(wave.size()), resolve_thread_count(threads), [&](int i) {
            int n = wave[i];
            try {
                if (n == bd.root) {
                    cuts[n] = trivial_cut(q);
                } else {
                    std::vector<char> in(L, 0);
                    for (int l : bd.leaves_below(n)) in[l] = 1;
                    cuts[n] = build_cut_labels(ls, in, max_label_dim, q);
                }
                auto side_of = [&](int child) {
                    if (bd.is_leaf(child)) {
                        int leaf = bd.nodes[child].leaf_id;
                        return side_from_leaf(ls, leaf, q, leaf_weights[leaf]);
                    }
                    return side_from_labels(cuts[child], std::move(messages[child].amplitudes),
                                            messages[child].log_scale);
                };
                SideView left = side_of(bd.nodes[n].left);
                SideView right = side_of(bd.nodes[n].right);
                messages[n] = combine(left, right, cuts[n], q);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
        if (first_error) std::rethrow_exception(first_error);
    }
    if (width_out)
        for (int n = 0; n < static_cast<int>(bd.nodes.size()); ++n) {
            if (n == bd.root || bd.is_leaf(n)) continue;
            width_out->per_edge_lambda[n] = cuts[n].lambda;
            width_out->width = std::max(width_out->width, cuts[n].lambda);
        }
    const ScaledVector& top = messages[bd.root];
    return prefactor * ScaledComplex{top.amplitudes[0], top.log_scale};
}

Encoding auto_encoding(const Hamiltonian& h) {
    switch (h.form) {
        case TermForm::Difference: return h.has_fields() ? Encoding::Phi : Encoding::Psi;
        case TermForm::Pairwise: return Encoding::Ghz;
        case TermForm::KBody: return Encoding::KBody;
    }
    return Encoding::Psi;
}

std::vector<ScaledVector> encoding_weights(const Hamiltonian& h, double beta, Encoding enc,
                                           const std::vector<int>& correlation_sites) {
    const int q = h.graph.q;
    std::vector<ScaledVector> weights;
    if (!correlation_sites.empty() && enc != Encoding::Phi)
        throw std::invalid_argument("correlations require the phi encoding");
    switch (enc) {
        case Encoding::Psi: {
            if (h.form != TermForm::Difference || h.has_fields() || !h.kbody_terms.empty())
                throw std::invalid_argument("psi requires a difference-form model without fields");
            for (const auto& t : h.edge_terms) weights.push_back(boltzmann_weights(t, q, beta));
            break;
        }
        case Encoding::Phi: {
            if (h.form != TermForm::Difference || !h.kbody_terms.empty())
                throw std::invalid_argument("phi requires a difference-form model");
            for (int v = 0; v < h.graph.num_vertices; ++v) {
                int m = static_cast<int>(std::count(correlation_sites.begin(), correlation_sites.end(), v));
                VertexFieldTable table;
                if (auto it = h.vertex_terms.find(v); it != h.vertex_terms.end())
                    table = it->second;
                else
                    table.values.assign(q, cplx(0.0));
                weights.push_back(boltzmann_weights(table, q, beta, m));
            }
            for (const auto& t : h.edge_terms) weights.push_back(boltzmann_weights(t, q, beta));
            break;
        }
        case Encoding::Ghz: {
            if (h.form != TermForm::Pairwise)
                throw std::invalid_argument("ghz requires a pairwise-form model");
            for (const auto& t : h.pairwise_terms) weights.push_back(boltzmann_weights(t, q, beta));
            for (const auto& t : h.kbody_terms) weights.push_back(boltzmann_weights(t, q, beta));
            break;
        }
        case Encoding::KBody: {
            if (h.form != TermForm::KBody)
                throw std::invalid_argument("kbody requires a k-body model");
            for (const auto& t : h.kbody_terms) weights.push_back(boltzmann_weights(t, q, beta));
            for (const auto& [v, t] : h.vertex_terms) weights.push_back(boltzmann_weights(t, q, beta));
            break;
        }
    }
    return weights;
}

ContractOutcome contract(const Hamiltonian& h, double beta, const ContractOptions& opts) {
    h.validate();
    if (!std::isfinite(beta)) throw std::invalid_argument("beta must be finite");
    for (int s : opts.correlation_sites)
        if (s < 0 || s >= h.graph.num_vertices)
            throw std::invalid_argument("correlation site out of range");

    if (opts.encoding == Encoding::KBody || opts.encoding == Encoding::Ghz)
        for (const auto& term : h.kbody_terms)
            if (static_cast<int>(term.sites.size()) > opts.max_term_arity)
                throw std::invalid_argument(
                    "k-body term arity " + std::to_string(term.sites.size()) +
                    " exceeds the contraction-site cap " + std::to_string(opts.max_term_arity));

    ContractOutcome out;
    out.encoding = opts.encoding;
    LeafStructure ls = leaf_structure(h, opts.encoding);
    std::vector<ScaledVector> weights = encoding_weights(h, beta, opts.encoding, opts.correlation_sites);
    out.num_leaves = ls.num_leaves();

    if (opts.decomposition) {
        out.decomposition = *opts.decomposition;
        out.decomposition.validate(ls.num_leaves());
    } else if (ls.num_leaves() > 0) {
        out.decomposition = heuristic_branch_decompose(ls, opts.strategy);
    }
    out.z = contract_weights(ls, h.graph.q, out.decomposition, weights, opts.max_label_dim,
                             &out.width, opts.threads);
    return out;
}

TensorTree build_ttn(const SpinGraph& graph, const BranchDecomposition& bd, Encoding enc) {
    if (enc != Encoding::Psi && enc != Encoding::Phi)
        throw std::invalid_argument("the tensor tree form covers the psi and phi encodings");
    TensorTree tt;
    tt.q = graph.q;
    tt.structure = leaf_structure(graph, enc);
    tt.bd = bd;
    bd.validate(tt.structure.num_leaves());
    const int q = graph.q;
    const int L = tt.structure.num_leaves();
    tt.cuts.resize(bd.nodes.size());
    tt.entries.resize(bd.nodes.size());
    tt.leaf_value_label.resize(bd.nodes.size());

    for (int n = 0; n < static_cast<int>(bd.nodes.size()); ++n) {
        if (n == bd.root && L > 1) {
            tt.cuts[n] = trivial_cut(q);
            continue;
        }
        std::vector<char> in(L, 0);
        for (int l : bd.leaves_below(n)) in[l] = 1;
        if (std::all_of(in.begin(), in.end(), [](char c) { return c != 0; }))
            tt.cuts[n] = trivial_cut(q);
        else
            tt.cuts[n] = build_cut_labels(tt.structure, in, uint64_t(1) << 24, q);
    }

    for (int n = 0; n < static_cast<int>(bd.nodes.size()); ++n) {
        if (bd.is_leaf(n)) {
            int leaf = bd.nodes[n].leaf_id;
            ScaledVector ones;
            uint64_t dim = 1;
            for (size_t i = 0; i < tt.structure.leaf_columns[leaf].size(); ++i) dim *= q;
            ones.amplitudes.assign(dim, cplx(1.0));
            std::vector<uint64_t> xs;
            SideView side = side_from_leaf(tt.structure, leaf, q, ones, &xs);
            tt.leaf_value_label[n].assign(dim, -1);
            // restrict each interface assignment to the leaf cut's boundary
            std::map<int, int> iface_pos;
            for (size_t i = 0; i < side.interface.size(); ++i) iface_pos[side.interface[i]] = static_cast<int>(i);
            for (size_t k = 0; k < xs.size(); ++k) {
                ZqVec y(tt.cuts[n].boundary.size());
                for (size_t b = 0; b < tt.cuts[n].boundary.size(); ++b)
                    y[b] = side.bases[k][iface_pos.at(tt.cuts[n].boundary[b])];
                tt.leaf_value_label[n][xs[k]] = tt.cuts[n].label_of(y);
            }
        } else {
            auto label_side = [&](int child) {
                return side_from_labels(tt.cuts[child],
                                        std::vector<cplx>(tt.cuts[child].dim(), cplx(1.0)), 0.0);
            };
            SideView left = label_side(bd.nodes[n].left);
            SideView right = label_side(bd.nodes[n].right);
            tt.entries[n] = combine_entries(left, right, tt.cuts[n], q);
        }
    }
    if (L > 1) {
        tt.root_terms = tt.cuts[bd.nodes[bd.root].left].dim();
        tt.root_schmidt_value = 1.0 / std::sqrt(static_cast<double>(tt.root_terms));
    }
    return tt;
}

namespace {

// map from node to dense vectors per label, in bd leaf-column order
std::vector<std::vector<cplx>> ttn_dense_node(const TensorTree& tt, int n, uint64_t& dim_out) {
    const auto& bd = tt.bd;
    if (bd.is_leaf(n)) {
        uint64_t dim = tt.leaf_value_label[n].size();
        dim_out = dim;
        std::vector<std::vector<cplx>> out(tt.cuts[n].dim(), std::vector<cplx>(dim, cplx(0.0)));
        for (uint64_t x = 0; x < dim; ++x) {
            int lab = tt.leaf_value_label[n][x];
            if (lab >= 0) out[lab][x] = 1.0;
        }
        return out;
    }
    uint64_t dl = 0, dr = 0;
    auto left = ttn_dense_node(tt, bd.nodes[n].left, dl);
    auto right = ttn_dense_node(tt, bd.nodes[n].right, dr);
    dim_out = dl * dr;
    std::vector<std::vector<cplx>> out(tt.cuts[n].dim(), std::vector<cplx>(dim_out, cplx(0.0)));
    for (const auto& [p, i, j] : tt.entries[n])
        for (uint64_t a = 0; a < dl; ++a) {
            if (left[i][a] == cplx(0.0)) continue;
            for (uint64_t b = 0; b < dr; ++b) out[p][a * dr + b] += left[i][a] * right[j][b];
        }
    return out;
}

}  // namespace

std::vector<cplx> ttn_dense(const TensorTree& tt) {
    uint64_t dim = 0;
    auto top = ttn_dense_node(tt, tt.bd.root, dim);
    std::vector<cplx> in_leaf_order(dim, cplx(0.0));
    for (const auto& vec : top)
        for (uint64_t i = 0; i < dim; ++i) in_leaf_order[i] += vec[i];

    // permute from bd leaf-column order to encoding column order
    std::vector<int> column_sequence;
    for (int l : tt.bd.leaves_below(tt.bd.root))
        for (int c : tt.structure.leaf_columns[l]) column_sequence.push_back(c);
    const int ncols = static_cast<int>(tt.structure.columns.size());
    const int q = tt.q;
    std::vector<cplx> out(dim, cplx(0.0));
    std::vector<int> digits(ncols);
    for (uint64_t idx = 0; idx < dim; ++idx) {
        if (in_leaf_order[idx] == cplx(0.0)) continue;
        uint64_t rest = idx;
        for (int i = ncols - 1; i >= 0; --i) {
            digits[i] = static_cast<int>(rest % q);
            rest /= q;
        }
        uint64_t target = 0;
        std::vector<int> by_column(ncols, 0);
        for (int i = 0; i < ncols; ++i) by_column[column_sequence[i]] = digits[i];
        for (int c = 0; c < ncols; ++c) target = target * q + by_column[c];
        out[target] += in_leaf_order[idx];
    }
    return out;
}

FreeEnergyReport free_energy_report(const ScaledComplex& z, double beta, int num_spins) {
    if (z.is_zero()) throw std::domain_error("partition function is zero");
    if (beta <= 0) throw std::invalid_argument("free energy needs beta > 0");
    FreeEnergyReport r;
    r.log_z = z.log();
    r.free_energy_per_spin = -r.log_z.real() / (beta * num_spins);
    return r;
}

FreeEnergyReport free_energy_report(const ScaledComplex& z, double beta, int num_spins,
                                    const ScaledComplex& z_minus, const ScaledComplex& z_plus,
                                    double delta) {
    FreeEnergyReport r = free_energy_report(z, beta, num_spins);
    double lm = z_minus.log().real();
    double lp = z_plus.log().real();
    double l0 = r.log_z.real();
    r.energy_mean = -(lp - lm) / (2.0 * delta);
    r.energy_variance = (lp - 2.0 * l0 + lm) / (delta * delta);
    return r;
}

}  // namespace spinz
