#include "spinz/cutlabels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <set>

namespace spinz {

namespace {

// union-find over vertices plus one virtual "zero" node; tracks per-root
// pinned flags and the number of unpinned components.
class PinnedUF {
  public:
    explicit PinnedUF(int n) : parent_(n), pinned_(n, 0), free_count_(n) {
        for (int i = 0; i < n; ++i) parent_[i] = i;
    }
    int find(int x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        bool fa = !pinned_[a], fb = !pinned_[b];
        parent_[b] = a;
        pinned_[a] = pinned_[a] || pinned_[b];
        free_count_ -= (fa ? 1 : 0) + (fb ? 1 : 0) - (!pinned_[a] ? 1 : 0);
    }
    void pin(int v) {
        int r = find(v);
        if (!pinned_[r]) {
            pinned_[r] = 1;
            free_count_--;
        }
    }
    bool pinned(int v) { return pinned_[find(v)]; }
    int free_count() const { return free_count_; }

  private:
    std::vector<int> parent_;
    std::vector<char> pinned_;
    int free_count_;
};

void add_column(PinnedUF& uf, const EncodingColumn& col) {
    if (col.type == EncodingColumn::Type::Difference)
        uf.unite(col.tail, col.head);
    else
        uf.pin(col.vertex);
}

// Gauge generators: one shift indicator per unpinned component that meets the
// boundary, restricted to boundary coordinates.
void append_shift_generators(PinnedUF& uf, const std::vector<int>& boundary,
                             std::vector<ZqVec>& out) {
    std::map<int, ZqVec> by_root;
    for (size_t i = 0; i < boundary.size(); ++i) {
        int v = boundary[i];
        if (uf.pinned(v)) continue;
        auto [it, fresh] = by_root.try_emplace(uf.find(v), ZqVec(boundary.size(), 0));
        it->second[i] = 1;
    }
    for (auto& [root, vec] : by_root) out.push_back(std::move(vec));
}

// Completes a cut whose boundary, gauge generators and lambda are known:
// canonicalizer, label enumeration, and the label-count consistency check.
void finish_cut(CutLabels& cut, uint64_t max_label_dim) {
    const int q = cut.q;
    double log_dim = (cut.lambda - 1) * std::log2(static_cast<double>(q));
    if (log_dim > 62 || (uint64_t(1) << static_cast<int>(std::ceil(log_dim))) > 2 * max_label_dim) {
        uint64_t approx = log_dim > 62 ? UINT64_MAX : (uint64_t(1) << static_cast<int>(std::ceil(log_dim)));
        throw WidthLimitError(cut.lambda, approx);
    }
    uint64_t expected = 1;
    for (int i = 1; i < cut.lambda; ++i) expected *= static_cast<uint64_t>(q);
    if (expected > max_label_dim) throw WidthLimitError(cut.lambda, expected);

    cut.gauge = HowellBasis(q, static_cast<int>(cut.boundary.size()), cut.gauge_generators);
    if (cut.gauge.rows().empty()) {
        // trivial gauge: every boundary assignment is its own label
        if (expected != 1 && cut.boundary.empty())
            throw std::logic_error("labels without boundary must be unique");
        cut.labels.reserve(expected);
        ZqVec y(cut.boundary.size(), 0);
        for (uint64_t i = 0; i < expected; ++i) {
            cut.labels.push_back(y);
            for (int pos = static_cast<int>(y.size()) - 1; pos >= 0; --pos) {
                if (++y[pos] < q) break;
                y[pos] = 0;
            }
        }
        uint64_t full = 1;
        for (size_t i = 0; i < cut.boundary.size(); ++i) full *= static_cast<uint64_t>(q);
        if (expected != full)
            throw std::logic_error("trivial gauge but label count differs from q^|boundary|");
        return;
    }
    std::set<ZqVec> seen;
    std::vector<ZqVec> frontier;
    ZqVec zero(cut.boundary.size(), 0);
    ZqVec start = cut.gauge.reduce(zero);
    seen.insert(start);
    frontier.push_back(start);
    while (!frontier.empty() && seen.size() < expected) {
        std::vector<ZqVec> next;
        for (const auto& rep : frontier) {
            for (size_t i = 0; i < cut.boundary.size() && seen.size() < expected; ++i) {
                ZqVec y = rep;
                y[i] = mod_q(y[i] + 1, q);
                ZqVec canon = cut.gauge.reduce(std::move(y));
                if (seen.insert(canon).second) next.push_back(std::move(canon));
            }
        }
        frontier = std::move(next);
    }
    if (seen.size() != expected)
        throw std::logic_error("label count " + std::to_string(seen.size()) +
                               " does not match q^(lambda-1) = " + std::to_string(expected));
    cut.labels.assign(seen.begin(), seen.end());
}

}  // namespace

int CutLabels::label_of(const ZqVec& y) const { return index_of_canonical(gauge.reduce(y)); }

int CutLabels::index_of_canonical(const ZqVec& canon_rep) const {
    auto it = std::lower_bound(labels.begin(), labels.end(), canon_rep);
    if (it == labels.end() || *it != canon_rep)
        throw std::logic_error("boundary assignment outside the label set");
    return static_cast<int>(it - labels.begin());
}

CutLabels trivial_cut(int q) {
    CutLabels cut;
    cut.q = q;
    cut.lambda = 1;
    cut.gauge = HowellBasis(q, 0, {});
    cut.labels = {ZqVec{}};
    return cut;
}

CutLabels build_cut_labels(const LeafStructure& ls, const std::vector<char>& leaf_in_subset,
                           uint64_t max_label_dim, int q) {
    const int nv = ls.num_vertices;
    PinnedUF side_a(nv), side_b(nv), all(nv);
    std::vector<char> touched_a(nv, 0), touched_b(nv, 0);
    for (int l = 0; l < ls.num_leaves(); ++l) {
        bool in = leaf_in_subset[l];
        for (int c : ls.leaf_columns[l]) {
            const auto& col = ls.columns[c];
            add_column(in ? side_a : side_b, col);
            add_column(all, col);
            auto touch = [&](int v) { (in ? touched_a : touched_b)[v] = 1; };
            if (col.type == EncodingColumn::Type::Difference) {
                touch(col.tail);
                touch(col.head);
            } else {
                touch(col.vertex);
            }
        }
    }
    CutLabels cut;
    cut.q = q;
    for (int v = 0; v < nv; ++v)
        if (touched_a[v] && touched_b[v]) cut.boundary.push_back(v);
    cut.lambda = nv + all.free_count() - side_a.free_count() - side_b.free_count() + 1;
    append_shift_generators(side_a, cut.boundary, cut.gauge_generators);
    append_shift_generators(side_b, cut.boundary, cut.gauge_generators);
    finish_cut(cut, max_label_dim);
    return cut;
}

SideView side_from_labels(const CutLabels& cut, std::vector<cplx> message, double log_scale) {
    SideView s;
    s.interface = cut.boundary;
    s.shift_vars = cut.gauge_generators;
    s.bases = cut.labels;
    s.amplitudes = std::move(message);
    s.log_scale = log_scale;
    return s;
}

SideView side_from_leaf(const LeafStructure& ls, int leaf, int q, const ScaledVector& weights,
                        std::vector<uint64_t>* out_values) {
    const auto& cols = ls.leaf_columns[leaf];
    const int m = static_cast<int>(cols.size());
    uint64_t dim = 1;
    for (int i = 0; i < m; ++i) dim *= static_cast<uint64_t>(q);
    if (weights.amplitudes.size() != dim)
        throw std::invalid_argument("leaf weight tensor has wrong length");

    SideView s;
    s.log_scale = weights.log_scale;
    for (int c : cols) {
        const auto& col = ls.columns[c];
        if (col.type == EncodingColumn::Type::Difference) {
            s.interface.push_back(col.tail);
            s.interface.push_back(col.head);
        } else {
            s.interface.push_back(col.vertex);
        }
    }
    std::sort(s.interface.begin(), s.interface.end());
    s.interface.erase(std::unique(s.interface.begin(), s.interface.end()), s.interface.end());
    auto local_of = [&](int v) {
        return static_cast<int>(std::lower_bound(s.interface.begin(), s.interface.end(), v) -
                                s.interface.begin());
    };
    const int n_local = static_cast<int>(s.interface.size());
    const int zero_node = n_local;  // virtual anchor for pinned values

    // offset union-find: value(x) = value(parent) + off
    std::vector<int> parent(n_local + 1), off(n_local + 1);
    auto find = [&](int x) -> std::pair<int, int> {
        int o = 0;
        while (parent[x] != x) {
            o = mod_q(o + off[x], q);
            x = parent[x];
        }
        return {x, o};
    };
    auto reset = [&]() {
        for (int i = 0; i <= n_local; ++i) {
            parent[i] = i;
            off[i] = 0;
        }
    };
    // s_b - s_a = d; returns false on contradiction
    auto unite = [&](int a, int b, int d) {
        auto [ra, oa] = find(a);
        auto [rb, ob] = find(b);
        if (ra == rb) return mod_q(ob - oa - d, q) == 0;
        parent[rb] = ra;
        off[rb] = mod_q(oa + d - ob, q);
        return true;
    };

    std::vector<int> digits(m);
    for (uint64_t x = 0; x < dim; ++x) {
        uint64_t rest = x;
        for (int i = m - 1; i >= 0; --i) {
            digits[i] = static_cast<int>(rest % q);
            rest /= q;
        }
        reset();
        bool ok = true;
        for (int i = 0; i < m && ok; ++i) {
            const auto& col = ls.columns[cols[i]];
            if (col.type == EncodingColumn::Type::Difference)
                ok = unite(local_of(col.tail), local_of(col.head), digits[i]);
            else
                ok = unite(zero_node, local_of(col.vertex), digits[i]);
        }
        if (!ok) continue;  // value not realizable by any spin assignment
        ZqVec base(n_local);
        auto [zr, zo] = find(zero_node);
        for (int li = 0; li < n_local; ++li) {
            auto [r, o] = find(li);
            base[li] = (r == zr) ? mod_q(o - zo, q) : o;  // free roots anchored at 0
        }
        s.bases.push_back(std::move(base));
        s.amplitudes.push_back(weights.amplitudes[x]);
        if (out_values) out_values->push_back(x);
    }

    // shift variables: the free components of the leaf's own structure
    // (x = 0 is always realizable and fixes the partition)
    reset();
    for (int c : cols) {
        const auto& col = ls.columns[c];
        if (col.type == EncodingColumn::Type::Difference)
            unite(local_of(col.tail), local_of(col.head), 0);
        else
            unite(zero_node, local_of(col.vertex), 0);
    }
    std::map<int, ZqVec> by_root;
    auto [zr_, zo_] = find(zero_node);
    for (int li = 0; li < n_local; ++li) {
        auto [r, o] = find(li);
        if (r == zr_) continue;
        auto [it, fresh] = by_root.try_emplace(r, ZqVec(n_local, 0));
        it->second[li] = 1;
    }
    for (auto& [root, vec] : by_root) s.shift_vars.push_back(std::move(vec));
    return s;
}

namespace {

struct PairContext {
    std::vector<int> shared;                // vertex ids
    std::vector<int> pos_left, pos_right;   // coords of shared in each interface
    ZqSolver solver;
    int n_left_vars = 0;
    // parent boundary coords: (use_left, position in that interface)
    std::vector<std::pair<bool, int>> parent_src;

    mutable ZqVec delta_scratch, y_scratch;

    PairContext(const SideView& left, const SideView& right, const CutLabels& parent, int q) {
        // both interfaces are sorted; intersect them
        size_t a = 0, b = 0;
        while (a < left.interface.size() && b < right.interface.size()) {
            if (left.interface[a] < right.interface[b]) {
                a++;
            } else if (left.interface[a] > right.interface[b]) {
                b++;
            } else {
                shared.push_back(left.interface[a]);
                pos_left.push_back(static_cast<int>(a));
                pos_right.push_back(static_cast<int>(b));
                a++;
                b++;
            }
        }
        std::vector<ZqVec> rows;
        for (const auto& var : left.shift_vars) {
            ZqVec r(shared.size());
            for (size_t i = 0; i < shared.size(); ++i) r[i] = var[pos_left[i]];
            rows.push_back(std::move(r));
        }
        n_left_vars = static_cast<int>(rows.size());
        for (const auto& var : right.shift_vars) {
            ZqVec r(shared.size());
            for (size_t i = 0; i < shared.size(); ++i) r[i] = mod_q(-var[pos_right[i]], q);
            rows.push_back(std::move(r));
        }
        solver = ZqSolver(q, static_cast<int>(shared.size()), rows);
        for (int v : parent.boundary) {
            auto it = std::lower_bound(left.interface.begin(), left.interface.end(), v);
            if (it != left.interface.end() && *it == v) {
                parent_src.push_back({true, static_cast<int>(it - left.interface.begin())});
                continue;
            }
            auto it2 = std::lower_bound(right.interface.begin(), right.interface.end(), v);
            if (it2 != right.interface.end() && *it2 == v)
                parent_src.push_back({false, static_cast<int>(it2 - right.interface.begin())});
            else
                throw std::logic_error("parent boundary vertex missing from both children");
        }
        delta_scratch.resize(shared.size());
        y_scratch.resize(parent.boundary.size());
    }

    // parent label for pair (i, j), or -1 if incompatible
    int resolve(const SideView& left, const SideView& right, const CutLabels& parent, int q,
                int i, int j) const {
        ZqVec& delta = delta_scratch;
        for (size_t t = 0; t < shared.size(); ++t)
            delta[t] = mod_q(right.bases[j][pos_right[t]] - left.bases[i][pos_left[t]], q);
        auto combo = solver.solve(delta);
        if (!combo) return -1;
        ZqVec& y = y_scratch;
        for (size_t t = 0; t < parent.boundary.size(); ++t) {
            auto [use_left, pos] = parent_src[t];
            long long val = use_left ? left.bases[i][pos] : right.bases[j][pos];
            if (use_left) {
                for (int k = 0; k < n_left_vars; ++k) val += static_cast<long long>((*combo)[k]) * left.shift_vars[k][pos];
            } else {
                for (size_t k = 0; k < right.shift_vars.size(); ++k)
                    val += static_cast<long long>((*combo)[n_left_vars + k]) * right.shift_vars[k][pos];
            }
            y[t] = mod_q(val, q);
        }
        return parent.label_of(y);
    }
};

}  // namespace

ScaledVector combine(const SideView& left, const SideView& right, const CutLabels& parent, int q) {
    PairContext ctx(left, right, parent, q);
    ScaledVector out;
    out.amplitudes.assign(parent.dim(), cplx(0.0));
    out.log_scale = left.log_scale + right.log_scale;
    for (size_t i = 0; i < left.bases.size(); ++i) {
        if (left.amplitudes[i] == cplx(0.0)) continue;
        for (size_t j = 0; j < right.bases.size(); ++j) {
            if (right.amplitudes[j] == cplx(0.0)) continue;
            int idx = ctx.resolve(left, right, parent, q, static_cast<int>(i), static_cast<int>(j));
            if (idx < 0) continue;
            out.amplitudes[idx] += left.amplitudes[i] * right.amplitudes[j];
        }
    }
    out.normalize();
    return out;
}

std::vector<std::array<int, 3>> combine_entries(const SideView& left, const SideView& right,
                                                const CutLabels& parent, int q) {
    PairContext ctx(left, right, parent, q);
    std::vector<std::array<int, 3>> entries;
    for (size_t i = 0; i < left.bases.size(); ++i)
        for (size_t j = 0; j < right.bases.size(); ++j) {
            int idx = ctx.resolve(left, right, parent, q, static_cast<int>(i), static_cast<int>(j));
            if (idx >= 0) entries.push_back({idx, static_cast<int>(i), static_cast<int>(j)});
        }
    return entries;
}

int global_kernel_exponent(const LeafStructure& ls) {
    std::vector<int> all(ls.columns.size());
    for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    return kernel_exponent(ls.num_vertices, ls.columns, all);
}

std::vector<CutLabels> caterpillar_cut_sequence(const LeafStructure& ls,
                                                const std::vector<int>& leaf_order,
                                                uint64_t max_label_dim, int q) {
    const int nv = ls.num_vertices;
    const int L = static_cast<int>(leaf_order.size());
    std::vector<int> first_pos(nv, -1), last_pos(nv, -1);
    auto touch_vertices = [&](int leaf, const std::function<void(int)>& fn) {
        for (int c : ls.leaf_columns[leaf]) {
            const auto& col = ls.columns[c];
            if (col.type == EncodingColumn::Type::Difference) {
                fn(col.tail);
                fn(col.head);
            } else {
                fn(col.vertex);
            }
        }
    };
    for (int pos = 0; pos < L; ++pos)
        touch_vertices(leaf_order[pos], [&](int v) {
            if (first_pos[v] < 0) first_pos[v] = pos;
            last_pos[v] = pos;
        });

    // boundary of each split from the touch intervals
    std::vector<std::vector<int>> boundary(L);  // boundary[k] for split k, k=1..L-1
    {
        std::set<int> live;
        for (int k = 1; k < L; ++k) {
            int pos = k - 1;
            touch_vertices(leaf_order[pos], [&](int v) {
                if (first_pos[v] == pos && last_pos[v] >= k) live.insert(v);
            });
            touch_vertices(leaf_order[pos], [&](int v) {
                if (last_pos[v] == pos) live.erase(v);
            });
            boundary[k].assign(live.begin(), live.end());
        }
    }

    // backward sweep: suffix component roots and pinned flags per split
    std::vector<std::vector<std::pair<int, char>>> suffix_data(L);
    std::vector<int> ke_suffix(L + 1, nv);
    {
        PinnedUF uf(nv);
        for (int k = L - 1; k >= 1; --k) {
            for (int c : ls.leaf_columns[leaf_order[k]]) add_column(uf, ls.columns[c]);
            ke_suffix[k] = uf.free_count();
            suffix_data[k].reserve(boundary[k].size());
            for (int v : boundary[k]) suffix_data[k].push_back({uf.find(v), uf.pinned(v) ? 1 : 0});
        }
    }

    // forward sweep: build each split's cut
    std::vector<CutLabels> cuts(L);  // cuts[k] valid for k=1..L-1
    {
        PinnedUF uf(nv);
        int ke_all = -1;
        {
            PinnedUF whole(nv);
            for (int l = 0; l < L; ++l)
                for (int c : ls.leaf_columns[leaf_order[l]]) add_column(whole, ls.columns[c]);
            ke_all = whole.free_count();
        }
        for (int k = 1; k < L; ++k) {
            for (int c : ls.leaf_columns[leaf_order[k - 1]]) add_column(uf, ls.columns[c]);
            CutLabels& cut = cuts[k];
            cut.q = q;
            cut.boundary = boundary[k];
            cut.lambda = nv + ke_all - uf.free_count() - ke_suffix[k] + 1;
            // prefix-side shift generators
            {
                std::map<int, ZqVec> by_root;
                for (size_t i = 0; i < cut.boundary.size(); ++i) {
                    int v = cut.boundary[i];
                    if (uf.pinned(v)) continue;
                    auto [it, fresh] = by_root.try_emplace(uf.find(v), ZqVec(cut.boundary.size(), 0));
                    it->second[i] = 1;
                }
                for (auto& [r, vec] : by_root) cut.gauge_generators.push_back(std::move(vec));
            }
            // suffix-side shift generators from the recorded roots
            {
                std::map<int, ZqVec> by_root;
                for (size_t i = 0; i < cut.boundary.size(); ++i) {
                    auto [root, pinned] = suffix_data[k][i];
                    if (pinned) continue;
                    auto [it, fresh] = by_root.try_emplace(root, ZqVec(cut.boundary.size(), 0));
                    it->second[i] = 1;
                }
                for (auto& [r, vec] : by_root) cut.gauge_generators.push_back(std::move(vec));
            }
            finish_cut(cut, max_label_dim);
        }
    }
    return cuts;
}

}  // namespace spinz
