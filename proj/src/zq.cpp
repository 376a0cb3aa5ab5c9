#include "spinz/zq.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

namespace spinz {

int mod_q(long long v, int q) {
    long long m = v % q;
    if (m < 0) m += q;
    return static_cast<int>(m);
}

namespace {

// extended gcd: returns g and x, y with x*a + y*b = g
long long ext_gcd(long long a, long long b, long long& x, long long& y) {
    if (b == 0) {
        x = 1;
        y = 0;
        return a;
    }
    long long x1, y1;
    long long g = ext_gcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

// unit u of Z_q with u*a = gcd(a, q) mod q
int normalizing_unit(int a, int q) {
    int g = std::gcd(a, q);
    for (int u = 1; u < q; ++u) {
        if (std::gcd(u, q) == 1 && (static_cast<long long>(u) * a) % q == g) return u;
    }
    return 1;  // a == 0
}

void row_scale(ZqVec& r, long long k, int q) {
    for (auto& v : r) v = mod_q(v * k, q);
}

void row_axpy(ZqVec& r, const ZqVec& other, long long k, int q) {
    for (size_t i = 0; i < r.size(); ++i) r[i] = mod_q(r[i] + k * other[i], q);
}

bool is_zero_row(const ZqVec& r) {
    return std::all_of(r.begin(), r.end(), [](int v) { return v == 0; });
}

// Echelonizes rows in place over Z_q using gcd combinations; pivots are
// normalized to divisors of q and entries above pivots are reduced.
void echelonize(std::vector<ZqVec>& work, int n, int q, std::vector<int>& pivot_cols) {
    std::vector<ZqVec> placed;
    pivot_cols.clear();
    for (int c = 0; c < n; ++c) {
        ZqVec* pivot = nullptr;
        size_t pivot_idx = 0;
        for (size_t i = 0; i < work.size(); ++i) {
            if (work[i][c] == 0) continue;
            if (!pivot) {
                pivot = &work[i];
                pivot_idx = i;
                continue;
            }
            long long a = (*pivot)[c], b = work[i][c], x, y;
            long long g = ext_gcd(a, b, x, y);
            ZqVec combined = *pivot;
            row_scale(combined, x, q);
            row_axpy(combined, work[i], y, q);
            ZqVec cleared = work[i];
            row_scale(cleared, a / g, q);
            row_axpy(cleared, *pivot, -(b / g), q);
            *pivot = std::move(combined);
            work[i] = std::move(cleared);
        }
        if (pivot) {
            ZqVec p = *pivot;
            work.erase(work.begin() + pivot_idx);
            int u = normalizing_unit(p[c], q);
            row_scale(p, u, q);
            placed.push_back(std::move(p));
            pivot_cols.push_back(c);
        }
    }
    // reduce entries above and below each pivot into [0, pivot)
    for (size_t i = 0; i < placed.size(); ++i) {
        for (size_t j = 0; j < placed.size(); ++j) {
            if (i == j) continue;
            int c = pivot_cols[j];
            int d = placed[j][c];
            int k = placed[i][c] / d;
            if (k) row_axpy(placed[i], placed[j], -k, q);
        }
    }
    work = std::move(placed);
}

}  // namespace

HowellBasis::HowellBasis(int q, int ambient_dim, const std::vector<ZqVec>& generators)
    : q_(q), n_(ambient_dim) {
    if (q < 2) throw std::invalid_argument("modulus must be >= 2");
    std::vector<ZqVec> work;
    for (const auto& g : generators) {
        if (static_cast<int>(g.size()) != n_)
            throw std::invalid_argument("generator dimension mismatch");
        ZqVec r(n_);
        for (int i = 0; i < n_; ++i) r[i] = mod_q(g[i], q);
        if (!is_zero_row(r)) work.push_back(std::move(r));
    }
    // Echelonize, then keep appending annihilator rows (q/d) * row until the
    // basis is closed; this is what makes the form a Howell basis rather than
    // a mere echelon form when q is composite.
    bool changed = true;
    while (changed) {
        echelonize(work, n_, q_, pivot_cols_);
        changed = false;
        std::vector<ZqVec> extra;
        for (size_t i = 0; i < work.size(); ++i) {
            int d = work[i][pivot_cols_[i]];
            if (d == 1) continue;
            ZqVec ann = work[i];
            row_scale(ann, q_ / d, q_);
            // reduce against current basis; anything left is new span content
            for (size_t j = 0; j < work.size(); ++j) {
                int c = pivot_cols_[j];
                int k = ann[c] / work[j][c];
                if (k) row_axpy(ann, work[j], -k, q_);
            }
            if (!is_zero_row(ann)) extra.push_back(std::move(ann));
        }
        if (!extra.empty()) {
            for (auto& e : extra) work.push_back(std::move(e));
            changed = true;
        }
    }
    rows_ = std::move(work);
}

ZqVec HowellBasis::reduce(ZqVec v) const {
    if (static_cast<int>(v.size()) != n_) throw std::invalid_argument("vector dimension mismatch");
    for (auto& x : v) x = mod_q(x, q_);
    for (size_t i = 0; i < rows_.size(); ++i) {
        int c = pivot_cols_[i];
        int d = rows_[i][c];
        int k = v[c] / d;
        if (k) row_axpy(v, rows_[i], -k, q_);
    }
    return v;
}

bool HowellBasis::member(const ZqVec& v) const { return is_zero_row(reduce(v)); }

unsigned long long HowellBasis::size() const {
    unsigned long long s = 1;
    for (size_t i = 0; i < rows_.size(); ++i) s *= static_cast<unsigned long long>(q_ / rows_[i][pivot_cols_[i]]);
    return s;
}

bool HowellBasis::same_submodule(const HowellBasis& other) const {
    return q_ == other.q_ && n_ == other.n_ && rows_ == other.rows_;
}

ZqSubmodule::ZqSubmodule(int q_, int dim, std::vector<ZqVec> gens)
    : q(q_), ambient_dim(dim), generators(std::move(gens)), canonical(q_, dim, generators) {}

bool ZqSubmodule::contains(const ZqSubmodule& other) const {
    for (const auto& g : other.canonical.rows())
        if (!member(g)) return false;
    return true;
}

ZqSubmodule span_of(int q, int ambient_dim, const std::vector<ZqVec>& generators) {
    return ZqSubmodule(q, ambient_dim, generators);
}

std::vector<ZqVec> left_kernel(int q, int width, const std::vector<ZqVec>& rows) {
    const int k = static_cast<int>(rows.size());
    // Howell form of [rows | I]; rows whose left block vanished carry kernel
    // combinations in the right block.
    std::vector<ZqVec> aug;
    aug.reserve(rows.size());
    for (int i = 0; i < k; ++i) {
        if (static_cast<int>(rows[i].size()) != width)
            throw std::invalid_argument("row width mismatch");
        ZqVec r(width + k, 0);
        std::copy(rows[i].begin(), rows[i].end(), r.begin());
        r[width + i] = 1;
        aug.push_back(std::move(r));
    }
    HowellBasis hb(q, width + k, aug);
    std::vector<ZqVec> kernel;
    for (const auto& r : hb.rows()) {
        bool left_zero = std::all_of(r.begin(), r.begin() + width, [](int v) { return v == 0; });
        if (left_zero) kernel.emplace_back(r.begin() + width, r.end());
    }
    return kernel;
}

ZqSolver::ZqSolver(int q, int width, const std::vector<ZqVec>& rows)
    : q_(q), width_(width), k_(static_cast<int>(rows.size())) {
    std::vector<ZqVec> aug;
    for (int i = 0; i < k_; ++i) {
        if (static_cast<int>(rows[i].size()) != width)
            throw std::invalid_argument("solver row width mismatch");
        ZqVec r(width + k_, 0);
        std::copy(rows[i].begin(), rows[i].end(), r.begin());
        r[width + i] = 1;
        aug.push_back(std::move(r));
    }
    HowellBasis hb(q, width + k_, aug);
    hrows_ = hb.rows();
    pivots_ = hb.pivot_cols();
}

std::optional<ZqVec> ZqSolver::solve(const ZqVec& v) const {
    ZqVec cur(width_ + k_, 0);
    for (int i = 0; i < width_; ++i) cur[i] = mod_q(v[i], q_);
    for (size_t i = 0; i < hrows_.size(); ++i) {
        if (pivots_[i] >= width_) break;
        int d = hrows_[i][pivots_[i]];
        int kk = cur[pivots_[i]] / d;
        if (kk)
            for (size_t j = 0; j < cur.size(); ++j)
                cur[j] = mod_q(cur[j] - static_cast<long long>(kk) * hrows_[i][j], q_);
    }
    for (int i = 0; i < width_; ++i)
        if (cur[i] != 0) return std::nullopt;
    ZqVec combo(k_);
    for (int i = 0; i < k_; ++i) combo[i] = mod_q(-cur[width_ + i], q_);
    return combo;
}

std::optional<ZqVec> solve_combination(int q, int width, const std::vector<ZqVec>& rows,
                                       const ZqVec& v) {
    return ZqSolver(q, width, rows).solve(v);
}

ZqSubmodule orthogonal_complement(const ZqSubmodule& sub) {
    const int n = sub.ambient_dim;
    const auto& gens = sub.canonical.rows();
    const int k = static_cast<int>(gens.size());
    // u is in the complement iff sum_j u_j col_j = 0, col_j the j-th column
    // of the generator matrix.
    std::vector<ZqVec> cols(n, ZqVec(k, 0));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < n; ++j) cols[j][i] = gens[i][j];
    std::vector<ZqVec> kernel = left_kernel(sub.q, k, cols);
    return ZqSubmodule(sub.q, n, std::move(kernel));
}

std::vector<ZqVec> coset_representatives(const ZqSubmodule& outer, const ZqSubmodule& inner) {
    if (outer.q != inner.q || outer.ambient_dim != inner.ambient_dim)
        throw std::invalid_argument("coset_representatives: mismatched modules");
    if (!outer.contains(inner))
        throw std::invalid_argument("coset_representatives: inner not contained in outer");
    unsigned long long expected = outer.size() / inner.size();
    std::set<ZqVec> seen;
    std::vector<ZqVec> frontier;
    ZqVec zero(outer.ambient_dim, 0);
    seen.insert(zero);
    frontier.push_back(zero);
    while (!frontier.empty()) {
        std::vector<ZqVec> next;
        for (const auto& rep : frontier) {
            for (const auto& g : outer.canonical.rows()) {
                ZqVec v(rep.size());
                for (size_t i = 0; i < v.size(); ++i) v[i] = mod_q(rep[i] + g[i], outer.q);
                ZqVec canon = inner.canonical.reduce(v);
                if (seen.insert(canon).second) next.push_back(std::move(canon));
            }
        }
        frontier = std::move(next);
    }
    if (seen.size() != expected)
        throw std::logic_error("coset enumeration does not match index " + std::to_string(expected));
    return std::vector<ZqVec>(seen.begin(), seen.end());
}

ZqMatrix incidence(const SpinGraph& graph) {
    graph.validate();
    ZqMatrix b(graph.num_vertices, graph.num_edges(), graph.q);
    for (int e = 0; e < graph.num_edges(); ++e) {
        auto [t, h] = graph.edges[e];
        b.at(t, e) = mod_q(b.at(t, e) - 1, graph.q);
        b.at(h, e) = mod_q(b.at(h, e) + 1, graph.q);
    }
    return b;
}

ZqSubmodule cut_space(const SpinGraph& graph) {
    ZqMatrix b = incidence(graph);
    std::vector<ZqVec> rows;
    rows.reserve(b.rows);
    for (int r = 0; r < b.rows; ++r) rows.push_back(b.row(r));
    return ZqSubmodule(graph.q, b.cols, std::move(rows));
}

unsigned long long kernel_size(const SpinGraph& graph) {
    unsigned long long s = 1;
    for (int i = 0; i < graph.num_components(); ++i) s *= static_cast<unsigned long long>(graph.q);
    return s;
}

unsigned long long kernel_size(const ZqMatrix& transposed_incidence) {
    // |ker(m)| = q^cols / |image(m)|, image spanned by the columns of m.
    const ZqMatrix& m = transposed_incidence;
    std::vector<ZqVec> cols;
    cols.reserve(m.cols);
    for (int c = 0; c < m.cols; ++c) {
        ZqVec col(m.rows);
        for (int r = 0; r < m.rows; ++r) col[r] = m.at(r, c);
        cols.push_back(std::move(col));
    }
    HowellBasis image(m.q, m.rows, cols);
    unsigned long long total = 1;
    for (int i = 0; i < m.cols; ++i) total *= static_cast<unsigned long long>(m.q);
    return total / image.size();
}

}  // namespace spinz
