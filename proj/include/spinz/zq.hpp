#ifndef SPINZ_ZQ_HPP
#define SPINZ_ZQ_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "spinz/graph.hpp"

namespace spinz {

using ZqVec = std::vector<int>;

// Dense matrix over the ring Z_q, entries reduced into [0, q).
struct ZqMatrix {
    int rows = 0;
    int cols = 0;
    int q = 2;
    std::vector<int> entries;  // row-major

    ZqMatrix() = default;
    ZqMatrix(int r, int c, int q_) : rows(r), cols(c), q(q_), entries(size_t(r) * c, 0) {}

    int& at(int r, int c) { return entries[size_t(r) * cols + c]; }
    int at(int r, int c) const { return entries[size_t(r) * cols + c]; }

    ZqVec row(int r) const {
        return ZqVec(entries.begin() + size_t(r) * cols, entries.begin() + size_t(r + 1) * cols);
    }
    ZqMatrix transposed() const {
        ZqMatrix t(cols, rows, q);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) t.at(c, r) = at(r, c);
        return t;
    }
};

// Canonical (Howell) basis of a submodule of Z_q^n. Unlike plain Gaussian
// elimination this stays valid for composite q: membership, coset normal
// forms and cardinalities are all decidable from it.
class HowellBasis {
  public:
    HowellBasis() = default;
    HowellBasis(int q, int ambient_dim, const std::vector<ZqVec>& generators);

    int q() const { return q_; }
    int ambient_dim() const { return n_; }
    const std::vector<ZqVec>& rows() const { return rows_; }
    const std::vector<int>& pivot_cols() const { return pivot_cols_; }

    // Normal form of v modulo the submodule; this is the lexicographically
    // smallest member of v's coset.
    ZqVec reduce(ZqVec v) const;

    bool member(const ZqVec& v) const;

    // Exact number of elements in the submodule.
    unsigned long long size() const;

    bool same_submodule(const HowellBasis& other) const;

  private:
    int q_ = 2;
    int n_ = 0;
    std::vector<ZqVec> rows_;       // echelon rows, pivots divide q
    std::vector<int> pivot_cols_;   // pivot column per row
};

// Submodule of Z_q^n described by generators plus their canonical form.
struct ZqSubmodule {
    int q = 2;
    int ambient_dim = 0;
    std::vector<ZqVec> generators;
    HowellBasis canonical;

    ZqSubmodule() = default;
    ZqSubmodule(int q_, int dim, std::vector<ZqVec> gens);

    bool member(const ZqVec& v) const { return canonical.member(v); }
    unsigned long long size() const { return canonical.size(); }
    bool contains(const ZqSubmodule& other) const;
    bool equals(const ZqSubmodule& other) const { return canonical.same_submodule(other.canonical); }
};

ZqSubmodule span_of(int q, int ambient_dim, const std::vector<ZqVec>& generators);

// All u with u . v = 0 mod q for every v in sub.
ZqSubmodule orthogonal_complement(const ZqSubmodule& sub);

// Basis of {x : sum_i x_i rows[i] = 0 mod q}.
std::vector<ZqVec> left_kernel(int q, int width, const std::vector<ZqVec>& rows);

// Expresses v as a combination of the given rows if possible.
std::optional<ZqVec> solve_combination(int q, int width, const std::vector<ZqVec>& rows,
                                       const ZqVec& v);

// Precomputed form of solve_combination for solving many right-hand sides
// against the same rows.
class ZqSolver {
  public:
    ZqSolver() = default;
    ZqSolver(int q, int width, const std::vector<ZqVec>& rows);
    // coefficients x with sum_i x_i rows[i] = v, if any
    std::optional<ZqVec> solve(const ZqVec& v) const;

  private:
    int q_ = 2;
    int width_ = 0;
    int k_ = 0;
    std::vector<ZqVec> hrows_;
    std::vector<int> pivots_;
};

// One representative per coset of inner in outer, each the lexicographically
// smallest coset member, in lexicographic order. Throws if inner is not
// contained in outer.
std::vector<ZqVec> coset_representatives(const ZqSubmodule& outer, const ZqSubmodule& inner);

// |V| x |E| incidence matrix: column e carries -1 (= q-1) at the tail of e and
// +1 at its head.
ZqMatrix incidence(const SpinGraph& graph);

// Row span of the incidence matrix: the cut space C_G(q) as a submodule of
// Z_q^{|E|}.
ZqSubmodule cut_space(const SpinGraph& graph);

// q^kappa with kappa the number of connected components (isolated vertices
// included, so the rank identity |image| * |kernel| = q^|V| always holds).
unsigned long long kernel_size(const SpinGraph& graph);

// Same number computed from the transposed incidence matrix by ring linear
// algebra; used to cross-check the component count.
unsigned long long kernel_size(const ZqMatrix& transposed_incidence);

int mod_q(long long v, int q);

}  // namespace spinz

#endif
