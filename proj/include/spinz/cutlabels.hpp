#ifndef SPINZ_CUTLABELS_HPP
#define SPINZ_CUTLABELS_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "spinz/decomposition.hpp"
#include "spinz/scaled.hpp"
#include "spinz/zq.hpp"

namespace spinz {

struct WidthLimitError : std::runtime_error {
    int achieved_lambda;
    explicit WidthLimitError(int lambda, uint64_t dim)
        : std::runtime_error("message dimension " + std::to_string(dim) +
                             " exceeds the configured cap (achieved width " +
                             std::to_string(lambda) + ")"),
          achieved_lambda(lambda) {}
};

// Schmidt labels across one cut of the encoding columns. A label is the
// canonical representative of a boundary spin assignment modulo the gauge
// group spanned by the free-component shifts of the two sides; there are
// exactly q^(lambda-1) of them.
struct CutLabels {
    int q = 2;
    int lambda = 1;
    std::vector<int> boundary;           // sorted vertex ids
    std::vector<ZqVec> gauge_generators; // shift indicators on boundary coords
    HowellBasis gauge;
    std::vector<ZqVec> labels;           // canonical reps, lexicographic

    uint64_t dim() const { return labels.size(); }
    ZqVec canon(ZqVec y) const { return gauge.reduce(std::move(y)); }
    int label_of(const ZqVec& y) const;
    int index_of_canonical(const ZqVec& canon_rep) const;
};

// Input half of a combine step. Either the labels of a child cut together
// with its message, or the enumerated values of a leaf's weight tensor. In
// both cases: a base assignment of the interface vertices per index, and
// shift variables spanning the allowed freedom.
struct SideView {
    std::vector<int> interface;        // sorted vertex ids
    std::vector<ZqVec> shift_vars;     // over interface coords
    std::vector<ZqVec> bases;          // per index
    std::vector<cplx> amplitudes;      // per index
    double log_scale = 0.0;
};

// Builds the cut labels for the leaves marked in `in_subset` (generic path:
// recomputes components of both sides from scratch).
CutLabels build_cut_labels(const LeafStructure& ls, const std::vector<char>& leaf_in_subset,
                           uint64_t max_label_dim, int q);

// Trivial cut of the full column set (the root): one label, empty boundary.
CutLabels trivial_cut(int q);

SideView side_from_labels(const CutLabels& cut, std::vector<cplx> message, double log_scale);

// Value enumeration of one leaf: realizable weight-tensor entries with their
// interface assignments and per-free-component shift variables. When
// out_values is given it receives the tensor index of each emitted entry.
SideView side_from_leaf(const LeafStructure& ls, int leaf, int q, const ScaledVector& weights,
                        std::vector<uint64_t>* out_values = nullptr);

// message_out[parent label] += sum over admissible index pairs of
// left.amplitudes[i] * right.amplitudes[j].
ScaledVector combine(const SideView& left, const SideView& right, const CutLabels& parent, int q);

// Sparse combine map for the tensor-tree construction: one (parent, i, j)
// entry per admissible pair.
std::vector<std::array<int, 3>> combine_entries(const SideView& left, const SideView& right,
                                                const CutLabels& parent, int q);

// q^(number of free components of the whole column structure); the global
// kernel multiplicity relating the label-space sum to the configuration sum.
int global_kernel_exponent(const LeafStructure& ls);

// Cut labels for every proper prefix of `leaf_order` (splits 1..L-1),
// computed with two linear sweeps instead of per-cut recomputation. Entry k
// describes the cut {order[0..k)} vs the rest.
std::vector<CutLabels> caterpillar_cut_sequence(const LeafStructure& ls,
                                                const std::vector<int>& leaf_order,
                                                uint64_t max_label_dim, int q);

}  // namespace spinz

#endif
