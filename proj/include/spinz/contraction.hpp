#ifndef SPINZ_CONTRACTION_HPP
#define SPINZ_CONTRACTION_HPP

#include <array>
#include <optional>

#include "spinz/cutlabels.hpp"
#include "spinz/decomposition.hpp"
#include "spinz/model.hpp"
#include "spinz/oracle.hpp"

namespace spinz {

// Schmidt basis data for one bipartition of the encoding columns: coset
// representatives on each side, the pairing between them, and the Schmidt
// value r^{-1/2} shared by all r terms.
struct SchmidtBasisSpec {
    std::vector<int> cut;  // column ids of side P
    std::vector<ZqVec> reps_p;
    std::vector<ZqVec> reps_q;
    std::vector<int> pairing;  // reps_p[i] pairs with reps_q[pairing[i]]
    double schmidt_value = 1.0;
    ZqSubmodule local_p;  // cut vectors supported on P alone
    ZqSubmodule local_q;
};

SchmidtBasisSpec pair_cosets(const SpinGraph& graph, const std::vector<int>& cut, Encoding enc);

// Explicit tensor-tree form of the encoded state: label spaces per tree edge,
// one sparse 0/1 rank-3 tensor per internal node, and leaf tensors mapping
// physical values to labels. Contracting it reproduces the unnormalized state
// (one unit of amplitude per cut-space vector).
struct TensorTree {
    int q = 2;
    LeafStructure structure;
    BranchDecomposition bd;
    std::vector<CutLabels> cuts;                          // per node: cut below it
    std::vector<std::vector<std::array<int, 3>>> entries; // internal nodes: (parent,left,right)
    std::vector<std::vector<int>> leaf_value_label;       // leaf nodes: x -> label (-1 unrealizable)
    uint64_t root_terms = 1;       // Schmidt rank at the root split
    double root_schmidt_value = 1; // r^{-1/2}
};

TensorTree build_ttn(const SpinGraph& graph, const BranchDecomposition& bd, Encoding enc);

// Dense amplitudes of the TTN in encoding column order (testing utility).
std::vector<cplx> ttn_dense(const TensorTree& tt);

// Contracts grouped weight vectors against the encoded state along the
// decomposition: returns q^kappa * sum over cut-space vectors of the weight
// products, i.e. the configuration-space sum.
ScaledComplex contract_weights(const LeafStructure& ls, int q, const BranchDecomposition& bd,
                               const std::vector<ScaledVector>& leaf_weights,
                               uint64_t max_label_dim, WidthReport* width_out = nullptr,
                               int threads = 1);

struct ContractOptions {
    Encoding encoding = Encoding::Psi;
    Strategy strategy = Strategy::Auto;
    std::optional<BranchDecomposition> decomposition;
    uint64_t max_label_dim = uint64_t(1) << 20;
    std::vector<int> correlation_sites;  // phi only; multiset of vertex ids
    int max_term_arity = 6;              // largest k-body contraction site (cost q^k)
    int threads = 1;
};

struct ContractOutcome {
    ScaledComplex z;  // Z, or Z * <correlation> when correlation sites are set
    Encoding encoding = Encoding::Psi;
    WidthReport width;
    BranchDecomposition decomposition;
    int num_leaves = 0;
};

ContractOutcome contract(const Hamiltonian& h, double beta, const ContractOptions& opts);

// Weight vectors per leaf of leaf_structure(h, enc), in matching order.
std::vector<ScaledVector> encoding_weights(const Hamiltonian& h, double beta, Encoding enc,
                                           const std::vector<int>& correlation_sites = {});

// Picks psi for difference models without fields, phi with fields, ghz for
// pairwise and kbody for k-body models.
Encoding auto_encoding(const Hamiltonian& h);

struct FreeEnergyReport {
    cplx log_z;                      // log|Z| + i arg Z
    double free_energy_per_spin = 0; // -(beta N)^{-1} log|Z|
    std::optional<double> energy_mean;
    std::optional<double> energy_variance;
};

FreeEnergyReport free_energy_report(const ScaledComplex& z, double beta, int num_spins);
FreeEnergyReport free_energy_report(const ScaledComplex& z, double beta, int num_spins,
                                    const ScaledComplex& z_minus, const ScaledComplex& z_plus,
                                    double delta);

}  // namespace spinz

#endif
