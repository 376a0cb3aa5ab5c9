#ifndef SPINZ_ORACLE_HPP
#define SPINZ_ORACLE_HPP

#include <cstdint>
#include <vector>

#include "spinz/encoding.hpp"
#include "spinz/model.hpp"
#include "spinz/pauli.hpp"
#include "spinz/scaled.hpp"

namespace spinz {

// Brute-force reference implementations. Everything here is deliberately
// simple: enumeration over all configurations or basis states, used as the
// trust anchor for the contraction engine.
namespace oracle {

constexpr uint64_t kDefaultCap = uint64_t(1) << 24;

// Unnormalized state vector of num_sites qudits; basis index is big-endian in
// the site order (site 0 most significant).
struct DenseState {
    int num_sites = 0;
    int q = 2;
    std::vector<cplx> amplitudes;
    double log_scale = 0.0;  // shared scale, e.g. the q^kappa prefactor

    size_t dim() const { return amplitudes.size(); }
};

// Z(beta) by summing e^{-beta H} over all q^|V| configurations.
ScaledComplex partition_exact(const Hamiltonian& h, double beta, uint64_t cap = kDefaultCap,
                              int threads = 1);

// cos-weighted n-point function: Z^{-1} sum_s prod_k cos(2 pi s_{i_k}/q) e^{-beta H}.
cplx correlation_exact(const Hamiltonian& h, double beta, const std::vector<int>& sites,
                       uint64_t cap = kDefaultCap, int threads = 1);

// Dense stabilizer encodings of the interaction pattern. psi has |E| sites
// and carries the q^kappa prefactor on top of the kernel multiplicity; phi
// has |V|+|E| sites (vertex qudits first); ghz has sum_v deg(v) sites ordered
// pairwise per edge.
DenseState dense_state(const SpinGraph& graph, Encoding enc, uint64_t cap = kDefaultCap);

// Bilinear overlap of grouped weight vectors with a dense state. Weight
// coefficients are *not* conjugated so the partition-function identities hold
// verbatim for complex couplings; this convention is pinned by unit tests.
// grouping[k] lists the sites covered by weights[k] (big-endian within the
// group); the groups must partition all sites.
ScaledComplex overlap(const DenseState& state, const std::vector<ScaledVector>& weights,
                      const std::vector<std::vector<int>>& grouping);

// Rank of the reduced density operator on a site subset. Singular values
// below 1e-9 times the largest count as zero.
int reduced_rank(const DenseState& state, const std::vector<int>& subsystem);

// Applies a Pauli word to a dense state (test utility for fixed-point checks).
DenseState apply_pauli(const DenseState& state, const PauliWord& w);

}  // namespace oracle
}  // namespace spinz

#endif
