#ifndef SPINZ_PAULI_HPP
#define SPINZ_PAULI_HPP

#include <vector>

#include "spinz/encoding.hpp"
#include "spinz/graph.hpp"
#include "spinz/zq.hpp"

namespace spinz {

// Element of the generalized Pauli group on n qudits, modulo q-th roots of
// unity tracked by an integer exponent: e^{2 pi i phase_num / q} * prod_i
// X^{xi_i} Z^{zeta_i}.
struct PauliWord {
    int n = 0;
    int q = 2;
    ZqVec xi;
    ZqVec zeta;
    int phase_num = 0;

    static PauliWord identity(int n, int q) { return {n, q, ZqVec(n, 0), ZqVec(n, 0), 0}; }
    static PauliWord x_word(int q, const ZqVec& v) {
        return {static_cast<int>(v.size()), q, v, ZqVec(v.size(), 0), 0};
    }
    static PauliWord z_word(int q, const ZqVec& u) {
        return {static_cast<int>(u.size()), q, ZqVec(u.size(), 0), u, 0};
    }

    bool operator==(const PauliWord& o) const {
        return n == o.n && q == o.q && xi == o.xi && zeta == o.zeta && phase_num == o.phase_num;
    }
    bool operator<(const PauliWord& o) const {
        if (xi != o.xi) return xi < o.xi;
        if (zeta != o.zeta) return zeta < o.zeta;
        return phase_num < o.phase_num;
    }
};

bool commutes(const PauliWord& a, const PauliWord& b);
PauliWord multiply(const PauliWord& a, const PauliWord& b);

struct StabilizerGenSet {
    int n = 0;
    int q = 2;
    std::vector<PauliWord> generators;

    bool all_commute() const;
};

// Generators of the stabilizer of |psi_G>: X(v) for the canonical generators
// v of the cut space, Z(u) for those of its orthogonal complement. Sites are
// the edges of the graph.
StabilizerGenSet psi_generators(const SpinGraph& graph);

// Generators of the stabilizer of |phi_G>: one X-type word per vertex and one
// Z-type word per edge. Sites are the vertices (0..|V|-1) followed by the
// edges.
StabilizerGenSet phi_generators(const SpinGraph& graph);

// Star and plaquette words on edge qudits built from closed loops; the toric
// code construction when the graph is a torus grid.
StabilizerGenSet kitaev_generators(const SpinGraph& graph, const std::vector<std::vector<int>>& loops);

// Enumerates the group generated by the given words (phases tracked exactly).
// Throws if more than `cap` distinct elements appear.
std::vector<PauliWord> enumerate_group(const StabilizerGenSet& gens, size_t cap);

// Schmidt rank q^(lambda(A)-1) of the bipartition of the encoded state given
// by a proper nonempty subset of the encoding matrix columns.
unsigned long long schmidt_rank(const SpinGraph& graph, const std::vector<int>& column_subset,
                                Encoding enc);

}  // namespace spinz

#endif
