#ifndef SPINZ_TRANSFORMS_HPP
#define SPINZ_TRANSFORMS_HPP

#include <random>
#include <utility>
#include <vector>

#include "spinz/model.hpp"
#include "spinz/pauli.hpp"

namespace spinz {

// Combinatorial embedding: the counterclockwise cyclic order of incident
// edges around each vertex. Every edge appears once at each endpoint.
struct RotationSystem {
    std::vector<std::vector<int>> order;
    void validate(const SpinGraph& graph) const;
};

// Rotation system from plane coordinates (edges sorted by direction angle).
RotationSystem embedding_from_coordinates(const SpinGraph& graph,
                                          const std::vector<std::pair<double, double>>& pos);

// w'[j] = q^{-1/2} sum_k e^{-2 pi i k j / q} w[k]; applied four times this is
// the identity on weight vectors.
ScaledVector fourier_weights(const ScaledVector& w);

// e^{beta J'} = (e^{beta J} + q - 1) / (e^{beta J} - 1), the Potts
// high-low temperature relation (e^{beta J'}-1)(e^{beta J}-1) = q.
cplx potts_dual_coupling(cplx e_beta_j, int q);

struct PlanarDual {
    SpinGraph dual;              // one vertex per face
    std::vector<int> edge_map;   // primal edge id -> dual edge id
    int num_faces = 0;
};

// Faces traced from the rotation system become dual vertices; requires a
// connected bridgeless graph (a bridge would dual to a self-loop) and a
// consistent embedding (Euler check).
PlanarDual planar_dual(const SpinGraph& graph, const RotationSystem& embedding);

// Difference-form model without fields mapped onto the dual graph with
// Fourier-transformed weight tables, evaluated at the given beta.
Hamiltonian dual_model(const Hamiltonian& h, const RotationSystem& embedding, double beta);

// q = 2 gauge flip at one vertex: the edge tables of incident edges and the
// field table at the vertex are reversed; Z is unchanged.
Hamiltonian vertex_flip(const Hamiltonian& h, int vertex);

// Transforms the grouped weight vectors by a stabilizer word of the chosen
// encoding: X components permute entries (j -> j - v), Z components attach
// phases e^{2 pi i u (j-v) / q}; the overlap with the encoded state (and so
// Z) is unchanged. Refuses words outside the stabilizer.
std::vector<ScaledVector> apply_symmetry(const std::vector<ScaledVector>& weights,
                                         const PauliWord& word, const SpinGraph& graph,
                                         Encoding enc);

// Random product of stabilizer generators with exactly tracked phase.
PauliWord sample_stabilizer_word(const StabilizerGenSet& gens, std::mt19937_64& rng);

// Graph fixtures used by tests, the duality suite and the benchmark command.
namespace families {

SpinGraph path(int num_vertices, int q);
SpinGraph cycle(int num_vertices, int q);
SpinGraph grid(int rows, int cols, int q);
SpinGraph ladder(int rungs, int q);                     // 2 x rungs grid
SpinGraph wheel(int rim_vertices, int q);               // hub + rim cycle
SpinGraph complete(int num_vertices, int q);
std::pair<SpinGraph, std::vector<std::vector<int>>> toric(int rows, int cols, int q);

RotationSystem cycle_embedding(const SpinGraph& g);
RotationSystem grid_embedding(const SpinGraph& g, int rows, int cols);
RotationSystem wheel_embedding(const SpinGraph& g, int rim_vertices);

}  // namespace families

}  // namespace spinz

#endif
