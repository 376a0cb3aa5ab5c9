#ifndef SPINZ_MODEL_HPP
#define SPINZ_MODEL_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spinz/graph.hpp"
#include "spinz/scaled.hpp"

namespace spinz {

// Energy tables are complex: duality transforms can produce non-real
// couplings, so a real-only pipeline would be incomplete.
struct EdgeEnergyTable {
    std::vector<cplx> values;  // h_e(j), j = 0..q-1
};

struct VertexFieldTable {
    std::vector<cplx> values;  // b_v(j)
};

struct PairwiseTable {
    std::vector<cplx> values;  // h(s_i, s_j), row-major q*q
};

struct KBodyTerm {
    std::vector<int> sites;    // k distinct vertex ids
    std::vector<cplx> values;  // h(s_1,...,s_k), big-endian in the site order
};

enum class ModelKind { Ising, Potts, Clock, CustomDifference, CustomPairwise, CustomKBody };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& s);

// Interaction kind of a Hamiltonian: exactly one of these three forms is
// populated per model.
enum class TermForm { Difference, Pairwise, KBody };

struct Hamiltonian {
    SpinGraph graph;
    TermForm form = TermForm::Difference;
    std::vector<EdgeEnergyTable> edge_terms;        // difference form, per edge
    std::vector<PairwiseTable> pairwise_terms;      // pairwise form, per edge
    std::map<int, VertexFieldTable> vertex_terms;   // optional local fields
    std::vector<KBodyTerm> kbody_terms;             // k-body form

    bool has_fields() const { return !vertex_terms.empty(); }
    void validate() const;
};

// Parameters for the named model kinds; custom kinds carry explicit tables.
struct ModelParams {
    std::vector<cplx> edge_coupling;                   // J_e or epsilon_e, per edge
    std::map<int, cplx> vertex_field;                  // Ising B_v
    std::vector<std::vector<cplx>> edge_tables;        // custom-difference / pairwise
    std::map<int, std::vector<cplx>> vertex_tables;    // custom field tables
    std::vector<KBodyTerm> kbody;                      // custom-kbody
};

Hamiltonian make_model(ModelKind kind, const SpinGraph& graph, const ModelParams& params);

// Weight vector e^{-beta h(.)} for a table, entrywise, rescaled into the
// shared log_scale convention. cos_multiplicity m weights entry j by
// cos(2 pi j / q)^m and is only meaningful for vertex tables.
ScaledVector boltzmann_weights(const std::vector<cplx>& table, int q, double beta,
                               int cos_multiplicity = 0, bool is_vertex_table = false);

ScaledVector boltzmann_weights(const EdgeEnergyTable& t, int q, double beta);
ScaledVector boltzmann_weights(const VertexFieldTable& t, int q, double beta,
                               int cos_multiplicity = 0);
ScaledVector boltzmann_weights(const PairwiseTable& t, int q, double beta);
ScaledVector boltzmann_weights(const KBodyTerm& t, int q, double beta);

// H({s_i}) for one spin configuration.
cplx energy(const Hamiltonian& h, const std::vector<int>& config);

// Rewrites a difference-form model (possibly with fields) as a pairwise one:
// h(s_i,s_j) = h_e(|s_i-s_j|_q) plus the incident fields split evenly across
// their edges. Vertices of degree zero keep their field as a 1-body k-term.
Hamiltonian to_pairwise(const Hamiltonian& h);

// Rewrites any model as a k-body one (edge terms become 2-body tables).
Hamiltonian to_kbody(const Hamiltonian& h);

}  // namespace spinz

#endif
