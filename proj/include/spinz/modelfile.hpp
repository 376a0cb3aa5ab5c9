#ifndef SPINZ_MODELFILE_HPP
#define SPINZ_MODELFILE_HPP

#include <optional>
#include <string>
#include <vector>

#include "spinz/contraction.hpp"
#include "spinz/model.hpp"
#include "spinz/transforms.hpp"

namespace spinz {

// Parsed model document: the Hamiltonian, the inverse temperature it declares
// and an optional combinatorial embedding for duality.
struct ModelFile {
    ModelKind kind = ModelKind::Ising;
    Hamiltonian hamiltonian;
    double beta = 1.0;
    std::optional<RotationSystem> embedding;
    std::string canonical_text;  // canonicalized document, input to the digest
    std::vector<std::string> warnings;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

ModelFile parse_model_file(const std::string& text, bool lenient = false);
ModelFile load_model_file(const std::string& path, bool lenient = false);

// Serializes a Hamiltonian back into the document format (custom tables).
std::string write_model_file(const Hamiltonian& h, double beta,
                             const std::optional<RotationSystem>& embedding = std::nullopt);

std::string digest_hex(const std::string& text);

// Deterministic result document; identical inputs, flags and decomposition
// give byte-identical text. Timing is reported separately (stderr) so the
// determinism contract holds.
struct ResultDocument {
    std::string command;
    std::string model_digest;
    double beta = 0.0;
    std::string encoding;
    std::optional<cplx> log_z;
    std::optional<cplx> z;  // only when representable (|log Z| < 700)
    std::optional<cplx> log_z_dual;
    std::optional<cplx> correlation;
    std::optional<double> duality_scalar_log;
    std::optional<double> max_symmetry_deviation;
    int width = 0;
    int num_leaves = 0;
    std::string decomposition_digest;
    std::vector<std::pair<std::string, std::string>> extra;  // ordered extras

    std::string render() const;
};

ResultDocument make_partition_document(const std::string& command, const ModelFile& mf,
                                       double beta, const ContractOutcome& out);

}  // namespace spinz

#endif
