#ifndef SPINZ_ENCODING_HPP
#define SPINZ_ENCODING_HPP

#include <string>
#include <vector>

#include "spinz/graph.hpp"
#include "spinz/model.hpp"

namespace spinz {

enum class Encoding { Psi, Phi, Ghz, KBody };

std::string to_string(Encoding e);
Encoding encoding_from_string(const std::string& s);

// One column of the encoding matrix M. A difference column is a column of the
// oriented incidence matrix; a pin column selects the absolute value of one
// vertex (the identity block of the phi encoding, and every column of the
// GHZ/k-body encodings).
struct EncodingColumn {
    enum class Type { Difference, Pin } type;
    int tail = -1;  // difference columns
    int head = -1;
    int vertex = -1;  // pin columns

    static EncodingColumn edge(int t, int h) { return {Type::Difference, t, h, -1}; }
    static EncodingColumn pin(int v) { return {Type::Pin, -1, -1, v}; }
};

// Column layout of M for a graph and encoding. For phi the vertex qudits come
// first (columns 0..|V|-1), then the edge qudits. For the GHZ scheme each
// edge contributes the pin columns of its two endpoint copies, 2e and 2e+1.
std::vector<EncodingColumn> encoding_columns(const SpinGraph& graph, Encoding enc);

// Number of spin configurations mapped to zero by the columns in `subset`:
// q^(number of connected components of the column structure that contain no
// pin), isolated vertices counting as their own components.
int kernel_exponent(int num_vertices, const std::vector<EncodingColumn>& columns,
                    const std::vector<int>& subset);

// Connectivity function of a column subset: lambda(A) = |V| + c(E) - c(A)
// - c(E-A) + 1 with the pin-aware component counts above. Schmidt rank across
// the cut is q^(lambda-1).
int connectivity(int num_vertices, const std::vector<EncodingColumn>& columns,
                 const std::vector<int>& subset);

int connectivity(const SpinGraph& graph, const std::vector<int>& subset, Encoding enc);

}  // namespace spinz

#endif
