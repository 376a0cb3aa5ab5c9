#include "spinz/modelfile.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace spinz {

using json = nlohmann::json;

namespace {

cplx parse_number(const json& v, const char* what) {
    if (v.is_number()) return cplx(v.get<double>(), 0.0);
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return cplx(v[0].get<double>(), v[1].get<double>());
    throw ParseError(std::string(what) + ": expected a number or [re, im] pair");
}

std::vector<cplx> parse_table(const json& v, size_t want, const char* what) {
    if (!v.is_array() || v.size() != want)
        throw ParseError(std::string(what) + ": expected a table of length " + std::to_string(want));
    std::vector<cplx> out;
    out.reserve(want);
    for (const auto& e : v) out.push_back(parse_number(e, what));
    return out;
}

json number_to_json(cplx v) {
    if (v.imag() == 0.0) return json(v.real());
    return json::array({v.real(), v.imag()});
}

}  // namespace

ModelFile parse_model_file(const std::string& text, bool lenient) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const std::exception& e) {
        throw ParseError(std::string("invalid document: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("model file must be an object");

    static const std::set<std::string> known = {"q",      "vertices", "edges", "kind", "beta",
                                                "couplings", "fields", "kbody", "embedding"};
    ModelFile mf;
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        if (!known.count(it.key())) {
            if (lenient)
                mf.warnings.push_back("ignoring unknown key '" + it.key() + "'");
            else
                throw ParseError("unknown key '" + it.key() + "' (use --lenient to ignore)");
        }
    }
    for (const char* req : {"q", "vertices", "kind", "beta"})
        if (!doc.contains(req)) throw ParseError(std::string("missing required key '") + req + "'");

    int q = doc["q"].is_number_integer() ? doc["q"].get<int>() : -1;
    if (q < 2 || q > 64) throw ParseError("q must be an integer in [2, 64]");
    int nv = doc["vertices"].is_number_integer() ? doc["vertices"].get<int>() : -1;
    if (nv < 1) throw ParseError("vertices must be a positive integer");
    if (!doc["beta"].is_number()) throw ParseError("beta must be a number");
    mf.beta = doc["beta"].get<double>();
    mf.kind = model_kind_from_string(doc["kind"].get<std::string>());

    std::vector<std::pair<int, int>> edges;
    if (doc.contains("edges")) {
        if (!doc["edges"].is_array()) throw ParseError("edges must be a list of [tail, head] pairs");
        for (const auto& e : doc["edges"]) {
            if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
                throw ParseError("edges must be a list of [tail, head] pairs");
            edges.push_back({e[0].get<int>(), e[1].get<int>()});
        }
    }
    SpinGraph graph;
    try {
        graph = SpinGraph(q, nv, edges);
    } catch (const std::exception& e) {
        throw ParseError(e.what());
    }
    const int ne = graph.num_edges();

    ModelParams params;
    size_t table_len = mf.kind == ModelKind::CustomPairwise ? static_cast<size_t>(q) * q
                                                            : static_cast<size_t>(q);
    if (doc.contains("couplings")) {
        const json& c = doc["couplings"];
        bool tables = mf.kind == ModelKind::CustomDifference || mf.kind == ModelKind::CustomPairwise;
        // a scalar is a uniform coupling; an array is always per-edge
        if (c.is_number()) {
            cplx u = parse_number(c, "couplings");
            for (int e = 0; e < ne; ++e) params.edge_coupling.push_back(u);
        } else if (c.is_array()) {
            if (static_cast<int>(c.size()) != ne)
                throw ParseError("couplings: expected one entry per edge (" + std::to_string(ne) + ")");
            for (const auto& e : c) {
                if (tables)
                    params.edge_tables.push_back(parse_table(e, table_len, "couplings"));
                else
                    params.edge_coupling.push_back(parse_number(e, "couplings"));
            }
        } else {
            throw ParseError("couplings: expected a scalar or a per-edge list");
        }
    }
    if (doc.contains("fields")) {
        const json& f = doc["fields"];
        if (!f.is_null()) {
            if (!f.is_array() || static_cast<int>(f.size()) != nv)
                throw ParseError("fields: expected one entry per vertex or null");
            for (int v = 0; v < nv; ++v) {
                const json& e = f[v];
                if (e.is_null()) continue;
                if (mf.kind == ModelKind::Ising && e.is_number()) {
                    params.vertex_field[v] = parse_number(e, "fields");
                } else if (e.is_array() && e.size() == static_cast<size_t>(q)) {
                    params.vertex_tables[v] = parse_table(e, q, "fields");
                } else if (e.is_number() && mf.kind != ModelKind::Ising) {
                    throw ParseError("fields: scalar fields are the Ising form; give a length-q table");
                } else {
                    throw ParseError("fields: expected null, a scalar (ising) or a length-q table");
                }
            }
        }
    }
    if (doc.contains("kbody")) {
        if (!doc["kbody"].is_array()) throw ParseError("kbody must be a list of terms");
        for (const auto& t : doc["kbody"]) {
            if (!t.is_object() || !t.contains("sites") || !t.contains("table"))
                throw ParseError("kbody terms need 'sites' and 'table'");
            KBodyTerm term;
            for (const auto& s : t["sites"]) {
                if (!s.is_number_integer()) throw ParseError("kbody sites must be vertex ids");
                term.sites.push_back(s.get<int>());
            }
            size_t want = 1;
            for (size_t i = 0; i < term.sites.size(); ++i) want *= static_cast<size_t>(q);
            term.values = parse_table(t["table"], want, "kbody table");
            params.kbody.push_back(std::move(term));
        }
    }
    if (mf.kind == ModelKind::CustomDifference) {
        // custom fields arrive through 'fields' as tables; already collected
    }
    try {
        mf.hamiltonian = make_model(mf.kind, graph, params);
    } catch (const std::exception& e) {
        throw ParseError(e.what());
    }

    if (doc.contains("embedding") && !doc["embedding"].is_null()) {
        const json& emb = doc["embedding"];
        if (!emb.is_array() || static_cast<int>(emb.size()) != nv)
            throw ParseError("embedding: expected one cyclic edge list per vertex");
        RotationSystem rot;
        rot.order.resize(nv);
        for (int v = 0; v < nv; ++v)
            for (const auto& e : emb[v]) {
                if (!e.is_number_integer()) throw ParseError("embedding entries must be edge ids");
                rot.order[v].push_back(e.get<int>());
            }
        try {
            rot.validate(graph);
        } catch (const std::exception& e) {
            throw ParseError(e.what());
        }
        mf.embedding = std::move(rot);
    }

    // canonical text for the digest: the parsed document re-serialized with
    // sorted keys
    mf.canonical_text = doc.dump();
    return mf;
}

ModelFile load_model_file(const std::string& path, bool lenient) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open model file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_model_file(ss.str(), lenient);
}

std::string write_model_file(const Hamiltonian& h, double beta,
                             const std::optional<RotationSystem>& embedding) {
    json doc;
    doc["q"] = h.graph.q;
    doc["vertices"] = h.graph.num_vertices;
    json edges = json::array();
    for (auto [t, hd] : h.graph.edges) edges.push_back(json::array({t, hd}));
    doc["edges"] = std::move(edges);
    doc["beta"] = beta;
    switch (h.form) {
        case TermForm::Difference: {
            doc["kind"] = "custom-difference";
            json c = json::array();
            for (const auto& t : h.edge_terms) {
                json tab = json::array();
                for (const auto& v : t.values) tab.push_back(number_to_json(v));
                c.push_back(std::move(tab));
            }
            doc["couplings"] = std::move(c);
            break;
        }
        case TermForm::Pairwise: {
            doc["kind"] = "custom-pairwise";
            json c = json::array();
            for (const auto& t : h.pairwise_terms) {
                json tab = json::array();
                for (const auto& v : t.values) tab.push_back(number_to_json(v));
                c.push_back(std::move(tab));
            }
            doc["couplings"] = std::move(c);
            break;
        }
        case TermForm::KBody: {
            doc["kind"] = "custom-kbody";
            break;
        }
    }
    if (h.has_fields()) {
        json f = json::array();
        for (int v = 0; v < h.graph.num_vertices; ++v) {
            if (auto it = h.vertex_terms.find(v); it != h.vertex_terms.end()) {
                json tab = json::array();
                for (const auto& x : it->second.values) tab.push_back(number_to_json(x));
                f.push_back(std::move(tab));
            } else {
                f.push_back(nullptr);
            }
        }
        doc["fields"] = std::move(f);
    }
    if (!h.kbody_terms.empty()) {
        json terms = json::array();
        for (const auto& t : h.kbody_terms) {
            json term;
            term["sites"] = t.sites;
            json tab = json::array();
            for (const auto& v : t.values) tab.push_back(number_to_json(v));
            term["table"] = std::move(tab);
            terms.push_back(std::move(term));
        }
        doc["kbody"] = std::move(terms);
    }
    if (embedding) {
        json emb = json::array();
        for (const auto& cyc : embedding->order) emb.push_back(cyc);
        doc["embedding"] = std::move(emb);
    }
    return doc.dump(2) + "\n";
}

std::string digest_hex(const std::string& text) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string ResultDocument::render() const {
    nlohmann::ordered_json doc;
    doc["command"] = command;
    doc["model_digest"] = model_digest;
    doc["beta"] = beta;
    if (!encoding.empty()) doc["encoding"] = encoding;
    auto put_complex = [](nlohmann::ordered_json& d, const char* key, const cplx& v) {
        d[key] = {{"re", v.real()}, {"im", v.imag()}};
    };
    if (log_z) put_complex(doc, "log_z", *log_z);
    if (z) put_complex(doc, "z", *z);
    if (log_z_dual) put_complex(doc, "log_z_dual", *log_z_dual);
    if (correlation) put_complex(doc, "correlation", *correlation);
    if (duality_scalar_log) doc["duality_scalar_log"] = *duality_scalar_log;
    if (max_symmetry_deviation) doc["max_symmetry_deviation"] = *max_symmetry_deviation;
    doc["width"] = width;
    doc["num_leaves"] = num_leaves;
    if (!decomposition_digest.empty()) doc["decomposition_digest"] = decomposition_digest;
    for (const auto& [k, v] : extra) doc[k] = v;
    return doc.dump(2) + "\n";
}

ResultDocument make_partition_document(const std::string& command, const ModelFile& mf,
                                       double beta, const ContractOutcome& out) {
    ResultDocument doc;
    doc.command = command;
    doc.model_digest = digest_hex(mf.canonical_text);
    doc.beta = beta;
    doc.encoding = to_string(out.encoding);
    doc.log_z = out.z.is_zero() ? cplx(-std::numeric_limits<double>::infinity(), 0.0) : out.z.log();
    if (!out.z.is_zero() && std::abs(doc.log_z->real()) < 700.0) doc.z = out.z.value();
    doc.width = out.width.width;
    doc.num_leaves = out.num_leaves;
    doc.decomposition_digest =
        digest_hex(out.num_leaves > 0 ? out.decomposition.serialize() : std::string("()"));
    return doc;
}

}  // namespace spinz
