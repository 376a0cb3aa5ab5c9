#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spinz/modelfile.hpp"
#include "spinz/oracle.hpp"
#include "spinz/validate.hpp"

using namespace spinz;

namespace {

const char* kCycleModel = R"({
  "q": 3,
  "vertices": 4,
  "edges": [[0,1],[1,2],[2,3],[3,0]],
  "kind": "potts",
  "beta": 0.8,
  "couplings": 1.0
})";

}  // namespace

TEST_CASE("parsing a simple model") {
    ModelFile mf = parse_model_file(kCycleModel);
    CHECK(mf.kind == ModelKind::Potts);
    CHECK(mf.beta == 0.8);
    CHECK(mf.hamiltonian.graph.q == 3);
    CHECK(mf.hamiltonian.graph.num_edges() == 4);
    CHECK(mf.hamiltonian.edge_terms[0].values[0] == cplx(-1.0));
}

TEST_CASE("strict and lenient key handling") {
    std::string with_extra = R"({"q":2,"vertices":2,"edges":[[0,1]],"kind":"ising",
                                 "beta":1.0,"couplings":1.0,"note":"hi"})";
    CHECK_THROWS_AS(parse_model_file(with_extra), ParseError);
    ModelFile mf = parse_model_file(with_extra, true);
    REQUIRE(mf.warnings.size() == 1);
    CHECK(mf.warnings[0].find("note") != std::string::npos);
}

TEST_CASE("coupling and field forms") {
    SUBCASE("per-edge scalars and complex entries") {
        std::string text = R"({"q":2,"vertices":3,"edges":[[0,1],[1,2]],"kind":"ising",
                               "beta":0.5,"couplings":[1.0,[0.5,-0.25]]})";
        ModelFile mf = parse_model_file(text);
        CHECK(mf.hamiltonian.edge_terms[1].values[1] == cplx(0.5, -0.25));
    }
    SUBCASE("explicit tables") {
        std::string text = R"({"q":2,"vertices":2,"edges":[[0,1]],"kind":"custom-difference",
                               "beta":0.5,"couplings":[[0.0,2.0]]})";
        ModelFile mf = parse_model_file(text);
        CHECK(mf.hamiltonian.edge_terms[0].values[1] == cplx(2.0));
    }
    SUBCASE("pairwise tables") {
        std::string text = R"({"q":2,"vertices":2,"edges":[[0,1]],"kind":"custom-pairwise",
                               "beta":0.5,"couplings":[[0.0,1.0,2.0,3.0]]})";
        ModelFile mf = parse_model_file(text);
        CHECK(mf.hamiltonian.form == TermForm::Pairwise);
        CHECK(mf.hamiltonian.pairwise_terms[0].values[3] == cplx(3.0));
    }
    SUBCASE("field tables and ising scalars") {
        std::string text = R"({"q":2,"vertices":2,"edges":[[0,1]],"kind":"ising","beta":0.5,
                               "couplings":1.0,"fields":[0.5,null]})";
        ModelFile mf = parse_model_file(text);
        CHECK(mf.hamiltonian.vertex_terms.size() == 1);
        CHECK(mf.hamiltonian.vertex_terms.at(0).values[1] == cplx(0.25));
    }
    SUBCASE("kbody terms") {
        std::string text = R"({"q":2,"vertices":3,"kind":"custom-kbody","beta":0.5,
                               "kbody":[{"sites":[0,1,2],"table":[0,1,2,3,4,5,6,7]}]})";
        ModelFile mf = parse_model_file(text);
        CHECK(mf.hamiltonian.form == TermForm::KBody);
        CHECK(mf.hamiltonian.kbody_terms[0].values[7] == cplx(7.0));
    }
}

TEST_CASE("parse errors name the offending entity") {
    CHECK_THROWS_WITH_AS(parse_model_file(R"({"q":2,"vertices":2,"kind":"ising","beta":1,
                                              "edges":[[0,5]],"couplings":1.0})"),
                         doctest::Contains("unknown vertex"), ParseError);
    CHECK_THROWS_WITH_AS(parse_model_file("{"), doctest::Contains("invalid document"), ParseError);
    CHECK_THROWS_WITH_AS(parse_model_file(R"({"vertices":2,"kind":"ising","beta":1})"),
                         doctest::Contains("'q'"), ParseError);
    CHECK_THROWS_WITH_AS(
        parse_model_file(R"({"q":2,"vertices":2,"edges":[[0,1]],"kind":"ising","beta":1,
                             "couplings":[1.0,2.0]})"),
        doctest::Contains("one entry per edge"), ParseError);
}

TEST_CASE("model files round trip") {
    ModelFile mf = parse_model_file(kCycleModel);
    std::string text = write_model_file(mf.hamiltonian, mf.beta);
    ModelFile back = parse_model_file(text);
    CHECK(back.hamiltonian.graph.num_edges() == 4);
    ScaledComplex a = oracle::partition_exact(mf.hamiltonian, 0.8);
    ScaledComplex b = oracle::partition_exact(back.hamiltonian, 0.8);
    CHECK(relative_error(a, b) < 1e-12);
}

TEST_CASE("digests and documents are deterministic") {
    ModelFile a = parse_model_file(kCycleModel);
    ModelFile b = parse_model_file(kCycleModel);
    CHECK(digest_hex(a.canonical_text) == digest_hex(b.canonical_text));

    ResultDocument doc;
    doc.command = "partition";
    doc.model_digest = digest_hex(a.canonical_text);
    doc.beta = 0.8;
    doc.encoding = "psi";
    doc.log_z = cplx(1.25, 0.0);
    doc.width = 2;
    doc.num_leaves = 4;
    doc.decomposition_digest = "abc";
    CHECK(doc.render() == doc.render());
    CHECK(doc.render().find("\"log_z\"") != std::string::npos);
}

TEST_CASE("validation failure reporting names the divergent model") {
    ValidateOptions opts;
    opts.inject_contraction_bug = true;
    auto results = run_validation("contraction", opts);
    bool found = false;
    for (const auto& r : results) {
        if (r.name == "contraction/oracle-equivalence") {
            CHECK(!r.pass);
            CHECK(r.detail.find("model digest") != std::string::npos);
            found = true;
        }
    }
    CHECK(found);
}

TEST_CASE("clean validation suites pass") {
    for (const char* suite : {"linalg", "stabilizer"}) {
        auto results = run_validation(suite);
        for (const auto& r : results) {
            INFO(r.name, ": ", r.detail);
            CHECK(r.pass);
        }
    }
}
