#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "spinz/contraction.hpp"
#include "spinz/modelfile.hpp"
#include "spinz/oracle.hpp"
#include "spinz/threads.hpp"
#include "spinz/transforms.hpp"
#include "spinz/validate.hpp"

using namespace spinz;

namespace {

constexpr int kExitParse = 2;
constexpr int kExitWidth = 3;
constexpr int kExitOracleCap = 4;
constexpr int kExitPlanar = 5;

struct CommonFlags {
    std::string encoding = "auto";
    std::string strategy = "auto";
    std::string decomposition_file;
    double beta_override = std::numeric_limits<double>::quiet_NaN();
    bool oracle = false;
    int max_width = 0;  // 0: default label cap
    int threads = 0;
    bool lenient = false;
};

void add_common_flags(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--encoding", f.encoding, "auto|psi|phi|ghz|kbody")->default_val("auto");
    cmd->add_option("--strategy", f.strategy,
                    "auto|greedy-merge|min-degree-elimination|exhaustive-small")
        ->default_val("auto");
    cmd->add_option("--decomposition-file", f.decomposition_file,
                    "read the decomposition from this file if it exists, else write it");
    cmd->add_option("--beta", f.beta_override, "override the model file's beta");
    cmd->add_flag("--oracle", f.oracle, "force brute-force enumeration");
    cmd->add_option("--max-width", f.max_width, "refuse cuts wider than this");
    cmd->add_option("--threads", f.threads, "worker count (default: SPINZ_THREADS or 1)");
    cmd->add_flag("--lenient", f.lenient, "warn instead of failing on unknown model keys");
}

double beta_of(const ModelFile& mf, const CommonFlags& f) {
    return std::isnan(f.beta_override) ? mf.beta : f.beta_override;
}

uint64_t label_cap(const CommonFlags& f, int q) {
    if (f.max_width <= 0) return uint64_t(1) << 20;
    double dim = std::pow(static_cast<double>(q), f.max_width - 1);
    return dim > 1e18 ? uint64_t(1) << 62 : static_cast<uint64_t>(dim);
}

// ghz and kbody accept difference-form models via conversion
Hamiltonian adapt_model(const Hamiltonian& h, Encoding enc) {
    if (enc == Encoding::Ghz && h.form == TermForm::Difference) return to_pairwise(h);
    if (enc == Encoding::KBody && h.form != TermForm::KBody) return to_kbody(h);
    return h;
}

ContractOutcome run_contract(const ModelFile& mf, double beta, const CommonFlags& f,
                             const std::vector<int>& sites = {}, bool force_phi = false) {
    Encoding enc = f.encoding == "auto" ? auto_encoding(mf.hamiltonian)
                                        : encoding_from_string(f.encoding);
    if (!sites.empty() || force_phi) enc = Encoding::Phi;
    Hamiltonian h = adapt_model(mf.hamiltonian, enc);
    ContractOptions opts;
    opts.encoding = enc;
    opts.strategy = strategy_from_string(f.strategy);
    opts.max_label_dim = label_cap(f, h.graph.q);
    opts.correlation_sites = sites;
    opts.threads = resolve_thread_count(f.threads);
    if (!f.decomposition_file.empty() && std::filesystem::exists(f.decomposition_file)) {
        std::ifstream in(f.decomposition_file);
        std::stringstream ss;
        ss << in.rdbuf();
        opts.decomposition = BranchDecomposition::parse(ss.str());
    }
    ContractOutcome out = contract(h, beta, opts);
    if (!f.decomposition_file.empty() && !std::filesystem::exists(f.decomposition_file)) {
        std::ofstream o(f.decomposition_file);
        o << out.decomposition.serialize() << "\n";
    }
    return out;
}

void warn_all(const ModelFile& mf) {
    for (const auto& w : mf.warnings) std::cerr << "warning: " << w << "\n";
}

int guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const WidthLimitError& e) {
        std::cerr << "width cap exceeded: " << e.what() << "\n";
        return kExitWidth;
    } catch (const std::exception& e) {
        std::string msg = e.what();
        if (msg.find("enumeration cap") != std::string::npos) {
            std::cerr << "oracle cap exceeded: " << msg << "\n";
            return kExitOracleCap;
        }
        std::cerr << "error: " << msg << "\n";
        return 1;
    }
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    }
};

int cmd_partition(const std::string& path, const CommonFlags& f) {
    return guarded([&] {
        Timer timer;
        ModelFile mf = load_model_file(path, f.lenient);
        warn_all(mf);
        double beta = beta_of(mf, f);
        ResultDocument doc;
        if (f.oracle) {
            ScaledComplex z = oracle::partition_exact(mf.hamiltonian, beta, oracle::kDefaultCap,
                                                      resolve_thread_count(f.threads));
            ContractOutcome fake;
            fake.z = z;
            fake.encoding = auto_encoding(mf.hamiltonian);
            doc = make_partition_document("partition", mf, beta, fake);
            doc.encoding = "oracle";
            doc.width = 0;
            doc.decomposition_digest.clear();
        } else {
            ContractOutcome out = run_contract(mf, beta, f);
            doc = make_partition_document("partition", mf, beta, out);
        }
        std::cout << doc.render();
        std::cerr << "wall_ms " << timer.ms() << "\n";
        return 0;
    });
}

int cmd_correlate(const std::string& path, const std::string& sites_csv, const CommonFlags& f) {
    return guarded([&] {
        Timer timer;
        ModelFile mf = load_model_file(path, f.lenient);
        warn_all(mf);
        double beta = beta_of(mf, f);
        std::vector<int> sites;
        {
            std::stringstream ss(sites_csv);
            std::string tok;
            while (std::getline(ss, tok, ',')) sites.push_back(std::stoi(tok));
        }
        if (sites.empty()) throw std::invalid_argument("--sites must list at least one vertex");
        ResultDocument doc;
        doc.command = "correlate";
        doc.model_digest = digest_hex(mf.canonical_text);
        doc.beta = beta;
        if (f.oracle) {
            cplx c = oracle::correlation_exact(mf.hamiltonian, beta, sites, oracle::kDefaultCap,
                                               resolve_thread_count(f.threads));
            doc.encoding = "oracle";
            doc.correlation = c;
        } else {
            ContractOutcome num = run_contract(mf, beta, f, sites);
            ContractOutcome den = run_contract(mf, beta, f, {}, true);
            if (den.z.is_zero()) throw std::runtime_error("partition function is zero");
            doc.encoding = to_string(Encoding::Phi);
            doc.correlation = (num.z / den.z).value();
            doc.log_z = den.z.log();
            doc.width = den.width.width;
            doc.num_leaves = den.num_leaves;
            doc.decomposition_digest =
                digest_hex(den.num_leaves > 0 ? den.decomposition.serialize() : std::string("()"));
        }
        std::cout << doc.render();
        std::cerr << "wall_ms " << timer.ms() << "\n";
        return 0;
    });
}

int cmd_dual(const std::string& path, const std::string& output, const CommonFlags& f) {
    return guarded([&] {
        Timer timer;
        ModelFile mf = load_model_file(path, f.lenient);
        warn_all(mf);
        double beta = beta_of(mf, f);
        if (!mf.embedding) {
            std::cerr << "planarity error: the model file carries no embedding\n";
            return kExitPlanar;
        }
        const Hamiltonian& h = mf.hamiltonian;
        PlanarDual pd;
        Hamiltonian dual;
        try {
            pd = planar_dual(h.graph, *mf.embedding);
            dual = dual_model(h, *mf.embedding, beta);
        } catch (const std::invalid_argument& e) {
            std::cerr << "planarity error: " << e.what() << "\n";
            return kExitPlanar;
        }
        std::string dual_text = write_model_file(dual, beta);
        std::string out_path = output.empty() ? path + ".dual.json" : output;
        {
            std::ofstream o(out_path);
            o << dual_text;
        }

        auto z_of = [&](const Hamiltonian& model) {
            ContractOptions opts;
            opts.encoding = Encoding::Psi;
            opts.max_label_dim = label_cap(f, model.graph.q);
            return contract(model, beta, opts);
        };
        ContractOutcome zg = z_of(h);
        ContractOutcome zd = z_of(dual);
        // scalar pinned by the all-ones (infinite temperature) weights
        double log_s;
        {
            auto z_ones = [&](const SpinGraph& g, bool fourier) {
                LeafStructure ls = leaf_structure(g, Encoding::Psi);
                std::vector<ScaledVector> w(g.num_edges());
                for (int e = 0; e < g.num_edges(); ++e) {
                    w[e].amplitudes.assign(g.q, cplx(1.0));
                    if (fourier) w[e] = fourier_weights(w[e]);
                }
                BranchDecomposition bd = heuristic_branch_decompose(
                    ls, ls.num_leaves() <= 8 ? Strategy::ExhaustiveSmall : Strategy::GreedyMerge);
                return contract_weights(ls, g.q, bd, w, label_cap(f, g.q));
            };
            log_s = (z_ones(h.graph, false) / z_ones(pd.dual, true)).log().real();
        }
        ResultDocument doc;
        doc.command = "dual";
        doc.model_digest = digest_hex(mf.canonical_text);
        doc.beta = beta;
        doc.encoding = "psi";
        doc.log_z = zg.z.log();
        doc.log_z_dual = zd.z.log();
        doc.duality_scalar_log = log_s;
        doc.width = zg.width.width;
        doc.num_leaves = zg.num_leaves;
        doc.decomposition_digest = digest_hex(zg.decomposition.serialize());
        ScaledComplex scaled{zd.z.mantissa, zd.z.log_scale + log_s};
        char relbuf[32];
        std::snprintf(relbuf, sizeof relbuf, "%.3e", relative_error(zg.z, scaled));
        doc.extra.push_back({"dual_model_file", out_path});
        doc.extra.push_back({"z_equality_rel_error", relbuf});
        std::cout << doc.render();
        std::cerr << "wall_ms " << timer.ms() << "\n";
        return 0;
    });
}

int cmd_symmetry(const std::string& path, int vertex, int sample, uint64_t seed,
                 const CommonFlags& f) {
    return guarded([&] {
        Timer timer;
        ModelFile mf = load_model_file(path, f.lenient);
        warn_all(mf);
        double beta = beta_of(mf, f);
        const Hamiltonian& h = mf.hamiltonian;
        Encoding enc = h.has_fields() ? Encoding::Phi : Encoding::Psi;
        if (h.form != TermForm::Difference)
            throw std::invalid_argument("symmetries cover difference-form models (psi/phi)");
        LeafStructure ls = leaf_structure(h, enc);
        std::vector<ScaledVector> w = encoding_weights(h, beta, enc);
        BranchDecomposition bd = heuristic_branch_decompose(
            ls, ls.num_leaves() <= 8 ? Strategy::ExhaustiveSmall : Strategy::GreedyMerge);
        uint64_t cap = label_cap(f, h.graph.q);
        ScaledComplex z0 = contract_weights(ls, h.graph.q, bd, w, cap);

        double max_dev = 0.0;
        int orbit = 0;
        std::string transformed_model;
        if (vertex >= 0) {
            Hamiltonian flipped = vertex_flip(h, vertex);
            std::vector<ScaledVector> fw = encoding_weights(flipped, beta, enc);
            max_dev = std::max(max_dev, relative_error(contract_weights(ls, h.graph.q, bd, fw, cap), z0));
            orbit = 1;
            transformed_model = write_model_file(flipped, beta);
        } else {
            StabilizerGenSet gens = enc == Encoding::Psi ? psi_generators(h.graph)
                                                         : phi_generators(h.graph);
            std::mt19937_64 rng(seed);
            for (int s = 0; s < sample; ++s) {
                PauliWord word = sample_stabilizer_word(gens, rng);
                std::vector<ScaledVector> tw = apply_symmetry(w, word, h.graph, enc);
                max_dev = std::max(max_dev, relative_error(contract_weights(ls, h.graph.q, bd, tw, cap), z0));
                orbit++;
            }
        }
        ResultDocument doc;
        doc.command = "symmetry";
        doc.model_digest = digest_hex(mf.canonical_text);
        doc.beta = beta;
        doc.encoding = to_string(enc);
        doc.log_z = z0.log();
        doc.max_symmetry_deviation = max_dev;
        doc.width = 0;
        doc.num_leaves = ls.num_leaves();
        doc.decomposition_digest = digest_hex(bd.serialize());
        doc.extra.push_back({"orbit_samples", std::to_string(orbit)});
        if (!transformed_model.empty())
            doc.extra.push_back({"transformed_model_digest", digest_hex(transformed_model)});
        std::cout << doc.render();
        if (!transformed_model.empty()) std::cout << transformed_model;
        std::cerr << "wall_ms " << timer.ms() << "\n";
        return 0;
    });
}

int cmd_validate(const std::string& suite) {
    return guarded([&] {
        auto results = run_validation(suite);
        int fails = 0;
        for (const auto& r : results) {
            std::cout << (r.pass ? "PASS " : "FAIL ") << r.name;
            if (!r.detail.empty()) std::cout << ": " << r.detail;
            std::cout << "\n";
            if (!r.pass) fails++;
        }
        std::cout << (fails ? "FAILED" : "OK") << " (" << results.size() - fails << "/"
                  << results.size() << " checks)\n";
        return fails ? 1 : 0;
    });
}

int cmd_bench(const std::string& family, const std::string& sizes_csv, int q, const CommonFlags& f) {
    return guarded([&] {
        std::vector<long long> sizes;
        {
            std::stringstream ss(sizes_csv);
            std::string tok;
            while (std::getline(ss, tok, ',')) sizes.push_back(std::stoll(tok));
        }
        std::printf("%-10s %10s %8s %6s %12s %14s\n", "family", "size", "leaves", "width",
                    "wall_s", "log_z");
        for (long long n : sizes) {
            Hamiltonian h;
            Encoding enc = Encoding::Psi;
            if (family == "chain") {
                SpinGraph g = families::path(static_cast<int>(n), q);
                ModelParams p;
                p.edge_coupling.assign(g.num_edges(), cplx(1.0));
                if (q == 2)
                    for (int v = 0; v < g.num_vertices; ++v) p.vertex_field[v] = 0.3;
                h = q == 2 ? make_model(ModelKind::Ising, g, p)
                           : make_model(ModelKind::Potts, g, p);
                enc = h.has_fields() ? Encoding::Phi : Encoding::Psi;
            } else if (family == "ladder") {
                SpinGraph g = families::ladder(static_cast<int>(n), q);
                ModelParams p;
                p.edge_coupling.assign(g.num_edges(), cplx(1.0));
                h = make_model(ModelKind::Potts, g, p);
            } else if (family == "cycle") {
                SpinGraph g = families::cycle(static_cast<int>(n), q);
                ModelParams p;
                p.edge_coupling.assign(g.num_edges(), cplx(1.0));
                h = make_model(ModelKind::Potts, g, p);
            } else if (family == "grid") {
                SpinGraph g = families::grid(static_cast<int>(n), static_cast<int>(n), q);
                ModelParams p;
                p.edge_coupling.assign(g.num_edges(), cplx(1.0));
                h = make_model(ModelKind::Potts, g, p);
            } else {
                throw std::invalid_argument("unknown family: " + family);
            }
            ContractOptions opts;
            opts.encoding = enc;
            opts.strategy = family == "grid" && n <= 6 ? Strategy::GreedyMerge
                                                       : Strategy::MinDegreeElimination;
            opts.max_label_dim = label_cap(f, q);
            Timer timer;
            ContractOutcome out = contract(h, 0.5, opts);
            double secs = timer.ms() / 1000.0;
            std::printf("%-10s %10lld %8d %6d %12.4f %14.6f\n", family.c_str(), n, out.num_leaves,
                        out.width.width, secs, out.z.log().real());
        }
        return 0;
    });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact spin-model partition functions via stabilizer-state overlaps"};
    app.require_subcommand(1);

    std::string model_path, sites_csv, output, suite = "all", family = "chain", sizes = "1000";
    int vertex = -1, sample = 0, bench_q = 2;
    uint64_t seed = 7;
    CommonFlags flags;

    auto* partition = app.add_subcommand("partition", "evaluate log Z");
    partition->add_option("model", model_path, "model file")->required();
    add_common_flags(partition, flags);

    auto* correlate = app.add_subcommand("correlate", "cos-weighted n-point function");
    correlate->add_option("model", model_path, "model file")->required();
    correlate->add_option("--sites", sites_csv, "comma-separated vertex ids (repeats allowed)")
        ->required();
    add_common_flags(correlate, flags);

    auto* dual = app.add_subcommand("dual", "map a planar model onto its dual graph");
    dual->add_option("model", model_path, "model file with embedding")->required();
    dual->add_option("--output", output, "path for the dual model file");
    add_common_flags(dual, flags);

    auto* symmetry = app.add_subcommand("symmetry", "gauge-equivalent coupling sets");
    symmetry->add_option("model", model_path, "model file")->required();
    symmetry->add_option("--vertex", vertex, "flip this vertex (q = 2)");
    symmetry->add_option("--sample", sample, "number of random stabilizer words");
    symmetry->add_option("--seed", seed, "sampling seed");
    add_common_flags(symmetry, flags);

    auto* validate = app.add_subcommand("validate", "run the built-in check suites");
    validate->add_option("--suite", suite, "linalg|stabilizer|contraction|duality|symmetry|all")
        ->default_val("all");

    auto* bench = app.add_subcommand("bench", "timing table over a graph family");
    bench->add_option("--family", family, "chain|ladder|cycle|grid")->required();
    bench->add_option("--sizes", sizes, "comma-separated sizes")->required();
    bench->add_option("--q", bench_q, "spin dimension")->default_val(2);
    add_common_flags(bench, flags);

    CLI11_PARSE(app, argc, argv);

    if (partition->parsed()) return cmd_partition(model_path, flags);
    if (correlate->parsed()) return cmd_correlate(model_path, sites_csv, flags);
    if (dual->parsed()) return cmd_dual(model_path, output, flags);
    if (symmetry->parsed()) {
        if (vertex < 0 && sample <= 0) {
            std::cerr << "symmetry needs --vertex or --sample\n";
            return 1;
        }
        return cmd_symmetry(model_path, vertex, sample, seed, flags);
    }
    if (validate->parsed()) return cmd_validate(suite);
    if (bench->parsed()) return cmd_bench(family, sizes, bench_q, flags);
    return 1;
}
