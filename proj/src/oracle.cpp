#include "spinz/oracle.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "spinz/threads.hpp"
#include "spinz/zq.hpp"

namespace spinz {
namespace oracle {

namespace {

uint64_t pow_u64(uint64_t base, int exp) {
    uint64_t r = 1;
    for (int i = 0; i < exp; ++i) {
        if (r > uint64_t(1) << 58) throw std::overflow_error("state space too large");
        r *= base;
    }
    return r;
}

void check_cap(uint64_t states, uint64_t cap, const char* what) {
    if (states > cap)
        throw std::runtime_error(std::string(what) + ": enumeration cap exceeded (" +
                                 std::to_string(states) + " > " + std::to_string(cap) + " states)");
}

void decode_config(uint64_t idx, int q, int n, std::vector<int>& out) {
    for (int i = n - 1; i >= 0; --i) {
        out[i] = static_cast<int>(idx % q);
        idx /= q;
    }
}

// e^{-beta h} as a scaled value; the exponent goes straight into the scale so
// large couplings never overflow.
ScaledComplex boltzmann_factor(cplx h, double beta) {
    cplx mb = -beta * h;
    ScaledComplex r{std::polar(1.0, mb.imag()), mb.real()};
    return r;
}

struct EnumerationSums {
    ScaledComplex weighted;   // sum of cos-weighted (or plain) terms
    ScaledComplex magnitude;  // sum of |e^{-beta H}|, for the Z=0 guard
};

EnumerationSums enumerate_terms(const Hamiltonian& h, double beta, const std::vector<int>& sites,
                                uint64_t cap, int threads) {
    h.validate();
    const int q = h.graph.q;
    const int nv = h.graph.num_vertices;
    uint64_t states = pow_u64(q, nv);
    check_cap(states, cap, "oracle");

    const int num_chunks = states > 4096 ? 64 : 1;
    std::vector<EnumerationSums> partial(num_chunks);
    parallel_chunks(num_chunks, resolve_thread_count(threads), [&](int chunk) {
        uint64_t lo = states * chunk / num_chunks;
        uint64_t hi = states * (chunk + 1) / num_chunks;
        std::vector<int> config(nv);
        ScaledComplex acc = ScaledComplex::zero();
        ScaledComplex mag = ScaledComplex::zero();
        for (uint64_t idx = lo; idx < hi; ++idx) {
            decode_config(idx, q, nv, config);
            ScaledComplex w = boltzmann_factor(energy(h, config), beta);
            mag = mag + ScaledComplex{std::abs(w.mantissa), w.log_scale};
            double cw = 1.0;
            for (int s : sites) cw *= std::cos(2.0 * std::numbers::pi * config[s] / q);
            if (cw != 1.0) w.mantissa *= cw;
            acc = acc + w;
        }
        partial[chunk] = {acc, mag};
    });
    // pairwise tree reduction over the fixed chunk layout: bit-stable for
    // any worker count
    while (partial.size() > 1) {
        std::vector<EnumerationSums> next((partial.size() + 1) / 2);
        for (size_t i = 0; i + 1 < partial.size(); i += 2)
            next[i / 2] = {partial[i].weighted + partial[i + 1].weighted,
                           partial[i].magnitude + partial[i + 1].magnitude};
        if (partial.size() % 2) next.back() = partial.back();
        partial = std::move(next);
    }
    return partial[0];
}

}  // namespace

ScaledComplex partition_exact(const Hamiltonian& h, double beta, uint64_t cap, int threads) {
    return enumerate_terms(h, beta, {}, cap, threads).weighted;
}

cplx correlation_exact(const Hamiltonian& h, double beta, const std::vector<int>& sites,
                       uint64_t cap, int threads) {
    if (sites.empty()) throw std::invalid_argument("correlation needs at least one site");
    for (int s : sites)
        if (s < 0 || s >= h.graph.num_vertices)
            throw std::invalid_argument("correlation site out of range");
    EnumerationSums z = enumerate_terms(h, beta, {}, cap, threads);
    if (z.weighted.is_zero() ||
        z.weighted.log() .real() < z.magnitude.log().real() + std::log(1e-14))
        throw std::runtime_error("partition function vanishes; correlation undefined");
    EnumerationSums w = enumerate_terms(h, beta, sites, cap, threads);
    return (w.weighted / z.weighted).value();
}

DenseState dense_state(const SpinGraph& graph, Encoding enc, uint64_t cap) {
    graph.validate();
    const int q = graph.q;
    const int nv = graph.num_vertices;
    const int ne = graph.num_edges();
    uint64_t configs = pow_u64(q, nv);
    check_cap(configs, cap, "dense_state");

    DenseState st;
    st.q = q;
    switch (enc) {
        case Encoding::Psi: {
            if (ne == 0) throw std::invalid_argument("psi needs at least one edge");
            st.num_sites = ne;
            st.amplitudes.assign(pow_u64(q, ne), cplx(0.0));
            check_cap(st.amplitudes.size(), cap, "dense_state");
            std::vector<int> s(nv);
            for (uint64_t idx = 0; idx < configs; ++idx) {
                decode_config(idx, q, nv, s);
                uint64_t out = 0;
                for (auto [t, h] : graph.edges) out = out * q + mod_q(s[h] - s[t], q);
                st.amplitudes[out] += 1.0;
            }
            // q^kappa prefactor on top of the kernel multiplicity
            st.log_scale = graph.num_components() * std::log(static_cast<double>(q));
            break;
        }
        case Encoding::Phi: {
            st.num_sites = nv + ne;
            st.amplitudes.assign(pow_u64(q, nv + ne), cplx(0.0));
            check_cap(st.amplitudes.size(), cap, "dense_state");
            std::vector<int> s(nv);
            for (uint64_t idx = 0; idx < configs; ++idx) {
                decode_config(idx, q, nv, s);
                uint64_t out = 0;
                for (int v = 0; v < nv; ++v) out = out * q + s[v];
                for (auto [t, h] : graph.edges) out = out * q + mod_q(s[h] - s[t], q);
                st.amplitudes[out] += 1.0;
            }
            break;
        }
        case Encoding::Ghz: {
            st.num_sites = 2 * ne;
            st.amplitudes.assign(pow_u64(q, 2 * ne), cplx(0.0));
            check_cap(st.amplitudes.size(), cap, "dense_state");
            std::vector<int> s(nv);
            for (uint64_t idx = 0; idx < configs; ++idx) {
                decode_config(idx, q, nv, s);
                uint64_t out = 0;
                for (auto [t, h] : graph.edges) out = (out * q + s[t]) * q + s[h];
                st.amplitudes[out] += 1.0;
            }
            break;
        }
        case Encoding::KBody:
            throw std::invalid_argument("dense k-body states depend on the Hamiltonian terms");
    }
    return st;
}

ScaledComplex overlap(const DenseState& state, const std::vector<ScaledVector>& weights,
                      const std::vector<std::vector<int>>& grouping) {
    if (weights.size() != grouping.size())
        throw std::invalid_argument("one weight vector per site group required");
    const int q = state.q;
    std::vector<char> seen(state.num_sites, 0);
    for (size_t g = 0; g < grouping.size(); ++g) {
        size_t want = 1;
        for (int s : grouping[g]) {
            if (s < 0 || s >= state.num_sites || seen[s])
                throw std::invalid_argument("grouping must cover each site exactly once");
            seen[s] = 1;
            want *= static_cast<size_t>(q);
        }
        if (weights[g].amplitudes.size() != want)
            throw std::invalid_argument("weight vector length must be q^|group|");
    }
    for (char c : seen)
        if (!c) throw std::invalid_argument("grouping must cover all sites");

    std::vector<uint64_t> site_stride(state.num_sites);
    {
        uint64_t s = 1;
        for (int i = state.num_sites - 1; i >= 0; --i) {
            site_stride[i] = s;
            s *= q;
        }
    }
    double shared_scale = state.log_scale;
    for (const auto& w : weights) shared_scale += w.log_scale;

    cplx acc(0.0);
    ScaledComplex total = ScaledComplex::zero();
    size_t batch = 0;
    for (uint64_t idx = 0; idx < state.dim(); ++idx) {
        if (state.amplitudes[idx] == cplx(0.0)) continue;
        cplx w(1.0);
        for (size_t g = 0; g < grouping.size(); ++g) {
            uint64_t sub = 0;
            for (int s : grouping[g]) sub = sub * q + (idx / site_stride[s]) % q;
            w *= weights[g].amplitudes[sub];
        }
        acc += w * state.amplitudes[idx];
        if (++batch == 4096) {  // keep the running sum well scaled
            total = total + ScaledComplex{acc, shared_scale};
            acc = cplx(0.0);
            batch = 0;
        }
    }
    total = total + ScaledComplex{acc, shared_scale};
    return total;
}

int reduced_rank(const DenseState& state, const std::vector<int>& subsystem) {
    const int q = state.q;
    std::vector<char> in(state.num_sites, 0);
    for (int s : subsystem) {
        if (s < 0 || s >= state.num_sites) throw std::invalid_argument("subsystem site out of range");
        in[s] = 1;
    }
    std::vector<int> sub, rest;
    for (int i = 0; i < state.num_sites; ++i) (in[i] ? sub : rest).push_back(i);

    uint64_t rows = pow_u64(q, static_cast<int>(sub.size()));
    uint64_t cols = pow_u64(q, static_cast<int>(rest.size()));
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rows),
                                                static_cast<Eigen::Index>(cols));
    std::vector<uint64_t> stride(state.num_sites);
    uint64_t s = 1;
    for (int i = state.num_sites - 1; i >= 0; --i) {
        stride[i] = s;
        s *= q;
    }
    for (uint64_t idx = 0; idx < state.dim(); ++idx) {
        if (state.amplitudes[idx] == cplx(0.0)) continue;
        uint64_t r = 0, c = 0;
        for (int i : sub) r = r * q + (idx / stride[i]) % q;
        for (int i : rest) c = c * q + (idx / stride[i]) % q;
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = state.amplitudes[idx];
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0) return 0;
    double top = sv(0);
    if (top == 0.0) return 0;
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > 1e-9 * top) rank++;
    return rank;
}

DenseState apply_pauli(const DenseState& state, const PauliWord& w) {
    if (w.n != state.num_sites || w.q != state.q)
        throw std::invalid_argument("pauli word does not match state");
    const int q = state.q;
    DenseState out = state;
    std::fill(out.amplitudes.begin(), out.amplitudes.end(), cplx(0.0));
    std::vector<int> digits(state.num_sites);
    for (uint64_t idx = 0; idx < state.dim(); ++idx) {
        if (state.amplitudes[idx] == cplx(0.0)) continue;
        decode_config(idx, q, state.num_sites, digits);
        long long phase = w.phase_num;
        uint64_t target = 0;
        for (int i = 0; i < state.num_sites; ++i) {
            phase += static_cast<long long>(w.zeta[i]) * digits[i];
            target = target * q + mod_q(digits[i] + w.xi[i], q);
        }
        out.amplitudes[target] +=
            state.amplitudes[idx] * std::polar(1.0, 2.0 * std::numbers::pi * mod_q(phase, q) / q);
    }
    return out;
}

}  // namespace oracle
}  // namespace spinz
