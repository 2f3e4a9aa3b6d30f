#pragma once

// The Grassmannian process: V_0 = F_q^0 and V_{n+1} is either V_n embedded in
// F_q^{n+1} or a uniform dilation of it, the latter with probability
// theta q^n / (1 + theta q^n).

#include "qgrass/gf.hpp"
#include "qgrass/qdist.hpp"
#include "qgrass/rng.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace qgrass {

struct ProcessState {
    unsigned step = 0;
    gf::Subspace current = gf::Subspace::zero(0);
};

struct Trajectory {
    std::uint64_t seed = 0;
    std::uint64_t replicate = 0;
    std::vector<ProcessState> states; ///< all steps when history was kept, else the final one

    const ProcessState& final_state() const { return states.back(); }
};

/// One transition: the coin comes from `coins`, the dilation from `dilations`.
inline ProcessState step(const gf::Field& field, const ProcessState& state, double theta,
                         RandomStream& coins, RandomStream& dilations)
{
    if (!(theta >= 0.0))
        throw std::domain_error("step: theta must be nonnegative");
    if (state.current.ambient_dim() != state.step)
        throw std::invalid_argument("step: subspace does not live in F_q^step");
    const double p = detail::step_probability(theta, field.q(), state.step);
    ProcessState next;
    next.step = state.step + 1;
    next.current = coins.bernoulli(p) ? gf::sample_dilation(field, state.current, dilations)
                                      : state.current.embedded();
    return next;
}

inline ProcessState step(const gf::Field& field, const ProcessState& state, double theta,
                         RandomStream& rng)
{
    return step(field, state, theta, rng, rng);
}

/// Runs n steps. Replicate r draws its coins from root(seed).substream(r).substream(0)
/// and its dilations from .substream(1), so replicates can be produced in any
/// order or in parallel with identical results.
inline Trajectory simulate(const gf::Field& field, unsigned n, double theta, std::uint64_t seed,
                           std::uint64_t replicate = 0, bool keep_history = false)
{
    auto coins = RandomStream::from_path({seed, replicate, 0});
    auto dilations = RandomStream::from_path({seed, replicate, 1});
    Trajectory t;
    t.seed = seed;
    t.replicate = replicate;
    ProcessState state;
    if (keep_history)
        t.states.push_back(state);
    for (unsigned s = 0; s < n; ++s) {
        state = step(field, state, theta, coins, dilations);
        if (keep_history)
            t.states.push_back(state);
    }
    if (!keep_history)
        t.states.push_back(std::move(state));
    return t;
}

/// Dimension-only replica of simulate(): consumes the same coin stream, so for
/// equal (seed, replicate) it returns the same dimension.
inline unsigned simulate_dimension(double q, unsigned n, double theta, std::uint64_t seed,
                                   std::uint64_t replicate = 0)
{
    auto coins = RandomStream::from_path({seed, replicate, 0});
    unsigned k = 0;
    for (unsigned s = 0; s < n; ++s)
        k += coins.bernoulli(detail::step_probability(theta, q, s)) ? 1 : 0;
    return k;
}

/// Natural log of Pr{V_n = v} for dim v = k: theta^k q^{k(k-1)/2} / (-theta; q)_n.
inline double log_subspace_probability(unsigned k, unsigned n, double theta, double q)
{
    if (k > n)
        throw std::invalid_argument("subspace probability: k exceeds n");
    return log_pmf(k, {n, theta, q}) - detail::ln_q_binomial_real(n, k, std::log(q));
}

inline double exact_pmf(const gf::Subspace& v, unsigned n, double theta, double q)
{
    if (v.ambient_dim() != n)
        throw std::invalid_argument("exact_pmf: subspace not in F_q^n");
    return std::exp(log_subspace_probability(v.dim(), n, theta, q));
}

inline double log_q_exact_pmf(const gf::Subspace& v, unsigned n, double theta, double q)
{
    if (v.ambient_dim() != n)
        throw std::invalid_argument("exact_pmf: subspace not in F_q^n");
    return log_subspace_probability(v.dim(), n, theta, q) / std::log(q);
}

/// Same law in exact rationals (integer q, rational theta).
inline Rational exact_pmf_rational(unsigned k, unsigned n, const Rational& theta, std::uint64_t q)
{
    if (k > n)
        throw std::invalid_argument("subspace probability: k exceeds n");
    Rational den = 1;
    Rational qj = 1;
    for (unsigned j = 0; j < n; ++j) {
        den *= 1 + theta * qj;
        qj *= q;
    }
    return Rational(ipow(ExactInt(q), k * (k - 1) / 2)) * rpow(theta, k) / den;
}

/// log_q Pr{V_n = v} for codim v = d, in the form
///   -1/2 (d - x0)^2 + 1/2 x0^2 - (n^2/2) H_2(d/n) - log_q (-theta^-1; q^-1)_n,
/// with x0 = 1/2 - log_q theta and (n^2/2) H_2(d/n) = d (n - d).
inline double log_pmf_by_codim(unsigned d, unsigned n, double theta, double q)
{
    if (d > n)
        throw std::invalid_argument("log_pmf_by_codim: d exceeds n");
    if (!(theta > 0.0) || std::isinf(theta))
        throw std::domain_error("log_pmf_by_codim: theta must be positive and finite");
    const double lnq = std::log(q);
    const double x0 = 0.5 - std::log(theta) / lnq;
    const double dd = d;
    double lpoch = 0.0; // ln (-theta^-1; q^-1)_n
    for (unsigned j = 0; j < n; ++j)
        lpoch += std::log1p(std::exp(-std::log(theta) - j * lnq));
    return -0.5 * (dd - x0) * (dd - x0) + 0.5 * x0 * x0 - dd * (n - dd) - lpoch / lnq;
}

} // namespace qgrass
