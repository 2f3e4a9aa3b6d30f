#pragma once

// The q-binomial distribution Bin_q(n, theta): law of a sum of independent
// Bernoulli variables with success probabilities theta q^j / (1 + theta q^j).

#include "qgrass/exact.hpp"
#include "qgrass/qcomb.hpp"
#include "qgrass/rng.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace qgrass {

/// theta may be +infinity (all mass at k = n). q is real so that the q -> 1
/// degeneration can be studied; the combinatorial meaning needs q a prime power.
struct QBinomialParams {
    unsigned n = 0;
    double theta = 1.0;
    double q = 2.0;

    void validate() const
    {
        if (!(theta >= 0.0))
            throw std::domain_error("q-binomial: theta must be nonnegative");
        if (!(q > 1.0) || !std::isfinite(q))
            throw std::domain_error("q-binomial: q must be a finite real > 1");
    }
};

namespace detail {

/// ln(1 + e^x) without overflow.
inline double softplus(double x)
{
    return x > 30.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

/// ln [m]_q for real q > 1.
inline double ln_q_integer(unsigned m, double lnq)
{
    const double a = m * lnq;
    if (a < 1.0)
        return std::log(std::expm1(a) / std::expm1(lnq));
    return a + std::log1p(-std::exp(-a)) - std::log(std::expm1(lnq));
}

inline double ln_q_binomial_real(unsigned n, unsigned k, double lnq)
{
    double s = 0.0;
    for (unsigned i = 0; i < k; ++i)
        s += ln_q_integer(n - i, lnq) - ln_q_integer(i + 1, lnq);
    return s;
}

/// ln (-theta; q)_n = sum_j ln(1 + theta q^j), theta > 0 finite.
inline double ln_neg_pochhammer(double theta, double lnq, unsigned n)
{
    const double lt = std::log(theta);
    double s = 0.0;
    for (unsigned j = 0; j < n; ++j)
        s += softplus(lt + j * lnq);
    return s;
}

} // namespace detail

/// Natural log of P(Y = k); -inf outside the support.
inline double log_pmf(unsigned k, const QBinomialParams& par)
{
    par.validate();
    constexpr double kNegInf = -std::numeric_limits<double>::infinity();
    if (k > par.n)
        return kNegInf;
    if (par.theta == 0.0)
        return k == 0 ? 0.0 : kNegInf;
    if (std::isinf(par.theta))
        return k == par.n ? 0.0 : kNegInf;
    const double lnq = std::log(par.q);
    return detail::ln_q_binomial_real(par.n, k, lnq) + 0.5 * k * (k - 1.0) * lnq +
           k * std::log(par.theta) - detail::ln_neg_pochhammer(par.theta, lnq, par.n);
}

/// P(Y = k) = [n k]_q q^{k(k-1)/2} theta^k / (-theta; q)_n; 0 outside 0..n.
inline double pmf(unsigned k, const QBinomialParams& par)
{
    return std::exp(log_pmf(k, par));
}

/// Exact pmf for integer q and rational theta.
inline Rational pmf_exact(unsigned k, unsigned n, const Rational& theta, std::uint64_t q)
{
    if (theta < 0)
        throw std::domain_error("pmf_exact: theta must be nonnegative");
    if (k > n)
        return 0;
    Rational den = 1;
    Rational qj = 1;
    for (unsigned j = 0; j < n; ++j) {
        den *= 1 + theta * qj;
        qj *= q;
    }
    return Rational(q_binomial(n, k, q) * ipow(ExactInt(q), k * (k - 1) / 2)) * rpow(theta, k) / den;
}

/// Two-parameter form; mass proportional to [n k]_q q^{k(k-1)/2} y^k x^{n-k}.
inline double pmf_xy(unsigned k, unsigned n, double x, double y, double q)
{
    if (!(x >= 0.0 && y >= 0.0))
        throw std::domain_error("pmf_xy: x and y must be nonnegative");
    if (x == 0.0 && y == 0.0)
        throw std::domain_error("pmf_xy: x and y cannot both vanish");
    const double theta = x == 0.0 ? std::numeric_limits<double>::infinity() : y / x;
    return pmf(k, {n, theta, q});
}

namespace detail {

/// theta q^j / (1 + theta q^j), stable for large q^j.
inline double step_probability(double theta, double q, unsigned j)
{
    if (theta == 0.0)
        return 0.0;
    if (std::isinf(theta))
        return 1.0;
    const double l = std::log(theta) + j * std::log(q);
    return 1.0 / (1.0 + std::exp(-l));
}

} // namespace detail

/// Success probabilities of the Bernoulli chain, j = 0..n-1.
inline std::vector<double> bernoulli_chain(const QBinomialParams& par)
{
    par.validate();
    std::vector<double> p(par.n);
    for (unsigned j = 0; j < par.n; ++j)
        p[j] = detail::step_probability(par.theta, par.q, j);
    return p;
}

inline double mean(const QBinomialParams& par)
{
    double m = 0.0;
    for (double p : bernoulli_chain(par))
        m += p;
    return m;
}

inline double variance(const QBinomialParams& par)
{
    double v = 0.0;
    for (double p : bernoulli_chain(par))
        v += p * (1.0 - p);
    return v;
}

/// c_n(theta) = sum_{j<n} 1 / (1 + theta q^j) = n - mean.
inline double c_n(double theta, unsigned n, double q)
{
    const QBinomialParams par{n, theta, q};
    double c = 0.0;
    for (double p : bernoulli_chain(par))
        c += 1.0 - p;
    return c;
}

/// lim c_n(theta); the tail after the last term is bounded geometrically by tol.
inline double c_inf(double theta, double q, double tol = 1e-12)
{
    if (!(theta > 0.0))
        throw std::domain_error("c_inf: diverges for theta = 0");
    if (!(q > 1.0))
        throw std::domain_error("c_inf: q must exceed 1");
    double c = 0.0;
    for (unsigned j = 0; j < 100000; ++j) {
        const double term = 1.0 - detail::step_probability(theta, q, j);
        c += term;
        // remaining terms are below term * (1/q + 1/q^2 + ...)
        if (term / (q - 1.0) < tol)
            break;
    }
    return c;
}

inline unsigned sample(const QBinomialParams& par, RandomStream& rng)
{
    unsigned k = 0;
    for (double p : bernoulli_chain(par))
        k += rng.bernoulli(p) ? 1 : 0;
    return k;
}

/// m_{q,n}(theta), the mean as a function of theta; m(inf) = n.
inline double m_qn(double theta, unsigned n, double q)
{
    return mean({n, theta, q});
}

struct MleEstimate {
    double theta;       ///< +inf when every sample equals n
    double sample_mean;
    double residual;    ///< |m_qn(theta) - sample_mean|
};

/// Maximum-likelihood theta: the root of m_qn(theta) = sample mean, found by
/// bisection in log theta until the residual on the m-scale is below tol.
inline MleEstimate mle_theta(const std::vector<unsigned>& samples, unsigned n, double q,
                             double tol = 1e-12)
{
    if (samples.empty())
        throw std::invalid_argument("mle_theta: no samples");
    double total = 0.0;
    for (unsigned s : samples) {
        if (s > n)
            throw std::invalid_argument("mle_theta: sample exceeds n");
        total += s;
    }
    const double ybar = total / static_cast<double>(samples.size());
    if (ybar == 0.0)
        return {0.0, ybar, 0.0};
    if (ybar == static_cast<double>(n))
        return {std::numeric_limits<double>::infinity(), ybar, 0.0};

    double lo = 1.0, hi = 1.0;
    while (m_qn(hi, n, q) < ybar)
        hi *= 2.0;
    while (m_qn(lo, n, q) > ybar)
        lo /= 2.0;
    double mid = lo;
    double res = std::abs(m_qn(mid, n, q) - ybar);
    for (int it = 0; it < 400 && res >= tol; ++it) {
        mid = std::sqrt(lo * hi);
        if (mid <= lo || mid >= hi)
            break;
        const double m = m_qn(mid, n, q);
        res = std::abs(m - ybar);
        (m < ybar ? lo : hi) = mid;
    }
    return {mid, ybar, res};
}

} // namespace qgrass
