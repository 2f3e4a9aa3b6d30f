#pragma once

// Deformed logarithms and Tsallis entropies (K = 1), the chain rule, and the
// growth constants of classical and q-multinomial coefficients.

#include "qgrass/exact.hpp"
#include "qgrass/qcomb.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

namespace qgrass {

/// Finite probability vector; entries in [0,1] summing to 1 within 1e-12.
class ProbVector {
public:
    static constexpr double kSumTol = 1e-12;

    ProbVector() : p_{1.0} {}

    explicit ProbVector(std::vector<double> p) : p_(std::move(p))
    {
        if (p_.empty())
            throw std::invalid_argument("ProbVector: empty");
        double s = 0.0;
        for (double x : p_) {
            if (!(x >= 0.0 && x <= 1.0))
                throw std::invalid_argument("ProbVector: entry outside [0, 1]");
            s += x;
        }
        if (std::abs(s - 1.0) > kSumTol)
            throw std::invalid_argument("ProbVector: entries do not sum to 1");
    }

    const std::vector<double>& values() const noexcept { return p_; }
    std::size_t size() const noexcept { return p_.size(); }
    double operator[](std::size_t i) const { return p_[i]; }
    auto begin() const { return p_.begin(); }
    auto end() const { return p_.end(); }

private:
    std::vector<double> p_;
};

/// ln_alpha(x) = integral of t^-alpha from 1 to x.
inline double ln_alpha(double x, double alpha)
{
    if (!(x > 0.0))
        throw std::domain_error("ln_alpha: x must be positive");
    if (alpha == 1.0)
        return std::log(x);
    return std::expm1((1.0 - alpha) * std::log(x)) / (1.0 - alpha);
}

inline double tsallis_entropy(const ProbVector& p, double alpha)
{
    if (!(alpha > 0.0))
        throw std::domain_error("tsallis_entropy: alpha must be positive");
    if (alpha == 1.0) {
        double h = 0.0;
        for (double x : p)
            if (x > 0.0)
                h -= x * std::log(x);
        return h;
    }
    double s = 0.0;
    for (double x : p)
        if (x > 0.0)
            s += std::pow(x, alpha);
    return (1.0 - s) / (alpha - 1.0);
}

inline double quadratic_entropy(const ProbVector& p)
{
    double s = 0.0;
    for (double x : p)
        s += x * x;
    return 1.0 - s;
}

/// Both sides of H[(X,Y)] = H[X] + sum_x P(x)^alpha H[Y | X = x].
struct ChainRuleSides {
    double joint;
    double decomposed;
};

/// `joint[x][y]` is P(X = x, Y = y); rows must have equal length.
inline ChainRuleSides chain_rule_sides(const std::vector<std::vector<double>>& joint, double alpha)
{
    if (joint.empty() || joint.front().empty())
        throw std::invalid_argument("chain rule: empty joint law");
    const std::size_t ny = joint.front().size();
    std::vector<double> flat;
    std::vector<double> marginal;
    for (const auto& row : joint) {
        if (row.size() != ny)
            throw std::invalid_argument("chain rule: ragged joint grid");
        flat.insert(flat.end(), row.begin(), row.end());
        marginal.push_back(std::accumulate(row.begin(), row.end(), 0.0));
    }
    ChainRuleSides s{};
    s.joint = tsallis_entropy(ProbVector(flat), alpha);
    // renormalize so rounding in the grid does not trip ProbVector validation
    const double total = std::accumulate(marginal.begin(), marginal.end(), 0.0);
    for (double& m : marginal)
        m /= total;
    s.decomposed = tsallis_entropy(ProbVector(marginal), alpha);
    for (std::size_t x = 0; x < joint.size(); ++x) {
        if (marginal[x] <= 0.0)
            continue;
        const double px = std::accumulate(joint[x].begin(), joint[x].end(), 0.0);
        std::vector<double> cond(ny);
        for (std::size_t y = 0; y < ny; ++y)
            cond[y] = joint[x][y] / px;
        const double weight = alpha == 1.0 ? marginal[x] : std::pow(marginal[x], alpha);
        s.decomposed += weight * tsallis_entropy(ProbVector(cond), alpha);
    }
    return s;
}

inline bool check_chain_rule(const std::vector<std::vector<double>>& joint, double alpha,
                             double tol = 1e-12)
{
    const auto s = chain_rule_sides(joint, alpha);
    return std::abs(s.joint - s.decomposed) <= tol;
}

/// Limit of each part of a flag type: a finite l_i (part stays equal to l_i)
/// or std::nullopt for a part that grows without bound.
using AsymptoticLimitSpec = std::vector<std::optional<unsigned>>;

/// (q^-1;q^-1)_inf^{1-s} * prod_i (q^-(l_i+1);q^-1)_inf, with the factor 1 for infinite l_i.
inline double asymptotic_constant(const AsymptoticLimitSpec& limits, double q)
{
    if (limits.empty())
        throw std::invalid_argument("asymptotic_constant: no parts");
    if (!(q >= 2.0))
        throw std::domain_error("asymptotic_constant: q must be at least 2");
    const double qinv = 1.0 / q;
    double log_c = (1.0 - static_cast<double>(limits.size())) * log_pochhammer_inf(qinv, qinv);
    for (const auto& l : limits)
        if (l)
            log_c += log_pochhammer_inf(std::pow(qinv, *l + 1.0), qinv);
    return std::exp(log_c);
}

/// Integer parts summing to n, closest to n*P (largest-remainder rule, ties to lower index).
inline std::vector<unsigned> round_type(const ProbVector& p, unsigned n)
{
    std::vector<unsigned> parts(p.size());
    std::vector<std::pair<double, std::size_t>> rema;
    unsigned used = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double exact = p[i] * n;
        parts[i] = static_cast<unsigned>(std::floor(exact));
        used += parts[i];
        rema.emplace_back(exact - parts[i], i);
    }
    std::stable_sort(rema.begin(), rema.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t j = 0; used < n; ++j, ++used)
        ++parts[rema[j % rema.size()].second];
    return parts;
}

struct AsymptoticsRow {
    unsigned n;
    std::vector<unsigned> parts;
    double value;  ///< normalized log of the coefficient
    double target; ///< entropy the value converges to
};

/// (1/n) ln multinomial(round(nP)) against H_1(P).
inline std::vector<AsymptoticsRow> check_multinomial_asymptotics(const ProbVector& p,
                                                                 const std::vector<unsigned>& ns)
{
    std::vector<AsymptoticsRow> rows;
    const double target = tsallis_entropy(p, 1.0);
    for (unsigned n : ns) {
        if (n == 0)
            throw std::invalid_argument("asymptotics: n must be positive");
        auto parts = round_type(p, n);
        const double value = ln_exact(multinomial(FlagType(parts))) / n;
        rows.push_back({n, std::move(parts), value, target});
    }
    return rows;
}

/// (2/n^2) log_q q_multinomial(round(nP)) against H_2(P).
inline std::vector<AsymptoticsRow> check_qmultinomial_asymptotics(const ProbVector& p,
                                                                  std::uint64_t q,
                                                                  const std::vector<unsigned>& ns)
{
    std::vector<AsymptoticsRow> rows;
    const double target = quadratic_entropy(p);
    for (unsigned n : ns) {
        if (n == 0)
            throw std::invalid_argument("asymptotics: n must be positive");
        auto parts = round_type(p, n);
        const double nn = static_cast<double>(n);
        const double value =
            2.0 / (nn * nn) * log_q_exact(q_multinomial(FlagType(parts), q), static_cast<double>(q));
        rows.push_back({n, std::move(parts), value, target});
    }
    return rows;
}

/// q_multinomial(parts) / (C * q^{n^2 H_2(parts/n) / 2}), evaluated in the log domain.
/// Tends to 1 when the parts follow `limits`.
inline double qmultinomial_ratio(const FlagType& flag, const AsymptoticLimitSpec& limits,
                                 std::uint64_t q)
{
    if (limits.size() != flag.size())
        throw std::invalid_argument("qmultinomial_ratio: limit count differs from part count");
    const double qd = static_cast<double>(q);
    // n^2 H_2 / 2 = (n^2 - sum k_i^2) / 2, an integer or half-integer
    long double sq = 0;
    for (unsigned k : flag.parts())
        sq += static_cast<long double>(k) * k;
    const long double n = flag.n();
    const double exponent = static_cast<double>((n * n - sq) / 2);
    const double log_ratio = ln_exact(q_multinomial(flag, q)) - exponent * std::log(qd) -
                             std::log(asymptotic_constant(limits, qd));
    return std::exp(log_ratio);
}

} // namespace qgrass
