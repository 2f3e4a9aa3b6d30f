#pragma once

// Exact q-combinatorics: q-integers, q-factorials, q-multinomial and
// classical multinomial coefficients, q-Pochhammer symbols and the q-Gamma
// function, together with checkers for the Gauss binomial formula and the
// multiplicative (iterated) flag identity.

#include "qgrass/exact.hpp"

#include <cassert>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace qgrass {

/// Composition (k_1, ..., k_s) of n describing the dimension jumps of a flag.
class FlagType {
public:
    FlagType() = default;
    explicit FlagType(std::vector<unsigned> parts) : parts_(std::move(parts)) {}

    const std::vector<unsigned>& parts() const noexcept { return parts_; }
    std::size_t size() const noexcept { return parts_.size(); }
    unsigned operator[](std::size_t i) const { return parts_.at(i); }

    unsigned n() const noexcept
    {
        return std::accumulate(parts_.begin(), parts_.end(), 0u);
    }

    friend bool operator==(const FlagType&, const FlagType&) = default;

private:
    std::vector<unsigned> parts_;
};

namespace detail {

inline void require_q(std::uint64_t q)
{
    if (q < 2)
        throw std::invalid_argument("q must be at least 2");
}

} // namespace detail

/// [n]_q = 1 + q + ... + q^{n-1}.
inline ExactInt q_integer(unsigned n, std::uint64_t q)
{
    detail::require_q(q);
    ExactInt sum = 0;
    ExactInt power = 1;
    for (unsigned i = 0; i < n; ++i) {
        sum += power;
        power *= q;
    }
    return sum;
}

/// [n]_q! = [n]_q [n-1]_q ... [1]_q, with [0]_q! = 1.
inline ExactInt q_factorial(unsigned n, std::uint64_t q)
{
    detail::require_q(q);
    ExactInt result = 1;
    ExactInt qi = 1;      // [i]_q, built incrementally
    ExactInt power = 1;   // q^{i-1}
    for (unsigned i = 1; i <= n; ++i) {
        if (i > 1) {
            power *= q;
            qi += power;
        }
        result *= qi;
    }
    return result;
}

/// q-multinomial coefficient [n]_q! / prod [k_i]_q!; counts flags of the
/// given type in F_q^n when q is a prime power.
inline ExactInt q_multinomial(const FlagType& flag, std::uint64_t q)
{
    detail::require_q(q);
    ExactInt num = q_factorial(flag.n(), q);
    ExactInt den = 1;
    for (unsigned k : flag.parts())
        den *= q_factorial(k, q);
    ExactInt quotient, remainder;
    boost::multiprecision::divide_qr(num, den, quotient, remainder);
    assert(remainder == 0 && "q-multinomial division must be exact");
    return quotient;
}

/// Number of k-dimensional subspaces of F_q^n.
inline ExactInt q_binomial(unsigned n, unsigned k, std::uint64_t q)
{
    if (k > n)
        throw std::invalid_argument("q_binomial: k must not exceed n");
    return q_multinomial(FlagType({k, n - k}), q);
}

/// Classical multinomial n! / prod k_i!.
inline ExactInt multinomial(const FlagType& flag)
{
    auto factorial = [](unsigned m) {
        ExactInt f = 1;
        for (unsigned i = 2; i <= m; ++i)
            f *= i;
        return f;
    };
    ExactInt den = 1;
    for (unsigned k : flag.parts())
        den *= factorial(k);
    return factorial(flag.n()) / den;
}

/// Finite q-Pochhammer symbol (a; x)_n = prod_{k<n} (1 - a x^k).
inline double pochhammer(double a, double x, unsigned n)
{
    double result = 1.0;
    double power = 1.0;
    for (unsigned k = 0; k < n; ++k) {
        result *= 1.0 - a * power;
        power *= x;
    }
    return result;
}

inline constexpr double kDefaultProductTol = 1e-15;

/// Infinite product (a; x)_inf for |x| < 1, truncated once the next factor
/// deviates from 1 by less than rel_tol.
inline double pochhammer_inf(double a, double x, double rel_tol = kDefaultProductTol)
{
    if (!(std::abs(x) < 1.0))
        throw std::domain_error("pochhammer_inf: requires |x| < 1");
    if (!(rel_tol > 0.0))
        throw std::domain_error("pochhammer_inf: rel_tol must be positive");
    double result = 1.0;
    double term = a;
    // Terms decay geometrically, so the cap only bites for |x| extremely close to 1.
    for (int k = 0; k < 1'000'000; ++k) {
        if (std::abs(term) < rel_tol)
            break;
        result *= 1.0 - term;
        term *= x;
    }
    return result;
}

/// log of (a; x)_inf where every factor is positive (a < 1 when x > 0).
/// Accurate for factors close to 1, which dominate the tails.
inline double log_pochhammer_inf(double a, double x, double rel_tol = kDefaultProductTol)
{
    if (!(std::abs(x) < 1.0))
        throw std::domain_error("log_pochhammer_inf: requires |x| < 1");
    double sum = 0.0;
    double term = a;
    for (int k = 0; k < 1'000'000; ++k) {
        if (std::abs(term) < rel_tol)
            break;
        if (term >= 1.0)
            throw std::domain_error("log_pochhammer_inf: nonpositive factor");
        sum += std::log1p(-term);
        term *= x;
    }
    return sum;
}

/// q-Gamma function for q > 1 and x > 0, product form:
///   (q^-1; q^-1)_inf q^{x(x-1)/2} (q-1)^{1-x} / (q^-x; q^-1)_inf.
/// Satisfies gamma_q(n + 1, q) = [n]_q!.
inline double gamma_q(double x, double q, double rel_tol = kDefaultProductTol)
{
    if (!(x > 0.0))
        throw std::domain_error("gamma_q: requires x > 0");
    if (!(q > 1.0))
        throw std::domain_error("gamma_q: requires q > 1");
    const double qinv = 1.0 / q;
    const double log_value = log_pochhammer_inf(qinv, qinv, rel_tol) +
                             0.5 * x * (x - 1.0) * std::log(q) +
                             (1.0 - x) * std::log(q - 1.0) -
                             log_pochhammer_inf(std::pow(q, -x), qinv, rel_tol);
    return std::exp(log_value);
}

/// Evaluates both sides of the Gauss binomial formula
///   (x+y)(x+yq)...(x+yq^{n-1}) = sum_k [n choose k]_q q^{k(k-1)/2} y^k x^{n-k}
/// in exact rationals.
struct GaussIdentityValues {
    Rational product;
    Rational expansion;
    bool holds() const { return product == expansion; }
};

inline GaussIdentityValues gauss_identity_sides(unsigned n, std::uint64_t q,
                                                const Rational& x, const Rational& y)
{
    detail::require_q(q);
    GaussIdentityValues v;
    v.product = 1;
    Rational qpow = 1;
    for (unsigned i = 0; i < n; ++i) {
        v.product *= x + y * qpow;
        qpow *= q;
    }
    v.expansion = 0;
    for (unsigned k = 0; k <= n; ++k) {
        const ExactInt coeff = q_binomial(n, k, q) * ipow(ExactInt(q), k * (k - 1) / 2);
        v.expansion += Rational(coeff) * rpow(y, k) * rpow(x, n - k);
    }
    return v;
}

inline bool check_gauss_identity(unsigned n, std::uint64_t q, const Rational& x,
                                 const Rational& y)
{
    return gauss_identity_sides(n, q, x, y).holds();
}

/// Grouping of the indices {0, ..., s-1} of a flag into disjoint blocks.
using Grouping = std::vector<std::vector<std::size_t>>;

namespace detail {

inline void validate_grouping(const Grouping& grouping, std::size_t s)
{
    std::vector<bool> seen(s, false);
    std::size_t count = 0;
    for (const auto& block : grouping) {
        if (block.empty())
            throw std::invalid_argument("grouping: empty block");
        for (std::size_t i : block) {
            if (i >= s || seen[i])
                throw std::invalid_argument("grouping: not a partition of the part indices");
            seen[i] = true;
            ++count;
        }
    }
    if (count != s)
        throw std::invalid_argument("grouping: not a partition of the part indices");
}

template <typename Coefficient>
bool flag_identity_holds(const FlagType& outer, const Grouping& grouping,
                         Coefficient&& coefficient)
{
    validate_grouping(grouping, outer.size());
    std::vector<unsigned> sums;
    ExactInt inner = 1;
    for (const auto& block : grouping) {
        std::vector<unsigned> parts;
        for (std::size_t i : block)
            parts.push_back(outer[i]);
        const FlagType sub(parts);
        sums.push_back(sub.n());
        inner *= coefficient(sub);
    }
    return coefficient(outer) == coefficient(FlagType(sums)) * inner;
}

} // namespace detail

/// Checks [n; k_1..k_s]_q = [n; group sums]_q * prod_groups [sum; parts]_q exactly.
inline bool check_flag_identity(const FlagType& outer, const Grouping& grouping, std::uint64_t q)
{
    return detail::flag_identity_holds(outer, grouping,
                                       [q](const FlagType& f) { return q_multinomial(f, q); });
}

/// Same identity for the classical multinomial coefficients.
inline bool check_flag_identity_classical(const FlagType& outer, const Grouping& grouping)
{
    return detail::flag_identity_holds(outer, grouping,
                                       [](const FlagType& f) { return multinomial(f); });
}

} // namespace qgrass
