#pragma once

// Limiting codimension law mu, the budget function Delta, typical subspace
// sets, equipartition checks, minimal high-probability sets, block coding of
// typical subspaces and growth of |Gr(n)|.

#include "qgrass/entropy.hpp"
#include "qgrass/exact.hpp"
#include "qgrass/gf.hpp"
#include "qgrass/grassproc.hpp"
#include "qgrass/qcomb.hpp"
#include "qgrass/qdist.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qgrass {

/// log_q mu(d) for theta > 0.
inline double log_q_mu(unsigned d, double theta, double q)
{
    if (!(theta > 0.0) || std::isinf(theta))
        throw std::domain_error("mu: theta must be positive and finite");
    if (!(q > 1.0))
        throw std::domain_error("mu: q must exceed 1");
    const double lnq = std::log(q);
    const double qinv = 1.0 / q;
    const double x0 = 0.5 - std::log(theta) / lnq;
    const double a = -0.5 * (d - x0) * (d - x0) + 0.5 * x0 * x0;
    const double ln_rest = log_pochhammer_inf(std::pow(qinv, d + 1.0), qinv) -
                           log_pochhammer_inf(qinv, qinv) -
                           log_pochhammer_inf(-1.0 / theta, qinv);
    return a + ln_rest / lnq;
}

inline double mu(unsigned d, double theta, double q)
{
    return std::pow(q, log_q_mu(d, theta, q));
}

/// mu(0..d_max) with a bound on the mass beyond d_max.
class MuTable {
public:
    static constexpr double kRelativeCutoff = 1e-15;

    MuTable(double theta, double q) : theta_(theta), q_(q)
    {
        const double x0 = 0.5 - std::log(theta) / std::log(q);
        double peak = 0.0;
        for (unsigned d = 0;; ++d) {
            const double m = mu(d, theta, q);
            values_.push_back(m);
            peak = std::max(peak, m);
            if (d > x0 + 1.0 && m < kRelativeCutoff * peak)
                break;
            if (d > 100000)
                throw std::logic_error("MuTable: no truncation point found");
        }
        // Past the peak mu(d) <= q^{A(d)} / K, and A(d+1) - A(d) = -(d - x0 + 1/2),
        // so the tail is dominated by a geometric series from d_max + 1.
        const unsigned next = d_max() + 1;
        const double lnq = std::log(q);
        const double a_next = -0.5 * (next - x0) * (next - x0) + 0.5 * x0 * x0;
        const double k = std::exp(log_pochhammer_inf(1.0 / q, 1.0 / q) +
                                  log_pochhammer_inf(-1.0 / theta, 1.0 / q));
        const double envelope = std::exp(a_next * lnq) / k;
        const double ratio = std::pow(q, -(next - x0 + 0.5));
        tail_ = envelope / (1.0 - ratio);

        // compensated running sums
        double s = 0.0, c = 0.0;
        for (double m : values_) {
            const double y = m - c;
            const double t = s + y;
            c = (t - s) - y;
            s = t;
            cumulative_.push_back(s);
        }
    }

    double theta() const noexcept { return theta_; }
    double q() const noexcept { return q_; }
    unsigned d_max() const noexcept { return static_cast<unsigned>(values_.size() - 1); }
    const std::vector<double>& values() const noexcept { return values_; }
    double operator[](std::size_t d) const { return values_.at(d); }
    double tail_bound() const noexcept { return tail_; }
    double total() const noexcept { return cumulative_.back(); }
    /// mu([0, d])
    double cumulative(std::size_t d) const { return cumulative_.at(d); }

private:
    double theta_;
    double q_;
    std::vector<double> values_;
    std::vector<double> cumulative_;
    double tail_ = 0.0;
};

/// Delta(p): smallest d with mu([0, d]) >= p.
inline unsigned delta(double p, const MuTable& table)
{
    if (!(p >= 0.0 && p < 1.0))
        throw std::domain_error("delta: p must lie in [0, 1)");
    for (unsigned d = 0; d <= table.d_max(); ++d)
        if (table.cumulative(d) >= p)
            return d;
    throw std::out_of_range("delta: mu table does not reach cumulative mass " + std::to_string(p));
}

inline bool is_continuity_point(double p, const MuTable& table, double tol = 1e-12)
{
    for (unsigned d = 0; d <= table.d_max(); ++d)
        if (std::abs(p - table.cumulative(d)) <= tol)
            return false;
    return true;
}

/// Mass Pr{V_n in Gr(n-d, n)} for d = 0..n, in natural-log form.
inline std::vector<double> log_codim_masses(unsigned n, double theta, double q)
{
    std::vector<double> out(n + 1);
    for (unsigned d = 0; d <= n; ++d)
        out[d] = log_pmf(n - d, {n, theta, q});
    return out;
}

struct TypicalSet {
    unsigned n = 0;
    double epsilon = 0.0;
    unsigned delta_codim = 0;  ///< a_n: A_n is the union of Gr(n-d, n) for d <= a_n
    ExactInt exact_size = 0;   ///< |A_n|
    double outside_mass = 0.0; ///< Pr{V_n not in A_n}

    // Comparison with the limiting budget, available for 0 < theta < inf.
    std::optional<unsigned> limit_delta;    ///< Delta(1 - epsilon)
    bool continuity_point = true;           ///< 1 - epsilon is a continuity point of Delta
    std::optional<unsigned> bracket_low;    ///< Delta and Delta + 1 when it is not
    std::optional<unsigned> bracket_high;

    bool matches_limit() const { return limit_delta && *limit_delta == delta_codim; }
};

/// Smallest union A_n of the top codimension classes with Pr{V_n not in A_n} <= epsilon.
inline TypicalSet typical_set(unsigned n, double epsilon, double theta, std::uint64_t q)
{
    if (!(epsilon >= 0.0))
        throw std::domain_error("typical_set: epsilon must be nonnegative");
    const auto lm = log_codim_masses(n, theta, static_cast<double>(q));
    // tails[m] = Pr{codim > m}, summed from the smallest masses upward
    std::vector<double> tails(n + 1, 0.0);
    double acc = 0.0;
    for (unsigned d = n; d-- > 0;) {
        acc += std::exp(lm[d + 1]);
        tails[d] = acc;
    }
    TypicalSet t;
    t.n = n;
    t.epsilon = epsilon;
    unsigned m = 0;
    while (m < n && tails[m] > epsilon)
        ++m;
    t.delta_codim = m;
    t.outside_mass = tails[m];
    for (unsigned d = 0; d <= m; ++d)
        t.exact_size += q_binomial(n, n - d, q);

    if (theta > 0.0 && std::isfinite(theta) && epsilon > 0.0 && epsilon <= 1.0) {
        const MuTable table(theta, static_cast<double>(q));
        const double p = 1.0 - epsilon;
        t.limit_delta = delta(p, table);
        t.continuity_point = is_continuity_point(p, table);
        if (!t.continuity_point) {
            t.bracket_low = *t.limit_delta;
            t.bracket_high = *t.limit_delta + 1;
        }
    }
    return t;
}

struct AepRow {
    unsigned d;
    double neg_log_prob_over_n;  ///< log_q(1 / Pr{V_n = v}) / n, dim v = n - d
    double target;               ///< (n/2) H_2(d/n)
    double gap;                  ///< |difference|
    double g_over_n;             ///< g(d, n) / n from the closed form
};

struct AepReport {
    unsigned n = 0;
    unsigned a_n = 0;
    double delta_tol = 0.0;
    std::vector<AepRow> rows;
    double max_gap = 0.0;
    bool within_tolerance() const { return max_gap <= delta_tol; }
};

inline AepReport check_aep(unsigned n, double epsilon, double delta_tol, double theta,
                           std::uint64_t q)
{
    if (n == 0)
        throw std::invalid_argument("check_aep: n must be positive");
    const double qd = static_cast<double>(q);
    const TypicalSet ts = typical_set(n, epsilon, theta, q);
    AepReport r;
    r.n = n;
    r.a_n = ts.delta_codim;
    r.delta_tol = delta_tol;
    const double lnq = std::log(qd);
    const double x0 = 0.5 - std::log(theta) / lnq;
    double lpoch = 0.0;
    for (unsigned j = 0; j < n; ++j)
        lpoch += std::log1p(std::exp(-std::log(theta) - j * lnq));
    for (unsigned d = 0; d <= ts.delta_codim; ++d) {
        AepRow row{};
        row.d = d;
        const double frac = static_cast<double>(d) / n;
        const ProbVector type({1.0 - frac, frac});
        row.target = 0.5 * n * quadratic_entropy(type);
        row.neg_log_prob_over_n = -log_subspace_probability(n - d, n, theta, qd) / lnq / n;
        row.gap = std::abs(row.neg_log_prob_over_n - row.target);
        const double g = 0.5 * (d - x0) * (d - x0) - 0.5 * x0 * x0 + lpoch / lnq;
        row.g_over_n = g / n;
        r.max_gap = std::max(r.max_gap, row.gap);
        r.rows.push_back(row);
    }
    return r;
}

struct MinimalSet {
    ExactInt size;           ///< s(n, epsilon)
    unsigned last_codim = 0; ///< b_n, codimension of the last class used
    bool agrees_with_typical = false; ///< b_n == a_n
};

/// Minimal cardinality of a set of subspaces carrying mass >= 1 - epsilon:
/// take subspaces in decreasing probability, whole classes then a partial one.
/// All arithmetic is exact (theta and epsilon are converted exactly to rationals).
inline MinimalSet greedy_min_set_size(unsigned n, double epsilon, double theta, std::uint64_t q)
{
    if (!(theta >= 0.0) || std::isinf(theta))
        throw std::domain_error("greedy_min_set_size: theta must be finite and nonnegative");
    const Rational th(theta);
    const Rational need = Rational(1) - Rational(epsilon);
    struct Class {
        unsigned d;
        Rational each;
        ExactInt count;
    };
    std::vector<Class> classes;
    for (unsigned d = 0; d <= n; ++d)
        classes.push_back({d, exact_pmf_rational(n - d, n, th, q), q_binomial(n, n - d, q)});
    std::stable_sort(classes.begin(), classes.end(),
                     [](const Class& a, const Class& b) { return a.each > b.each; });

    MinimalSet out;
    out.size = 0;
    Rational mass = 0;
    for (const auto& c : classes) {
        if (mass >= need)
            break;
        out.last_codim = c.d;
        const Rational whole = c.each * Rational(c.count);
        if (mass + whole < need) {
            mass += whole;
            out.size += c.count;
            continue;
        }
        // ceil((need - mass) / each)
        const Rational r = (need - mass) / c.each;
        ExactInt take = boost::multiprecision::numerator(r) / boost::multiprecision::denominator(r);
        if (Rational(take) < r)
            ++take;
        out.size += std::min(take, c.count);
        mass = need;
    }
    out.agrees_with_typical = out.last_codim == typical_set(n, epsilon, theta, q).delta_codim;
    return out;
}

// ---------------------------------------------------------------------------
// Block coding of typical subspaces.

struct EncodeResult {
    std::string word;
    bool typical = true; ///< false: v outside A_n, reserved word emitted
};

/// n-to-k q-ary code on Gr(n): typical subspaces are ranked by codimension,
/// then by the Grassmannian enumeration order; atypical subspaces get the
/// all-zero word, which decodes to F_q^n.
class BlockCode {
public:
    BlockCode(const gf::Field& field, unsigned n, double epsilon, double theta)
        : field_(field), set_(typical_set(n, epsilon, theta, field.q()))
    {
        if (field.q() > gf::detail::kSymbols.size())
            throw std::invalid_argument("BlockCode: q too large for single-symbol digits");
        ExactInt acc = 0;
        for (unsigned d = 0; d <= set_.delta_codim; ++d) {
            offsets_.push_back(acc);
            acc += q_binomial(n, n - d, field.q());
        }
        ExactInt power = 1;
        while (power < set_.exact_size) {
            power *= field.q();
            ++k_;
        }
    }

    unsigned n() const noexcept { return set_.n; }
    unsigned codeword_length() const noexcept { return k_; }
    const TypicalSet& typical() const noexcept { return set_; }

    EncodeResult encode(const gf::Subspace& v) const
    {
        if (v.ambient_dim() != set_.n)
            throw std::invalid_argument("encode: subspace not in F_q^n");
        const unsigned d = v.codim();
        if (d > set_.delta_codim)
            return {std::string(k_, '0'), false};
        ExactInt index = offsets_[d] + gf::grassmannian_rank(field_.q(), v);
        std::string word(k_, '0');
        for (unsigned i = k_; i-- > 0;) {
            word[i] = gf::detail::kSymbols[static_cast<std::size_t>(index % field_.q())];
            index /= field_.q();
        }
        return {word, true};
    }

    gf::Subspace decode(std::string_view word) const
    {
        if (word.size() != k_)
            throw std::invalid_argument("decode: word length " + std::to_string(word.size()) +
                                        ", expected " + std::to_string(k_));
        ExactInt index = 0;
        for (char ch : word) {
            const int digit = gf::detail::symbol_value(ch);
            if (digit < 0 || static_cast<unsigned>(digit) >= field_.q())
                throw std::invalid_argument(std::string("decode: bad digit '") + ch + "'");
            index = index * field_.q() + digit;
        }
        if (index >= set_.exact_size)
            throw std::invalid_argument("decode: word does not index a typical subspace");
        unsigned d = set_.delta_codim;
        while (offsets_[d] > index)
            --d;
        return gf::grassmannian_unrank(field_, set_.n - d, set_.n, index - offsets_[d]);
    }

private:
    gf::Field field_;
    TypicalSet set_;
    std::vector<ExactInt> offsets_;
    unsigned k_ = 0;
};

// ---------------------------------------------------------------------------

struct GrowthRow {
    unsigned n;
    ExactInt size;        ///< |Gr(n)| = sum_k [n k]_q
    double value;         ///< (2/n^2) log_q |Gr(n)|
    bool sandwich_holds;  ///< [n floor(n/2)] <= |Gr(n)| <= (n+1) [n floor(n/2)]
};

inline std::vector<GrowthRow> grassmannian_growth(const std::vector<unsigned>& ns, std::uint64_t q)
{
    std::vector<GrowthRow> rows;
    for (unsigned n : ns) {
        if (n == 0)
            throw std::invalid_argument("grassmannian_growth: n must be positive");
        ExactInt total = 0;
        for (unsigned k = 0; k <= n; ++k)
            total += q_binomial(n, k, q);
        const ExactInt mid = q_binomial(n, n / 2, q);
        const double nn = n;
        rows.push_back({n, total, 2.0 / (nn * nn) * log_q_exact(total, static_cast<double>(q)),
                        mid <= total && total <= ExactInt(n + 1) * mid});
    }
    return rows;
}

/// Bounds on R = (q^-(n-d+1); q^-1)_inf / (q^-(n+1); q^-1)_inf = prod_{i=n-d+1}^{n} (1 - q^-i).
struct RatioBounds {
    double ratio;
    double deficit;            ///< 1 - R, computed without cancellation
    bool upper_holds;          ///< R <= 1
    bool lower_applicable;     ///< d <= 2 sqrt(n)
    double lower_deficit;      ///< 2 q^{-(sqrt n - 1)^2} / (q^-1; q^-1)_inf
    bool lower_holds;
    double stated_lower_deficit; ///< 2 (q^-1; q^-1)_inf q^{-(sqrt n + 1)^2}, as printed
    bool stated_lower_holds;

    bool holds() const { return upper_holds && (!lower_applicable || lower_holds); }
};

inline RatioBounds check_ratio_bounds(unsigned n, unsigned d, double q)
{
    if (d > n)
        throw std::invalid_argument("ratio bounds: d exceeds n");
    if (!(q >= 2.0))
        throw std::domain_error("ratio bounds: q must be at least 2");
    RatioBounds b{};
    double log_r = 0.0;
    for (unsigned i = n - d + 1; i <= n; ++i)
        log_r += std::log1p(-std::pow(q, -static_cast<double>(i)));
    b.ratio = std::exp(log_r);
    b.deficit = -std::expm1(log_r);
    b.upper_holds = b.deficit >= 0.0;
    const double rn = std::sqrt(static_cast<double>(n));
    b.lower_applicable = d <= 2.0 * rn;
    const double euler = pochhammer_inf(1.0 / q, 1.0 / q);
    b.lower_deficit = 2.0 / euler * std::pow(q, -(rn - 1.0) * (rn - 1.0));
    b.lower_holds = b.deficit <= b.lower_deficit;
    b.stated_lower_deficit = 2.0 * euler * std::pow(q, -(rn + 1.0) * (rn + 1.0));
    b.stated_lower_holds = b.deficit <= b.stated_lower_deficit;
    return b;
}

} // namespace qgrass
