#pragma once

// Maximizing H_2(g) = 1 - sum g_i^2 subject to sum g_i = 1, sum g_i E_i = <E>
// and g >= 0, plus a finite-n check against exact q-multinomial counts.

#include "qgrass/entropy.hpp"
#include "qgrass/exact.hpp"
#include "qgrass/qcomb.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace qgrass {

struct EnergyModel {
    std::vector<double> energies;
    double target_mean = 0.0;

    void validate() const
    {
        if (energies.empty())
            throw std::invalid_argument("EnergyModel: no energies");
        const auto [lo, hi] = std::minmax_element(energies.begin(), energies.end());
        const double slack = 1e-12 * std::max(1.0, std::max(std::abs(*lo), std::abs(*hi)));
        if (target_mean < *lo - slack || target_mean > *hi + slack)
            throw std::invalid_argument("EnergyModel: mean energy outside [min E, max E]");
    }
};

/// Converts increments (E~_1, ..., E~_m), E_i = E~_1 + ... + E~_i, to energies.
inline std::vector<double> energies_from_telescoped(const std::vector<double>& increments)
{
    std::vector<double> e(increments.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < increments.size(); ++i)
        e[i] = acc += increments[i];
    return e;
}

struct MaxEntSolution {
    std::vector<double> g;
    double a = 0.0; ///< g_i = a + b E_i on the support
    double b = 0.0;
    std::vector<std::size_t> active_support;
    double entropy = 0.0;
    double kkt_violation = 0.0; ///< largest a + b E_j over indices off the support (<= 0 at optimum)
};

namespace detail {

// Stationary point of the program restricted to `support`: g_i = a + b E_i.
inline void solve_on_support(const EnergyModel& m, const std::vector<std::size_t>& support,
                             double& a, double& b)
{
    const double s = static_cast<double>(support.size());
    double se = 0.0, see = 0.0;
    for (std::size_t i : support) {
        se += m.energies[i];
        see += m.energies[i] * m.energies[i];
    }
    const double det = s * see - se * se;
    const double scale = std::max(1.0, see);
    if (std::abs(det) <= 1e-14 * scale * s) {
        // all support energies equal: only the normalization constraint binds
        a = 1.0 / s;
        b = 0.0;
        return;
    }
    a = (see - se * m.target_mean) / det;
    b = (s * m.target_mean - se) / det;
}

} // namespace detail

/// Active-set solution: solve on the support, drop the most negative
/// coordinate, repeat; then re-admit any dropped index whose affine value is
/// positive (the KKT condition) and continue. `initial_support` seeds the loop.
inline MaxEntSolution solve(const EnergyModel& model, double tol = 1e-12,
                            std::optional<std::vector<std::size_t>> initial_support = std::nullopt)
{
    model.validate();
    const std::size_t m = model.energies.size();
    std::vector<bool> in(m, !initial_support);
    if (initial_support) {
        for (std::size_t i : *initial_support) {
            if (i >= m)
                throw std::invalid_argument("solve: support index out of range");
            in[i] = true;
        }
    }
    MaxEntSolution sol;
    for (std::size_t iter = 0; iter < 4 * m * m + 16; ++iter) {
        std::vector<std::size_t> support;
        for (std::size_t i = 0; i < m; ++i)
            if (in[i])
                support.push_back(i);
        // a support whose energy range misses <E> cannot satisfy the mean
        // constraint: restart from the full index set
        bool reachable = !support.empty();
        if (reachable) {
            double lo = model.energies[support[0]], hi = lo;
            for (std::size_t i : support) {
                lo = std::min(lo, model.energies[i]);
                hi = std::max(hi, model.energies[i]);
            }
            const double slack = 1e-12 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
            reachable = lo - slack <= model.target_mean && model.target_mean <= hi + slack;
        }
        if (!reachable) {
            if (support.size() == m)
                throw std::logic_error("solve: mean energy unreachable");
            std::fill(in.begin(), in.end(), true);
            continue;
        }
        double a = 0.0, b = 0.0;
        detail::solve_on_support(model, support, a, b);

        // mean constraint may be unreachable on this support (e.g. equal energies)
        double mean = 0.0;
        for (std::size_t i : support)
            mean += (a + b * model.energies[i]) * model.energies[i];
        const bool mean_ok = std::abs(mean - model.target_mean) <= 1e-9 * std::max(1.0, std::abs(model.target_mean));

        std::size_t worst = m;
        double worst_value = -tol;
        for (std::size_t i : support) {
            const double gi = a + b * model.energies[i];
            if (gi < worst_value) {
                worst_value = gi;
                worst = i;
            }
        }
        if (worst != m) {
            in[worst] = false;
            continue;
        }
        std::size_t add = m;
        double add_value = tol;
        for (std::size_t j = 0; j < m; ++j) {
            if (in[j])
                continue;
            const double v = a + b * model.energies[j];
            if (v > add_value) {
                add_value = v;
                add = j;
            }
        }
        if (add != m || !mean_ok) {
            if (add == m)
                std::fill(in.begin(), in.end(), true);
            else
                in[add] = true;
            if (!mean_ok && add == m && support.size() == m)
                throw std::logic_error("solve: no feasible support found");
            continue;
        }
        sol.g.assign(m, 0.0);
        for (std::size_t i : support)
            sol.g[i] = std::max(0.0, a + b * model.energies[i]);
        sol.a = a;
        sol.b = b;
        sol.active_support = support;
        sol.kkt_violation = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < m; ++j)
            if (!in[j])
                sol.kkt_violation = std::max(sol.kkt_violation, a + b * model.energies[j]);
        if (support.size() == m)
            sol.kkt_violation = 0.0;
        double sq = 0.0;
        for (double x : sol.g)
            sq += x * x;
        sol.entropy = 1.0 - sq;
        return sol;
    }
    throw std::logic_error("solve: active-set loop did not converge");
}

struct FiniteNReport {
    unsigned n = 0;
    std::vector<unsigned> rounded;          ///< round(n g)
    double energy_tol = 0.0;                ///< admissible energy residual
    std::size_t candidates = 0;             ///< feasible types examined
    std::vector<std::vector<unsigned>> argmax; ///< every maximizer (ties kept)
    bool rounded_is_optimal = false;
    double growth = 0.0;                    ///< (2/n^2) log_q W at the rounded type
    double entropy = 0.0;                   ///< H_2(g)
};

/// Enumerates integer types within L1 distance `radius` of round(n g) whose
/// mean energy is as close to <E> as the rounded type's (or within 1e-9), and
/// compares exact q-multinomial counts.
inline FiniteNReport finite_n_check(const EnergyModel& model, unsigned n, std::uint64_t q,
                                    unsigned radius = 6)
{
    if (n == 0)
        throw std::invalid_argument("finite_n_check: n must be positive");
    const auto sol = solve(model);
    FiniteNReport rep;
    rep.n = n;
    rep.entropy = sol.entropy;
    rep.rounded = round_type(ProbVector(sol.g), n);
    const std::size_t m = rep.rounded.size();
    auto residual = [&](const std::vector<unsigned>& k) {
        double e = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            e += k[i] * model.energies[i];
        return std::abs(e / n - model.target_mean);
    };
    rep.energy_tol = std::max(residual(rep.rounded), 1e-9);

    const ExactInt w_rounded = q_multinomial(FlagType(rep.rounded), q);
    ExactInt best = 0;
    std::vector<unsigned> cur(m);
    // recursive enumeration of nonnegative types summing to n inside the L1 ball
    std::function<void(std::size_t, unsigned, unsigned)> visit = [&](std::size_t i, unsigned left,
                                                                     unsigned dist) {
        if (i + 1 == m) {
            cur[i] = left;
            const unsigned r = rep.rounded[i];
            const unsigned total = dist + (left > r ? left - r : r - left);
            if (total > radius || residual(cur) > rep.energy_tol)
                return;
            ++rep.candidates;
            const ExactInt w = q_multinomial(FlagType(cur), q);
            if (w > best) {
                best = w;
                rep.argmax.clear();
            }
            if (w == best)
                rep.argmax.push_back(cur);
            return;
        }
        const unsigned r = rep.rounded[i];
        const unsigned lo = r > radius - dist ? r - (radius - dist) : 0;
        const unsigned hi = std::min(left, r + (radius - dist));
        for (unsigned k = lo; k <= hi; ++k) {
            cur[i] = k;
            visit(i + 1, left - k, dist + (k > r ? k - r : r - k));
        }
    };
    visit(0, n, 0);
    rep.rounded_is_optimal = best == w_rounded;
    const double nn = n;
    rep.growth = 2.0 / (nn * nn) * log_q_exact(w_rounded, static_cast<double>(q));
    return rep;
}

} // namespace qgrass
