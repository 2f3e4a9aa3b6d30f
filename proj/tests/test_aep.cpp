#include "qgrass/aep.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace qgrass;

TEST(Mu, SumsToOne)
{
    for (double q : {2.0, 3.0}) {
        for (double theta : {0.5, 1.0, 2.0}) {
            const MuTable t(theta, q);
            EXPECT_NEAR(t.total(), 1.0, 1e-9) << q << " " << theta;
            EXPECT_LT(t.tail_bound(), 1e-12);
            EXPECT_NEAR(t.total() + t.tail_bound(), 1.0, 1e-9);
        }
    }
}

TEST(Mu, MatchesLargeNClassMass)
{
    for (unsigned d = 0; d <= 5; ++d) {
        const double exact = std::exp(log_pmf(60 - d, {60, 1.0, 2.0}));
        EXPECT_NEAR(exact, mu(d, 1.0, 2.0), 1e-6) << "d=" << d;
    }
}

TEST(Mu, DecaysPastPeak)
{
    const MuTable t(1.0, 2.0);
    const auto& v = t.values();
    const auto peak = static_cast<unsigned>(std::max_element(v.begin(), v.end()) - v.begin());
    for (unsigned d = peak; d + 2 < v.size(); ++d) {
        EXPECT_LT(v[d + 1], v[d]);
        EXPECT_LT(v[d + 2] / v[d + 1], v[d + 1] / v[d]); // super-geometric decay
    }
    EXPECT_THROW(mu(0, 0.0, 2.0), std::domain_error);
}

TEST(Delta, Values)
{
    const MuTable t(1.0, 2.0);
    EXPECT_EQ(delta(0.0, t), 0u);
    EXPECT_EQ(delta(0.9, t), 2u);
    EXPECT_TRUE(is_continuity_point(0.9, t));
    EXPECT_FALSE(is_continuity_point(t.cumulative(1), t));
    EXPECT_EQ(delta(t.cumulative(1), t), 1u);
    EXPECT_THROW(delta(1.0, t), std::domain_error);
}

TEST(Delta, LeftContinuityAndGenericPoints)
{
    const MuTable t(1.0, 2.0);
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> u(0.0, 0.999);
    int failures = 0;
    for (int i = 0; i < 10000; ++i) {
        const double p = u(gen);
        if (!is_continuity_point(p, t)) {
            ++failures;
            continue;
        }
        EXPECT_EQ(delta(p - 1e-13, t), delta(p, t));
    }
    EXPECT_EQ(failures, 0);
}

TEST(TypicalSet, TinyMassNeeded)
{
    const auto t = typical_set(10, 0.999, 1.0, 2);
    EXPECT_EQ(t.delta_codim, 0u);
    EXPECT_EQ(t.exact_size, 1);
}

TEST(TypicalSet, MatchesLimitAtThirty)
{
    const auto t = typical_set(30, 0.1, 1.0, 2);
    ASSERT_TRUE(t.limit_delta);
    EXPECT_TRUE(t.continuity_point);
    EXPECT_EQ(t.delta_codim, *t.limit_delta);
    EXPECT_LE(t.outside_mass, 0.1);
    EXPECT_TRUE(t.matches_limit());
}

TEST(TypicalSet, MembershipByEnumeration)
{
    for (std::uint64_t q : {2, 3}) {
        const gf::Field f(q);
        for (unsigned n = 1; n <= 4; ++n) {
            const auto t = typical_set(n, 0.2, 1.0, q);
            const auto spaces = oracle::all_subspaces(f, n);
            std::size_t members = 0;
            double outside = 0.0;
            for (unsigned k = 0; k <= n; ++k) {
                const double p = exact_pmf_rational(k, n, 1, q).convert_to<double>();
                for (std::size_t i = 0; i < spaces[k].size(); ++i) {
                    if (n - k <= t.delta_codim)
                        ++members;
                    else
                        outside += p;
                }
            }
            EXPECT_EQ(t.exact_size, members);
            EXPECT_NEAR(t.outside_mass, outside, 1e-14);
            EXPECT_LE(t.outside_mass, 0.2);
        }
    }
}

TEST(TypicalSet, BracketAtPartialSum)
{
    const MuTable t(1.0, 2.0);
    const double eps = 1.0 - t.cumulative(2);
    const auto ts = typical_set(40, eps, 1.0, 2);
    EXPECT_FALSE(ts.continuity_point);
    ASSERT_TRUE(ts.bracket_low && ts.bracket_high);
    EXPECT_EQ(*ts.bracket_high, *ts.bracket_low + 1);
    EXPECT_GE(ts.delta_codim, *ts.bracket_low);
    EXPECT_LE(ts.delta_codim, *ts.bracket_high);
}

TEST(Aep, GapShrinks)
{
    std::vector<double> gaps;
    for (unsigned n : {10u, 20u, 40u}) {
        const auto r = check_aep(n, 0.1, 0.5, 1.0, 2);
        EXPECT_EQ(r.rows.size(), r.a_n + 1u);
        gaps.push_back(r.max_gap);
        for (const auto& row : r.rows) {
            // the closed form reproduces the probability exactly
            const double direct = -log_pmf_by_codim(row.d, n, 1.0, 2.0) / n;
            EXPECT_NEAR(row.neg_log_prob_over_n, direct, 1e-10);
            EXPECT_NEAR(row.g_over_n + static_cast<double>(row.d) * (n - row.d) / n, direct, 1e-10);
        }
    }
    EXPECT_GT(gaps[0], gaps[1]);
    EXPECT_GT(gaps[1], gaps[2]);
    EXPECT_LE(gaps[2], 0.5);
}

TEST(Aep, FixedCodimTargetTendsToD)
{
    for (unsigned d : {1u, 3u}) {
        double prev = 1e9;
        for (unsigned n : {10u, 100u, 1000u}) {
            const double frac = static_cast<double>(d) / n;
            const double v = std::abs(0.5 * n * quadratic_entropy(ProbVector({1 - frac, frac})) - d);
            EXPECT_LT(v, prev);
            prev = v;
        }
        EXPECT_LT(prev, 0.01);
    }
}

TEST(MinimalSet, SingleClass)
{
    // top class alone carries the mass
    const double top = pmf(12, {12, 1.0, 2.0});
    const auto s = greedy_min_set_size(12, 1.0 - 0.5 * top, 1.0, 2);
    EXPECT_EQ(s.size, 1);
    EXPECT_EQ(s.last_codim, 0u);
}

TEST(MinimalSet, BoundedByTypical)
{
    for (unsigned n : {5u, 10u, 20u, 30u}) {
        for (double eps : {0.05, 0.1, 0.3}) {
            const auto s = greedy_min_set_size(n, eps, 1.0, 2);
            const auto t = typical_set(n, eps, 1.0, 2);
            EXPECT_LE(s.size, t.exact_size);
            EXPECT_TRUE(s.agrees_with_typical) << n << " " << eps;
        }
    }
}

TEST(MinimalSet, BruteForceSmall)
{
    // sort all subspace probabilities and count greedily
    const gf::Field f(2);
    const unsigned n = 4;
    std::vector<Rational> probs;
    const auto spaces = oracle::all_subspaces(f, n);
    for (unsigned k = 0; k <= n; ++k)
        for (std::size_t i = 0; i < spaces[k].size(); ++i)
            probs.push_back(exact_pmf_rational(k, n, Rational(1, 2), 2));
    std::sort(probs.rbegin(), probs.rend());
    for (double eps : {0.01, 0.1, 0.25, 0.5}) {
        Rational mass = 0;
        std::size_t count = 0;
        while (mass < 1 - Rational(eps))
            mass += probs[count++];
        EXPECT_EQ(greedy_min_set_size(n, eps, 0.5, 2).size, count) << eps;
    }
}

TEST(MinimalSet, SizesTrendTowardDelta)
{
    std::vector<double> s_rate, a_rate;
    for (unsigned n : {10u, 20u, 30u, 40u}) {
        s_rate.push_back(log_q_exact(greedy_min_set_size(n, 0.1, 1.0, 2).size, 2.0) / n);
        a_rate.push_back(log_q_exact(typical_set(n, 0.1, 1.0, 2).exact_size, 2.0) / n);
    }
    // both rates climb toward Delta(0.9) = 2 from below
    for (std::size_t i = 0; i + 1 < s_rate.size(); ++i) {
        EXPECT_LT(s_rate[i], s_rate[i + 1]);
        EXPECT_LT(a_rate[i], a_rate[i + 1]);
        EXPECT_LT(a_rate[i + 1], 2.0);
    }
    EXPECT_LT(std::abs(s_rate.back() - a_rate.back()), 0.05);
    EXPECT_LT(std::abs(a_rate.back() - 2.0), 0.15);
}

TEST(BlockCode, RoundTripExhaustive)
{
    for (std::uint64_t q : {2, 3}) {
        const gf::Field f(q);
        for (unsigned n = 1; n <= 5; ++n) {
            const BlockCode code(f, n, 0.2, 1.0);
            std::size_t typical = 0;
            for (unsigned k = 0; k <= n; ++k) {
                for (const auto& v : gf::enumerate_grassmannian(f, k, n)) {
                    const auto e = code.encode(v);
                    EXPECT_EQ(e.word.size(), code.codeword_length());
                    if (!e.typical) {
                        EXPECT_EQ(e.word, std::string(code.codeword_length(), '0'));
                        continue;
                    }
                    ++typical;
                    EXPECT_EQ(code.decode(e.word), v);
                }
            }
            EXPECT_EQ(code.typical().exact_size, typical);
        }
    }
}

TEST(BlockCode, DecodeEncodeOnWords)
{
    const gf::Field f(2);
    const BlockCode code(f, 5, 0.2, 1.0);
    const auto size = static_cast<unsigned>(code.typical().exact_size);
    for (unsigned i = 0; i < size; ++i) {
        std::string w(code.codeword_length(), '0');
        for (unsigned b = 0, x = i; b < w.size(); ++b, x /= 2)
            w[w.size() - 1 - b] = static_cast<char>('0' + x % 2);
        EXPECT_EQ(code.encode(code.decode(w)).word, w);
    }
}

TEST(BlockCode, ErrorsAndLength)
{
    const gf::Field f(2);
    const BlockCode code(f, 4, 0.2, 1.0);
    EXPECT_THROW(code.decode("0"), std::invalid_argument);
    EXPECT_THROW(code.decode(std::string(code.codeword_length(), '2')), std::invalid_argument);
    EXPECT_THROW(code.decode(std::string(code.codeword_length(), '1')), std::invalid_argument);
    EXPECT_THROW(code.encode(gf::Subspace::zero(3)), std::invalid_argument);
    EXPECT_LE(code.typical().outside_mass, 0.2);
    // the reserved word decodes to the full space
    EXPECT_EQ(code.decode(std::string(code.codeword_length(), '0')), gf::Subspace::full(4));

    for (unsigned n = 1; n <= 24; ++n) {
        const BlockCode c(f, n, 0.1, 1.0);
        const ExactInt size = c.typical().exact_size;
        // k is the least integer with 2^k >= |A_n|
        EXPECT_GE(ipow(ExactInt(2), c.codeword_length()), size);
        if (c.codeword_length() > 0) {
            EXPECT_LT(ipow(ExactInt(2), c.codeword_length() - 1), size);
        }
    }
}

TEST(BlockCode, RateApproachesDelta)
{
    const gf::Field f(2);
    double prev = 1e9;
    for (unsigned n : {8u, 16u, 24u}) {
        const double rate = static_cast<double>(BlockCode(f, n, 0.1, 1.0).codeword_length()) / n;
        EXPECT_LT(std::abs(rate - 2.0), prev);
        prev = std::abs(rate - 2.0);
    }
}

TEST(Growth, Values)
{
    const gf::Field f(2);
    const auto rows = grassmannian_growth({1, 2, 3, 4, 40}, 2);
    std::size_t counted = 0;
    for (const auto& cls : oracle::all_subspaces(f, 1))
        counted += cls.size();
    EXPECT_EQ(rows[0].size, counted);
    EXPECT_DOUBLE_EQ(rows[0].value, 2.0);
    EXPECT_EQ(rows[1].size, 5);
    EXPECT_EQ(rows[2].size, 16);
    EXPECT_EQ(rows[3].size, 67);
    EXPECT_LT(std::abs(rows[4].value - 0.5), 0.1);
    EXPECT_THROW(grassmannian_growth({0}, 2), std::invalid_argument);
}

TEST(Growth, Sandwich)
{
    std::vector<unsigned> ns(20);
    std::iota(ns.begin(), ns.end(), 1u);
    for (std::uint64_t q : {2, 3, 5})
        for (const auto& r : grassmannian_growth(ns, q))
            EXPECT_TRUE(r.sandwich_holds) << q << " " << r.n;
}

TEST(RatioBounds, Values)
{
    const auto zero = check_ratio_bounds(10, 0, 2.0);
    EXPECT_EQ(zero.ratio, 1.0);
    EXPECT_EQ(zero.deficit, 0.0);

    const auto mid = check_ratio_bounds(16, 8, 2.0);
    EXPECT_TRUE(mid.upper_holds);
    EXPECT_TRUE(mid.lower_applicable);
    EXPECT_TRUE(mid.holds());
    // the constant 2 (q^-1;q^-1)_inf q^{-(sqrt n + 1)^2} is far too small here
    EXPECT_FALSE(mid.stated_lower_holds);
    EXPECT_GT(mid.deficit, 1e-3);

    const auto big = check_ratio_bounds(100, 20, 2.0);
    EXPECT_LT(big.deficit, 1e-20);
    EXPECT_GT(big.deficit, 0.0);
    EXPECT_TRUE(big.holds());
    EXPECT_THROW(check_ratio_bounds(3, 4, 2.0), std::invalid_argument);
}

TEST(RatioBounds, ProductOracle)
{
    for (double q : {2.0, 3.0}) {
        for (unsigned n = 1; n <= 60; ++n) {
            for (unsigned d = 0; d <= n && d <= 2 * std::sqrt(n); ++d) {
                Rational r = 1;
                const auto qi = static_cast<std::uint64_t>(q);
                for (unsigned i = n - d + 1; i <= n; ++i)
                    r *= 1 - Rational(1, ipow(ExactInt(qi), i));
                const auto b = check_ratio_bounds(n, d, q);
                EXPECT_NEAR(b.deficit, (1 - r).convert_to<double>(), 1e-15 + 1e-12 * b.deficit);
                EXPECT_TRUE(b.holds()) << q << " " << n << " " << d;
            }
        }
    }
}
