#include "qgrass/qdist.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace qgrass;

TEST(QBinomialPmf, Degenerate)
{
    EXPECT_DOUBLE_EQ(pmf(0, {0, 2.0, 2.0}), 1.0);
    EXPECT_DOUBLE_EQ(pmf(0, {5, 0.0, 2.0}), 1.0);
    EXPECT_DOUBLE_EQ(pmf(1, {5, 0.0, 2.0}), 0.0);
    EXPECT_DOUBLE_EQ(pmf(6, {5, 1.0, 2.0}), 0.0);
    const double inf = std::numeric_limits<double>::infinity();
    EXPECT_DOUBLE_EQ(pmf(5, {5, inf, 3.0}), 1.0);
    EXPECT_THROW(pmf(0, {3, -1.0, 2.0}), std::domain_error);
    EXPECT_THROW(pmf(0, {3, 1.0, 1.0}), std::domain_error);
}

TEST(QBinomialPmf, SingleStep)
{
    for (double theta : {0.3, 1.0, 7.0}) {
        EXPECT_NEAR(pmf(1, {1, theta, 2.0}), theta / (1 + theta), 1e-15);
        EXPECT_NEAR(pmf(0, {1, theta, 2.0}), 1 / (1 + theta), 1e-15);
    }
}

TEST(QBinomialPmf, XYForm)
{
    EXPECT_DOUBLE_EQ(pmf_xy(3, 3, 0.0, 1.0, 2.0), 1.0);
    EXPECT_DOUBLE_EQ(pmf_xy(2, 3, 0.0, 1.0, 2.0), 0.0);
    EXPECT_NEAR(pmf_xy(0, 2, 1, 1, 2), 1.0 / 6, 1e-15);
    EXPECT_NEAR(pmf_xy(1, 2, 1, 1, 2), 3.0 / 6, 1e-15);
    EXPECT_NEAR(pmf_xy(2, 2, 1, 1, 2), 2.0 / 6, 1e-15);
    EXPECT_NEAR(pmf_xy(2, 5, 2, 3, 3), pmf(2, {5, 1.5, 3}), 1e-15);
    EXPECT_THROW(pmf_xy(0, 2, 0, 0, 2), std::domain_error);
}

TEST(QBinomialPmf, Normalized)
{
    for (double q : {2.0, 3.0}) {
        for (double theta : {0.1, 1.0, 10.0}) {
            for (unsigned n : {1u, 7u, 30u, 64u}) {
                double s = 0.0;
                for (unsigned k = 0; k <= n; ++k)
                    s += pmf(k, {n, theta, q});
                EXPECT_NEAR(s, 1.0, 1e-12) << q << " " << theta << " " << n;
            }
        }
    }
}

TEST(QBinomialPmf, ExactRationalAgrees)
{
    for (unsigned n = 0; n <= 8; ++n) {
        Rational total = 0;
        for (unsigned k = 0; k <= n; ++k) {
            const Rational p = pmf_exact(k, n, Rational(1, 2), 3);
            total += p;
            EXPECT_NEAR(p.convert_to<double>(), pmf(k, {n, 0.5, 3.0}), 1e-14);
        }
        EXPECT_EQ(total, 1);
    }
}

TEST(QBinomialPmf, OutcomeTreeFactorization)
{
    // Distribution of a sum of independent Bernoullis by full expansion of the 2^n outcomes.
    for (unsigned n = 0; n <= 12; ++n) {
        const Rational theta(2, 3);
        const std::uint64_t q = 2;
        std::vector<Rational> law(n + 1, 0);
        for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
            Rational p = 1;
            Rational qj = 1;
            for (unsigned j = 0; j < n; ++j) {
                const Rational pj = theta * qj / (1 + theta * qj);
                p *= (mask >> j & 1) ? pj : 1 - pj;
                qj *= q;
            }
            law[std::popcount(mask)] += p;
        }
        for (unsigned k = 0; k <= n; ++k)
            ASSERT_EQ(law[k], pmf_exact(k, n, theta, q)) << "n=" << n << " k=" << k;
    }
}

TEST(QBinomialPmf, ClassicalLimit)
{
    const double q = 1.0 + 1e-6;
    for (unsigned n : {4u, 10u}) {
        const double x = 1.0, y = 0.7;
        const double p = y / (x + y);
        for (unsigned k = 0; k <= n; ++k) {
            double binom = 1.0;
            for (unsigned i = 0; i < k; ++i)
                binom = binom * (n - i) / (i + 1);
            const double classical = binom * std::pow(p, k) * std::pow(1 - p, n - k);
            EXPECT_NEAR(pmf_xy(k, n, x, y, q), classical, 1e-4);
        }
    }
}

TEST(Moments, Values)
{
    EXPECT_DOUBLE_EQ(mean({6, 0.0, 2.0}), 0.0);
    EXPECT_DOUBLE_EQ(variance({6, 0.0, 2.0}), 0.0);
    EXPECT_NEAR(mean({1, 3.0, 2.0}), 0.75, 1e-15);
    EXPECT_NEAR(mean({3, 1.0, 2.0}), 0.5 + 2.0 / 3 + 0.8, 1e-15);
    for (double theta : {0.2, 1.0, 5.0}) {
        const QBinomialParams par{12, theta, 3.0};
        double m = 0.0, m2 = 0.0;
        for (unsigned k = 0; k <= par.n; ++k) {
            m += k * pmf(k, par);
            m2 += k * k * pmf(k, par);
        }
        EXPECT_NEAR(mean(par), m, 1e-10);
        EXPECT_NEAR(variance(par), m2 - m * m, 1e-9);
        EXPECT_NEAR(mean(par) + c_n(theta, par.n, 3.0), par.n, 1e-12);
    }
}

TEST(CSequence, Values)
{
    EXPECT_DOUBLE_EQ(c_n(1.0, 0, 2.0), 0.0);
    EXPECT_DOUBLE_EQ(c_n(1.0, 1, 2.0), 0.5);
    double ref = 0.0;
    for (int j = 0; j < 80; ++j)
        ref += 1.0 / (1.0 + std::ldexp(1.0, j));
    EXPECT_NEAR(c_inf(1.0, 2.0), ref, 1e-12);
    EXPECT_NEAR(c_inf(1.0, 2.0), 1.26449978, 1e-8);
    // monotone in n
    for (unsigned n = 1; n < 40; ++n)
        EXPECT_GT(c_n(0.5, n + 1, 2.0), c_n(0.5, n, 2.0));
    EXPECT_THROW(c_inf(0.0, 2.0), std::domain_error);
}

TEST(Sampling, Degenerate)
{
    RandomStream rng(1);
    for (int t = 0; t < 100; ++t) {
        EXPECT_EQ(sample({7, 0.0, 2.0}, rng), 0u);
        EXPECT_EQ(sample({0, 3.0, 2.0}, rng), 0u);
    }
}

TEST(Sampling, MatchesPmf)
{
    const QBinomialParams par{5, 1.0, 2.0};
    RandomStream rng(2024);
    const int draws = 100000;
    std::vector<double> counts(par.n + 1, 0.0);
    for (int t = 0; t < draws; ++t)
        ++counts[sample(par, rng)];
    double tv = 0.0;
    for (unsigned k = 0; k <= par.n; ++k)
        tv += std::abs(counts[k] / draws - pmf(k, par));
    EXPECT_LT(0.5 * tv, 0.01);
}

TEST(Mle, MonotoneMean)
{
    for (double q : {2.0, 3.0}) {
        double prev = m_qn(0.0, 8, q);
        EXPECT_EQ(prev, 0.0);
        for (int i = 1; i <= 1000; ++i) {
            const double theta = std::pow(10.0, -4.0 + 8.0 * i / 1000.0);
            const double m = m_qn(theta, 8, q);
            EXPECT_GT(m, prev);
            EXPECT_LT(m, 8.0);
            // derivative sum_j q^j / (1 + theta q^j)^2 is positive
            double deriv = 0.0;
            for (unsigned j = 0; j < 8; ++j)
                deriv += std::pow(q, j) / std::pow(1 + theta * std::pow(q, j), 2);
            EXPECT_GT(deriv, 0.0);
            prev = m;
        }
    }
}

TEST(Mle, Examples)
{
    EXPECT_EQ(mle_theta({0, 0, 0}, 5, 2.0).theta, 0.0);
    EXPECT_NEAR(mle_theta({0, 1}, 1, 2.0).theta, 1.0, 1e-10);
    EXPECT_TRUE(std::isinf(mle_theta({4, 4}, 4, 2.0).theta));
    EXPECT_THROW(mle_theta({}, 4, 2.0), std::invalid_argument);
    EXPECT_THROW(mle_theta({5}, 4, 2.0), std::invalid_argument);
    const auto est = mle_theta({3, 5, 6, 7, 8, 4}, 8, 2.0);
    EXPECT_LT(est.residual, 1e-12);
    EXPECT_NEAR(m_qn(est.theta, 8, 2.0), est.sample_mean, 1e-12);
    // extreme means
    EXPECT_LT(mle_theta({7, 8, 8, 8, 8, 8, 8, 8, 8, 8}, 8, 2.0).residual, 1e-12);
    EXPECT_LT(mle_theta({1, 0, 0, 0, 0, 0, 0, 0, 0, 0}, 8, 2.0).residual, 1e-12);
}

TEST(Mle, RoundTrip)
{
    const QBinomialParams par{8, 2.0, 2.0};
    RandomStream rng(99);
    std::vector<unsigned> s(10000);
    for (auto& x : s)
        x = sample(par, rng);
    const auto est = mle_theta(s, par.n, par.q);
    const double se = std::sqrt(variance(par) / s.size());
    EXPECT_LT(std::abs(m_qn(est.theta, par.n, par.q) - mean(par)), 3 * se);
}

TEST(RandomStream, PathsAndSubstreams)
{
    auto a = RandomStream(7).substream(3).substream(1);
    auto b = RandomStream::from_path({7, 3, 1});
    for (int i = 0; i < 100; ++i)
        EXPECT_EQ(a.next(), b.next());
    auto c = RandomStream(7).substream(4).substream(1);
    auto d = RandomStream(7).substream(3).substream(1);
    int same = 0;
    for (int i = 0; i < 100; ++i)
        same += c.next() == d.next();
    EXPECT_LT(same, 2);
    // a child does not depend on how far the parent has advanced
    auto parent = RandomStream(9);
    const auto before = parent.substream(2).next();
    for (int i = 0; i < 10; ++i)
        parent.next();
    EXPECT_EQ(parent.substream(2).next(), before);
}
