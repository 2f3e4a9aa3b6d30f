#pragma once

// Reference computations that avoid the code paths under test: subspaces as
// explicit element sets built by span closure (no row reduction), the process
// law by exhaustive expansion of its outcome tree, and simple statistics.

#include "qgrass/exact.hpp"
#include "qgrass/gf.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

namespace oracle {

using qgrass::Rational;
using qgrass::gf::Elem;
using qgrass::gf::Field;

/// Vectors of F_q^n encoded as integers sum x_i q^i, so appending a zero
/// last coordinate leaves the code unchanged.
class VectorSpace {
public:
    VectorSpace(const Field& f, unsigned n) : f_(f), n_(n)
    {
        size_ = 1;
        for (unsigned i = 0; i < n; ++i)
            size_ *= f.q();
    }

    std::uint32_t size() const { return size_; }
    unsigned n() const { return n_; }

    std::vector<Elem> decode(std::uint32_t code) const
    {
        std::vector<Elem> v(n_);
        for (unsigned i = 0; i < n_; ++i) {
            v[i] = code % f_.q();
            code /= f_.q();
        }
        return v;
    }

    std::uint32_t encode(const std::vector<Elem>& v) const
    {
        std::uint32_t code = 0;
        for (unsigned i = n_; i-- > 0;)
            code = code * f_.q() + v[i];
        return code;
    }

    std::uint32_t add(std::uint32_t a, std::uint32_t b) const
    {
        auto x = decode(a), y = decode(b);
        for (unsigned i = 0; i < n_; ++i)
            x[i] = f_.add(x[i], y[i]);
        return encode(x);
    }

    std::uint32_t scale(Elem c, std::uint32_t a) const
    {
        auto x = decode(a);
        for (auto& e : x)
            e = f_.mul(c, e);
        return encode(x);
    }

    const Field& field() const { return f_; }

private:
    const Field& f_;
    unsigned n_;
    std::uint32_t size_;
};

/// Subspace as the sorted list of its element codes.
using ElementSet = std::vector<std::uint32_t>;

/// Span of S together with x: { s + c x }.
inline ElementSet extend(const VectorSpace& V, const ElementSet& s, std::uint32_t x)
{
    std::set<std::uint32_t> out;
    for (Elem c = 0; c < V.field().q(); ++c) {
        const std::uint32_t cx = V.scale(c, x);
        for (std::uint32_t u : s)
            out.insert(V.add(u, cx));
    }
    return {out.begin(), out.end()};
}

/// All subspaces of F_q^n grouped by dimension, built by repeatedly adjoining vectors.
inline std::vector<std::vector<ElementSet>> all_subspaces(const Field& f, unsigned n)
{
    const VectorSpace V(f, n);
    std::vector<std::vector<ElementSet>> by_dim(n + 1);
    by_dim[0].push_back({0});
    for (unsigned j = 0; j < n; ++j) {
        std::set<ElementSet> next;
        for (const auto& s : by_dim[j]) {
            std::vector<bool> covered(V.size(), false);
            for (std::uint32_t u : s)
                covered[u] = true;
            for (std::uint32_t x = 0; x < V.size(); ++x) {
                if (covered[x])
                    continue;
                ElementSet t = extend(V, s, x);
                for (std::uint32_t u : t)
                    covered[u] = true;
                next.insert(std::move(t));
            }
        }
        by_dim[j + 1].assign(next.begin(), next.end());
    }
    return by_dim;
}

/// Element set of a library subspace, by expanding all linear combinations of its basis.
inline ElementSet elements_of(const Field& f, const qgrass::gf::Subspace& v)
{
    const VectorSpace V(f, v.ambient_dim());
    ElementSet s{0};
    for (const auto& row : v.basis())
        s = extend(V, s, V.encode(row));
    return s;
}

inline bool is_subset(const ElementSet& a, const ElementSet& b)
{
    std::size_t j = 0;
    for (std::uint32_t x : a) {
        while (j < b.size() && b[j] < x)
            ++j;
        if (j == b.size() || b[j] != x)
            return false;
    }
    return true;
}

/// Exact law of V_n over element sets, obtained by walking every outcome of
/// every step: no dilation (prob 1 - p_j) or each dilation with equal weight.
/// Dilations are found by scanning all subspaces of the next ambient space.
inline std::map<ElementSet, Rational> process_law(const Field& f, unsigned n, const Rational& theta)
{
    std::map<ElementSet, Rational> law{{ElementSet{0}, Rational(1)}};
    Rational qj = 1;
    for (unsigned j = 0; j < n; ++j) {
        const auto next_spaces = all_subspaces(f, j + 1);
        const VectorSpace V(f, j + 1);
        const std::uint32_t old_size = VectorSpace(f, j).size(); // codes below this lie in F_q^j
        const Rational p = theta * qj / (1 + theta * qj);
        std::map<ElementSet, Rational> next;
        for (const auto& [w, prob] : law) {
            next[w] += prob * (1 - p);
            const unsigned k = static_cast<unsigned>(std::lround(std::log(w.size()) / std::log(f.q())));
            std::vector<const ElementSet*> dil;
            for (const auto& v : next_spaces[k + 1])
                if (is_subset(w, v) && v.back() >= old_size)
                    dil.push_back(&v);
            for (const auto* v : dil)
                next[*v] += prob * p / Rational(dil.size());
        }
        law = std::move(next);
        qj *= f.q();
    }
    return law;
}

/// Pearson statistic and an approximate upper quantile (Wilson-Hilferty) of chi^2_df.
inline double chi_square(const std::vector<double>& observed, const std::vector<double>& expected)
{
    double s = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i)
        s += (observed[i] - expected[i]) * (observed[i] - expected[i]) / expected[i];
    return s;
}

inline double chi_square_quantile(double df, double z)
{
    const double a = 2.0 / (9.0 * df);
    const double t = 1.0 - a + z * std::sqrt(a);
    return df * t * t * t;
}

} // namespace oracle
