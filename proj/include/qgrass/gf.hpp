#pragma once

// Finite fields F_q (q a prime power) and canonical subspace algebra over
// them: reduced row echelon bases, containment, sum and intersection,
// Grassmannian enumeration with ranking, and dilations.

#include "qgrass/exact.hpp"
#include "qgrass/rng.hpp"

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qgrass::gf {

using Elem = std::uint32_t;
using Vector = std::vector<Elem>;

namespace detail {

inline bool is_prime(std::uint64_t p)
{
    if (p < 2)
        return false;
    for (std::uint64_t d = 2; d * d <= p; ++d)
        if (p % d == 0)
            return false;
    return true;
}

// Polynomials over F_p as coefficient vectors, lowest degree first.
using Poly = std::vector<unsigned>;

inline void trim(Poly& a)
{
    while (!a.empty() && a.back() == 0)
        a.pop_back();
}

inline Poly poly_mod(Poly a, const Poly& m, unsigned p)
{
    trim(a);
    const std::size_t dm = m.size() - 1;
    const unsigned lead_inv = [&] {
        for (unsigned x = 1; x < p; ++x)
            if ((static_cast<std::uint64_t>(x) * m.back()) % p == 1)
                return x;
        return 1u;
    }();
    while (a.size() > dm) {
        const std::size_t shift = a.size() - 1 - dm;
        const std::uint64_t factor = (static_cast<std::uint64_t>(a.back()) * lead_inv) % p;
        for (std::size_t i = 0; i <= dm; ++i) {
            const std::uint64_t sub = (factor * m[i]) % p;
            a[shift + i] = static_cast<unsigned>((a[shift + i] + p - sub) % p);
        }
        trim(a);
    }
    return a;
}

inline Poly poly_mul(const Poly& a, const Poly& b, unsigned p)
{
    if (a.empty() || b.empty())
        return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = static_cast<unsigned>(
                (r[i + j] + static_cast<std::uint64_t>(a[i]) * b[j]) % p);
    trim(r);
    return r;
}

// Exhaustive trial division by every monic polynomial of degree 1..deg/2.
inline bool is_irreducible(const Poly& m, unsigned p)
{
    const std::size_t deg = m.size() - 1;
    for (std::size_t d = 1; d <= deg / 2; ++d) {
        std::uint64_t count = 1;
        for (std::size_t i = 0; i < d; ++i)
            count *= p;
        for (std::uint64_t code = 0; code < count; ++code) {
            Poly f(d + 1, 0);
            f[d] = 1;
            std::uint64_t c = code;
            for (std::size_t i = 0; i < d; ++i) {
                f[i] = static_cast<unsigned>(c % p);
                c /= p;
            }
            if (poly_mod(m, f, p).empty())
                return false;
        }
    }
    return true;
}

} // namespace detail

/// Description of F_q with q = p^e: the prime, the extension degree and a
/// monic irreducible modulus of degree e (coefficients lowest degree first).
struct FieldSpec {
    unsigned p = 2;
    unsigned e = 1;
    std::vector<unsigned> modulus{0, 1};
    std::uint32_t q = 2;

    static FieldSpec prime(unsigned p)
    {
        if (!detail::is_prime(p))
            throw std::invalid_argument("FieldSpec: p = " + std::to_string(p) + " is not prime");
        if (p > 65536)
            throw std::invalid_argument("FieldSpec: fields with q > 2^16 are not supported");
        return FieldSpec{p, 1, {0, 1}, p};
    }

    /// Extension field with an explicit modulus; irreducibility is verified.
    static FieldSpec extension(unsigned p, std::vector<unsigned> modulus)
    {
        if (!detail::is_prime(p))
            throw std::invalid_argument("FieldSpec: p is not prime");
        if (modulus.size() < 2)
            throw std::invalid_argument("FieldSpec: modulus must have degree >= 1");
        for (unsigned& c : modulus) {
            if (c >= p)
                throw std::invalid_argument("FieldSpec: modulus coefficient out of range");
        }
        if (modulus.back() != 1)
            throw std::invalid_argument("FieldSpec: modulus must be monic");
        const auto e = static_cast<unsigned>(modulus.size() - 1);
        std::uint64_t q = 1;
        for (unsigned i = 0; i < e; ++i) {
            q *= p;
            if (q > 65536)
                throw std::invalid_argument("FieldSpec: fields with q > 2^16 are not supported");
        }
        if (!detail::is_irreducible(modulus, p))
            throw std::invalid_argument("FieldSpec: modulus is reducible over F_p");
        return FieldSpec{p, e, std::move(modulus), static_cast<std::uint32_t>(q)};
    }

    /// Field of order q, using the built-in modulus table for prime powers.
    static FieldSpec from_order(std::uint64_t q)
    {
        if (q < 2)
            throw std::invalid_argument("FieldSpec: q must be at least 2");
        if (detail::is_prime(q))
            return prime(static_cast<unsigned>(q));
        switch (q) {
        case 4: return extension(2, {1, 1, 1});
        case 8: return extension(2, {1, 1, 0, 1});
        case 9: return extension(3, {2, 2, 1});
        case 16: return extension(2, {1, 1, 0, 0, 1});
        case 25: return extension(5, {2, 4, 1});
        case 27: return extension(3, {1, 2, 0, 1});
        default: break;
        }
        // Other prime powers: first irreducible monic modulus in lexicographic order.
        unsigned p = 2;
        while (q % p != 0)
            ++p;
        std::uint64_t rest = q;
        unsigned e = 0;
        while (rest % p == 0) {
            rest /= p;
            ++e;
        }
        if (rest != 1)
            throw std::invalid_argument("FieldSpec: q = " + std::to_string(q) +
                                        " is not a prime power");
        if (q > 65536)
            throw std::invalid_argument("FieldSpec: fields with q > 2^16 are not supported");
        std::uint64_t combos = q; // p^e low coefficients
        for (std::uint64_t code = 0; code < combos; ++code) {
            std::vector<unsigned> m(e + 1, 0);
            m[e] = 1;
            std::uint64_t c = code;
            for (unsigned i = 0; i < e; ++i) {
                m[i] = static_cast<unsigned>(c % p);
                c /= p;
            }
            if (m[0] != 0 && detail::is_irreducible(m, p))
                return extension(p, m);
        }
        throw std::logic_error("FieldSpec: no irreducible modulus found");
    }
};

/// Arithmetic in F_q. Elements are integers 0..q-1 whose base-p digits are
/// the polynomial-basis coordinates (digit i is the coefficient of x^i).
class Field {
public:
    explicit Field(FieldSpec spec) : spec_(std::move(spec))
    {
        const std::uint32_t q = spec_.q;
        inv_.assign(q, 0);
        if (spec_.e == 1) {
            for (std::uint32_t a = 1; a < q; ++a)
                inv_[a] = pow_mod(a, q - 2, q);
            return;
        }
        build_log_tables();
        if (q <= 256) {
            add_table_.resize(static_cast<std::size_t>(q) * q);
            for (Elem a = 0; a < q; ++a)
                for (Elem b = 0; b < q; ++b)
                    add_table_[a * q + b] = digit_add(a, b);
        }
    }

    explicit Field(std::uint64_t q) : Field(FieldSpec::from_order(q)) {}

    const FieldSpec& spec() const noexcept { return spec_; }
    std::uint32_t q() const noexcept { return spec_.q; }
    unsigned p() const noexcept { return spec_.p; }
    unsigned e() const noexcept { return spec_.e; }

    Elem add(Elem a, Elem b) const
    {
        if (spec_.e == 1)
            return (a + b) % spec_.p;
        if (!add_table_.empty())
            return add_table_[a * spec_.q + b];
        return digit_add(a, b);
    }

    Elem neg(Elem a) const
    {
        if (spec_.e == 1)
            return a == 0 ? 0 : spec_.p - a;
        Elem r = 0;
        Elem scale = 1;
        for (unsigned i = 0; i < spec_.e; ++i) {
            const Elem d = a % spec_.p;
            a /= spec_.p;
            r += ((spec_.p - d) % spec_.p) * scale;
            scale *= spec_.p;
        }
        return r;
    }

    Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }

    Elem mul(Elem a, Elem b) const
    {
        if (spec_.e == 1)
            return static_cast<Elem>((static_cast<std::uint64_t>(a) * b) % spec_.p);
        if (a == 0 || b == 0)
            return 0;
        const std::uint32_t order = spec_.q - 1;
        std::uint32_t l = log_[a] + log_[b];
        if (l >= order)
            l -= order;
        return exp_[l];
    }

    Elem inv(Elem a) const
    {
        if (a == 0)
            throw std::domain_error("Field: zero has no inverse");
        return inv_[a];
    }

    Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

private:
    static Elem pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod)
    {
        std::uint64_t r = 1;
        base %= mod;
        while (exp) {
            if (exp & 1)
                r = r * base % mod;
            base = base * base % mod;
            exp >>= 1;
        }
        return static_cast<Elem>(r);
    }

    Elem digit_add(Elem a, Elem b) const
    {
        Elem r = 0;
        Elem scale = 1;
        for (unsigned i = 0; i < spec_.e; ++i) {
            r += ((a % spec_.p + b % spec_.p) % spec_.p) * scale;
            a /= spec_.p;
            b /= spec_.p;
            scale *= spec_.p;
        }
        return r;
    }

    detail::Poly to_poly(Elem a) const
    {
        detail::Poly r(spec_.e, 0);
        for (unsigned i = 0; i < spec_.e; ++i) {
            r[i] = a % spec_.p;
            a /= spec_.p;
        }
        detail::trim(r);
        return r;
    }

    Elem from_poly(const detail::Poly& poly) const
    {
        Elem r = 0;
        Elem scale = 1;
        for (unsigned c : poly) {
            r += c * scale;
            scale *= spec_.p;
        }
        return r;
    }

    Elem poly_mulmod(Elem a, Elem b) const
    {
        return from_poly(detail::poly_mod(detail::poly_mul(to_poly(a), to_poly(b), spec_.p),
                                          spec_.modulus, spec_.p));
    }

    void build_log_tables()
    {
        const std::uint32_t q = spec_.q;
        const std::uint32_t order = q - 1;
        exp_.assign(order, 0);
        log_.assign(q, 0);
        for (Elem g = 2; g < q; ++g) {
            Elem x = 1;
            std::uint32_t i = 0;
            bool primitive = true;
            for (; i < order; ++i) {
                if (i > 0 && x == 1) {
                    primitive = false;
                    break;
                }
                exp_[i] = x;
                x = poly_mulmod(x, g);
            }
            if (primitive && x == 1) {
                for (std::uint32_t j = 0; j < order; ++j)
                    log_[exp_[j]] = j;
                for (Elem a = 1; a < q; ++a)
                    inv_[a] = exp_[(order - log_[a]) % order];
                return;
            }
        }
        throw std::logic_error("Field: no primitive element found");
    }

    FieldSpec spec_;
    std::vector<Elem> inv_;
    std::vector<Elem> exp_;
    std::vector<std::uint32_t> log_;
    std::vector<Elem> add_table_;
};

/// Subspace of F_q^n stored by its reduced row echelon basis. Two subspaces
/// are equal iff their canonical bases coincide.
class Subspace {
public:
    Subspace() = default;

    static Subspace zero(unsigned n) { return Subspace(n, {}, {}); }

    static Subspace full(unsigned n)
    {
        std::vector<Vector> rows(n, Vector(n, 0));
        std::vector<unsigned> pivots(n);
        for (unsigned i = 0; i < n; ++i) {
            rows[i][i] = 1;
            pivots[i] = i;
        }
        return Subspace(n, std::move(rows), std::move(pivots));
    }

    unsigned ambient_dim() const noexcept { return ambient_; }
    unsigned dim() const noexcept { return static_cast<unsigned>(rows_.size()); }
    unsigned codim() const noexcept { return ambient_ - dim(); }
    const std::vector<Vector>& basis() const noexcept { return rows_; }
    const std::vector<unsigned>& pivots() const noexcept { return pivots_; }

    /// Image under F_q^n -> F_q^{n+1}, appending a zero coordinate.
    Subspace embedded() const
    {
        auto rows = rows_;
        for (auto& r : rows)
            r.push_back(0);
        return Subspace(ambient_ + 1, std::move(rows), pivots_);
    }

    /// True iff the subspace lies inside the image of F_q^{n-1} (last coordinate zero).
    bool in_previous_ambient() const
    {
        return std::all_of(rows_.begin(), rows_.end(),
                           [](const Vector& r) { return r.back() == 0; });
    }

    friend bool operator==(const Subspace& a, const Subspace& b)
    {
        return a.ambient_ == b.ambient_ && a.rows_ == b.rows_;
    }
    friend std::strong_ordering operator<=>(const Subspace& a, const Subspace& b)
    {
        if (auto c = a.ambient_ <=> b.ambient_; c != 0)
            return c;
        if (a.rows_ < b.rows_)
            return std::strong_ordering::less;
        if (b.rows_ < a.rows_)
            return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

private:
    friend Subspace rref(const Field&, std::vector<Vector>, unsigned);

    Subspace(unsigned n, std::vector<Vector> rows, std::vector<unsigned> pivots)
        : ambient_(n), rows_(std::move(rows)), pivots_(std::move(pivots))
    {
    }

    unsigned ambient_ = 0;
    std::vector<Vector> rows_;
    std::vector<unsigned> pivots_;
};

/// Canonical subspace spanned by the given rows (each of length n).
inline Subspace rref(const Field& field, std::vector<Vector> rows, unsigned n)
{
    for (const auto& r : rows)
        if (r.size() != n)
            throw std::invalid_argument("rref: row length does not match ambient dimension");
    std::vector<unsigned> pivots;
    std::size_t top = 0;
    for (unsigned col = 0; col < n && top < rows.size(); ++col) {
        std::size_t pivot = top;
        while (pivot < rows.size() && rows[pivot][col] == 0)
            ++pivot;
        if (pivot == rows.size())
            continue;
        std::swap(rows[top], rows[pivot]);
        const Elem scale = field.inv(rows[top][col]);
        for (auto& x : rows[top])
            x = field.mul(x, scale);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == top || rows[r][col] == 0)
                continue;
            const Elem factor = rows[r][col];
            for (unsigned c = col; c < n; ++c)
                rows[r][c] = field.sub(rows[r][c], field.mul(factor, rows[top][c]));
        }
        pivots.push_back(col);
        ++top;
    }
    rows.resize(top);
    return Subspace(n, std::move(rows), std::move(pivots));
}

namespace detail {

inline void require_same_ambient(const Subspace& v, const Subspace& w)
{
    if (v.ambient_dim() != w.ambient_dim())
        throw std::invalid_argument("subspaces live in different ambient spaces");
}

// Remainder of x after elimination against a canonical basis.
inline Vector reduce(const Field& field, const Subspace& v, Vector x)
{
    for (std::size_t i = 0; i < v.dim(); ++i) {
        const unsigned col = v.pivots()[i];
        const Elem factor = x[col];
        if (factor == 0)
            continue;
        const Vector& row = v.basis()[i];
        for (unsigned c = col; c < x.size(); ++c)
            x[c] = field.sub(x[c], field.mul(factor, row[c]));
    }
    return x;
}

} // namespace detail

inline bool contains_vector(const Field& field, const Subspace& v, const Vector& x)
{
    if (x.size() != v.ambient_dim())
        throw std::invalid_argument("contains_vector: length mismatch");
    const Vector r = detail::reduce(field, v, x);
    return std::all_of(r.begin(), r.end(), [](Elem e) { return e == 0; });
}

/// True iff w is a subspace of v.
inline bool contains(const Field& field, const Subspace& v, const Subspace& w)
{
    detail::require_same_ambient(v, w);
    return std::all_of(w.basis().begin(), w.basis().end(),
                       [&](const Vector& row) { return contains_vector(field, v, row); });
}

inline Subspace sum(const Field& field, const Subspace& v, const Subspace& w)
{
    detail::require_same_ambient(v, w);
    std::vector<Vector> rows = v.basis();
    rows.insert(rows.end(), w.basis().begin(), w.basis().end());
    return rref(field, std::move(rows), v.ambient_dim());
}

/// Intersection by the Zassenhaus algorithm: reduce [v | v ; w | 0] and keep
/// the right halves of rows whose left half vanished.
inline Subspace intersect(const Field& field, const Subspace& v, const Subspace& w)
{
    detail::require_same_ambient(v, w);
    const unsigned n = v.ambient_dim();
    std::vector<Vector> rows;
    for (const auto& r : v.basis()) {
        Vector x = r;
        x.insert(x.end(), r.begin(), r.end());
        rows.push_back(std::move(x));
    }
    for (const auto& r : w.basis()) {
        Vector x = r;
        x.insert(x.end(), n, 0);
        rows.push_back(std::move(x));
    }
    const Subspace z = rref(field, std::move(rows), 2 * n);
    std::vector<Vector> meet;
    for (std::size_t i = 0; i < z.dim(); ++i) {
        if (z.pivots()[i] >= n)
            meet.emplace_back(z.basis()[i].begin() + n, z.basis()[i].end());
    }
    return rref(field, std::move(meet), n);
}

// ---------------------------------------------------------------------------
// Grassmannian enumeration and ranking.
//
// Order: pivot-column sets lexicographically, then the free entries (row-major,
// first entry most significant) as base-q numbers.

inline constexpr std::uint64_t kEnumerationGuard = 10'000'000;

/// q^{k(n-k)} * C(n, k), the desk-scale size bound checked before enumerating.
inline ExactInt grassmannian_enumeration_bound(std::uint64_t q, unsigned k, unsigned n)
{
    ExactInt binom = 1;
    for (unsigned i = 0; i < k; ++i)
        binom = binom * (n - i) / (i + 1);
    return ipow(ExactInt(q), k * (n - k)) * binom;
}

namespace detail {

// Number of free entries of row i whose pivot sits in column c.
inline unsigned free_in_row(unsigned n, unsigned k, unsigned i, unsigned c)
{
    return n - k + i - c;
}

// completions[i][start]: weighted count of pivot choices for rows i..k-1 with
// the pivot of row i at column >= start, each weighted by q^{free entries}.
inline std::vector<std::vector<ExactInt>> completion_table(std::uint64_t q, unsigned k, unsigned n)
{
    std::vector<std::vector<ExactInt>> t(k + 1, std::vector<ExactInt>(n + 2, 0));
    for (unsigned s = 0; s <= n + 1; ++s)
        t[k][s] = 1;
    for (unsigned i = k; i-- > 0;) {
        for (unsigned s = n + 1; s-- > 0;) {
            ExactInt acc = 0;
            // pivot of row i may sit at columns s .. n-(k-i)
            for (unsigned c = s; c + (k - i) <= n; ++c)
                acc += ipow(ExactInt(q), free_in_row(n, k, i, c)) * t[i + 1][c + 1];
            t[i][s] = acc;
        }
    }
    return t;
}

inline std::vector<std::pair<unsigned, unsigned>> free_positions(unsigned n,
                                                                 const std::vector<unsigned>& pivots)
{
    std::vector<bool> is_pivot(n, false);
    for (unsigned c : pivots)
        is_pivot[c] = true;
    std::vector<std::pair<unsigned, unsigned>> pos;
    for (unsigned i = 0; i < pivots.size(); ++i)
        for (unsigned c = pivots[i] + 1; c < n; ++c)
            if (!is_pivot[c])
                pos.emplace_back(i, c);
    return pos;
}

} // namespace detail

/// Position of v in the enumeration order of Gr(dim v, n).
inline ExactInt grassmannian_rank(std::uint64_t q, const Subspace& v)
{
    const unsigned n = v.ambient_dim();
    const unsigned k = v.dim();
    const auto table = detail::completion_table(q, k, n);
    const auto& piv = v.pivots();
    ExactInt rank = 0;
    unsigned prefix_free = 0;
    for (unsigned i = 0; i < k; ++i) {
        const unsigned start = i == 0 ? 0 : piv[i - 1] + 1;
        for (unsigned c = start; c < piv[i]; ++c)
            rank += ipow(ExactInt(q), prefix_free + detail::free_in_row(n, k, i, c)) *
                    table[i + 1][c + 1];
        prefix_free += detail::free_in_row(n, k, i, piv[i]);
    }
    ExactInt value = 0;
    for (const auto& [row, col] : detail::free_positions(n, piv))
        value = value * q + v.basis()[row][col];
    return rank + value;
}

/// Inverse of grassmannian_rank over Gr(k, n).
inline Subspace grassmannian_unrank(const Field& field, unsigned k, unsigned n, ExactInt rank)
{
    if (k > n)
        throw std::invalid_argument("grassmannian_unrank: k must not exceed n");
    const std::uint64_t q = field.q();
    const auto table = detail::completion_table(q, k, n);
    if (rank < 0 || rank >= table[0][0])
        throw std::out_of_range("grassmannian_unrank: rank outside Gr(k, n)");
    std::vector<unsigned> pivots;
    unsigned prefix_free = 0;
    for (unsigned i = 0; i < k; ++i) {
        unsigned c = i == 0 ? 0 : pivots.back() + 1;
        for (;; ++c) {
            const ExactInt block = ipow(ExactInt(q), prefix_free + detail::free_in_row(n, k, i, c)) *
                                   table[i + 1][c + 1];
            if (rank < block)
                break;
            rank -= block;
        }
        pivots.push_back(c);
        prefix_free += detail::free_in_row(n, k, i, c);
    }
    std::vector<Vector> rows(k, Vector(n, 0));
    for (unsigned i = 0; i < k; ++i)
        rows[i][pivots[i]] = 1;
    const auto pos = detail::free_positions(n, pivots);
    for (std::size_t j = pos.size(); j-- > 0;) {
        rows[pos[j].first][pos[j].second] = static_cast<Elem>(static_cast<std::uint64_t>(rank % q));
        rank /= q;
    }
    return rref(field, std::move(rows), n);
}

/// Visits every k-dimensional subspace of F_q^n exactly once, in enumeration order.
/// Refuses (std::length_error) when the desk-scale bound exceeds `guard`.
template <typename Visitor>
void for_each_subspace(const Field& field, unsigned k, unsigned n, Visitor&& visit,
                       std::uint64_t guard = kEnumerationGuard)
{
    if (k > n)
        throw std::invalid_argument("enumerate_grassmannian: k must not exceed n");
    const ExactInt bound = grassmannian_enumeration_bound(field.q(), k, n);
    if (bound > guard)
        throw std::length_error("enumerate_grassmannian: Gr(" + std::to_string(k) + ", " +
                                std::to_string(n) + ") enumeration bound " + bound.str() +
                                " exceeds guard " + std::to_string(guard));
    const Elem q = field.q();
    std::vector<unsigned> pivots(k);
    for (unsigned i = 0; i < k; ++i)
        pivots[i] = i;
    while (true) {
        const auto pos = detail::free_positions(n, pivots);
        std::vector<Vector> rows(k, Vector(n, 0));
        for (unsigned i = 0; i < k; ++i)
            rows[i][pivots[i]] = 1;
        std::vector<Elem> digits(pos.size(), 0);
        bool more = true;
        while (more) {
            // Rows already satisfy the echelon conditions; rref just canonicalizes.
            visit(rref(field, rows, n));
            more = false;
            for (std::size_t j = digits.size(); j-- > 0;) {
                auto& cell = rows[pos[j].first][pos[j].second];
                if (++digits[j] < q) {
                    cell = digits[j];
                    more = true;
                    break;
                }
                digits[j] = 0;
                cell = 0;
            }
        }
        // next pivot set in lexicographic order
        int i = static_cast<int>(k) - 1;
        while (i >= 0 && pivots[i] == n - k + static_cast<unsigned>(i))
            --i;
        if (i < 0)
            break;
        ++pivots[i];
        for (unsigned j = static_cast<unsigned>(i) + 1; j < k; ++j)
            pivots[j] = pivots[j - 1] + 1;
    }
}

inline std::vector<Subspace> enumerate_grassmannian(const Field& field, unsigned k, unsigned n,
                                                    std::uint64_t guard = kEnumerationGuard)
{
    std::vector<Subspace> out;
    for_each_subspace(field, k, n, [&](Subspace s) { out.push_back(std::move(s)); }, guard);
    return out;
}

// ---------------------------------------------------------------------------
// Dilations: for w in F_q^n, the subspaces v of F_q^{n+1} with w inside v,
// v not inside F_q^n and dim v = dim w + 1.

/// All dilations of w; there are q^{n - dim w} of them.
inline std::vector<Subspace> dilations(const Field& field, const Subspace& w,
                                       std::uint64_t guard = kEnumerationGuard)
{
    const unsigned n = w.ambient_dim();
    const unsigned free = n - w.dim();
    if (ipow(ExactInt(field.q()), free) > guard)
        throw std::length_error("dilations: count exceeds guard");
    std::vector<bool> is_pivot(n, false);
    for (unsigned c : w.pivots())
        is_pivot[c] = true;
    std::vector<unsigned> slots;
    for (unsigned c = 0; c < n; ++c)
        if (!is_pivot[c])
            slots.push_back(c);

    const Subspace base = w.embedded();
    std::vector<Subspace> out;
    std::vector<Elem> digits(slots.size(), 0);
    while (true) {
        Vector x(n + 1, 0);
        for (std::size_t j = 0; j < slots.size(); ++j)
            x[slots[j]] = digits[j];
        x[n] = 1;
        std::vector<Vector> rows = base.basis();
        rows.push_back(std::move(x));
        out.push_back(rref(field, std::move(rows), n + 1));
        std::size_t j = digits.size();
        bool done = true;
        while (j > 0) {
            --j;
            if (++digits[j] < field.q()) {
                done = false;
                break;
            }
            digits[j] = 0;
        }
        if (done)
            break;
    }
    return out;
}

/// Uniform draw from dilations(w): span of w and a uniform vector outside F_q^n.
/// Each dilation is generated by exactly q^k - q^{k-1} such vectors.
inline Subspace sample_dilation(const Field& field, const Subspace& w, RandomStream& rng)
{
    const unsigned n = w.ambient_dim();
    Vector x(n + 1);
    for (unsigned c = 0; c < n; ++c)
        x[c] = static_cast<Elem>(rng.below(field.q()));
    x[n] = static_cast<Elem>(1 + rng.below(field.q() - 1));
    std::vector<Vector> rows = w.embedded().basis();
    rows.push_back(std::move(x));
    return rref(field, std::move(rows), n + 1);
}

// ---------------------------------------------------------------------------
// Text form: RREF rows joined by ';'. Each element is one symbol from
// 0-9a-z for prime q <= 36, a group of e base-p symbols (most significant
// first) for extension fields, and a ','-separated decimal list otherwise.

namespace detail {

inline constexpr std::string_view kSymbols = "0123456789abcdefghijklmnopqrstuvwxyz";

inline int symbol_value(char ch)
{
    const auto pos = kSymbols.find(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    return pos == std::string_view::npos ? -1 : static_cast<int>(pos);
}

inline bool decimal_rows(const Field& f) { return f.e() == 1 && f.q() > 36; }

} // namespace detail

inline std::string format_vector(const Field& field, const Vector& row)
{
    std::string out;
    if (detail::decimal_rows(field)) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i)
                out += ',';
            out += std::to_string(row[i]);
        }
        return out;
    }
    for (Elem x : row) {
        std::string group(field.e(), '0');
        for (unsigned i = field.e(); i-- > 0;) {
            group[i] = detail::kSymbols[x % field.p()];
            x /= field.p();
        }
        out += group;
    }
    return out;
}

inline std::string format_subspace(const Field& field, const Subspace& v)
{
    std::string out;
    for (std::size_t i = 0; i < v.dim(); ++i) {
        if (i)
            out += ';';
        out += format_vector(field, v.basis()[i]);
    }
    return out;
}

inline Vector parse_vector(const Field& field, std::string_view text)
{
    Vector row;
    if (detail::decimal_rows(field)) {
        std::string buf(text);
        std::stringstream ss(buf);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos)
                throw std::invalid_argument("subspace text: bad element '" + item + "'");
            const unsigned long v = std::stoul(item);
            if (v >= field.q())
                throw std::invalid_argument("subspace text: element out of range");
            row.push_back(static_cast<Elem>(v));
        }
        return row;
    }
    const unsigned e = field.e();
    if (text.size() % e != 0)
        throw std::invalid_argument("subspace text: row length is not a multiple of the extension degree");
    for (std::size_t i = 0; i < text.size(); i += e) {
        Elem x = 0;
        for (unsigned j = 0; j < e; ++j) {
            const int d = detail::symbol_value(text[i + j]);
            if (d < 0 || static_cast<unsigned>(d) >= field.p())
                throw std::invalid_argument(std::string("subspace text: bad symbol '") + text[i + j] + "'");
            x = x * field.p() + static_cast<Elem>(d);
        }
        row.push_back(x);
    }
    return row;
}

struct ParsedSubspace {
    Subspace value;
    bool was_canonical = true; ///< false when the input rows were not already the RREF basis
};

/// Parses the text form in F_q^n. Non-canonical input is re-canonicalized and flagged.
inline ParsedSubspace parse_subspace(const Field& field, std::string_view text, unsigned n)
{
    std::vector<Vector> rows;
    std::size_t start = 0;
    if (!text.empty()) {
        while (true) {
            const std::size_t end = text.find(';', start);
            const auto piece = text.substr(start, end == std::string_view::npos ? text.npos : end - start);
            Vector row = parse_vector(field, piece);
            if (row.size() != n)
                throw std::invalid_argument("subspace text: row has " + std::to_string(row.size()) +
                                            " entries, expected " + std::to_string(n));
            rows.push_back(std::move(row));
            if (end == std::string_view::npos)
                break;
            start = end + 1;
        }
    }
    ParsedSubspace out;
    out.value = rref(field, rows, n);
    out.was_canonical = out.value.basis() == rows;
    return out;
}

} // namespace qgrass::gf
