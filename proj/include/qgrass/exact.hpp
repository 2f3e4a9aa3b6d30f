#pragma once

// Exact integer and rational carriers shared by every module, plus the
// logarithm of a big integer without going through a floating conversion.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace qgrass {

using ExactInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Natural logarithm of a positive big integer.
///
/// Uses the exact bit length and the leading 64 bits as mantissa, so the
/// result stays accurate long after the value has overflowed a double.
inline double ln_exact(const ExactInt& x)
{
    if (x <= 0)
        throw std::domain_error("ln_exact: argument must be positive");
    const std::size_t bits = boost::multiprecision::msb(x) + 1;
    if (bits <= 64)
        return std::log(static_cast<double>(x.convert_to<std::uint64_t>()));
    const std::size_t shift = bits - 64;
    const ExactInt top = x >> shift;
    const auto mantissa = top.convert_to<std::uint64_t>();
    return std::log(static_cast<double>(mantissa)) +
           static_cast<double>(shift) * std::log(2.0);
}

inline double log_q_exact(const ExactInt& x, double q)
{
    return ln_exact(x) / std::log(q);
}

inline std::string to_decimal(const ExactInt& x) { return x.str(); }

/// Integer power with exact result.
inline ExactInt ipow(const ExactInt& base, unsigned exponent)
{
    return boost::multiprecision::pow(base, exponent);
}

inline Rational rpow(const Rational& base, unsigned exponent)
{
    Rational r = 1;
    for (unsigned i = 0; i < exponent; ++i)
        r *= base;
    return r;
}

} // namespace qgrass
