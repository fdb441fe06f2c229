#pragma once

#include <boost/rational.hpp>
#include <cstdint>

namespace voxtdp {

// Exact rational arithmetic for all bound computations. Magnitudes stay far
// below 2^63: numerators are bounded by cover sizes (~1e6) times table
// denominators of the same order.
using Rat = boost::rational<std::int64_t>;

inline std::int64_t rat_floor(const Rat& r) {
    std::int64_t n = r.numerator(), d = r.denominator();  // d > 0 by invariant
    std::int64_t q = n / d;
    if (n % d != 0 && n < 0) --q;
    return q;
}

inline std::int64_t rat_ceil(const Rat& r) {
    std::int64_t n = r.numerator(), d = r.denominator();
    std::int64_t q = n / d;
    if (n % d != 0 && n > 0) ++q;
    return q;
}

inline double rat_double(const Rat& r) {
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

}  // namespace voxtdp
