#pragma once

#include <cstdint>
#include <stdexcept>

namespace mh {

namespace detail {

inline bool is_prime(std::uint32_t x) {
    if (x < 2) return false;
    if (x % 2 == 0) return x == 2;
    for (std::uint64_t d = 3; d * d <= x; d += 2)
        if (x % d == 0) return false;
    return true;
}

} // namespace detail

/// Prime modulus q, 2 <= q < 2^31, with a precomputed Barrett constant so
/// reduction never needs a hardware divide. Primality is checked by trial
/// division at construction.
struct Modulus {
    std::uint32_t q = 2;
    std::uint64_t mu = std::uint64_t(1) << 63; // floor(2^64 / q)

    Modulus() = default;
    explicit Modulus(std::uint32_t prime) : q(prime) {
        if (prime < 2 || prime >= (std::uint32_t(1) << 31))
            throw std::invalid_argument("Modulus: q must satisfy 2 <= q < 2^31");
        if (!detail::is_prime(prime))
            throw std::invalid_argument("Modulus: q must be prime");
        mu = prime == 2 ? (std::uint64_t(1) << 63) : ~std::uint64_t(0) / prime;
    }
};

/// Residue in [0, q).
struct Fp {
    std::uint32_t v = 0;
    friend bool operator==(Fp, Fp) = default;
};

inline Fp add(Fp a, Fp b, const Modulus& m) {
    std::uint32_t s = a.v + b.v; // both < q < 2^31, no overflow
    if (s >= m.q) s -= m.q;
    return Fp{s};
}

inline Fp mul(Fp a, Fp b, const Modulus& m) {
    const std::uint64_t p = std::uint64_t(a.v) * b.v;
    const std::uint64_t t = std::uint64_t((unsigned __int128)(p)*m.mu >> 64);
    std::uint64_t r = p - t * m.q; // r < 2q
    if (r >= m.q) r -= m.q;
    return Fp{std::uint32_t(r)};
}

} // namespace mh
