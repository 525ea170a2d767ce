#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>

namespace mh {

/// Flat position inside the permuted element store.
using Index = std::uint64_t;

namespace detail {

// Spread the low 32 bits of x so that bit k lands at position 2k.
constexpr std::uint64_t dilate(std::uint64_t x) {
    x &= 0xffffffffull;
    x = (x | (x << 16)) & 0x0000ffff0000ffffull;
    x = (x | (x << 8)) & 0x00ff00ff00ff00ffull;
    x = (x | (x << 4)) & 0x0f0f0f0f0f0f0f0full;
    x = (x | (x << 2)) & 0x3333333333333333ull;
    x = (x | (x << 1)) & 0x5555555555555555ull;
    return x;
}

constexpr std::uint64_t undilate(std::uint64_t x) {
    x &= 0x5555555555555555ull;
    x = (x | (x >> 1)) & 0x3333333333333333ull;
    x = (x | (x >> 2)) & 0x0f0f0f0f0f0f0f0full;
    x = (x | (x >> 4)) & 0x00ff00ff00ff00ffull;
    x = (x | (x >> 8)) & 0x0000ffff0000ffffull;
    x = (x | (x >> 16)) & 0x00000000ffffffffull;
    return x;
}

} // namespace detail

/// Geometry of the truncated Z order: an n x n matrix is cut into a
/// 2^m x 2^m grid of t x t tiles. Tiles are numbered along the Z curve
/// (quadrant order NW, NE, SW, SE at every scale); entries inside a tile
/// are plain row-major. Requires n = 2^m * t, so every tile row/column
/// count is a power of two.
struct Layout {
    std::uint64_t n = 1;    // matrix side, in elements
    std::uint64_t t = 1;    // tile side, in elements
    unsigned grid_log2 = 0; // m, with n = 2^m * t
    std::uint64_t tile = 1; // t * t
    std::uint64_t total = 1; // n * n

    Layout() = default;
    Layout(std::uint64_t side, std::uint64_t tile_side) : n(side), t(tile_side) {
        if (t == 0 || n == 0)
            throw std::invalid_argument("Layout: side lengths must be positive");
        if (n >= (std::uint64_t(1) << 32))
            throw std::invalid_argument("Layout: side too large for one-word indices");
        if (n % t != 0 || !std::has_single_bit(n / t))
            throw std::invalid_argument("Layout: n must equal t * 2^m");
        grid_log2 = unsigned(std::countr_zero(n / t));
        tile = t * t;
        total = n * n;
        t_pow2_ = std::has_single_bit(t);
        t_shift_ = unsigned(std::countr_zero(t));
    }

    std::uint64_t tdiv(std::uint64_t v) const { return t_pow2_ ? v >> t_shift_ : v / t; }
    std::uint64_t tmod(std::uint64_t v) const { return t_pow2_ ? (v & (t - 1)) : v % t; }
    std::uint64_t tilediv(std::uint64_t v) const {
        return t_pow2_ ? v >> (2 * t_shift_) : v / tile;
    }
    std::uint64_t tilemod(std::uint64_t v) const {
        return t_pow2_ ? (v & (tile - 1)) : v % tile;
    }

private:
    bool t_pow2_ = true;
    unsigned t_shift_ = 0;
};

/// Flat index of cell (i, j): tile number along the Z curve times the tile
/// size, plus the row-major offset inside the tile.
inline Index encode(const Layout& p, std::uint64_t i, std::uint64_t j) {
    if (i >= p.n || j >= p.n)
        throw std::out_of_range("encode: cell outside the matrix");
    const std::uint64_t zblock = (detail::dilate(p.tdiv(i)) << 1) | detail::dilate(p.tdiv(j));
    return zblock * p.tile + p.tmod(i) * p.t + p.tmod(j);
}

/// Row coordinate of the cell stored at flat index z.
inline std::uint64_t extract_i(const Layout& p, Index z) {
    if (z >= p.total)
        throw std::out_of_range("extract_i: index outside the matrix");
    return detail::undilate(p.tilediv(z) >> 1) * p.t + p.tdiv(p.tilemod(z));
}

/// Column coordinate of the cell stored at flat index z.
inline std::uint64_t extract_j(const Layout& p, Index z) {
    if (z >= p.total)
        throw std::out_of_range("extract_j: index outside the matrix");
    return detail::undilate(p.tilediv(z)) * p.t + p.tmod(p.tilemod(z));
}

} // namespace mh
