#pragma once

// Test-side reference constructions. These deliberately avoid the library's
// codec and kernels so they can serve as independent oracles.

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include <mh/matrix.hpp>

namespace oracle {

// Visitation order of the tiled Z layout, built by an explicit recursive
// quadrant walk over the tile grid (NW, NE, SW, SE) with a row-major walk
// inside each tile. order[z] is the cell stored at flat index z.
inline void z_walk(std::uint64_t bi, std::uint64_t bj, std::uint64_t side,
                   std::vector<std::pair<std::uint64_t, std::uint64_t>>& blocks) {
    if (side == 1) {
        blocks.emplace_back(bi, bj);
        return;
    }
    const std::uint64_t half = side / 2;
    z_walk(bi, bj, half, blocks);
    z_walk(bi, bj + half, half, blocks);
    z_walk(bi + half, bj, half, blocks);
    z_walk(bi + half, bj + half, half, blocks);
}

inline std::vector<std::pair<std::uint64_t, std::uint64_t>>
morton_hybrid_order(std::uint64_t n, std::uint64_t t) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> blocks;
    z_walk(0, 0, n / t, blocks);
    std::vector<std::pair<std::uint64_t, std::uint64_t>> order;
    order.reserve(n * n);
    for (const auto& [bi, bj] : blocks)
        for (std::uint64_t li = 0; li < t; ++li)
            for (std::uint64_t lj = 0; lj < t; ++lj)
                order.emplace_back(bi * t + li, bj * t + lj);
    return order;
}

// Plain row-major accumulate out += lhs * rhs over dense grids, with naked
// modular arithmetic.
inline void mat_mul_accumulate(mh::Grid& out, const mh::Grid& lhs, const mh::Grid& rhs,
                               std::uint64_t oi, std::uint64_t oj, std::uint64_t li,
                               std::uint64_t lj, std::uint64_t ri, std::uint64_t rj,
                               std::uint64_t rows, std::uint64_t cols, std::uint64_t inner,
                               std::uint64_t q) {
    for (std::uint64_t x = 0; x < rows; ++x)
        for (std::uint64_t y = 0; y < cols; ++y) {
            std::uint64_t acc = out[oi + x][oj + y].v;
            for (std::uint64_t z = 0; z < inner; ++z)
                acc = (acc + std::uint64_t(lhs[li + x][lj + z].v) * rhs[ri + z][rj + y].v) % q;
            out[oi + x][oj + y] = mh::Fp{std::uint32_t(acc)};
        }
}

inline mh::Grid random_grid(std::uint64_t n, std::uint32_t q, std::mt19937_64& eng) {
    mh::Grid g(n, std::vector<mh::Fp>(n));
    for (auto& row : g)
        for (auto& cell : row) cell = mh::Fp{std::uint32_t(eng() % q)};
    return g;
}

} // namespace oracle
