#pragma once

#include <array>
#include <optional>

#include "mh/matrix.hpp"

namespace mh {

/// Rectangular view into a Matrix: flat index of its first entry plus row
/// and column counts. The view must lie inside the container; it may start
/// anywhere, tile-aligned or not.
struct Sub {
    Matrix* mat = nullptr;
    Index origin = 0;
    std::uint64_t rows = 0;
    std::uint64_t cols = 0;
};

/// Square block of the quad recursion: a contiguous, size-aligned run of
/// the flat store. elems is (2^d * t)^2 and origin is a multiple of elems.
struct Aligned {
    Matrix* mat = nullptr;
    Index origin = 0;
    std::uint64_t elems = 0;
};

/// Quadrants in storage order along the Z curve.
enum Quadrant : int { NW = 0, NE = 1, SW = 2, SE = 3 };

/// Outcome of carving a view along the quadrant boundaries of an aligned
/// block: one optional part per quadrant plus the row/column tallies of the
/// north/west halves. A part is absent exactly when its row or column count
/// would be zero.
struct Split {
    std::array<std::optional<Sub>, 4> part;
    std::uint64_t rows_north = 0;
    std::uint64_t cols_west = 0;
    std::uint64_t rows_south = 0;
    std::uint64_t cols_east = 0;
};

inline void check_sub(const Sub& s) {
    if (s.mat == nullptr) throw std::invalid_argument("sub-matrix: null container");
    const Layout& lay = s.mat->layout();
    if (s.origin >= lay.total)
        throw std::out_of_range("sub-matrix: origin outside the container");
    if (extract_i(lay, s.origin) + s.rows > lay.n ||
        extract_j(lay, s.origin) + s.cols > lay.n)
        throw std::out_of_range("sub-matrix: extends past the container edge");
}

/// Side length of the square region covered by an aligned block.
inline std::uint64_t aligned_side(const Aligned& a) {
    const Layout& lay = a.mat->layout();
    const std::uint64_t ratio = a.elems / lay.tile;
    return lay.t << (std::countr_zero(ratio) / 2);
}

inline void check_aligned(const Aligned& a) {
    if (a.mat == nullptr) throw std::invalid_argument("aligned block: null container");
    const Layout& lay = a.mat->layout();
    const bool size_ok = a.elems >= lay.tile && a.elems % lay.tile == 0 &&
                         std::has_single_bit(a.elems / lay.tile) &&
                         std::countr_zero(a.elems / lay.tile) % 2 == 0;
    if (!size_ok)
        throw std::invalid_argument("aligned block: element count is not (2^d * t)^2");
    if (a.origin % a.elems != 0 || a.origin + a.elems > lay.total)
        throw std::out_of_range("aligned block: origin not a multiple of its size");
}

/// True iff the view starts on a tile corner and both dimensions are
/// power-of-two multiples of the tile side.
inline bool is_aligned(const Sub& s) {
    check_sub(s);
    const Layout& lay = s.mat->layout();
    if (s.rows == 0 || s.cols == 0) return false;
    if (lay.tmod(extract_i(lay, s.origin)) != 0 || lay.tmod(extract_j(lay, s.origin)) != 0)
        return false;
    return s.rows % lay.t == 0 && std::has_single_bit(s.rows / lay.t) &&
           s.cols % lay.t == 0 && std::has_single_bit(s.cols / lay.t);
}

/// True iff every cell of the view sits in one t x t tile, i.e. the view can
/// be walked with plain row-major offset arithmetic. Empty views hold
/// vacuously; anything else is scattered.
inline bool is_contained(const Sub& s) {
    check_sub(s);
    if (s.rows == 0 || s.cols == 0) return true;
    const Layout& lay = s.mat->layout();
    const std::uint64_t i = extract_i(lay, s.origin), j = extract_j(lay, s.origin);
    return lay.tdiv(i) == lay.tdiv(i + s.rows - 1) && lay.tdiv(j) == lay.tdiv(j + s.cols - 1);
}

/// The four equal quadrants of an aligned block, in Z order. Each child
/// holds a quarter of the elements and they are consecutive in the flat
/// store. Must not be called on a block that is already a single tile.
inline std::array<Aligned, 4> quadrants(const Aligned& a) {
    check_aligned(a);
    const Layout& lay = a.mat->layout();
    if (a.elems == lay.tile)
        throw std::logic_error("quadrants: block is a single tile");
    const std::uint64_t quarter = a.elems / 4;
    return {{{a.mat, a.origin, quarter},
             {a.mat, a.origin + quarter, quarter},
             {a.mat, a.origin + 2 * quarter, quarter},
             {a.mat, a.origin + 3 * quarter, quarter}}};
}

/// Carve view s along the quadrant boundaries of aligned block a. The row
/// count falling in the northern half is read off the last entry of the NE
/// quadrant, the western column count off the last entry of SW; both are
/// clamped so the four parts always tile s exactly.
inline Split split_sub(const Aligned& a, const Sub& s) {
    check_aligned(a);
    check_sub(s);
    if (a.mat != s.mat)
        throw std::invalid_argument("split_sub: view and block disagree on container");
    const Layout& lay = a.mat->layout();
    if (a.elems == lay.tile)
        throw std::logic_error("split_sub: block is a single tile");

    const std::uint64_t side = aligned_side(a);
    const std::uint64_t ai = extract_i(lay, a.origin), aj = extract_j(lay, a.origin);
    const std::uint64_t si = extract_i(lay, s.origin), sj = extract_j(lay, s.origin);
    if (si < ai || sj < aj || si + s.rows > ai + side || sj + s.cols > aj + side)
        throw std::logic_error("split_sub: view not inside the aligned block");

    const std::uint64_t quarter = a.elems / 4;
    const Index last_ne = a.origin + 2 * quarter - 1;
    const Index last_sw = a.origin + 3 * quarter - 1;

    auto clamp = [](long long v, std::uint64_t hi) -> std::uint64_t {
        if (v < 0) return 0;
        return std::uint64_t(v) > hi ? hi : std::uint64_t(v);
    };
    Split out;
    out.rows_north =
        clamp(static_cast<long long>(extract_i(lay, last_ne)) - static_cast<long long>(si) + 1,
              s.rows);
    out.cols_west =
        clamp(static_cast<long long>(extract_j(lay, last_sw)) - static_cast<long long>(sj) + 1,
              s.cols);
    out.rows_south = s.rows - out.rows_north;
    out.cols_east = s.cols - out.cols_west;

    auto put = [&](Quadrant qd, std::uint64_t di, std::uint64_t dj, std::uint64_t r,
                   std::uint64_t c) {
        if (r && c) out.part[qd] = Sub{s.mat, encode(lay, si + di, sj + dj), r, c};
    };
    put(NW, 0, 0, out.rows_north, out.cols_west);
    put(NE, 0, out.cols_west, out.rows_north, out.cols_east);
    put(SW, out.rows_north, 0, out.rows_south, out.cols_west);
    put(SE, out.rows_north, out.cols_west, out.rows_south, out.cols_east);
    return out;
}

} // namespace mh
