#pragma once

#include <algorithm>

#include "mh/submatrix.hpp"

namespace mh {

// Three multiplication kernels over sub-matrix views, all accumulating
// A-view += B-view * C-view in GF(q):
//
//   mm_naive      one triple loop over the views, every cell located with
//                 encode. Correctness oracle for the other two.
//   mm_default    classic divide and conquer on the views themselves:
//                 halve every dimension still above the tile side, multiply
//                 the leaves with encode-based addressing. Leaves may
//                 straddle tiles.
//   mm_oblivious  divide and conquer on the containers: walk the aligned
//                 block tree of A, B and C, carve the views along the block
//                 boundaries, and keep only quadrant combinations whose
//                 shared row/inner/column ranges overlap. Every leaf then
//                 sits inside one tile and is multiplied with row-major
//                 offset arithmetic, no index conversion at all.
//
// All kernels mutate only the output container. Child calls with disjoint
// output rectangles may run concurrently; calls that share an output
// rectangle must be serialized (or given private accumulators reduced
// afterwards). The implementation here is single-threaded and
// deterministic: siblings run sequentially in Z order.

/// Tallies recorded by one kernel invocation.
///
/// encode_calls counts coordinate-to-flat conversions used to address
/// elements; the O(1)-per-node conversions spent identifying descriptors
/// during the divide phase are not element accesses and are not counted.
/// max_consecutive_jump is the largest forward gap between consecutive
/// flat addresses touched in one operand scan at a base case (rescans jump
/// backwards and do not count as traversal steps).
struct Counters {
    std::uint64_t base_case_calls = 0;
    std::uint64_t scalar_macs = 0;
    std::uint64_t encode_calls = 0;
    std::uint64_t recursive_calls = 0;
    std::uint64_t max_consecutive_jump = 0;
};

/// One accumulation problem: out (r x c) += lhs (r x k) * rhs (k x c),
/// each view living in its own container.
struct Problem {
    Sub a; // output
    Sub b; // left operand
    Sub c; // right operand
};

inline void check_problem(const Problem& p) {
    check_sub(p.a);
    check_sub(p.b);
    check_sub(p.c);
    if (p.a.mat == p.b.mat || p.a.mat == p.c.mat || p.b.mat == p.c.mat)
        throw std::logic_error("problem: the three views must live in distinct matrices");
    if (p.a.rows != p.b.rows || p.a.cols != p.c.cols || p.b.cols != p.c.rows)
        throw std::logic_error("problem: view shapes do not chain");
    if (p.a.mat->modulus().q != p.b.mat->modulus().q ||
        p.a.mat->modulus().q != p.c.mat->modulus().q)
        throw std::logic_error("problem: operands use different moduli");
}

/// A view plus the position of its rectangle inside the problem's shared
/// coordinate grids. For the output the axes are (row, column) of the
/// problem; for the left operand (row, inner); for the right (inner,
/// column).
struct Framed {
    Sub view;
    std::uint64_t row0 = 0;
    std::uint64_t col0 = 0;
};

namespace detail {

struct JumpTracker {
    Index last = 0;
    bool armed = false;

    void touch(Index a, Counters& ctr) {
        if (armed && a > last && a - last > ctr.max_consecutive_jump)
            ctr.max_consecutive_jump = a - last;
        last = a;
        armed = true;
    }
};

struct Rect {
    std::uint64_t i = 0, j = 0, rows = 0, cols = 0;
};

inline Rect rect_of(const Sub& s) {
    const Layout& lay = s.mat->layout();
    return {extract_i(lay, s.origin), extract_j(lay, s.origin), s.rows, s.cols};
}

// Triple loop with encode-based element addressing. Used on whole problems
// (mm_naive) and on the leaves of mm_default, where the rectangles may
// straddle tiles.
inline void kernel_encoded(Matrix& A, const Matrix& B, const Matrix& C, const Rect& ra,
                           const Rect& rb, const Rect& rc, Counters& ctr) {
    const Modulus& mod = A.modulus();
    const Layout &la = A.layout(), &lb = B.layout(), &lc = C.layout();
    JumpTracker ta, tb, tc;
    std::uint64_t encodes = 0;
    for (std::uint64_t x = 0; x < ra.rows; ++x) {
        for (std::uint64_t y = 0; y < ra.cols; ++y) {
            const Index za = encode(la, ra.i + x, ra.j + y);
            ++encodes;
            ta.touch(za, ctr);
            Fp acc = A[za];
            for (std::uint64_t z = 0; z < rb.cols; ++z) {
                const Index zb = encode(lb, rb.i + x, rb.j + z);
                const Index zc = encode(lc, rc.i + z, rc.j + y);
                encodes += 2;
                tb.touch(zb, ctr);
                tc.touch(zc, ctr);
                acc = add(acc, mul(B[zb], C[zc], mod), mod);
            }
            A[za] = acc;
        }
    }
    ctr.encode_calls += encodes;
    ctr.scalar_macs += ra.rows * ra.cols * rb.cols;
}

} // namespace detail

/// Multiply three views that each sit inside a single tile. Elements are
/// addressed as origin + row * t + column, with no index conversion; this
/// is only sound for contained views, so anything scattered is rejected.
inline void base_case_mm(const Sub& out, const Sub& lhs, const Sub& rhs, Counters& ctr) {
    if (!is_contained(out) || !is_contained(lhs) || !is_contained(rhs))
        throw std::logic_error("base_case_mm: operand spans more than one tile");
    if (out.rows != lhs.rows || out.cols != rhs.cols || lhs.cols != rhs.rows)
        throw std::logic_error("base_case_mm: view shapes do not chain");
    ++ctr.base_case_calls;

    Matrix& A = *out.mat;
    const Matrix& B = *lhs.mat;
    const Matrix& C = *rhs.mat;
    const Modulus& mod = A.modulus();
    const std::uint64_t ta_side = A.layout().t;
    const std::uint64_t tb_side = B.layout().t;
    const std::uint64_t tc_side = C.layout().t;
    const std::uint64_t inner = lhs.cols;

    detail::JumpTracker ja, jb, jc;
    for (std::uint64_t x = 0; x < out.rows; ++x) {
        const Index row_a = out.origin + x * ta_side;
        const Index row_b = lhs.origin + x * tb_side;
        for (std::uint64_t y = 0; y < out.cols; ++y) {
            const Index za = row_a + y;
            ja.touch(za, ctr);
            Fp acc = A[za];
            Index zc = rhs.origin + y;
            for (std::uint64_t z = 0; z < inner; ++z) {
                const Index zb = row_b + z;
                jb.touch(zb, ctr);
                jc.touch(zc, ctr);
                acc = add(acc, mul(B[zb], C[zc], mod), mod);
                zc += tc_side;
            }
            A[za] = acc;
        }
    }
    ctr.scalar_macs += out.rows * out.cols * inner;
}

/// Restrict three framed pieces to the row, inner and column ranges they
/// share. Returns the trimmed triple, or nothing when some shared range is
/// empty and the combination contributes no term to the product.
inline std::optional<std::array<Framed, 3>> compatible_parts(const Framed& pa,
                                                             const Framed& pb,
                                                             const Framed& pc) {
    const std::uint64_t x_lo = std::max(pa.row0, pb.row0);
    const std::uint64_t x_hi = std::min(pa.row0 + pa.view.rows, pb.row0 + pb.view.rows);
    const std::uint64_t z_lo = std::max(pb.col0, pc.row0);
    const std::uint64_t z_hi = std::min(pb.col0 + pb.view.cols, pc.row0 + pc.view.rows);
    const std::uint64_t y_lo = std::max(pa.col0, pc.col0);
    const std::uint64_t y_hi = std::min(pa.col0 + pa.view.cols, pc.col0 + pc.view.cols);
    if (x_hi <= x_lo || z_hi <= z_lo || y_hi <= y_lo) return std::nullopt;

    auto cut = [](const Framed& f, std::uint64_t r_lo, std::uint64_t r_hi, std::uint64_t c_lo,
                  std::uint64_t c_hi) -> Framed {
        const Layout& lay = f.view.mat->layout();
        const std::uint64_t i = extract_i(lay, f.view.origin) + (r_lo - f.row0);
        const std::uint64_t j = extract_j(lay, f.view.origin) + (c_lo - f.col0);
        return {Sub{f.view.mat, encode(lay, i, j), r_hi - r_lo, c_hi - c_lo}, r_lo, c_lo};
    };
    return std::array<Framed, 3>{cut(pa, x_lo, x_hi, y_lo, y_hi),
                                 cut(pb, x_lo, x_hi, z_lo, z_hi),
                                 cut(pc, z_lo, z_hi, y_lo, y_hi)};
}

namespace detail {

inline void default_rec(Matrix& A, const Matrix& B, const Matrix& C, const Rect& ra,
                        const Rect& rb, const Rect& rc, std::uint64_t t, Counters& ctr) {
    ++ctr.recursive_calls;
    const std::uint64_t r = ra.rows, k = rb.cols, c = ra.cols;
    if (r <= t && k <= t && c <= t) {
        ++ctr.base_case_calls;
        kernel_encoded(A, B, C, ra, rb, rc, ctr);
        return;
    }
    // halve only the dimensions still above the tile side
    const std::uint64_t r1 = r > t ? (r + 1) / 2 : r, r2 = r - r1;
    const std::uint64_t c1 = c > t ? (c + 1) / 2 : c, c2 = c - c1;
    const std::uint64_t k1 = k > t ? (k + 1) / 2 : k, k2 = k - k1;
    for (int rh = 0; rh < 2; ++rh) {
        const std::uint64_t rr = rh ? r2 : r1, ro = rh ? r1 : 0;
        if (rr == 0) continue;
        for (int ch = 0; ch < 2; ++ch) {
            const std::uint64_t cc = ch ? c2 : c1, co = ch ? c1 : 0;
            if (cc == 0) continue;
            for (int kh = 0; kh < 2; ++kh) {
                const std::uint64_t kk = kh ? k2 : k1, ko = kh ? k1 : 0;
                if (kk == 0) continue;
                default_rec(A, B, C, Rect{ra.i + ro, ra.j + co, rr, cc},
                            Rect{rb.i + ro, rb.j + ko, rr, kk},
                            Rect{rc.i + ko, rc.j + co, kk, cc}, t, ctr);
            }
        }
    }
}

inline void oblivious_rec(const Aligned& ba, const Aligned& bb, const Aligned& bc,
                          const Framed& pa, const Framed& pb, const Framed& pc,
                          Counters& ctr) {
    ++ctr.recursive_calls;
    if (ba.elems == ba.mat->layout().tile) {
        base_case_mm(pa.view, pb.view, pc.view, ctr);
        return;
    }
    const std::array<Aligned, 4> qa = quadrants(ba), qb = quadrants(bb), qc = quadrants(bc);
    const Split sa = split_sub(ba, pa.view), sb = split_sub(bb, pb.view),
                sc = split_sub(bc, pc.view);
    auto framed = [](const Split& sp, const Framed& f, int qd) -> Framed {
        return {*sp.part[qd], f.row0 + ((qd & 2) ? sp.rows_north : 0),
                f.col0 + ((qd & 1) ? sp.cols_west : 0)};
    };
    // up to 64 combinations; empty parts and empty overlaps are skipped
    for (int t = 0; t < 4; ++t) {
        if (!sa.part[t]) continue;
        const Framed fa = framed(sa, pa, t);
        for (int u = 0; u < 4; ++u) {
            if (!sb.part[u]) continue;
            const Framed fb = framed(sb, pb, u);
            for (int v = 0; v < 4; ++v) {
                if (!sc.part[v]) continue;
                const Framed fc = framed(sc, pc, v);
                const auto trimmed = compatible_parts(fa, fb, fc);
                if (!trimmed) continue;
                oblivious_rec(qa[t], qb[u], qc[v], (*trimmed)[0], (*trimmed)[1],
                              (*trimmed)[2], ctr);
            }
        }
    }
}

} // namespace detail

/// Reference kernel: one encode-addressed triple loop over the views.
inline Counters mm_naive(const Problem& p) {
    check_problem(p);
    Counters ctr;
    if (p.a.rows == 0 || p.a.cols == 0 || p.b.cols == 0) return ctr;
    ++ctr.recursive_calls;
    ++ctr.base_case_calls;
    detail::kernel_encoded(*p.a.mat, *p.b.mat, *p.c.mat, detail::rect_of(p.a),
                           detail::rect_of(p.b), detail::rect_of(p.c), ctr);
    return ctr;
}

/// Divide and conquer on the views: split at ceil(dim / 2) until every
/// dimension is at most the output layout's tile side, then multiply the
/// leaf rectangles with encode-based addressing (leaves may be scattered).
inline Counters mm_default(const Problem& p) {
    check_problem(p);
    Counters ctr;
    if (p.a.rows == 0 || p.a.cols == 0 || p.b.cols == 0) return ctr;
    detail::default_rec(*p.a.mat, *p.b.mat, *p.c.mat, detail::rect_of(p.a),
                        detail::rect_of(p.b), detail::rect_of(p.c), p.a.mat->layout().t,
                        ctr);
    return ctr;
}

/// Divide and conquer on the containers: recurse through the aligned block
/// trees of A, B and C so every leaf is contained in a single tile and runs
/// with zero element-addressing conversions. Requires the three containers
/// to share layout parameters.
inline Counters mm_oblivious(const Problem& p) {
    check_problem(p);
    const Layout &la = p.a.mat->layout(), &lb = p.b.mat->layout(), &lc = p.c.mat->layout();
    if (la.n != lb.n || la.n != lc.n || la.t != lb.t || la.t != lc.t)
        throw std::logic_error("mm_oblivious: operands must share layout parameters");
    Counters ctr;
    if (p.a.rows == 0 || p.a.cols == 0 || p.b.cols == 0) return ctr;
    detail::oblivious_rec(Aligned{p.a.mat, 0, la.total}, Aligned{p.b.mat, 0, lb.total},
                          Aligned{p.c.mat, 0, lc.total}, Framed{p.a, 0, 0},
                          Framed{p.b, 0, 0}, Framed{p.c, 0, 0}, ctr);
    return ctr;
}

} // namespace mh
