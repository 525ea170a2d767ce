#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include <mh/io.hpp>
#include <mh/layout.hpp>
#include <mh/matrix.hpp>

#include "oracles.hpp"

using mh::encode;
using mh::extract_i;
using mh::extract_j;
using mh::Fp;
using mh::Layout;
using mh::Matrix;
using mh::Modulus;

TEST_CASE("layout construction validates the shape", "[layout]") {
    CHECK_NOTHROW(Layout(8, 4));
    CHECK_NOTHROW(Layout(1, 1));
    CHECK_NOTHROW(Layout(24, 3)); // non-power-of-two tile side
    CHECK_THROWS_AS(Layout(8, 3), std::invalid_argument);  // 8/3 not integral
    CHECK_THROWS_AS(Layout(12, 4), std::invalid_argument); // 12/4 = 3 not a power of two
    CHECK_THROWS_AS(Layout(0, 1), std::invalid_argument);
    CHECK_THROWS_AS(Layout(8, 0), std::invalid_argument);
}

TEST_CASE("encode matches pinned values at n=8 t=4", "[layout]") {
    const Layout p(8, 4);
    CHECK(encode(p, 0, 0) == 0);
    CHECK(encode(p, 2, 5) == 25);
    CHECK(encode(p, 5, 6) == 54);
    CHECK(extract_i(p, 0) == 0);
    CHECK(extract_j(p, 0) == 0);
    CHECK(extract_i(p, 25) == 2);
    CHECK(extract_j(p, 25) == 5);
    CHECK(extract_i(p, 47) == 7);
    CHECK(extract_j(p, 47) == 3);
}

TEST_CASE("encode follows the recursive quadrant walk", "[layout]") {
    // independent construction: explicit Z walk over tiles, row-major inside
    for (const auto& [n, t] : std::vector<std::pair<std::uint64_t, std::uint64_t>>{
             {4, 1}, {8, 4}, {16, 4}, {16, 2}, {24, 3}, {32, 8}}) {
        const Layout p(n, t);
        const auto order = oracle::morton_hybrid_order(n, t);
        for (std::uint64_t z = 0; z < n * n; ++z) {
            const auto& [i, j] = order[z];
            REQUIRE(encode(p, i, j) == z);
            REQUIRE(extract_i(p, z) == i);
            REQUIRE(extract_j(p, z) == j);
        }
    }
}

TEST_CASE("encode is a bijection and extract inverts it", "[layout]") {
    for (std::uint64_t n : {4u, 8u, 16u, 64u, 256u}) {
        for (std::uint64_t t : {1u, 2u, 4u, 8u, 32u}) {
            if (t > n || (n / t) * t != n || !std::has_single_bit(n / t)) continue;
            const Layout p(n, t);
            std::vector<bool> seen(n * n, false);
            for (std::uint64_t i = 0; i < n; ++i)
                for (std::uint64_t j = 0; j < n; ++j) {
                    const auto z = encode(p, i, j);
                    REQUIRE(z < n * n);
                    REQUIRE(!seen[z]);
                    seen[z] = true;
                    REQUIRE(extract_i(p, z) == i);
                    REQUIRE(extract_j(p, z) == j);
                }
        }
    }
}

TEST_CASE("within a tile consecutive columns are adjacent in memory", "[layout]") {
    const Layout p(16, 4);
    for (std::uint64_t i = 0; i < 16; ++i)
        for (std::uint64_t j = 0; j < 16; ++j)
            if (p.tmod(j) < p.t - 1)
                REQUIRE(encode(p, i, j + 1) == encode(p, i, j) + 1);
}

TEST_CASE("each tile occupies one contiguous aligned range", "[layout]") {
    const Layout p(16, 4);
    for (std::uint64_t bi = 0; bi < 4; ++bi)
        for (std::uint64_t bj = 0; bj < 4; ++bj) {
            const auto base = encode(p, bi * 4, bj * 4);
            REQUIRE(base % p.tile == 0);
            for (std::uint64_t li = 0; li < 4; ++li)
                for (std::uint64_t lj = 0; lj < 4; ++lj) {
                    const auto z = encode(p, bi * 4 + li, bj * 4 + lj);
                    REQUIRE(z >= base);
                    REQUIRE(z < base + p.tile);
                }
        }
}

TEST_CASE("out-of-range coordinates and indices are rejected", "[layout]") {
    const Layout p(8, 4);
    CHECK_THROWS_AS(encode(p, 8, 0), std::out_of_range);
    CHECK_THROWS_AS(encode(p, 0, 8), std::out_of_range);
    CHECK_THROWS_AS(extract_i(p, 64), std::out_of_range);
    CHECK_THROWS_AS(extract_j(p, 64), std::out_of_range);
}

TEST_CASE("row-major ingestion round-trips", "[layout]") {
    const Modulus two(2);

    SECTION("single element") {
        const mh::Grid g{{Fp{1}}};
        const Matrix m = mh::from_row_major(g, 1, two);
        CHECK(m[0] == Fp{1});
        CHECK(mh::to_row_major(m) == g);
    }

    SECTION("identity permutes onto the diagonal slots") {
        mh::Grid g(8, std::vector<Fp>(8));
        for (int i = 0; i < 8; ++i) g[i][i] = Fp{1};
        const Matrix m = mh::from_row_major(g, 4, two);
        const Layout& p = m.layout();
        for (std::uint64_t z = 0; z < 64; ++z) {
            const bool diagonal = extract_i(p, z) == extract_j(p, z);
            CHECK(m[z] == (diagonal ? Fp{1} : Fp{0}));
        }
    }

    SECTION("random grid round-trips") {
        std::mt19937_64 eng(7);
        const mh::Grid g = oracle::random_grid(8, 2, eng);
        CHECK(mh::to_row_major(mh::from_row_major(g, 4, two)) == g);
    }

    SECTION("bad shapes are rejected") {
        mh::Grid g(12, std::vector<Fp>(12));
        CHECK_THROWS_AS(mh::from_row_major(g, 4, two), std::invalid_argument);
        mh::Grid ragged(4, std::vector<Fp>(4));
        ragged[2].resize(3);
        CHECK_THROWS_AS(mh::from_row_major(ragged, 4, two), std::invalid_argument);
        mh::Grid bad(4, std::vector<Fp>(4));
        bad[0][0] = Fp{2}; // not a residue mod 2
        CHECK_THROWS_AS(mh::from_row_major(bad, 4, two), std::invalid_argument);
    }
}

TEST_CASE("matrix text format round-trips and is exact", "[layout][io]") {
    std::mt19937_64 eng(11);
    const mh::Grid g = oracle::random_grid(8, 97, eng);
    const Matrix m = mh::from_row_major(g, 4, Modulus(97));

    std::ostringstream os;
    mh::save_matrix(os, m);
    const std::string text = os.str();
    CHECK(text.substr(0, 7) == "8 4 97\n");
    CHECK(text.back() == '\n');

    std::istringstream is(text);
    const Matrix back = mh::load_matrix(is);
    CHECK(back == m);
}

TEST_CASE("matrix text format rejects malformed input", "[layout][io]") {
    auto parse = [](const std::string& s) {
        std::istringstream is(s);
        return mh::load_matrix(is);
    };
    CHECK_THROWS_AS(parse(""), std::invalid_argument);
    CHECK_THROWS_AS(parse("2 1\n0 0\n0 0\n"), std::invalid_argument);   // truncated header
    CHECK_THROWS_AS(parse("2 1 4\n0 0\n0 0\n"), std::invalid_argument); // composite modulus
    CHECK_THROWS_AS(parse("2 1 2\n0 0\n0\n"), std::invalid_argument);   // missing residue
    CHECK_THROWS_AS(parse("2 1 2\n0 0\n0 2\n"), std::invalid_argument); // residue >= q
    CHECK_THROWS_AS(parse("2 1 2\n0 0\n0 -1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse("6 3 2\n"), std::invalid_argument); // 6/3 not a power of two
}
