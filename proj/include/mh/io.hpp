#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "mh/matrix.hpp"

namespace mh {

// Text fixture format:
//   line 1:  "N T q"
//   then N lines of N space-separated residues, row-major, newline-terminated.

inline void save_matrix(std::ostream& os, const Matrix& m) {
    const Layout& lay = m.layout();
    os << lay.n << ' ' << lay.t << ' ' << m.modulus().q << '\n';
    for (std::uint64_t i = 0; i < lay.n; ++i) {
        for (std::uint64_t j = 0; j < lay.n; ++j) {
            if (j) os << ' ';
            os << m.at(i, j).v;
        }
        os << '\n';
    }
}

inline Matrix load_matrix(std::istream& is) {
    std::uint64_t n = 0, t = 0;
    long long q = 0;
    if (!(is >> n >> t >> q))
        throw std::invalid_argument("matrix file: bad header, expected \"N T q\"");
    if (q < 2 || q >= (1ll << 31))
        throw std::invalid_argument("matrix file: modulus out of range");
    const Layout lay(n, t);
    const Modulus mod{std::uint32_t(q)};
    Matrix m(lay, mod);
    for (std::uint64_t i = 0; i < n; ++i) {
        for (std::uint64_t j = 0; j < n; ++j) {
            long long v = 0;
            if (!(is >> v))
                throw std::invalid_argument("matrix file: expected N*N residues");
            if (v < 0 || v >= q)
                throw std::invalid_argument("matrix file: residue out of range");
            m.set(i, j, Fp{std::uint32_t(v)});
        }
    }
    return m;
}

inline void save_matrix_file(const std::string& path, const Matrix& m) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    save_matrix(os, m);
    if (!os) throw std::runtime_error("write failed: " + path);
}

inline Matrix load_matrix_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open: " + path);
    return load_matrix(is);
}

} // namespace mh
