#pragma once

#include <vector>

#include "mh/field.hpp"
#include "mh/layout.hpp"

namespace mh {

/// n x n element store permuted by the tiled Z order: cell (i, j) lives at
/// flat offset encode(layout, i, j). Any number of concurrent readers is
/// fine; a writer needs exclusive access.
class Matrix {
public:
    Matrix(const Layout& lay, const Modulus& mod)
        : lay_(lay), mod_(mod), data_(lay.total) {}

    const Layout& layout() const { return lay_; }
    const Modulus& modulus() const { return mod_; }

    Fp operator[](Index z) const { return data_[z]; }
    Fp& operator[](Index z) { return data_[z]; }

    Fp at(std::uint64_t i, std::uint64_t j) const { return data_[encode(lay_, i, j)]; }
    void set(std::uint64_t i, std::uint64_t j, Fp v) { data_[encode(lay_, i, j)] = v; }

    const std::vector<Fp>& cells() const { return data_; }
    std::vector<Fp>& cells() { return data_; }

    friend bool operator==(const Matrix& x, const Matrix& y) {
        return x.lay_.n == y.lay_.n && x.lay_.t == y.lay_.t && x.mod_.q == y.mod_.q &&
               x.data_ == y.data_;
    }

private:
    Layout lay_;
    Modulus mod_;
    std::vector<Fp> data_;
};

/// Dense row-major view used for ingestion and for checking results.
using Grid = std::vector<std::vector<Fp>>;

inline Matrix from_row_major(const Grid& rows, std::uint64_t t, const Modulus& mod) {
    const std::uint64_t n = rows.size();
    Layout lay(n, t); // rejects shapes that are not t * 2^m
    Matrix m(lay, mod);
    for (std::uint64_t i = 0; i < n; ++i) {
        if (rows[i].size() != n)
            throw std::invalid_argument("from_row_major: grid is not square");
        for (std::uint64_t j = 0; j < n; ++j) {
            if (rows[i][j].v >= mod.q)
                throw std::invalid_argument("from_row_major: residue out of range");
            m[encode(lay, i, j)] = rows[i][j];
        }
    }
    return m;
}

inline Grid to_row_major(const Matrix& m) {
    const Layout& lay = m.layout();
    Grid rows(lay.n, std::vector<Fp>(lay.n));
    for (std::uint64_t i = 0; i < lay.n; ++i)
        for (std::uint64_t j = 0; j < lay.n; ++j)
            rows[i][j] = m[encode(lay, i, j)];
    return rows;
}

} // namespace mh
