// support.hpp — fixtures shared by the unit tests: seeded random states and
// ladder matrices written out entry by entry, independent of the library's.

#pragma once

#include "wormdec/fock.hpp"

#include <cmath>
#include <random>

namespace wormdec::test {

inline Matrix random_hermitian(int dim, std::mt19937& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix m(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) m(i, j) = Complex(g(rng), g(rng));
    }
    return (m + m.adjoint()) / 2.0;
}

// Unit-trace positive state: M M† / tr.
inline Matrix random_density(int dim, std::mt19937& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix m(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) m(i, j) = Complex(g(rng), g(rng));
    }
    Matrix rho = m * m.adjoint();
    return rho / rho.trace();
}

// <n-1| c |n> = sqrt(n)
inline Matrix ladder_down(int dim) {
    Matrix c = Matrix::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) c(n - 1, n) = std::sqrt(static_cast<double>(n));
    return c;
}

inline Matrix ladder_up(int dim) { return ladder_down(dim).transpose(); }

inline Matrix unit(int dim, int i, int j) {
    Matrix m = Matrix::Zero(dim, dim);
    m(i, j) = 1.0;
    return m;
}

inline double rel_diff(const Matrix& a, const Matrix& b) {
    const double scale = std::max(a.norm(), b.norm());
    return scale == 0.0 ? 0.0 : (a - b).norm() / scale;
}

}  // namespace wormdec::test
