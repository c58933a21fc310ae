#include "wormdec/expm.hpp"

#include "wormdec/errors.hpp"

#include <cmath>

namespace wormdec {

namespace {

double norm1(const Matrix& m) {
    return m.cwiseAbs().colwise().sum().maxCoeff();
}

}  // namespace

Matrix expm_scaling_squaring(const Matrix& a, double tail_tol) {
    if (a.rows() != a.cols()) throw DimensionError("expm: matrix is not square");
    const Eigen::Index n = a.rows();
    if (n == 0) return a;
    if (!a.allFinite()) throw NumericError("expm: non-finite input");

    const double anorm = norm1(a);
    int squarings = 0;
    if (anorm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(anorm / 0.5)));
    const Matrix scaled = a / std::ldexp(1.0, squarings);

    Matrix sum = Matrix::Identity(n, n);
    Matrix term = Matrix::Identity(n, n);
    // ||scaled|| <= 1/2 bounds the neglected tail by twice the last term.
    for (int k = 1; k < 64; ++k) {
        term = (term * scaled) / static_cast<double>(k);
        sum += term;
        if (norm1(term) <= tail_tol * norm1(sum)) break;
    }
    for (int i = 0; i < squarings; ++i) sum = sum * sum;
    return sum;
}

}  // namespace wormdec
