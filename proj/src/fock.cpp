#include "wormdec/fock.hpp"

#include "wormdec/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace wormdec {

namespace {

void require_dim(int dim, const char* what) {
    if (dim < kMinFockDim) {
        throw DimensionError(std::string(what) + ": dimension " + std::to_string(dim) +
                             " is below the minimum of " + std::to_string(kMinFockDim));
    }
}

void require_square(const Matrix& m, const char* what) {
    if (m.rows() != m.cols()) {
        throw DimensionError(std::string(what) + ": matrix is not square");
    }
}

}  // namespace

double hermiticity_defect(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

FockOperator::FockOperator(Matrix entries, int guard_band)
    : entries_(std::move(entries)), guard_band_(guard_band) {
    require_square(entries_, "FockOperator");
    require_dim(dim(), "FockOperator");
    if (guard_band_ < 0 || guard_band_ >= dim()) {
        throw DimensionError("FockOperator: guard band must lie in [0, dim)");
    }
}

FockOperator FockOperator::adjoint() const {
    return FockOperator(entries_.adjoint(), guard_band_);
}

FockOperator FockOperator::operator*(const FockOperator& rhs) const {
    if (rhs.dim() != dim()) throw DimensionError("FockOperator product: dimension mismatch");
    return FockOperator(entries_ * rhs.entries_, std::max(guard_band_, rhs.guard_band_));
}

DensityMatrix::DensityMatrix(Matrix entries) : entries_(std::move(entries)) {
    require_square(entries_, "DensityMatrix");
    require_dim(dim(), "DensityMatrix");
    hermiticity_defect_ = wormdec::hermiticity_defect(entries_);
    trace_ = entries_.trace();
}

DensityMatrix DensityMatrix::number_state(int dim, int n) {
    require_dim(dim, "number_state");
    if (n < 0 || n >= dim) throw DimensionError("number_state: level outside the truncated space");
    Matrix m = Matrix::Zero(dim, dim);
    m(n, n) = 1.0;
    return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::pure(const Eigen::VectorXcd& amplitudes) {
    require_dim(static_cast<int>(amplitudes.size()), "pure");
    const double norm = amplitudes.norm();
    if (!(norm > 0.0)) throw DomainError("pure: zero state vector");
    const Eigen::VectorXcd psi = amplitudes / norm;
    return DensityMatrix(psi * psi.adjoint());
}

DensityMatrix DensityMatrix::diagonal(const Eigen::VectorXd& probabilities) {
    require_dim(static_cast<int>(probabilities.size()), "diagonal");
    if ((probabilities.array() < 0.0).any()) throw DomainError("diagonal: negative probability");
    const double total = probabilities.sum();
    if (!(total > 0.0)) throw DomainError("diagonal: probabilities sum to zero");
    Matrix m = Matrix::Zero(probabilities.size(), probabilities.size());
    m.diagonal() = (probabilities / total).cast<Complex>();
    return DensityMatrix(std::move(m));
}

double DensityMatrix::min_eigenvalue() const {
    const Matrix herm = 0.5 * (entries_ + entries_.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(herm, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

FockOperator annihilation_op(int dim) {
    require_dim(dim, "annihilation_op");
    Matrix m = Matrix::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) m(n - 1, n) = std::sqrt(static_cast<double>(n));
    return FockOperator(std::move(m));
}

FockOperator creation_op(int dim) { return annihilation_op(dim).adjoint(); }

FockOperator number_op(int dim) {
    require_dim(dim, "number_op");
    Matrix m = Matrix::Zero(dim, dim);
    for (int n = 0; n < dim; ++n) m(n, n) = static_cast<double>(n);
    return FockOperator(std::move(m));
}

FockOperator o4_operator(double k0, int dim) {
    if (!(k0 >= 0.0)) throw DomainError("o4_operator: k0 must be nonnegative");
    require_dim(dim, "o4_operator");
    const Matrix c = annihilation_op(dim).entries();
    const Matrix cd = c.adjoint();
    const Matrix c2 = c * c;
    const Matrix cd2 = cd * cd;
    const Matrix num = cd * c;
    const Matrix id = Matrix::Identity(dim, dim);
    Matrix o4 = std::exp(4.0 * k0) * (c2 * cd2) +
                4.0 * std::exp(2.0 * k0) * (num * num + num + 0.25 * id) + cd2 * c2;
    return FockOperator(std::move(o4));
}

double o4_diagonal_entry(double k0, int n) {
    const double nn = n;
    return std::exp(4.0 * k0) * (nn + 1.0) * (nn + 2.0) +
           std::exp(2.0 * k0) * (2.0 * nn + 1.0) * (2.0 * nn + 1.0) + nn * (nn - 1.0);
}

Matrix o4_rho_apply(const Matrix& rho) {
    require_square(rho, "o4_rho_apply");
    require_dim(static_cast<int>(rho.rows()), "o4_rho_apply");
    // N is diagonal, so every term reduces to an elementwise weight on rho_ij.
    const Eigen::Index d = rho.rows();
    Matrix out(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index i = 0; i < d; ++i) {
            const double ni = static_cast<double>(i);
            const double nj = static_cast<double>(j);
            out(i, j) = 2.0 * (2.0 * ni * nj + ni + nj + 0.5) * rho(i, j);
        }
    }
    return out;
}

DensityMatrix o4_rho_apply(const DensityMatrix& rho) {
    return DensityMatrix(o4_rho_apply(rho.entries()));
}

}  // namespace wormdec
