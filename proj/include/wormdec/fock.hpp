// fock.hpp — truncated single-mode Fock space: ladder operators, O4 and the O4^rho map

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>

namespace wormdec {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr int kMinFockDim = 4;
inline constexpr int kDefaultGuardBand = 2;

// Dense operator on the number basis |0>..|dim-1>. The top `guard_band` levels
// carry truncation artifacts of second-order ladder products.
class FockOperator {
public:
    FockOperator(Matrix entries, int guard_band = kDefaultGuardBand);

    int dim() const noexcept { return static_cast<int>(entries_.rows()); }
    int guard_band() const noexcept { return guard_band_; }
    const Matrix& entries() const noexcept { return entries_; }

    // Highest level index for which second-order products are exact.
    int last_exact_level() const noexcept { return dim() - 1 - guard_band_; }
    bool in_guard_band(int n) const noexcept { return n > last_exact_level(); }

    FockOperator adjoint() const;

    FockOperator operator*(const FockOperator& rhs) const;

private:
    Matrix entries_;
    int guard_band_;
};

// Density matrix with diagnostics evaluated from its current entries.
class DensityMatrix {
public:
    explicit DensityMatrix(Matrix entries);

    static DensityMatrix number_state(int dim, int n);
    // Normalized |psi><psi| from (possibly unnormalized) amplitudes.
    static DensityMatrix pure(const Eigen::VectorXcd& amplitudes);
    // Diagonal mixture; probabilities are normalized to unit trace.
    static DensityMatrix diagonal(const Eigen::VectorXd& probabilities);

    int dim() const noexcept { return static_cast<int>(entries_.rows()); }
    const Matrix& entries() const noexcept { return entries_; }

    // max_ij |rho_ij - conj(rho_ji)|
    double hermiticity_defect() const noexcept { return hermiticity_defect_; }
    Complex trace_value() const noexcept { return trace_; }
    // Smallest eigenvalue of the hermitian part.
    double min_eigenvalue() const;

private:
    Matrix entries_;
    double hermiticity_defect_;
    Complex trace_;
};

double hermiticity_defect(const Matrix& m);

FockOperator annihilation_op(int dim);
FockOperator creation_op(int dim);
FockOperator number_op(int dim);

// e^{4k0} c^2 c†^2 + 4[(c†c)^2 + c†c + 1/4] e^{2k0} + c†^2 c^2, built from the
// truncated ladder matrices.
FockOperator o4_operator(double k0, int dim);

// Closed form of the O4 diagonal on the untruncated space.
double o4_diagonal_entry(double k0, int n);

// rho -> 2(2 N rho N + N rho + rho N + rho/2), N = c†c.
Matrix o4_rho_apply(const Matrix& rho);
DensityMatrix o4_rho_apply(const DensityMatrix& rho);

}  // namespace wormdec
