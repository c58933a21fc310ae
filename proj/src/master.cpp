#include "wormdec/master.hpp"

#include "wormdec/errors.hpp"
#include "wormdec/expm.hpp"

#include <Eigen/QR>

#include <cmath>
#include <string>

namespace wormdec {

std::string to_string(Subtraction s) {
    switch (s) {
        case Subtraction::none: return "none";
        case Subtraction::full: return "full";
        case Subtraction::virtual_channels: return "virtual";
    }
    return "unknown";
}

Subtraction subtraction_from_string(const std::string& name) {
    if (name == "none") return Subtraction::none;
    if (name == "full") return Subtraction::full;
    if (name == "virtual") return Subtraction::virtual_channels;
    throw std::invalid_argument("unknown subtraction '" + name + "' (expected none, full or virtual)");
}

MasterGenerator::MasterGenerator(const CoefficientSet& coeffs, double k0, int dim)
    : coeffs_(coeffs), dim_(dim) {
    if (std::abs(coeffs.k0 - k0) > 1e-12 * std::max(1.0, k0)) {
        throw DomainError("master equation: coefficients were computed at k0 = " + std::to_string(coeffs.k0) +
                          " but O4 is requested at k0 = " + std::to_string(k0));
    }
    o4_ = o4_operator(k0, dim).entries();
    const Matrix c = annihilation_op(dim).entries();
    c2_ = c * c;
    cd2_ = c2_.adjoint();
    c2cd2_ = c2_ * cd2_;
    cd2c2_ = cd2_ * c2_;
}

Matrix MasterGenerator::apply(const Matrix& rho) const {
    if (rho.rows() != dim_ || rho.cols() != dim_) {
        throw DimensionError("master equation: state dimension " + std::to_string(rho.rows()) +
                             " does not match generator dimension " + std::to_string(dim_));
    }
    Matrix out = coeffs_.a * (o4_ * rho);
    out.noalias() += coeffs_.b * (rho * o4_);
    out.noalias() -= (2.0 * coeffs_.c) * (c2_ * rho * cd2_);
    out -= (2.0 * coeffs_.d) * o4_rho_apply(rho);
    out.noalias() -= (2.0 * coeffs_.f) * (cd2_ * rho * c2_);
    return out;
}

Matrix MasterGenerator::apply_virtual_channels(const Matrix& rho) const {
    if (rho.rows() != dim_ || rho.cols() != dim_) {
        throw DimensionError("master equation: state dimension mismatch");
    }
    // c^2c†^2 enters O4 with weight e^{4k0}; c†^2c^2 with weight 1.
    const double w = std::exp(4.0 * coeffs_.k0);
    const Matrix left = w * c2cd2_ + cd2c2_;
    Matrix out = coeffs_.a * (left * rho);
    out.noalias() += coeffs_.b * (rho * left);
    out.noalias() -= (2.0 * coeffs_.c) * (c2_ * rho * cd2_);
    out.noalias() -= (2.0 * coeffs_.f) * (cd2_ * rho * c2_);
    return out;
}

MasterEquation::MasterEquation(const WormholeParams& params, int dim, Subtraction subtraction)
    : MasterEquation(k0_of(params), params.n_baby, params.e0, dim, subtraction) {}

MasterEquation::MasterEquation(double k0, int n_baby, double e0, int dim, Subtraction subtraction)
    : at_k0_(coefficient_set_at(k0, n_baby, e0), k0, dim),
      at_zero_(coefficient_set_at(0.0, n_baby, e0), 0.0, dim),
      subtraction_(subtraction) {}

Matrix MasterEquation::operator()(const Matrix& rho) const {
    switch (subtraction_) {
        case Subtraction::none: return at_k0_.apply(rho);
        case Subtraction::full: return at_k0_.apply(rho) - at_zero_.apply(rho);
        case Subtraction::virtual_channels: return at_k0_.apply(rho) - at_zero_.apply_virtual_channels(rho);
    }
    throw std::logic_error("unhandled subtraction variant");
}

Matrix rhs_full(const Matrix& rho, const CoefficientSet& coeffs, double k0) {
    return MasterGenerator(coeffs, k0, static_cast<int>(rho.rows())).apply(rho);
}

Matrix rhs_subtracted(const Matrix& rho, const WormholeParams& params, Subtraction variant) {
    return MasterEquation(params, static_cast<int>(rho.rows()), variant)(rho);
}

std::vector<double> diagonal_rates(const WormholeParams& params, int n_max) {
    if (n_max < 0) throw DimensionError("diagonal_rates: n_max must be nonnegative");
    const double p = damping_rate_fock(params);
    std::vector<double> rates(static_cast<std::size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n) rates[static_cast<std::size_t>(n)] = p * (n + 0.5) * (n + 0.5);
    return rates;
}

DiagonalState evolve_diagonal(const DiagonalState& state, const std::vector<double>& rates, double t) {
    if (static_cast<std::size_t>(state.probs.size()) != rates.size()) {
        throw DimensionError("evolve_diagonal: " + std::to_string(rates.size()) + " rates for a state of length " +
                             std::to_string(state.probs.size()));
    }
    if (!(t >= 0.0)) throw DomainError("evolve_diagonal: t must be nonnegative");
    DiagonalState out{state.probs, state.time + t};
    for (Eigen::Index n = 0; n < out.probs.size(); ++n) {
        out.probs[n] *= std::exp(-rates[static_cast<std::size_t>(n)] * t);
    }
    return out;
}

double guard_band_leakage(const Matrix& rho, int guard_band) {
    double total = 0.0;
    for (Eigen::Index n = std::max<Eigen::Index>(0, rho.rows() - guard_band); n < rho.rows(); ++n) {
        total += std::abs(rho(n, n));
    }
    return total;
}

std::pair<DensityMatrix, EvolutionReport> evolve_full(const DensityMatrix& rho0, const MasterEquation& eq,
                                                      double t_final, double dt, const EvolveOptions& options) {
    if (!(t_final > 0.0) || !(dt > 0.0)) throw DomainError("evolve_full: t_final and dt must be positive");
    if (dt > t_final) throw DomainError("evolve_full: dt exceeds t_final");
    if (rho0.dim() != eq.dim()) throw DimensionError("evolve_full: state and generator dimensions differ");

    const long steps = static_cast<long>(std::ceil(t_final / dt - 1e-9));
    const double h = t_final / static_cast<double>(steps);

    Matrix rho = rho0.entries();
    auto check = [&](long step) {
        if (!rho.allFinite()) {
            throw NumericError("evolve_full: non-finite entries at step " + std::to_string(step));
        }
        const double leak = guard_band_leakage(rho, options.guard_band);
        if (leak > options.leakage_limit) {
            throw TruncationOverflow("evolve_full: guard-band population " + std::to_string(leak) +
                                     " exceeds " + std::to_string(options.leakage_limit) + " at step " +
                                     std::to_string(step));
        }
    };
    check(0);
    for (long step = 1; step <= steps; ++step) {
        const Matrix k1 = eq(rho);
        const Matrix k2 = eq(rho + (0.5 * h) * k1);
        const Matrix k3 = eq(rho + (0.5 * h) * k2);
        const Matrix k4 = eq(rho + h * k3);
        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        check(step);
    }

    EvolutionReport report;
    report.trace_drift = (rho.trace() - rho0.trace_value()).real();
    report.hermiticity_defect = hermiticity_defect(rho);
    report.guard_band_leakage = guard_band_leakage(rho, options.guard_band);
    report.step_count = steps;
    return {DensityMatrix(std::move(rho)), report};
}

std::pair<DensityMatrix, EvolutionReport> evolve_full(const DensityMatrix& rho0, const WormholeParams& params,
                                                      double t_final, double dt, Subtraction subtraction,
                                                      const EvolveOptions& options) {
    const MasterEquation eq(params, rho0.dim(), subtraction);
    return evolve_full(rho0, eq, t_final, dt, options);
}

Matrix Propagator::apply(const Matrix& rho) const {
    if (rho.rows() != dim_ || rho.cols() != dim_) throw DimensionError("Propagator: dimension mismatch");
    const Eigen::Map<const Eigen::VectorXcd> vec(rho.data(), rho.size());
    const Eigen::VectorXcd out = map_ * vec;
    return Eigen::Map<const Matrix>(out.data(), dim_, dim_);
}

Matrix vectorized_generator(const MasterEquation& eq) {
    const int d = eq.dim();
    if (d > kMaxOracleDim) {
        throw DimensionError("expm_oracle: dimension " + std::to_string(d) + " exceeds " +
                             std::to_string(kMaxOracleDim));
    }
    Matrix gen(d * d, d * d);
    Matrix unit = Matrix::Zero(d, d);
    for (int j = 0; j < d; ++j) {
        for (int i = 0; i < d; ++i) {
            unit(i, j) = 1.0;
            const Matrix image = eq(unit);
            gen.col(i + j * d) = Eigen::Map<const Eigen::VectorXcd>(image.data(), image.size());
            unit(i, j) = 0.0;
        }
    }
    return gen;
}

Propagator expm_oracle(const MasterEquation& eq, double t) {
    const Matrix gen = vectorized_generator(eq);
    return Propagator(expm_scaling_squaring(t * gen, 1e-13), eq.dim());
}

Propagator expm_oracle(const WormholeParams& params, int dim, double t, Subtraction subtraction) {
    if (dim > kMaxOracleDim) {
        throw DimensionError("expm_oracle: dimension " + std::to_string(dim) + " exceeds " +
                             std::to_string(kMaxOracleDim));
    }
    return expm_oracle(MasterEquation(params, dim, subtraction), t);
}

TraceBDecomposition trace_b_oracle(const DensityMatrix& rho_matter, int baby_dim, int n_baby_init,
                                   double coupling) {
    const int md = rho_matter.dim();
    if (md > kMaxTraceBDim || baby_dim > kMaxTraceBDim) {
        throw DimensionError("trace_b_oracle: matter and baby dimensions must not exceed " +
                             std::to_string(kMaxTraceBDim));
    }
    if (baby_dim < kMinFockDim) throw DimensionError("trace_b_oracle: baby dimension below minimum");
    if (n_baby_init < 0 || n_baby_init % 2 != 0) throw DomainError("trace_b_oracle: N must be even and nonnegative");
    if (n_baby_init + 2 >= baby_dim) {
        throw DimensionError("trace_b_oracle: N + 2 must lie inside the baby-universe truncation");
    }

    const Matrix c = annihilation_op(md).entries();
    const Matrix cd = c.adjoint();
    const Matrix a = annihilation_op(baby_dim).entries();
    const Matrix ad = a.adjoint();
    const Matrix h_matter = coupling * (c * c + cd * cd);
    const Matrix a_baby = ad * ad + a * a;

    // Joint index: matter-major, |m> (x) |b> -> m * baby_dim + b.
    auto kron = [](const Matrix& x, const Matrix& y) {
        Matrix out(x.rows() * y.rows(), x.cols() * y.cols());
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
            for (Eigen::Index j = 0; j < x.cols(); ++j) {
                out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
            }
        }
        return out;
    };
    Matrix baby_state = Matrix::Zero(baby_dim, baby_dim);
    baby_state(n_baby_init, n_baby_init) = 1.0;
    const Matrix rho = kron(rho_matter.entries(), baby_state);
    const Matrix h = kron(h_matter, a_baby);
    const Matrix inner = h * rho - rho * h;
    const Matrix dbl = h * inner - inner * h;

    Matrix reduced = Matrix::Zero(md, md);
    for (int i = 0; i < md; ++i) {
        for (int j = 0; j < md; ++j) {
            Complex s = 0.0;
            for (int b = 0; b < baby_dim; ++b) s += dbl(i * baby_dim + b, j * baby_dim + b);
            reduced(i, j) = s;
        }
    }

    const Matrix& r = rho_matter.entries();
    const Matrix num = cd * c;
    const std::array<Matrix, 6> basis{c * c * r * cd * cd, cd * cd * r * c * c, num * r * num, num * r, r * num, r};
    Matrix design(md * md, 6);
    for (int k = 0; k < 6; ++k) {
        design.col(k) = Eigen::Map<const Eigen::VectorXcd>(basis[static_cast<std::size_t>(k)].data(), md * md);
    }
    const Eigen::Map<const Eigen::VectorXcd> target(reduced.data(), md * md);

    TraceBDecomposition out;
    out.output = reduced;
    out.output_norm = reduced.norm();
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(design);
    cod.setThreshold(1e-12);
    const Eigen::VectorXcd coeffs = cod.solve(target);
    for (int k = 0; k < 6; ++k) out.coefficients[static_cast<std::size_t>(k)] = coeffs[k];
    out.residual_norm = (design * coeffs - target).norm();
    out.relative_residual = out.output_norm > 0.0 ? out.residual_norm / out.output_norm : 0.0;
    out.basis_rank = static_cast<int>(cod.rank());
    out.rank_deficient = out.basis_rank < 6;
    if (out.rank_deficient) {
        out.warnings.push_back("decomposition basis has rank " + std::to_string(out.basis_rank) +
                               " of 6 for this state; coefficients are the minimum-norm solution");
    }
    out.structural_member = out.relative_residual < 0.1;
    return out;
}

std::vector<SubtractionResidual> subtraction_residual_report(const std::vector<double>& k0_values,
                                                             const std::vector<int>& n_baby_values,
                                                             int dim, int n_max) {
    if (n_max >= dim) throw DimensionError("subtraction_residual_report: n_max must be below dim");
    std::vector<SubtractionResidual> rows;
    for (const double k0 : k0_values) {
        for (const int nb : n_baby_values) {
            const double p = 8.0 * (nb + 0.5) * std::sinh(2.0 * k0);
            for (const Subtraction variant : {Subtraction::full, Subtraction::virtual_channels}) {
                const MasterEquation eq(k0, nb, 1.0, dim, variant);
                for (int n = 0; n <= n_max; ++n) {
                    const Matrix out = eq(DensityMatrix::number_state(dim, n).entries());
                    SubtractionResidual row;
                    row.k0 = k0;
                    row.n_baby = nb;
                    row.dim = dim;
                    row.n = n;
                    row.variant = variant;
                    row.rhs_entry = out(n, n).real();
                    row.expected = -p * (n + 0.5) * (n + 0.5);
                    row.relative_residual = std::abs(row.rhs_entry - row.expected) / std::abs(row.expected);
                    rows.push_back(row);
                }
            }
        }
    }
    return rows;
}

}  // namespace wormdec
