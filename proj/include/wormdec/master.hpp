// master.hpp — reduced-density-matrix master equation for the matter field coupled to
// doubly connected wormholes: right-hand side, k -> 0 subtraction, diagonal damping
// channel, RK4 integration and two independent oracles.

#pragma once

#include "wormdec/coefficients.hpp"
#include "wormdec/fock.hpp"

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace wormdec {

// How the k -> 0 expression is removed from the right-hand side.
enum class Subtraction {
    none,              // raw right-hand side
    full,              // RHS(k0) - RHS(0)
    virtual_channels,  // remove only the k0 = 0 terms in c^2c†^2, c†^2c^2, c^2 rho c†^2, c†^2 rho c^2
};

std::string to_string(Subtraction s);
Subtraction subtraction_from_string(const std::string& name);

// A O4 rho + B rho O4 - 2[C c^2 rho c†^2 + D O4^rho(rho) + F c†^2 rho c^2] at a fixed k0.
// Operators are assembled once; apply() is then a handful of dense products.
class MasterGenerator {
public:
    MasterGenerator(const CoefficientSet& coeffs, double k0, int dim);

    Matrix apply(const Matrix& rho) const;
    // Only the four virtual-process channels of apply().
    Matrix apply_virtual_channels(const Matrix& rho) const;

    int dim() const noexcept { return dim_; }
    const CoefficientSet& coefficients() const noexcept { return coeffs_; }

private:
    CoefficientSet coeffs_;
    int dim_;
    Matrix o4_;
    Matrix c2_;
    Matrix cd2_;
    Matrix c2cd2_;
    Matrix cd2c2_;
};

// Full or subtracted right-hand side as a reusable linear map.
class MasterEquation {
public:
    MasterEquation(const WormholeParams& params, int dim, Subtraction subtraction);
    MasterEquation(double k0, int n_baby, double e0, int dim, Subtraction subtraction);

    Matrix operator()(const Matrix& rho) const;

    int dim() const noexcept { return at_k0_.dim(); }
    double k0() const noexcept { return at_k0_.coefficients().k0; }
    Subtraction subtraction() const noexcept { return subtraction_; }

private:
    MasterGenerator at_k0_;
    MasterGenerator at_zero_;
    Subtraction subtraction_;
};

Matrix rhs_full(const Matrix& rho, const CoefficientSet& coeffs, double k0);
Matrix rhs_subtracted(const Matrix& rho, const WormholeParams& params,
                      Subtraction variant = Subtraction::full);

struct DiagonalState {
    Eigen::VectorXd probs;
    double time{0.0};
};

// Gamma_n = 8 (N + 1/2) sinh(2 k0) (n + 1/2)^2 for n = 0..n_max
std::vector<double> diagonal_rates(const WormholeParams& params, int n_max);

// Closed form P_n(t) = P_n(0) exp(-Gamma_n t).
DiagonalState evolve_diagonal(const DiagonalState& state, const std::vector<double>& rates, double t);

struct EvolutionReport {
    double trace_drift{0.0};
    double hermiticity_defect{0.0};
    double guard_band_leakage{0.0};
    long step_count{0};
};

struct EvolveOptions {
    int guard_band{kDefaultGuardBand};
    double leakage_limit{1e-3};
};

// Total |population| on the top `guard_band` levels.
double guard_band_leakage(const Matrix& rho, int guard_band = kDefaultGuardBand);

// Classical fixed-step RK4. The step is t_final / ceil(t_final / dt).
std::pair<DensityMatrix, EvolutionReport> evolve_full(const DensityMatrix& rho0, const MasterEquation& eq,
                                                      double t_final, double dt,
                                                      const EvolveOptions& options = {});
std::pair<DensityMatrix, EvolutionReport> evolve_full(const DensityMatrix& rho0, const WormholeParams& params,
                                                      double t_final, double dt, Subtraction subtraction,
                                                      const EvolveOptions& options = {});

inline constexpr int kMaxOracleDim = 12;

// exp(t L) for the vectorized generator L (column-major vec).
class Propagator {
public:
    Propagator(Matrix map, int dim) : map_(std::move(map)), dim_(dim) {}

    Matrix apply(const Matrix& rho) const;
    const Matrix& map() const noexcept { return map_; }
    int dim() const noexcept { return dim_; }

private:
    Matrix map_;
    int dim_;
};

// dim^2 x dim^2 matrix of the linear map `eq`, built column by column from matrix units.
Matrix vectorized_generator(const MasterEquation& eq);

Propagator expm_oracle(const MasterEquation& eq, double t);
Propagator expm_oracle(const WormholeParams& params, int dim, double t, Subtraction subtraction);

// Brute-force Tr_b [H, [H, rho_Phi (x) |N><N|]] with H = g (c^2 + c†^2) (x) (a†^2 + a^2),
// least-squares decomposed on {c^2 rho c†^2, c†^2 rho c^2, N rho N, N rho, rho N, rho}.
struct TraceBDecomposition {
    Matrix output;
    std::array<Complex, 6> coefficients{};
    double output_norm{0.0};
    double residual_norm{0.0};
    double relative_residual{0.0};
    int basis_rank{0};
    bool rank_deficient{false};
    // relative_residual < 0.1
    bool structural_member{false};
    std::vector<std::string> warnings;
};

inline constexpr int kMaxTraceBDim = 10;

TraceBDecomposition trace_b_oracle(const DensityMatrix& rho_matter, int baby_dim, int n_baby_init,
                                   double coupling);

// Diagonal (n, n) entry of the subtracted right-hand side on |n><n| versus the
// printed damping law -P(N, k0)(n + 1/2)^2.
struct SubtractionResidual {
    double k0{0.0};
    int n_baby{0};
    int dim{0};
    int n{0};
    Subtraction variant{Subtraction::full};
    double rhs_entry{0.0};
    double expected{0.0};
    double relative_residual{0.0};
};

std::vector<SubtractionResidual> subtraction_residual_report(const std::vector<double>& k0_values,
                                                             const std::vector<int>& n_baby_values,
                                                             int dim, int n_max);

}  // namespace wormdec
