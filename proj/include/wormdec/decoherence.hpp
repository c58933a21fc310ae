// decoherence.hpp — position-representation damping of two-Gaussian superpositions
// under the wormhole rate laws and the Brownian reference model.

#pragma once

#include "wormdec/fock.hpp"

#include <string>
#include <variant>
#include <vector>

namespace wormdec {

struct PositionGrid {
    double x_min{-1.0};
    double x_max{1.0};
    int n_points{16};

    void validate() const;
    double spacing() const { return (x_max - x_min) / (n_points - 1); }
    double x(int i) const { return x_min + i * spacing(); }
    int nearest_index(double x) const;
    // Same bounds with every interval halved (2n - 1 points); old nodes are kept.
    PositionGrid refined() const { return {x_min, x_max, 2 * n_points - 1}; }
};

struct GaussianPair {
    double x1{-1.0};
    double x2{1.0};
    double sigma{0.1};
    double weight1{0.7071067811865476};
    double weight2{0.7071067811865476};
};

struct PositionKernel {
    PositionGrid grid;
    Matrix values;
    double time{0.0};

    // sum_i rho(x_i, x_i) dx
    Complex trace() const;
};

// Eqs. for the damping of rho(x, x') at separation s = |x - x'|:
//   wormhole-N:              8 (N + 1/2) sinh(2 s / r0) (n + 1/2)^2
//   wormhole-semiclassical:  normalization gamma_b T_b sinh(m s) (n + 1/2)^2
//   brownian:                2 M gamma T s^2
struct WormholeNModel {
    int n_baby{0};
    double r0{1.0};
};

struct SemiclassicalModel {
    double gamma_b{1.0};
    double t_b{1.0};
    double mass{1.0};
    // 1 for the bare phenomenological law; 8 reproduces the e^{-S_w} form with m = 2/r0.
    double normalization{1.0};
};

struct BrownianModel {
    double mass{1.0};
    double gamma{1.0};
    double temperature{1.0};

    // gamma = eta / (2M)
    static BrownianModel from_viscosity(double eta, double mass, double temperature);
};

struct RateModel {
    std::variant<WormholeNModel, SemiclassicalModel, BrownianModel> law;
    int n_quanta{0};

    void validate() const;
    double rate(double separation) const;
    std::string kind() const;
    // "key=value;..." record of every parameter, for self-describing output.
    std::string describe() const;
};

PositionKernel prepare_pair(const GaussianPair& pair, const PositionGrid& grid);

// Symmetric, zero diagonal.
RealMatrix rate_field(const RateModel& model, const PositionGrid& grid);

PositionKernel evolve_kernel(const PositionKernel& kernel, const RealMatrix& field, double t);

struct PeakAmplitudes {
    double diag1{0.0};
    double diag2{0.0};
    double offdiag{0.0};
};

PeakAmplitudes peak_amplitudes(const PositionKernel& kernel, const GaussianPair& pair);

// Strict local maxima of |rho| (8-neighbourhood) above rel_threshold * max |rho|.
std::vector<std::pair<int, int>> local_maxima(const PositionKernel& kernel, double rel_threshold = 1e-3);

// 1/e time of the off-diagonal entry at this separation.
double decoherence_time(const RateModel& model, double separation);

// log2(rate(2s) / rate(s))
double doubling_exponent(const RateModel& model, double separation);

struct ComparisonRow {
    double separation{0.0};
    double wormhole_rate{0.0};
    double brownian_rate{0.0};
    double rate_ratio{0.0};
    double wormhole_time{0.0};
    double brownian_time{0.0};
    double wormhole_doubling{0.0};
    double brownian_doubling{0.0};
};

std::vector<ComparisonRow> compare_models(const RateModel& wormhole, const RateModel& brownian,
                                          const std::vector<double>& separations);

}  // namespace wormdec
