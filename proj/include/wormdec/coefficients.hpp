// coefficients.hpp — scalar rate laws: k0, commutator amplitude, the Q/A..F family,
// Fock and position damping rates, semiclassical nucleation rate.

#pragma once

#include <optional>
#include <string>
#include <vector>

namespace wormdec {

// Physical inputs in Planck units. `k` is the squared proper separation on the
// inner three-manifold, `r0_sq_total` the throat scale R0^2.
struct WormholeParams {
    double k{0.0};
    double r0_sq_total{1.0};
    double e0{1.0};
    int n_baby{0};

    // Throws DomainError on 0 <= k < R0^2 violation, odd or negative N, e0 <= 0.
    void validate() const;
};

struct CoefficientSet {
    double q{0.0};
    double a{0.0};
    double b{0.0};
    double c{0.0};
    double d{0.0};
    double f{0.0};
    double k0{0.0};
    int n_baby{0};
};

struct SemiclassicalParams {
    double s_w{0.0};
    double alpha{0.0};
    double pi_alpha{1.0};
    double gamma_b{1.0};
    double mass{1.0};

    void validate() const;
};

double k0_of(const WormholeParams& params);
// Throat radius sqrt(R0^2 - k).
double r0_of(const WormholeParams& params);

// E0 (occupation + 1/2) sinh(2 k0)
double commutator_amplitude(const WormholeParams& params, double occupation);

CoefficientSet coefficient_set(const WormholeParams& params);
// Same family evaluated at an explicit k0; used when scanning k0 directly.
CoefficientSet coefficient_set_at(double k0, int n_baby, double e0);

// 8 (N + 1/2) sinh(2 k0)
double damping_rate_fock(const WormholeParams& params);

// 8 (N + 1/2) sinh(2|x - x'| / r0)
double damping_rate_position(int n_baby, double separation, double r0);

// Literal form sinh( [4 (x - x')^2 / r0^2]^{1/2} ); agrees with the above.
double sinh_of_root(double separation, double r0);

// 8 e^{-S_w} sinh(2|x - x'| / r0)
double semiclassical_rate(const SemiclassicalParams& sp, double separation, double r0);

// alpha^2 / (2 ln(1 + 1/pi(alpha))), read as the baby-universe temperature T_b.
double nucleation_rate(double alpha, double pi_alpha);

// gamma_b T_b sinh(|x - x'| m) (n + 1/2)^2
double phenomenological_rate(const SemiclassicalParams& sp, double t_b, double separation, int n);

// Chooses T_b from a direct value or from (alpha, pi(alpha)). When both are
// present the direct value is used and a warning is appended.
double resolve_temperature(std::optional<double> t_b, std::optional<double> alpha,
                           std::optional<double> pi_alpha, std::vector<std::string>& warnings);

}  // namespace wormdec
