#include "wormdec/coefficients.hpp"

#include "wormdec/errors.hpp"

#include <cmath>

namespace wormdec {

void WormholeParams::validate() const {
    if (!std::isfinite(k) || !std::isfinite(r0_sq_total) || !std::isfinite(e0)) {
        throw DomainError("wormhole parameters must be finite");
    }
    if (k < 0.0) throw DomainError("k must be nonnegative");
    if (!(r0_sq_total > 0.0)) throw DomainError("r0_sq must be positive");
    if (!(k < r0_sq_total)) {
        throw DomainError("k0 domain: k must be strictly less than r0_sq so that k0 and r0 are real");
    }
    if (!(e0 > 0.0)) throw DomainError("e0 must be positive");
    if (n_baby < 0 || n_baby % 2 != 0) {
        throw DomainError("N must be an even nonnegative integer (N = 0, 2, 4, ...)");
    }
}

void SemiclassicalParams::validate() const {
    if (!(gamma_b >= 0.0 && gamma_b <= 1.0)) throw DomainError("gamma_b must lie in [0, 1]");
    if (!(pi_alpha > 0.0)) throw DomainError("pi_alpha must be positive");
    if (!(mass > 0.0)) throw DomainError("mass must be positive");
}

double k0_of(const WormholeParams& params) {
    params.validate();
    return std::sqrt(2.0 * params.k / (params.r0_sq_total - params.k));
}

double r0_of(const WormholeParams& params) {
    params.validate();
    return std::sqrt(params.r0_sq_total - params.k);
}

double commutator_amplitude(const WormholeParams& params, double occupation) {
    if (!(occupation >= 0.0)) throw DomainError("commutator_amplitude: occupation must be nonnegative");
    const double k0 = k0_of(params);
    return params.e0 * (occupation + 0.5) * std::sinh(2.0 * k0);
}

CoefficientSet coefficient_set_at(double k0, int n_baby, double e0) {
    if (!(k0 >= 0.0)) throw DomainError("coefficient_set: k0 must be nonnegative");
    if (n_baby < 0 || n_baby % 2 != 0) throw DomainError("coefficient_set: N must be even and nonnegative");
    const double n = n_baby;
    const double ch = std::cosh(2.0 * k0);
    const double q = e0 * std::exp(-2.0 * k0) * (2.0 * n + 1.0) * std::sinh(2.0 * k0);

    CoefficientSet s;
    s.k0 = k0;
    s.n_baby = n_baby;
    s.q = q;
    s.a = (n + 1.0) * (n + 2.0) * std::exp(-4.0 * k0) + n * (n + 1.0) + 0.25 * std::exp(-2.0 * k0) + 2.0 * q;
    s.b = s.a - 2.0 * q;
    s.c = (n + 1.0) * (n + 2.0) + (n * (n + 1.0) + 0.25) * ch + q;
    s.d = 2.0 * (n + 1.0) * (n + 1.0) * ch + 0.25 + q;
    s.f = ((n + 1.0) * (n + 2.0) + 0.25) * ch + n * (n + 1.0) + q;
    return s;
}

CoefficientSet coefficient_set(const WormholeParams& params) {
    return coefficient_set_at(k0_of(params), params.n_baby, params.e0);
}

double damping_rate_fock(const WormholeParams& params) {
    const double k0 = k0_of(params);
    return 8.0 * (params.n_baby + 0.5) * std::sinh(2.0 * k0);
}

double damping_rate_position(int n_baby, double separation, double r0) {
    if (!(r0 > 0.0)) throw DomainError("damping_rate_position: r0 must be positive");
    return 8.0 * (n_baby + 0.5) * std::sinh(2.0 * std::abs(separation) / r0);
}

double sinh_of_root(double separation, double r0) {
    if (!(r0 > 0.0)) throw DomainError("sinh_of_root: r0 must be positive");
    return std::sinh(std::sqrt(4.0 * separation * separation / (r0 * r0)));
}

double semiclassical_rate(const SemiclassicalParams& sp, double separation, double r0) {
    if (!(r0 > 0.0)) throw DomainError("semiclassical_rate: r0 must be positive");
    return 8.0 * std::exp(-sp.s_w) * std::sinh(2.0 * std::abs(separation) / r0);
}

double nucleation_rate(double alpha, double pi_alpha) {
    if (!(pi_alpha > 0.0)) throw DomainError("nucleation_rate: pi_alpha must be positive");
    return alpha * alpha / (2.0 * std::log1p(1.0 / pi_alpha));
}

double phenomenological_rate(const SemiclassicalParams& sp, double t_b, double separation, int n) {
    const double occ = n + 0.5;
    return sp.gamma_b * t_b * std::sinh(std::abs(separation) * sp.mass) * occ * occ;
}

double resolve_temperature(std::optional<double> t_b, std::optional<double> alpha,
                           std::optional<double> pi_alpha, std::vector<std::string>& warnings) {
    const bool derivable = alpha.has_value() && pi_alpha.has_value();
    if (t_b) {
        if (derivable) {
            warnings.emplace_back("both t_b and (alpha, pi_alpha) given; using t_b = " +
                                  std::to_string(*t_b) + " and ignoring the nucleation rate " +
                                  std::to_string(nucleation_rate(*alpha, *pi_alpha)));
        }
        return *t_b;
    }
    if (!derivable) throw DomainError("temperature: give t_b or both alpha and pi_alpha");
    return nucleation_rate(*alpha, *pi_alpha);
}

}  // namespace wormdec
