#include "wormdec/decoherence.hpp"

#include "wormdec/coefficients.hpp"
#include "wormdec/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace wormdec {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string num(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

}  // namespace

void PositionGrid::validate() const {
    if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_min < x_max)) {
        throw DomainError("position grid: x_min must be below x_max");
    }
    if (n_points < 16) throw DimensionError("position grid: n_points must be at least 16");
}

int PositionGrid::nearest_index(double x) const {
    const long i = std::lround((x - x_min) / spacing());
    return static_cast<int>(std::clamp<long>(i, 0, n_points - 1));
}

Complex PositionKernel::trace() const { return values.trace() * grid.spacing(); }

BrownianModel BrownianModel::from_viscosity(double eta, double mass, double temperature) {
    if (!(mass > 0.0)) throw DomainError("brownian model: mass must be positive");
    return {mass, eta / (2.0 * mass), temperature};
}

void RateModel::validate() const {
    if (n_quanta < 0) throw DomainError("rate model: n_quanta must be nonnegative");
    std::visit(overloaded{
                   [](const WormholeNModel& m) {
                       if (m.n_baby < 0 || m.n_baby % 2 != 0) {
                           throw DomainError("wormhole-n model: N must be an even nonnegative integer");
                       }
                       if (!(m.r0 > 0.0)) throw DomainError("wormhole-n model: r0 must be positive");
                   },
                   [](const SemiclassicalModel& m) {
                       if (!(m.gamma_b >= 0.0 && m.gamma_b <= 1.0)) {
                           throw DomainError("semiclassical model: gamma_b must lie in [0, 1]");
                       }
                       if (!(m.t_b > 0.0)) throw DomainError("semiclassical model: t_b must be positive");
                       if (!(m.mass > 0.0)) throw DomainError("semiclassical model: mass must be positive");
                       if (!(m.normalization > 0.0)) {
                           throw DomainError("semiclassical model: normalization must be positive");
                       }
                   },
                   [](const BrownianModel& m) {
                       if (!(m.mass > 0.0) || !(m.gamma > 0.0) || !(m.temperature > 0.0)) {
                           throw DomainError("brownian model: mass, gamma and temperature must be positive");
                       }
                   },
               },
               law);
}

double RateModel::rate(double separation) const {
    const double s = std::abs(separation);
    const double occ = (n_quanta + 0.5) * (n_quanta + 0.5);
    return std::visit(overloaded{
                          [&](const WormholeNModel& m) { return damping_rate_position(m.n_baby, s, m.r0) * occ; },
                          [&](const SemiclassicalModel& m) {
                              return m.normalization * m.gamma_b * m.t_b * std::sinh(m.mass * s) * occ;
                          },
                          [&](const BrownianModel& m) { return 2.0 * m.mass * m.gamma * m.temperature * s * s; },
                      },
                      law);
}

std::string RateModel::kind() const {
    return std::visit(overloaded{
                          [](const WormholeNModel&) { return std::string("wormhole-n"); },
                          [](const SemiclassicalModel&) { return std::string("wormhole-semiclassical"); },
                          [](const BrownianModel&) { return std::string("brownian"); },
                      },
                      law);
}

std::string RateModel::describe() const {
    std::ostringstream os;
    std::visit(overloaded{
                   [&](const WormholeNModel& m) { os << "N=" << m.n_baby << ";r0=" << num(m.r0); },
                   [&](const SemiclassicalModel& m) {
                       os << "gamma_b=" << num(m.gamma_b) << ";t_b=" << num(m.t_b) << ";mass=" << num(m.mass)
                          << ";normalization=" << num(m.normalization);
                   },
                   [&](const BrownianModel& m) {
                       os << "mass=" << num(m.mass) << ";gamma=" << num(m.gamma)
                          << ";temperature=" << num(m.temperature);
                   },
               },
               law);
    if (!std::holds_alternative<BrownianModel>(law)) os << ";n=" << n_quanta;
    return os.str();
}

PositionKernel prepare_pair(const GaussianPair& pair, const PositionGrid& grid) {
    grid.validate();
    if (!(pair.sigma > 0.0) || !std::isfinite(pair.x1) || !std::isfinite(pair.x2)) {
        throw DomainError("gaussian pair: centers must be finite and sigma positive");
    }
    const double lo = std::min(pair.x1, pair.x2) - 4.0 * pair.sigma;
    const double hi = std::max(pair.x1, pair.x2) + 4.0 * pair.sigma;
    if (lo < grid.x_min || hi > grid.x_max) {
        throw DomainError("gaussian pair: grid [" + num(grid.x_min) + ", " + num(grid.x_max) +
                          "] does not contain the 4-sigma window [" + num(lo) + ", " + num(hi) + "]");
    }

    const int n = grid.n_points;
    Eigen::VectorXcd psi(n);
    const double inv4s2 = 1.0 / (4.0 * pair.sigma * pair.sigma);
    for (int i = 0; i < n; ++i) {
        const double x = grid.x(i);
        const double d1 = x - pair.x1;
        const double d2 = x - pair.x2;
        psi[i] = pair.weight1 * std::exp(-d1 * d1 * inv4s2) + pair.weight2 * std::exp(-d2 * d2 * inv4s2);
    }
    const double norm_sq = psi.squaredNorm() * grid.spacing();
    if (!(norm_sq > 0.0)) throw DomainError("gaussian pair: state vanishes on the grid");
    psi /= std::sqrt(norm_sq);
    return {grid, psi * psi.adjoint(), 0.0};
}

RealMatrix rate_field(const RateModel& model, const PositionGrid& grid) {
    model.validate();
    grid.validate();
    const int n = grid.n_points;
    RealMatrix field(n, n);
    for (int j = 0; j < n; ++j) {
        field(j, j) = 0.0;
        for (int i = j + 1; i < n; ++i) {
            const double g = model.rate(grid.x(i) - grid.x(j));
            field(i, j) = g;
            field(j, i) = g;
        }
    }
    return field;
}

PositionKernel evolve_kernel(const PositionKernel& kernel, const RealMatrix& field, double t) {
    if (field.rows() != kernel.values.rows() || field.cols() != kernel.values.cols()) {
        throw DimensionError("evolve_kernel: rate field shape does not match the kernel");
    }
    if (!(t >= 0.0)) throw DomainError("evolve_kernel: t must be nonnegative");
    PositionKernel out{kernel.grid, kernel.values, kernel.time + t};
    out.values.array() *= (-t * field.array()).exp().cast<Complex>();
    return out;
}

PeakAmplitudes peak_amplitudes(const PositionKernel& kernel, const GaussianPair& pair) {
    const int i1 = kernel.grid.nearest_index(pair.x1);
    const int i2 = kernel.grid.nearest_index(pair.x2);
    return {std::abs(kernel.values(i1, i1)), std::abs(kernel.values(i2, i2)), std::abs(kernel.values(i1, i2))};
}

std::vector<std::pair<int, int>> local_maxima(const PositionKernel& kernel, double rel_threshold) {
    const RealMatrix mag = kernel.values.cwiseAbs();
    const double floor = rel_threshold * mag.maxCoeff();
    const int n = static_cast<int>(mag.rows());
    std::vector<std::pair<int, int>> peaks;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double v = mag(i, j);
            if (v <= floor) continue;
            bool is_max = true;
            for (int di = -1; di <= 1 && is_max; ++di) {
                for (int dj = -1; dj <= 1; ++dj) {
                    if (di == 0 && dj == 0) continue;
                    const int a = i + di;
                    const int b = j + dj;
                    if (a < 0 || b < 0 || a >= n || b >= n) continue;
                    if (mag(a, b) >= v) {
                        is_max = false;
                        break;
                    }
                }
            }
            if (is_max) peaks.emplace_back(i, j);
        }
    }
    return peaks;
}

double decoherence_time(const RateModel& model, double separation) {
    model.validate();
    const double g = model.rate(separation);
    if (!(g > 0.0)) {
        throw DomainError("decoherence_time: rate vanishes at separation " + num(separation));
    }
    return 1.0 / g;
}

double doubling_exponent(const RateModel& model, double separation) {
    return std::log2(model.rate(2.0 * separation) / model.rate(separation));
}

std::vector<ComparisonRow> compare_models(const RateModel& wormhole, const RateModel& brownian,
                                          const std::vector<double>& separations) {
    wormhole.validate();
    brownian.validate();
    if (!std::is_sorted(separations.begin(), separations.end())) {
        throw DomainError("compare_models: separations must be sorted ascending");
    }
    std::vector<ComparisonRow> rows;
    rows.reserve(separations.size());
    for (const double s : separations) {
        if (!(s > 0.0)) throw DomainError("compare_models: separations must be positive");
        ComparisonRow r;
        r.separation = s;
        r.wormhole_rate = wormhole.rate(s);
        r.brownian_rate = brownian.rate(s);
        r.rate_ratio = r.wormhole_rate / r.brownian_rate;
        r.wormhole_time = 1.0 / r.wormhole_rate;
        r.brownian_time = 1.0 / r.brownian_rate;
        r.wormhole_doubling = doubling_exponent(wormhole, s);
        r.brownian_doubling = doubling_exponent(brownian, s);
        rows.push_back(r);
    }
    return rows;
}

}  // namespace wormdec
