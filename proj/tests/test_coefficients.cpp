// test_coefficients.cpp — scalar rate laws, checked against arithmetic done here by hand

#include "wormdec/coefficients.hpp"
#include "wormdec/errors.hpp"

#include <doctest.h>

#include <array>
#include <cmath>

using namespace wormdec;
using doctest::Approx;

namespace {

WormholeParams at_k0(double k0, int n = 0, double e0 = 1.0) {
    // k0^2 = 2k / (R0^2 - k) with R0^2 = 3  =>  k = 3 k0^2 / (2 + k0^2)
    return {3.0 * k0 * k0 / (2.0 + k0 * k0), 3.0, e0, n};
}

}  // namespace

TEST_CASE("k0 and r0") {
    CHECK(k0_of({0.0, 3.0, 1.0, 0}) == 0.0);
    CHECK(k0_of({1.0, 3.0, 1.0, 0}) == Approx(1.0).epsilon(1e-15));
    CHECK(k0_of({2.0, 3.0, 1.0, 0}) == Approx(2.0).epsilon(1e-15));
    CHECK(r0_of({2.0, 3.0, 1.0, 0}) == Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(k0_of({3.0, 3.0, 1.0, 0}), DomainError);
    CHECK_THROWS_AS(k0_of({-0.1, 3.0, 1.0, 0}), DomainError);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS((WormholeParams{0.5, 3.0, 1.0, 1}.validate()), DomainError);
    CHECK_THROWS_AS((WormholeParams{0.5, 3.0, 1.0, -2}.validate()), DomainError);
    CHECK_THROWS_AS((WormholeParams{0.5, 3.0, 0.0, 0}.validate()), DomainError);
    CHECK_NOTHROW((WormholeParams{0.5, 3.0, 1.0, 4}.validate()));
    SemiclassicalParams sp;
    sp.gamma_b = 1.5;
    CHECK_THROWS_AS(sp.validate(), DomainError);
    sp.gamma_b = 0.5;
    sp.pi_alpha = 0.0;
    CHECK_THROWS_AS(sp.validate(), DomainError);
}

TEST_CASE("commutator amplitude") {
    CHECK(commutator_amplitude({0.0, 3.0, 1.0, 0}, 3.0) == 0.0);
    CHECK(commutator_amplitude(at_k0(1.0, 0, 1.0), 0.0) == Approx(0.5 * std::sinh(2.0)).epsilon(1e-14));
    CHECK(commutator_amplitude(at_k0(1.0, 0, 1.0), 0.0) == Approx(1.8134).epsilon(1e-4));
    CHECK(commutator_amplitude(at_k0(1.0, 0, 2.0), 1.0) == Approx(3.0 * std::sinh(2.0)).epsilon(1e-14));
    CHECK(commutator_amplitude(at_k0(1.0, 0, 2.0), 1.0) == Approx(10.881).epsilon(1e-4));
}

TEST_CASE("coefficient family at k0 = 0 and k0 = 1") {
    const CoefficientSet z = coefficient_set({0.0, 3.0, 1.0, 0});
    CHECK(z.q == 0.0);
    for (double v : {z.a, z.b, z.c, z.d, z.f}) CHECK(v == Approx(2.25).epsilon(1e-15));

    const CoefficientSet one = coefficient_set(at_k0(1.0));
    CHECK(one.q == Approx((1.0 - std::exp(-4.0)) / 2.0).epsilon(1e-14));
    CHECK(one.q == Approx(0.49084).epsilon(1e-5));
}

TEST_CASE("coefficient family against the written-out formulas") {
    for (double k0 : {0.1, 0.7, 1.5}) {
        for (int n : {0, 2, 6}) {
            for (double e0 : {0.5, 1.0, 2.0}) {
                const CoefficientSet s = coefficient_set_at(k0, n, e0);
                const double nn = n;
                const double q = e0 * std::exp(-2 * k0) * (2 * nn + 1) * std::sinh(2 * k0);
                const double a = (nn + 1) * (nn + 2) * std::exp(-4 * k0) + nn * (nn + 1) + 0.25 * std::exp(-2 * k0) + 2 * q;
                const double c = (nn + 1) * (nn + 2) + (nn * (nn + 1) + 0.25) * std::cosh(2 * k0) + q;
                const double d = 2 * (nn + 1) * (nn + 1) * std::cosh(2 * k0) + 0.25 + q;
                const double f = ((nn + 1) * (nn + 2) + 0.25) * std::cosh(2 * k0) + nn * (nn + 1) + q;
                CHECK(s.q == Approx(q).epsilon(1e-14));
                CHECK(s.a == Approx(a).epsilon(1e-14));
                CHECK(s.b == s.a - 2 * s.q);
                CHECK(s.c == Approx(c).epsilon(1e-14));
                CHECK(s.d == Approx(d).epsilon(1e-14));
                CHECK(s.f == Approx(f).epsilon(1e-14));
            }
        }
    }
}

TEST_CASE("coefficients at k0 = 0 for even N up to 40") {
    for (int n = 0; n <= 40; n += 2) {
        const CoefficientSet s = coefficient_set_at(0.0, n, 1.0);
        const double expect = 2.0 * (n + 1.0) * (n + 1.0) + 0.25;
        CHECK(s.q == 0.0);
        for (double v : {s.a, s.b, s.c, s.d, s.f}) CHECK(std::abs(v - expect) <= 1e-12 * expect);
    }
}

TEST_CASE("coefficients are nonnegative and nondecreasing in N") {
    for (double k0 : {0.0, 0.05, 0.5, 1.0, 3.0}) {
        CoefficientSet prev = coefficient_set_at(k0, 0, 1.0);
        for (int n = 2; n <= 20; n += 2) {
            const CoefficientSet s = coefficient_set_at(k0, n, 1.0);
            for (double v : {s.q, s.a, s.b, s.c, s.d, s.f}) CHECK(v >= 0.0);
            CHECK(s.q >= prev.q);
            CHECK(s.a >= prev.a);
            CHECK(s.b >= prev.b);
            CHECK(s.c >= prev.c);
            CHECK(s.d >= prev.d);
            CHECK(s.f >= prev.f);
            prev = s;
        }
    }
}

TEST_CASE("Fock damping rate") {
    CHECK(damping_rate_fock({0.0, 3.0, 1.0, 4}) == 0.0);
    CHECK(damping_rate_fock(at_k0(1.0, 0)) == Approx(4.0 * std::sinh(2.0)).epsilon(1e-14));
    CHECK(damping_rate_fock(at_k0(1.0, 0)) == Approx(14.507).epsilon(1e-4));
    CHECK(damping_rate_fock(at_k0(1.0, 2)) == Approx(20.0 * std::sinh(2.0)).epsilon(1e-14));
    CHECK(damping_rate_fock(at_k0(1.0, 2)) == Approx(72.537).epsilon(1e-4));
}

TEST_CASE("position damping rate") {
    CHECK(damping_rate_position(0, 0.0, 1.3) == 0.0);
    CHECK(damping_rate_position(0, 0.5, 1.0) == Approx(4.0 * std::sinh(1.0)).epsilon(1e-14));
    CHECK(damping_rate_position(0, 0.5, 1.0) == Approx(4.7008).epsilon(1e-4));
    CHECK(damping_rate_position(2, -0.7, 1.1) == damping_rate_position(2, 0.7, 1.1));
}

TEST_CASE("square-root route and closed route for the position sinh agree") {
    for (int i = 0; i <= 200; ++i) {
        const double ratio = 10.0 * i / 200.0;
        for (double r0 : {0.5, 1.0, 3.0}) {
            const double s = ratio * r0;
            const double direct = std::sinh(2.0 * s / r0);
            const double root = sinh_of_root(s, r0);
            CHECK(std::abs(root - direct) <= 1e-12 * std::max(1.0, std::abs(direct)));
        }
    }
}

TEST_CASE("Fock and position rates coincide at separation k0 r0") {
    for (double r0_sq : {1.0, 3.0, 10.0}) {
        for (double frac : {0.01, 0.2, 0.5, 0.9}) {
            for (int n : {0, 2, 8}) {
                const WormholeParams p{frac * r0_sq, r0_sq, 1.0, n};
                const double s = k0_of(p) * r0_of(p);
                CHECK(damping_rate_position(n, s, r0_of(p)) == Approx(damping_rate_fock(p)).epsilon(1e-13));
            }
        }
    }
}

TEST_CASE("semiclassical rate") {
    SemiclassicalParams sp;
    sp.s_w = 0.0;
    CHECK(semiclassical_rate(sp, 0.5, 1.0) == Approx(8.0 * std::sinh(1.0)).epsilon(1e-14));
    CHECK(semiclassical_rate(sp, 0.5, 1.0) == Approx(9.4016).epsilon(1e-4));
    CHECK(semiclassical_rate(sp, 0.0, 1.0) == 0.0);
    for (int n : {0, 2, 6}) {
        sp.s_w = -std::log(n + 0.5);
        for (double s : {0.1, 0.9, 2.5}) {
            CHECK(semiclassical_rate(sp, s, 1.7) == Approx(damping_rate_position(n, s, 1.7)).epsilon(1e-14));
        }
    }
}

TEST_CASE("nucleation rate") {
    CHECK(nucleation_rate(1.0, 1.0) == Approx(1.0 / (2.0 * std::log(2.0))).epsilon(1e-15));
    CHECK(nucleation_rate(1.0, 1.0) == Approx(0.72135).epsilon(1e-5));
    CHECK(nucleation_rate(0.0, 0.4) == 0.0);
    CHECK(nucleation_rate(2.0, 1.0) == Approx(4.0 / (2.0 * std::log(2.0))).epsilon(1e-15));
    CHECK(nucleation_rate(2.0, 1.0) == Approx(2.8854).epsilon(1e-4));
    CHECK_THROWS_AS(nucleation_rate(1.0, 0.0), DomainError);
    CHECK_THROWS_AS(nucleation_rate(1.0, -1.0), DomainError);
}

TEST_CASE("phenomenological rate") {
    SemiclassicalParams sp;
    sp.gamma_b = 1.0;
    sp.mass = 1.0;
    CHECK(phenomenological_rate(sp, 1.0, 2.0, 0) == Approx(std::sinh(2.0) / 4.0).epsilon(1e-15));
    CHECK(phenomenological_rate(sp, 1.0, 2.0, 0) == Approx(0.90672).epsilon(1e-5));
    CHECK(phenomenological_rate(sp, 1.0, 2.0, 1) / phenomenological_rate(sp, 1.0, 2.0, 0) == Approx(9.0).epsilon(1e-15));
    CHECK(phenomenological_rate(sp, 1.0, -2.0, 0) == phenomenological_rate(sp, 1.0, 2.0, 0));
    sp.gamma_b = 0.0;
    CHECK(phenomenological_rate(sp, 1.0, 2.0, 3) == 0.0);
}

TEST_CASE("temperature resolution") {
    std::vector<std::string> warnings;
    CHECK(resolve_temperature(0.3, std::nullopt, std::nullopt, warnings) == 0.3);
    CHECK(warnings.empty());
    CHECK(resolve_temperature(std::nullopt, 1.0, 1.0, warnings) == Approx(nucleation_rate(1.0, 1.0)));
    CHECK(warnings.empty());
    CHECK(resolve_temperature(0.3, 1.0, 1.0, warnings) == 0.3);
    CHECK(warnings.size() == 1);
    CHECK_THROWS_AS(resolve_temperature(std::nullopt, std::nullopt, std::nullopt, warnings), DomainError);
}

TEST_CASE("rates vanish like sqrt(k) as k -> 0") {
    // f(k) / sqrt(k) = c + O(k): extrapolate over k = 1e-2, 1e-4, 1e-6 and compare with
    // the leading coefficient of sinh(2 k0) ~ 2 sqrt(2 k / R0^2).
    const double r0_sq = 3.0;
    const double lead = 2.0 * std::sqrt(2.0 / r0_sq);
    const std::array<double, 3> ks{1e-2, 1e-4, 1e-6};
    auto extrapolate = [&](auto f) {
        std::array<double, 3> g{};
        for (std::size_t i = 0; i < ks.size(); ++i) g[i] = f(ks[i]) / std::sqrt(ks[i]);
        const double r1 = (100.0 * g[1] - g[0]) / 99.0;
        const double r2 = (100.0 * g[2] - g[1]) / 99.0;
        return (100.0 * r2 - r1) / 99.0;
    };
    const int n_baby = 2;
    const double e0 = 1.5;
    const double amp = extrapolate([&](double k) { return commutator_amplitude({k, r0_sq, e0, n_baby}, 1.0); });
    CHECK(std::abs(amp / (e0 * 1.5 * lead) - 1.0) < 1e-3);
    const double fock = extrapolate([&](double k) { return damping_rate_fock({k, r0_sq, e0, n_baby}); });
    CHECK(std::abs(fock / (8.0 * (n_baby + 0.5) * lead) - 1.0) < 1e-3);
}
