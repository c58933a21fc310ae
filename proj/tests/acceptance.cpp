// acceptance.cpp — end-to-end acceptance checks, one PASS/FAIL line per criterion.
//
// Usage: acceptance <config-dir> [artifact-dir]

#include "wormdec/coefficients.hpp"
#include "wormdec/decoherence.hpp"
#include "wormdec/errors.hpp"
#include "wormdec/master.hpp"
#include "wormdec/results.hpp"
#include "wormdec/scenario.hpp"

#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>

using namespace wormdec;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass{true};
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + ("failed: " + what);
        }
    }
    void note(const std::string& text) { detail += (detail.empty() ? "" : "; ") + text; }
};

std::string sci(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

int failures = 0;

void criterion(int id, const std::string& title, double budget_s, const std::function<void(Outcome&)>& body) {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(out);
    } catch (const std::exception& e) {
        out.require(false, std::string("exception: ") + e.what());
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.require(elapsed < budget_s, "runtime " + sci(elapsed) + " s over budget " + sci(budget_s) + " s");
    if (!out.pass) ++failures;
    std::cout << (out.pass ? "PASS" : "FAIL") << "  criterion " << id << " (" << title << ") [" << sci(elapsed)
              << " s]: " << out.detail << std::endl;
}

WormholeParams at_k0(double k0, int n = 0, double e0 = 1.0) {
    return {3.0 * k0 * k0 / (2.0 + k0 * k0), 3.0, e0, n};
}

double rel_diff(const Matrix& a, const Matrix& b) { return (a - b).norm() / b.norm(); }

Matrix random_hermitian(int dim, std::mt19937& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix m(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) m(i, j) = Complex(g(rng), g(rng));
    }
    return (m + m.adjoint()) / 2.0;
}

// Unit-trace positive state M M† / tr.
Matrix random_density(int dim, std::mt19937& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix m(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) m(i, j) = Complex(g(rng), g(rng));
    }
    Matrix rho = m * m.adjoint();
    return rho / rho.trace();
}

void coefficient_identities(Outcome& o) {
    int cells = 0;
    double worst_k0_zero = 0.0;
    for (double k0 : {0.0, 0.1, 0.5, 1.0, 2.0}) {
        for (int n : {0, 2, 4, 10}) {
            for (double e0 : {0.5, 1.0, 2.0}) {
                const CoefficientSet s = coefficient_set_at(k0, n, e0);
                ++cells;
                o.require(s.b == s.a - 2.0 * s.q, "b = a - 2q at k0=" + sci(k0));
                for (double v : {s.q, s.a, s.b, s.c, s.d, s.f}) o.require(v >= 0.0, "nonnegative");
                if (k0 == 0.0) {
                    o.require(s.q == 0.0, "q = 0 at k0 = 0");
                    const double expect = 2.0 * (n + 1.0) * (n + 1.0) + 0.25;
                    for (double v : {s.a, s.b, s.c, s.d, s.f}) {
                        worst_k0_zero = std::max(worst_k0_zero, std::abs(v - expect));
                    }
                }
            }
        }
    }
    o.require(worst_k0_zero <= 1e-12, "k0 = 0 coefficients within 1e-12");
    o.note(std::to_string(cells) + " grid cells, max |coef - (2(N+1)^2 + 1/4)| at k0=0 = " + sci(worst_k0_zero));
}

void limit_behaviour(Outcome& o) {
    // f(k)/sqrt(k) = c + O(k); two Richardson levels over k = 1e-2, 1e-4, 1e-6.
    const double r0_sq = 3.0;
    const double lead = 2.0 * std::sqrt(2.0 / r0_sq);
    auto extrapolate = [](const std::function<double(double)>& f) {
        const double g0 = f(1e-2) / std::sqrt(1e-2);
        const double g1 = f(1e-4) / std::sqrt(1e-4);
        const double g2 = f(1e-6) / std::sqrt(1e-6);
        const double r1 = (100.0 * g1 - g0) / 99.0;
        const double r2 = (100.0 * g2 - g1) / 99.0;
        return (100.0 * r2 - r1) / 99.0;
    };
    double worst = 0.0;
    auto check = [&](const std::string& name, const std::function<double(double)>& f, double slope) {
        o.require(f(0.0) == 0.0, name + " vanishes at k = 0");
        const double err = std::abs(extrapolate(f) / slope - 1.0);
        worst = std::max(worst, err);
        o.require(err < 1e-3, name + " slope error " + sci(err));
    };
    for (int nb : {0, 2}) {
        const double e0 = 1.0;
        check("commutator_amplitude", [&](double k) { return commutator_amplitude({k, r0_sq, e0, nb}, 0.0); },
              e0 * 0.5 * lead);
        check("damping_rate_fock", [&](double k) { return damping_rate_fock({k, r0_sq, e0, nb}); },
              8.0 * (nb + 0.5) * lead);
        for (int n = 0; n <= 5; ++n) {
            check("diagonal rate n=" + std::to_string(n),
                  [&](double k) { return diagonal_rates({k, r0_sq, e0, nb}, 5)[static_cast<std::size_t>(n)]; },
                  8.0 * (nb + 0.5) * lead * (n + 0.5) * (n + 0.5));
        }
    }
    o.note("max relative slope error " + sci(worst));
}

void zero_point(Outcome& o) {
    const WormholeParams p = at_k0(1.0, 0);
    const auto rates = diagonal_rates(p, 0);
    const double err = std::abs(rates[0] - std::sinh(2.0));
    o.require(err <= 1e-10, "rate equals sinh 2");
    o.require(rates[0] > 0.0, "rate positive");
    DiagonalState s{Eigen::VectorXd::Ones(1), 0.0};
    double prev = 1.0;
    for (int i = 1; i <= 20; ++i) {
        const double p0 = evolve_diagonal(s, rates, 0.05 * i).probs[0];
        o.require(p0 < prev, "P0 strictly decreasing");
        prev = p0;
    }
    o.note("Gamma_0 = " + format_double(rates[0]) + ", |Gamma_0 - sinh 2| = " + sci(err) + ", P0(1) = " + sci(prev));
}

void structural(Outcome& o) {
    std::mt19937 rng(20240601);
    double worst_trace = 0.0;
    double worst_herm = 0.0;
    const CoefficientSet s0 = coefficient_set_at(0.0, 2, 1.0);
    for (int i = 0; i < 100; ++i) {
        const Matrix out = rhs_full(random_density(12, rng), s0, 0.0);
        worst_trace = std::max(worst_trace, std::abs(out.trace()));
        worst_herm = std::max(worst_herm, hermiticity_defect(out));
    }
    o.require(worst_trace <= 1e-10, "trace at k0 = 0");
    o.require(worst_herm <= 1e-12, "hermiticity at k0 = 0");
    double worst_ratio = 0.0;
    const Matrix rho = random_hermitian(12, rng);
    for (double k0 : {0.1, 0.5, 1.0}) {
        const double d1 = hermiticity_defect(rhs_full(rho, coefficient_set_at(k0, 2, 1.0), k0));
        const double d2 = hermiticity_defect(rhs_full(rho, coefficient_set_at(k0, 2, 2.0), k0));
        worst_ratio = std::max(worst_ratio, std::abs(d2 / d1 - 2.0));
    }
    o.require(worst_ratio <= 1e-6, "defect ratio under Q doubling");
    o.note("max |tr| = " + sci(worst_trace) + ", max defect = " + sci(worst_herm) + ", max |ratio - 2| = " +
           sci(worst_ratio));
}

void integrator_vs_oracle(Outcome& o) {
    // Vacuum start, k0 = 0.1, N = 0, E0 = 1. The raw generator leaks heavily into the
    // guard band over this horizon; the comparison is between two integrations of the
    // same truncated generator, so the leakage abort is disabled here.
    const int dim = 8;
    const double t = 0.05;
    const DensityMatrix vac = DensityMatrix::number_state(dim, 0);
    EvolveOptions opt;
    opt.leakage_limit = std::numeric_limits<double>::infinity();
    for (Subtraction v : {Subtraction::none, Subtraction::full, Subtraction::virtual_channels}) {
        const MasterEquation eq(at_k0(0.1), dim, v);
        const Matrix ref = expm_oracle(eq, t).apply(vac.entries());
        const double err = rel_diff(evolve_full(vac, eq, t, 1e-4, opt).first.entries(), ref);
        const double e1 = rel_diff(evolve_full(vac, eq, t, 1e-3, opt).first.entries(), ref);
        const double e2 = rel_diff(evolve_full(vac, eq, t, 5e-4, opt).first.entries(), ref);
        const double ratio = e1 / e2;
        o.require(err <= 1e-8, to_string(v) + " relative error " + sci(err) + " > 1e-8");
        o.require(ratio >= 14.0 && ratio <= 18.0, to_string(v) + " halving ratio " + sci(ratio));
        o.note(to_string(v) + ": err(dt=1e-4) = " + sci(err) + ", ratio(1e-3/5e-4) = " + format_double(ratio).substr(0, 6));
    }
}

void diagonal_scaling(Outcome& o) {
    const WormholeParams p = at_k0(0.7, 2);
    const auto rates = diagonal_rates(p, 20);
    // Ratio of two rounded doubles: exact up to rounding of the last bits.
    double worst_ratio = 0.0;
    for (int n = 0; n <= 20; ++n) {
        const double m = (2.0 * n + 1.0) * (2.0 * n + 1.0);
        worst_ratio = std::max(worst_ratio, std::abs(rates[n] / rates[0] - m) / m);
    }
    o.require(worst_ratio <= 1e-15, "ratio (2n+1)^2 to machine precision");
    Eigen::VectorXd p0 = Eigen::VectorXd::LinSpaced(21, 1.0, 0.05);
    p0 /= p0.sum();
    double worst = 0.0;
    for (double t : {0.0, 1e-3, 0.01, 0.1}) {
        const auto out = evolve_diagonal({p0, 0.0}, rates, t);
        const double gamma0 = 8.0 * 2.5 * std::sinh(1.4) * 0.25;
        for (int n = 0; n <= 20; ++n) {
            const double expect = p0[n] * std::exp(-gamma0 * (2.0 * n + 1) * (2.0 * n + 1) * t);
            worst = std::max(worst, std::abs(out.probs[n] - expect));
        }
    }
    o.require(worst <= 1e-12, "closed form within 1e-12");
    o.note("max relative deviation of Gamma_n/Gamma_0 from (2n+1)^2 for n <= 20 = " + sci(worst_ratio) +
           ", max |P - closed form| = " + sci(worst));
}

void two_gaussian_collapse(Outcome& o) {
    // sigma = 1, separation 10 sigma, nodes on both centres; m * 10 = 4.
    const PositionGrid grid{-12.7, 12.8, 256};
    const GaussianPair pair{-5.0, 5.0, 1.0};
    const RateModel model{SemiclassicalModel{1.0, 1.0, 0.4, 1.0}, 0};
    const PositionKernel k0 = prepare_pair(pair, grid);
    const auto peaks = local_maxima(k0);
    o.require(peaks.size() == 4, "four peaks (found " + std::to_string(peaks.size()) + ")");
    const double tau = decoherence_time(model, 10.0);
    const PositionKernel k = evolve_kernel(k0, rate_field(model, grid), 3.0 * tau);
    const PeakAmplitudes a = peak_amplitudes(k0, pair);
    const PeakAmplitudes b = peak_amplitudes(k, pair);
    const double ratio = b.offdiag / a.offdiag;
    const double dd = std::max(std::abs(b.diag1 - a.diag1), std::abs(b.diag2 - a.diag2));
    o.require(ratio < 0.05, "off-diagonal ratio " + sci(ratio));
    o.require(dd < 1e-12, "diagonal change " + sci(dd));
    o.note("4 peaks, tau = " + format_double(tau).substr(0, 8) + ", offdiag ratio at 3 tau = " + sci(ratio) +
           ", diagonal change = " + sci(dd));
}

void model_comparison(Outcome& o) {
    const RateModel brownian{BrownianModel{1.0, 0.5, 1.0}, 0};
    const RateModel worm{SemiclassicalModel{1.0, 1.0, 1.0, 1.0}, 0};
    for (double s : {0.01, 0.1, 1.0, 2.0, 10.0}) {
        o.require(std::abs(doubling_exponent(brownian, s) - 2.0) <= 1e-12, "brownian exponent at s=" + sci(s));
    }
    for (double s : {0.05, 0.5, 1.0, 3.0}) {
        const double expect = std::log2(2.0 * std::cosh(s));
        o.require(std::abs(doubling_exponent(worm, s) - expect) <= 1e-12, "log2(2cosh(ms)) at ms=" + sci(s));
    }
    const double at2 = doubling_exponent(worm, 2.0);
    const double at001 = doubling_exponent(worm, 0.01);
    o.require(std::abs(at2 - 2.911) <= 1e-3 && std::abs(at2 - std::log2(2.0 * std::cosh(2.0))) <= 1e-6, "m s = 2");
    o.require(std::abs(at001 - 1.0) <= 1e-4, "m s = 0.01");
    o.require(doubling_exponent(worm, 1.32) > 2.0 && doubling_exponent(worm, 1.31) < 2.0, "crossover at 1.317");
    o.note("exponent(ms=2) = " + format_double(at2).substr(0, 10) + ", exponent(ms=0.01) = " +
           format_double(at001).substr(0, 10) + ", brownian = 2");
}

ResultTable residual_table() {
    ResultTable t{{"k0", "n_baby", "dim", "n", "variant", "rhs_entry", "expected", "relative_residual"}, {}};
    for (const auto& r : subtraction_residual_report({0.1, 0.5, 1.0}, {0, 2}, 12, 6)) {
        t.add_row({r.k0, std::int64_t{r.n_baby}, std::int64_t{r.dim}, std::int64_t{r.n}, to_string(r.variant),
                   r.rhs_entry, r.expected, r.relative_residual});
    }
    return t;
}

void residual_report(Outcome& o, const fs::path& artifacts) {
    const fs::path path = artifacts / "subtraction_residuals.csv";
    const ResultTable first = residual_table();
    emit_results(first, Format::csv, path.string());
    const ResultTable second = residual_table();
    const CsvDocument doc = read_csv(path.string());
    o.require(first.rows.size() == 84, "84 rows");
    o.require(doc.rows.size() == first.rows.size(), "artifact row count");
    double worst = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (std::size_t i = 0; i < first.rows.size(); ++i) {
        const double a = std::get<double>(first.rows[i][7]);
        const double b = std::get<double>(second.rows[i][7]);
        const double c = std::stod(doc.rows[i][7]);
        worst = std::max({worst, std::abs(a - b), std::abs(a - c)});
        lo = std::min(lo, a);
        hi = std::max(hi, a);
    }
    o.require(worst <= 1e-14, "residuals identical across runs");
    o.note("artifact " + path.filename().string() + ", run-to-run difference " + sci(worst) +
           ", residual range [" + sci(lo) + ", " + sci(hi) + "]");
}

bool bit_exact(const ResultTable& t, const CsvDocument& doc) {
    if (doc.header != t.columns || doc.rows.size() != t.rows.size()) return false;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        if (doc.rows[i].size() != t.rows[i].size()) return false;
        for (std::size_t j = 0; j < t.rows[i].size(); ++j) {
            const Value& v = t.rows[i][j];
            const std::string& cell = doc.rows[i][j];
            if (const double* d = std::get_if<double>(&v)) {
                const double back = std::strtod(cell.c_str(), nullptr);
                if (std::memcmp(&back, d, sizeof back) != 0) return false;
            } else if (const auto* n = std::get_if<std::int64_t>(&v)) {
                if (std::stoll(cell) != *n) return false;
            } else if (std::get<std::string>(v) != cell) {
                return false;
            }
        }
    }
    return true;
}

void cli_round_trip(Outcome& o, const fs::path& configs, const fs::path& artifacts) {
    int modes = 0;
    for (const Mode mode : {Mode::coeffs, Mode::rates, Mode::evolve_fock, Mode::evolve_position, Mode::compare,
                            Mode::sweep}) {
        const std::string name = to_string(mode);
        const fs::path cfg_path = configs / (name + ".json");
        const ScenarioConfig cfg = load_config(cfg_path.string(), mode);
        const ScenarioResult r = run_scenario(cfg);
        const fs::path out = artifacts / ("roundtrip-" + name + ".csv");
        emit_results(r.table, Format::csv, out.string());
        const bool exact = bit_exact(r.table, read_csv(out.string()));
        o.require(exact, name + " round trip");
        o.require(!r.table.rows.empty(), name + " produced rows");
        modes += exact ? 1 : 0;

        if (mode == Mode::sweep) {
            std::ifstream in(cfg_path);
            nlohmann::json doc = nlohmann::json::parse(in);
            std::string csv[2];
            int idx = 0;
            for (int workers : {1, 4}) {
                doc["sweep"]["workers"] = workers;
                std::ostringstream os;
                write_csv(run_scenario(parse_config_json(doc, cfg_path.string(), mode)).table, os);
                csv[idx++] = os.str();
            }
            o.require(csv[0] == csv[1], "sweep output invariant under worker count");
        }
    }
    o.note(std::to_string(modes) + "/6 modes round-trip bit-exactly, sweep identical for 1 and 4 workers");
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: acceptance <config-dir> [artifact-dir]\n";
        return 2;
    }
    const fs::path configs = argv[1];
    const fs::path artifacts = argc > 2 ? fs::path(argv[2]) : fs::current_path();
    fs::create_directories(artifacts);

    criterion(1, "coefficient identities", 1.0, coefficient_identities);
    criterion(2, "k -> 0 limits", 1.0, limit_behaviour);
    criterion(3, "zero-point decoherence", 1.0, zero_point);
    criterion(4, "structural checks", 5.0, structural);
    criterion(5, "integrator vs oracle", 30.0, integrator_vs_oracle);
    criterion(6, "diagonal channel scaling", 1.0, diagonal_scaling);
    criterion(7, "two-Gaussian collapse", 5.0, two_gaussian_collapse);
    criterion(8, "model comparison", 1.0, model_comparison);
    criterion(9, "subtraction residual report", 10.0, [&](Outcome& o) { residual_report(o, artifacts); });
    criterion(10, "CLI round trip", 30.0, [&](Outcome& o) { cli_round_trip(o, configs, artifacts); });

    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criterion(s) failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
