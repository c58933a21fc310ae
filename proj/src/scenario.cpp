#include "wormdec/scenario.hpp"

#include "wormdec/errors.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

namespace wormdec {

namespace {

using I64 = std::int64_t;

const std::vector<std::string> kWormholeColumns{"k", "r0_sq", "e0", "n_baby", "k0"};

std::vector<Value> wormhole_prefix(const WormholeParams& p) {
    return {p.k, p.r0_sq_total, p.e0, static_cast<I64>(p.n_baby), k0_of(p)};
}

std::vector<std::string> with_wormhole(std::vector<std::string> tail) {
    std::vector<std::string> cols = kWormholeColumns;
    cols.insert(cols.end(), tail.begin(), tail.end());
    return cols;
}

std::string describe_point(const ScenarioConfig& cfg) {
    std::string s = "mode=" + to_string(cfg.mode);
    if (cfg.wormhole) {
        s += " k=" + format_double(cfg.wormhole->k) + " r0_sq=" + format_double(cfg.wormhole->r0_sq_total) +
             " e0=" + format_double(cfg.wormhole->e0) + " N=" + std::to_string(cfg.wormhole->n_baby);
    }
    if (cfg.position) s += " model=" + cfg.position->model.kind() + "(" + cfg.position->model.describe() + ")";
    return s;
}

void run_coeffs(const ScenarioConfig& cfg, ResultTable& table) {
    const auto& p = *cfg.wormhole;
    const CoefficientSet s = coefficient_set(p);
    auto row = wormhole_prefix(p);
    for (const double v : {s.q, s.a, s.b, s.c, s.d, s.f}) row.emplace_back(v);
    table.add_row(std::move(row));
}

void run_rates(const ScenarioConfig& cfg, ResultTable& table) {
    const auto& p = *cfg.wormhole;
    const auto& sc = *cfg.semiclassical;
    const double r0 = r0_of(p);
    const double fock_rate = damping_rate_fock(p);
    const auto diag = diagonal_rates(p, cfg.rates->n_max);
    for (const double s : cfg.rates->separations) {
        for (int n = 0; n <= cfg.rates->n_max; ++n) {
            auto row = wormhole_prefix(p);
            const std::vector<Value> tail{r0,
                                          sc.params.gamma_b,
                                          sc.t_b,
                                          sc.params.s_w,
                                          sc.params.mass,
                                          static_cast<I64>(n),
                                          s,
                                          commutator_amplitude(p, n),
                                          fock_rate,
                                          diag[static_cast<std::size_t>(n)],
                                          damping_rate_position(p.n_baby, s, r0),
                                          semiclassical_rate(sc.params, s, r0),
                                          phenomenological_rate(sc.params, sc.t_b, s, n)};
            row.insert(row.end(), tail.begin(), tail.end());
            table.add_row(std::move(row));
        }
    }
}

DensityMatrix initial_density(const FockConfig& fc) {
    return std::visit(
        [&](const auto& init) -> DensityMatrix {
            using T = std::decay_t<decltype(init)>;
            if constexpr (std::is_same_v<T, NumberState>) {
                return DensityMatrix::number_state(fc.dim, init.n);
            } else if constexpr (std::is_same_v<T, DiagonalMixture>) {
                return DensityMatrix::diagonal(Eigen::Map<const Eigen::VectorXd>(init.probs.data(),
                                                                                 static_cast<Eigen::Index>(init.probs.size())));
            } else {
                return DensityMatrix::pure(Eigen::Map<const Eigen::VectorXcd>(init.amplitudes.data(),
                                                                              static_cast<Eigen::Index>(init.amplitudes.size())));
            }
        },
        fc.initial);
}

void run_evolve_fock(const ScenarioConfig& cfg, ResultTable& table) {
    const auto& p = *cfg.wormhole;
    const auto& fc = *cfg.fock;
    const DensityMatrix rho0 = initial_density(fc);
    const MasterEquation eq(p, fc.dim, fc.subtraction);

    DiagonalState channel0{rho0.entries().diagonal().real(), 0.0};
    const auto rates = diagonal_rates(p, fc.dim - 1);

    auto emit = [&](double time, const DensityMatrix& rho, const EvolutionReport& rep) {
        const DiagonalState channel = evolve_diagonal(channel0, rates, time);
        for (int n = 0; n < fc.dim; ++n) {
            auto row = wormhole_prefix(p);
            const std::vector<Value> tail{static_cast<I64>(fc.dim),
                                          to_string(fc.subtraction),
                                          fc.dt,
                                          time,
                                          static_cast<I64>(n),
                                          channel.probs[n],
                                          rho.entries()(n, n).real(),
                                          rep.trace_drift,
                                          rep.hermiticity_defect,
                                          rep.guard_band_leakage,
                                          static_cast<I64>(rep.step_count)};
            row.insert(row.end(), tail.begin(), tail.end());
            table.add_row(std::move(row));
        }
    };

    EvolutionReport rep0;
    rep0.hermiticity_defect = rho0.hermiticity_defect();
    rep0.guard_band_leakage = guard_band_leakage(rho0.entries(), fc.options.guard_band);
    emit(0.0, rho0, rep0);

    DensityMatrix rho = rho0;
    double now = 0.0;
    long steps = 0;
    for (const double target : fc.snapshot_times) {
        const double span = target - now;
        auto [next, rep] = evolve_full(rho, eq, span, std::min(fc.dt, span), fc.options);
        steps += rep.step_count;
        rep.step_count = steps;
        rep.trace_drift = (next.trace_value() - rho0.trace_value()).real();
        rho = std::move(next);
        now = target;
        emit(now, rho, rep);
    }
}

void run_evolve_position(const ScenarioConfig& cfg, ScenarioResult& result) {
    const auto& pc = *cfg.position;
    const PositionKernel k0 = prepare_pair(pc.pair, pc.grid);
    const RealMatrix field = rate_field(pc.model, pc.grid);
    const PeakAmplitudes initial = peak_amplitudes(k0, pc.pair);
    if (pc.dump_kernel) result.kernel = ResultTable{{"time", "i", "j", "x", "x_prime", "re", "im"}, {}};

    for (const double t : pc.snapshot_times) {
        const PositionKernel k = evolve_kernel(k0, field, t);
        const PeakAmplitudes peaks = peak_amplitudes(k, pc.pair);
        result.table.add_row({pc.model.kind(), pc.model.describe(), pc.pair.x1, pc.pair.x2, pc.pair.sigma,
                              pc.pair.weight1, pc.pair.weight2, pc.grid.x_min, pc.grid.x_max,
                              static_cast<I64>(pc.grid.n_points), t, peaks.diag1, peaks.diag2, peaks.offdiag,
                              peaks.offdiag / initial.offdiag, k.trace().real()});
        if (pc.dump_kernel) {
            for (int i = 0; i < pc.grid.n_points; ++i) {
                for (int j = 0; j < pc.grid.n_points; ++j) {
                    result.kernel->add_row({t, static_cast<I64>(i), static_cast<I64>(j), pc.grid.x(i), pc.grid.x(j),
                                            k.values(i, j).real(), k.values(i, j).imag()});
                }
            }
        }
    }
}

void run_compare(const ScenarioConfig& cfg, ResultTable& table) {
    const auto& cc = *cfg.compare;
    for (const auto& r : compare_models(cc.wormhole, cc.brownian, cc.separations)) {
        table.add_row({cc.wormhole.kind(), cc.wormhole.describe(), r.separation, r.wormhole_rate, r.wormhole_time,
                       r.wormhole_doubling, r.rate_ratio});
        table.add_row({cc.brownian.kind(), cc.brownian.describe(), r.separation, r.brownian_rate, r.brownian_time,
                       r.brownian_doubling, r.rate_ratio});
    }
}

ScenarioFailure::Kind classify(const std::exception& e) {
    if (dynamic_cast<const NumericError*>(&e)) return ScenarioFailure::Kind::numeric;
    if (dynamic_cast<const ConfigError*>(&e)) return ScenarioFailure::Kind::config;
    if (dynamic_cast<const IoError*>(&e)) return ScenarioFailure::Kind::io;
    if (dynamic_cast<const DomainError*>(&e) || dynamic_cast<const DimensionError*>(&e)) {
        return ScenarioFailure::Kind::config;
    }
    return ScenarioFailure::Kind::other;
}

ScenarioResult run_single(const ScenarioConfig& cfg) {
    ScenarioResult result;
    result.table.columns = columns_for(cfg.mode);
    try {
        switch (cfg.mode) {
            case Mode::coeffs: run_coeffs(cfg, result.table); break;
            case Mode::rates: run_rates(cfg, result.table); break;
            case Mode::evolve_fock: run_evolve_fock(cfg, result.table); break;
            case Mode::evolve_position: run_evolve_position(cfg, result); break;
            case Mode::compare: run_compare(cfg, result.table); break;
            case Mode::sweep: throw std::logic_error("run_single: sweep dispatched as a single point");
        }
    } catch (const ScenarioFailure&) {
        throw;
    } catch (const std::exception& e) {
        throw ScenarioFailure("[" + describe_point(cfg) + "] " + e.what(), classify(e), std::move(result.table));
    }
    return result;
}

ScenarioResult run_sweep(const ScenarioConfig& cfg) {
    const SweepConfig& sw = *cfg.sweep;
    const std::size_t count = sw.values.size();

    struct Point {
        std::optional<ScenarioResult> result;
        std::exception_ptr error;
    };
    std::vector<Point> points(count);

    auto run_point = [&](std::size_t i) {
        try {
            const nlohmann::json doc = sweep_point(sw, i);
            const ScenarioConfig point = parse_config_json(doc, "sweep point " + std::to_string(i));
            points[i].result = run_single(point);
        } catch (...) {
            points[i].error = std::current_exception();
        }
    };

    const int workers = std::max(1, std::min<int>(sw.workers, static_cast<int>(count)));
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < count;) run_point(i);
        });
    }
    for (auto& t : pool) t.join();

    ScenarioResult merged;
    merged.table.columns = columns_for(Mode::sweep);
    const auto base_columns = columns_for(sw.base_mode);
    merged.table.columns.insert(merged.table.columns.end(), base_columns.begin(), base_columns.end());
    auto absorb = [&](std::size_t i, const ResultTable& t) {
        for (const auto& row : t.rows) {
            std::vector<Value> full{sw.parameter, sw.values[i]};
            full.insert(full.end(), row.begin(), row.end());
            merged.table.add_row(std::move(full));
        }
    };
    for (std::size_t i = 0; i < count; ++i) {
        if (points[i].error) {
            try {
                std::rethrow_exception(points[i].error);
            } catch (const ScenarioFailure& f) {
                absorb(i, f.partial());
                throw ScenarioFailure("sweep point " + sw.parameter + "=" + format_double(sw.values[i]) + ": " +
                                          f.what(),
                                      f.kind(), std::move(merged.table));
            } catch (const std::exception& e) {
                throw ScenarioFailure("sweep point " + sw.parameter + "=" + format_double(sw.values[i]) + ": " +
                                          e.what(),
                                      classify(e), std::move(merged.table));
            }
        }
        absorb(i, points[i].result->table);
    }
    return merged;
}

}  // namespace

std::vector<std::string> columns_for(Mode mode) {
    switch (mode) {
        case Mode::coeffs: return with_wormhole({"q", "a", "b", "c", "d", "f"});
        case Mode::rates:
            return with_wormhole({"r0", "gamma_b", "t_b", "s_w", "mass", "n", "separation", "commutator_amplitude",
                                  "damping_rate_fock", "diagonal_rate", "damping_rate_position", "semiclassical_rate",
                                  "phenomenological_rate"});
        case Mode::evolve_fock:
            return with_wormhole({"dim", "subtraction", "dt", "time", "n", "p_channel", "p_full", "trace_drift",
                                  "hermiticity_defect", "guard_band_leakage", "step_count"});
        case Mode::evolve_position:
            return {"model", "model_params", "x1", "x2", "sigma", "weight1", "weight2", "x_min", "x_max",
                    "n_points", "time", "diag1", "diag2", "offdiag", "offdiag_ratio", "trace"};
        case Mode::compare:
            return {"model", "model_params", "separation", "rate", "decoherence_time", "doubling_exponent",
                    "rate_ratio"};
        case Mode::sweep: return {"sweep_parameter", "sweep_value"};
    }
    return {};
}

ScenarioResult run_scenario(const ScenarioConfig& config) {
    if (config.mode == Mode::sweep) return run_sweep(config);
    return run_single(config);
}

}  // namespace wormdec
