// wormdec — batch driver: one subcommand per scenario mode, JSON config in, CSV/jsonl out.
//
// Exit codes: 0 success, 2 config error, 3 numeric failure, 4 I/O error.

#include "wormdec/errors.hpp"
#include "wormdec/scenario.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;

int exit_code(wormdec::ScenarioFailure::Kind kind) {
    switch (kind) {
        case wormdec::ScenarioFailure::Kind::config: return kExitConfig;
        case wormdec::ScenarioFailure::Kind::io: return kExitIo;
        case wormdec::ScenarioFailure::Kind::numeric:
        case wormdec::ScenarioFailure::Kind::other: return kExitNumeric;
    }
    return kExitNumeric;
}

struct Options {
    std::string config;
    std::string out;
    std::string format;
};

int run(wormdec::Mode mode, const Options& opts) {
    using namespace wormdec;
    ScenarioConfig cfg;
    try {
        cfg = load_config(opts.config, mode);
    } catch (const ConfigError& e) {
        std::cerr << e.what() << '\n';
        return kExitConfig;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    }
    for (const auto& w : cfg.warnings) std::cerr << "warning: " << w << '\n';

    const std::string path = !opts.out.empty() ? opts.out : cfg.output.path.value_or("");
    if (path.empty()) {
        std::cerr << "error: no output path (use --out or output.path in the config)\n";
        return kExitConfig;
    }
    Format format = cfg.output.format.value_or(Format::csv);
    if (!opts.format.empty()) format = format_from_string(opts.format);

    try {
        const ScenarioResult result = run_scenario(cfg);
        emit_results(result.table, format, path);
        if (result.kernel) {
            const std::string kernel_path = path == "-" ? "-" : path + ".kernel." + (format == Format::csv ? "csv" : "jsonl");
            emit_results(*result.kernel, format, kernel_path);
        }
    } catch (const ScenarioFailure& f) {
        try {
            emit_results(f.partial(), format, path);
        } catch (const IoError& e) {
            std::cerr << "error: " << e.what() << '\n';
        }
        std::cerr << "error: " << f.what() << '\n';
        return exit_code(f.kind());
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wormdec: wormhole-induced decoherence scenarios"};
    app.require_subcommand(1);

    Options opts;
    const std::vector<std::pair<wormdec::Mode, std::string>> commands{
        {wormdec::Mode::coeffs, "master-equation coefficients Q, A..F"},
        {wormdec::Mode::rates, "Fock, position and semiclassical damping rates"},
        {wormdec::Mode::evolve_fock, "number-basis evolution of the reduced density matrix"},
        {wormdec::Mode::evolve_position, "two-Gaussian kernel damping in position space"},
        {wormdec::Mode::compare, "wormhole versus Brownian decoherence rates"},
        {wormdec::Mode::sweep, "parameter sweep over any other mode"},
    };
    std::vector<std::pair<CLI::App*, wormdec::Mode>> subs;
    for (const auto& [mode, help] : commands) {
        CLI::App* sub = app.add_subcommand(wormdec::to_string(mode), help);
        sub->add_option("--config", opts.config, "scenario JSON document")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", opts.out, "output path ('-' for stdout)");
        sub->add_option("--format", opts.format, "csv or jsonl (default csv)")->check(CLI::IsMember({"csv", "jsonl"}));
        subs.emplace_back(sub, mode);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    for (const auto& [sub, mode] : subs) {
        if (sub->parsed()) return run(mode, opts);
    }
    return kExitConfig;
}
