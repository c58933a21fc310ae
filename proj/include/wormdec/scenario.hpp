// scenario.hpp — scenario configuration, dispatch and sweeps for the wormdec tool

#pragma once

#include "wormdec/coefficients.hpp"
#include "wormdec/decoherence.hpp"
#include "wormdec/master.hpp"
#include "wormdec/results.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace wormdec {

enum class Mode { coeffs, rates, evolve_fock, evolve_position, compare, sweep };

std::string to_string(Mode mode);
std::optional<Mode> mode_from_string(const std::string& name);

struct ConfigIssue {
    std::string path;  // dotted field path, empty for document-level problems
    int line{0};       // 1-based, 0 when unknown
    std::string message;
};

// Every violation found in a document, not just the first.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string source, std::vector<ConfigIssue> issues);

    const std::vector<ConfigIssue>& issues() const noexcept { return issues_; }
    const std::string& source() const noexcept { return source_; }

private:
    std::string source_;
    std::vector<ConfigIssue> issues_;
};

struct NumberState {
    int n{0};
};
struct DiagonalMixture {
    std::vector<double> probs;
};
struct PureAmplitudes {
    std::vector<Complex> amplitudes;
};
using InitialState = std::variant<NumberState, DiagonalMixture, PureAmplitudes>;

struct SemiclassicalConfig {
    SemiclassicalParams params;  // s_w, mass and gamma_b resolved
    double t_b{1.0};
};

struct RatesConfig {
    int n_max{0};
    std::vector<double> separations;
};

struct FockConfig {
    int dim{16};
    InitialState initial{NumberState{0}};
    double t_final{0.1};
    double dt{1e-3};
    Subtraction subtraction{Subtraction::full};
    std::vector<double> snapshot_times;  // ascending, ends at t_final
    EvolveOptions options;
};

struct PositionConfig {
    PositionGrid grid;
    GaussianPair pair;
    RateModel model;
    double t_final{1.0};
    std::vector<double> snapshot_times;  // ascending, starts at 0, ends at t_final
    bool dump_kernel{false};
};

struct CompareConfig {
    RateModel wormhole;
    RateModel brownian;
    std::vector<double> separations;
};

struct ScenarioConfig;

struct SweepConfig {
    std::string parameter;  // dotted path into the base document
    std::vector<double> values;
    int workers{1};
    nlohmann::json base;
    Mode base_mode{Mode::coeffs};
};

// Base document with the swept parameter set to values[index].
nlohmann::json sweep_point(const SweepConfig& sweep, std::size_t index);

struct OutputConfig {
    std::optional<std::string> path;
    std::optional<Format> format;
};

struct ScenarioConfig {
    Mode mode{Mode::coeffs};
    std::optional<WormholeParams> wormhole;
    std::optional<SemiclassicalConfig> semiclassical;
    std::optional<RatesConfig> rates;
    std::optional<FockConfig> fock;
    std::optional<PositionConfig> position;
    std::optional<CompareConfig> compare;
    std::optional<SweepConfig> sweep;
    OutputConfig output;
    std::vector<std::string> warnings;
};

// `source` labels diagnostics (usually the file path). When `expected_mode` is
// given, a document without "mode" takes it and a conflicting "mode" is rejected.
ScenarioConfig parse_config(const std::string& text, const std::string& source = "<config>",
                            std::optional<Mode> expected_mode = std::nullopt);
ScenarioConfig parse_config_json(const nlohmann::json& doc, const std::string& source,
                                 std::optional<Mode> expected_mode = std::nullopt);
ScenarioConfig load_config(const std::string& path, std::optional<Mode> expected_mode = std::nullopt);

// Thrown by run_scenario; carries the rows completed before the failure.
class ScenarioFailure : public std::runtime_error {
public:
    enum class Kind { config, numeric, io, other };

    ScenarioFailure(const std::string& what, Kind kind, ResultTable partial)
        : std::runtime_error(what), kind_(kind), partial_(std::move(partial)) {}

    Kind kind() const noexcept { return kind_; }
    const ResultTable& partial() const noexcept { return partial_; }

private:
    Kind kind_;
    ResultTable partial_;
};

struct ScenarioResult {
    ResultTable table;
    std::optional<ResultTable> kernel;  // evolve-position with dump_kernel
};

// Column schema of each mode's main table.
std::vector<std::string> columns_for(Mode mode);

ScenarioResult run_scenario(const ScenarioConfig& config);

}  // namespace wormdec
