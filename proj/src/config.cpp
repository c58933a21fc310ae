#include "wormdec/scenario.hpp"

#include "wormdec/errors.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace wormdec {

using nlohmann::json;

std::string to_string(Mode mode) {
    switch (mode) {
        case Mode::coeffs: return "coeffs";
        case Mode::rates: return "rates";
        case Mode::evolve_fock: return "evolve-fock";
        case Mode::evolve_position: return "evolve-position";
        case Mode::compare: return "compare";
        case Mode::sweep: return "sweep";
    }
    return "unknown";
}

std::optional<Mode> mode_from_string(const std::string& name) {
    for (const Mode m : {Mode::coeffs, Mode::rates, Mode::evolve_fock, Mode::evolve_position, Mode::compare,
                         Mode::sweep}) {
        if (to_string(m) == name) return m;
    }
    return std::nullopt;
}

namespace {

std::string render_issues(const std::string& source, const std::vector<ConfigIssue>& issues) {
    std::ostringstream os;
    os << "invalid configuration " << source << " (" << issues.size() << " problem"
       << (issues.size() == 1 ? "" : "s") << ")";
    for (const auto& issue : issues) {
        os << "\n  " << source;
        if (issue.line > 0) os << ':' << issue.line;
        os << ": ";
        if (!issue.path.empty()) os << issue.path << ": ";
        os << issue.message;
    }
    return os.str();
}

}  // namespace

ConfigError::ConfigError(std::string source, std::vector<ConfigIssue> issues)
    : std::runtime_error(render_issues(source, issues)), source_(std::move(source)), issues_(std::move(issues)) {}

namespace {

std::string join(const std::string& base, const std::string& key) { return base.empty() ? key : base + "." + key; }

// Collects issues and maps dotted paths back to source lines.
class Diagnostics {
public:
    explicit Diagnostics(const std::string* text) : text_(text) {}

    void add(const std::string& path, std::string message) {
        issues_.push_back({path, line_of(path), std::move(message)});
    }

    std::vector<ConfigIssue>& issues() { return issues_; }
    bool empty() const { return issues_.empty(); }

    // Locates each path component as a quoted key, in order.
    int line_of(const std::string& path) const {
        if (text_ == nullptr || path.empty()) return 0;
        std::size_t pos = 0;
        std::size_t found = std::string::npos;
        std::stringstream ss(path);
        std::string part;
        while (std::getline(ss, part, '.')) {
            if (const auto br = part.find('['); br != std::string::npos) part.erase(br);
            const auto hit = text_->find('"' + part + '"', pos);
            if (hit == std::string::npos) break;
            found = hit;
            pos = hit + part.size() + 2;
        }
        if (found == std::string::npos) return 0;
        return 1 + static_cast<int>(std::count(text_->begin(), text_->begin() + static_cast<long>(found), '\n'));
    }

private:
    const std::string* text_;
    std::vector<ConfigIssue> issues_;
};

enum class Need { required, optional };

// Typed access to one JSON object; every key read is marked so that finish()
// can reject the rest.
class ObjectReader {
public:
    ObjectReader(const json& obj, std::string path, Diagnostics& diag)
        : obj_(&obj), path_(std::move(path)), diag_(&diag) {}

    const std::string& path() const { return path_; }
    std::string at(const std::string& key) const { return join(path_, key); }
    Diagnostics& diag() const { return *diag_; }

    bool has(const std::string& key) const { return obj_->contains(key); }

    const json* raw(const std::string& key, Need need) {
        seen_.insert(key);
        const auto it = obj_->find(key);
        if (it == obj_->end()) {
            if (need == Need::required) diag_->add(at(key), "required field is missing");
            return nullptr;
        }
        return &*it;
    }

    std::optional<double> number(const std::string& key, Need need) {
        const json* v = raw(key, need);
        if (v == nullptr) return std::nullopt;
        if (!v->is_number()) {
            diag_->add(at(key), "expected a number");
            return std::nullopt;
        }
        return v->get<double>();
    }

    std::optional<int> integer(const std::string& key, Need need) {
        const json* v = raw(key, need);
        if (v == nullptr) return std::nullopt;
        if (v->is_number_integer()) return v->get<int>();
        if (v->is_number_float()) {
            const double d = v->get<double>();
            if (std::floor(d) == d && std::abs(d) < 1e9) return static_cast<int>(d);
        }
        diag_->add(at(key), "expected an integer");
        return std::nullopt;
    }

    std::optional<std::string> string(const std::string& key, Need need) {
        const json* v = raw(key, need);
        if (v == nullptr) return std::nullopt;
        if (!v->is_string()) {
            diag_->add(at(key), "expected a string");
            return std::nullopt;
        }
        return v->get<std::string>();
    }

    std::optional<bool> boolean(const std::string& key, Need need) {
        const json* v = raw(key, need);
        if (v == nullptr) return std::nullopt;
        if (!v->is_boolean()) {
            diag_->add(at(key), "expected true or false");
            return std::nullopt;
        }
        return v->get<bool>();
    }

    std::optional<std::vector<double>> numbers(const std::string& key, Need need) {
        const json* v = raw(key, need);
        if (v == nullptr) return std::nullopt;
        if (!v->is_array()) {
            diag_->add(at(key), "expected an array of numbers");
            return std::nullopt;
        }
        std::vector<double> out;
        for (std::size_t i = 0; i < v->size(); ++i) {
            if (!(*v)[i].is_number()) {
                diag_->add(at(key) + "[" + std::to_string(i) + "]", "expected a number");
                return std::nullopt;
            }
            out.push_back((*v)[i].get<double>());
        }
        return out;
    }

    std::optional<ObjectReader> object(const std::string& key, Need need) {
        const json* v = raw(key, need);
        if (v == nullptr) return std::nullopt;
        if (!v->is_object()) {
            diag_->add(at(key), "expected an object");
            return std::nullopt;
        }
        return ObjectReader(*v, at(key), *diag_);
    }

    void finish(const std::string& context) const {
        for (auto it = obj_->begin(); it != obj_->end(); ++it) {
            if (!seen_.count(it.key())) diag_->add(at(it.key()), "unknown field (not used by " + context + ")");
        }
    }

private:
    const json* obj_;
    std::string path_;
    Diagnostics* diag_;
    std::set<std::string> seen_;
};

// ---------------------------------------------------------------------------

std::optional<WormholeParams> read_wormhole(ObjectReader& r) {
    const auto k = r.number("k", Need::required);
    const auto r0_sq = r.number("r0_sq", Need::required);
    const auto e0 = r.number("e0", Need::optional);
    const auto n = r.integer("N", Need::required);
    auto& d = r.diag();
    bool ok = k && r0_sq && n;
    if (k && *k < 0.0) d.add(r.at("k"), "k must be nonnegative"), ok = false;
    if (r0_sq && !(*r0_sq > 0.0)) d.add(r.at("r0_sq"), "r0_sq must be positive"), ok = false;
    if (k && r0_sq && !(*k < *r0_sq)) {
        d.add(r.at("k"), "k0 domain: k must be strictly less than r0_sq so that k0 = sqrt(2k/(r0_sq - k)) is real");
        ok = false;
    }
    if (e0 && !(*e0 > 0.0)) d.add(r.at("e0"), "e0 must be positive"), ok = false;
    if (n && (*n < 0 || *n % 2 != 0)) {
        d.add(r.at("N"), "N must be an even nonnegative integer (N = 0, 2, 4, ...); got " + std::to_string(*n));
        ok = false;
    }
    if (!ok) return std::nullopt;
    return WormholeParams{*k, *r0_sq, e0.value_or(1.0), *n};
}

struct TemperatureInputs {
    std::optional<double> t_b;
    std::optional<double> alpha;
    std::optional<double> pi_alpha;
    std::optional<double> s_w;
};

TemperatureInputs read_temperature(ObjectReader& r) {
    TemperatureInputs in;
    in.t_b = r.number("t_b", Need::optional);
    in.alpha = r.number("alpha", Need::optional);
    in.pi_alpha = r.number("pi_alpha", Need::optional);
    in.s_w = r.number("s_w", Need::optional);
    auto& d = r.diag();
    if (in.t_b && !(*in.t_b > 0.0)) d.add(r.at("t_b"), "t_b must be positive");
    if (in.pi_alpha && !(*in.pi_alpha > 0.0)) d.add(r.at("pi_alpha"), "pi_alpha must be positive (log(1 + 1/pi_alpha))");
    if (in.alpha.has_value() != in.pi_alpha.has_value()) {
        d.add(r.at(in.alpha ? "pi_alpha" : "alpha"), "alpha and pi_alpha must be given together");
    }
    if (!in.t_b && !(in.alpha && in.pi_alpha) && !in.s_w) {
        d.add(r.at("t_b"), "give t_b, or alpha and pi_alpha, or s_w");
    }
    return in;
}

// T_b and S_w with precedence t_b > nucleation rate > e^{-s_w}.
std::optional<std::pair<double, double>> resolve_temperature_inputs(const TemperatureInputs& in,
                                                                    std::vector<std::string>& warnings) {
    if (in.t_b && !(*in.t_b > 0.0)) return std::nullopt;
    if (in.pi_alpha && !(*in.pi_alpha > 0.0)) return std::nullopt;
    double t_b = 0.0;
    if (in.t_b || (in.alpha && in.pi_alpha)) {
        t_b = resolve_temperature(in.t_b, in.alpha, in.pi_alpha, warnings);
    } else if (in.s_w) {
        t_b = std::exp(-*in.s_w);
    } else {
        return std::nullopt;
    }
    const double s_w = in.s_w ? *in.s_w : -std::log(t_b);
    return std::make_pair(t_b, s_w);
}

std::optional<double> read_gamma_b(ObjectReader& r) {
    const auto g = r.number("gamma_b", Need::optional);
    if (g && !(*g >= 0.0 && *g <= 1.0)) {
        r.diag().add(r.at("gamma_b"), "gamma_b must lie in [0, 1]");
        return std::nullopt;
    }
    return g.value_or(1.0);
}

std::optional<double> read_mass(ObjectReader& r, std::optional<double> r0) {
    const auto mass = r.number("mass", Need::optional);
    const auto scale = r.number("mass_scale", Need::optional);
    const auto r0_key = r0 ? std::optional<double>{} : r.number("r0", Need::optional);
    auto& d = r.diag();
    if (mass) {
        if (scale || r0_key) d.add(r.at("mass"), "give either mass or (r0, mass_scale), not both");
        if (!(*mass > 0.0)) {
            d.add(r.at("mass"), "mass must be positive");
            return std::nullopt;
        }
        return mass;
    }
    const auto radius = r0 ? r0 : r0_key;
    if (!radius) {
        d.add(r.at("mass"), "mass is required (or r0, giving m = mass_scale / r0)");
        return std::nullopt;
    }
    if (!(*radius > 0.0)) {
        d.add(r.at("r0"), "r0 must be positive");
        return std::nullopt;
    }
    if (scale && !(*scale > 0.0)) {
        d.add(r.at("mass_scale"), "mass_scale must be positive");
        return std::nullopt;
    }
    return scale.value_or(1.0) / *radius;
}

std::optional<SemiclassicalConfig> read_semiclassical(ObjectReader& r, double r0, std::vector<std::string>& warnings) {
    const auto gamma_b = read_gamma_b(r);
    const auto temp = read_temperature(r);
    const auto mass = read_mass(r, r0);
    r.finish("the semiclassical block");
    const auto resolved = resolve_temperature_inputs(temp, warnings);
    if (!gamma_b || !mass || !resolved) return std::nullopt;
    SemiclassicalConfig sc;
    sc.params.gamma_b = *gamma_b;
    sc.params.mass = *mass;
    sc.params.s_w = resolved->second;
    sc.params.alpha = temp.alpha.value_or(0.0);
    sc.params.pi_alpha = temp.pi_alpha.value_or(1.0);
    sc.t_b = resolved->first;
    return sc;
}

std::optional<RateModel> read_model(ObjectReader& r, std::optional<int> n_quanta, std::vector<std::string>& warnings,
                                    std::optional<std::string> required_family = std::nullopt) {
    const auto kind = r.string("kind", Need::required);
    auto& d = r.diag();
    if (!kind) {
        r.finish("a rate model");
        return std::nullopt;
    }
    if (required_family) {
        const bool is_wormhole = kind->rfind("wormhole", 0) == 0;
        if ((*required_family == "wormhole") != is_wormhole) {
            d.add(r.at("kind"), "expected a " + *required_family + " model, got '" + *kind + "'");
        }
    }
    RateModel model;
    model.n_quanta = n_quanta.value_or(0);
    bool ok = n_quanta.has_value();
    if (*kind == "wormhole-n") {
        const auto n = r.integer("N", Need::required);
        const auto r0 = r.number("r0", Need::required);
        if (n && (*n < 0 || *n % 2 != 0)) d.add(r.at("N"), "N must be an even nonnegative integer (N = 0, 2, 4, ...)"), ok = false;
        if (r0 && !(*r0 > 0.0)) d.add(r.at("r0"), "r0 must be positive"), ok = false;
        ok = ok && n && r0;
        if (ok) model.law = WormholeNModel{*n, *r0};
    } else if (*kind == "wormhole-semiclassical") {
        const auto gamma_b = read_gamma_b(r);
        const auto temp = read_temperature(r);
        const auto mass = read_mass(r, std::nullopt);
        const auto norm = r.number("normalization", Need::optional);
        if (norm && !(*norm > 0.0)) d.add(r.at("normalization"), "normalization must be positive"), ok = false;
        const auto resolved = resolve_temperature_inputs(temp, warnings);
        ok = ok && gamma_b && mass && resolved;
        if (ok) model.law = SemiclassicalModel{*gamma_b, resolved->first, *mass, norm.value_or(1.0)};
    } else if (*kind == "brownian") {
        const auto mass = r.number("mass", Need::required);
        const auto temperature = r.number("temperature", Need::required);
        const auto gamma = r.number("gamma", Need::optional);
        const auto eta = r.number("eta", Need::optional);
        if (mass && !(*mass > 0.0)) d.add(r.at("mass"), "mass must be positive"), ok = false;
        if (temperature && !(*temperature > 0.0)) d.add(r.at("temperature"), "temperature must be positive"), ok = false;
        if (gamma.has_value() == eta.has_value()) {
            d.add(r.at("gamma"), "give exactly one of gamma or eta (gamma = eta / 2M)");
            ok = false;
        }
        if (gamma && !(*gamma > 0.0)) d.add(r.at("gamma"), "gamma must be positive"), ok = false;
        if (eta && !(*eta > 0.0)) d.add(r.at("eta"), "eta must be positive"), ok = false;
        ok = ok && mass && temperature;
        if (ok) {
            model.law = gamma ? BrownianModel{*mass, *gamma, *temperature}
                              : BrownianModel::from_viscosity(*eta, *mass, *temperature);
        }
    } else {
        d.add(r.at("kind"), "unknown model kind '" + *kind + "' (expected wormhole-n, wormhole-semiclassical or brownian)");
        ok = false;
    }
    r.finish("a " + *kind + " model");
    if (!ok) return std::nullopt;
    return model;
}

std::optional<std::vector<double>> read_snapshots(ObjectReader& r, std::optional<double> t_final, bool include_zero) {
    auto times = r.numbers("snapshot_times", Need::optional);
    if (!t_final) return std::nullopt;
    std::vector<double> out = times.value_or(std::vector<double>{});
    auto& d = r.diag();
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (!(out[i] >= 0.0 && out[i] <= *t_final)) {
            d.add(r.at("snapshot_times"), "snapshot times must lie in [0, t_final]");
            return std::nullopt;
        }
        if (i > 0 && !(out[i] > out[i - 1])) {
            d.add(r.at("snapshot_times"), "snapshot times must be strictly ascending");
            return std::nullopt;
        }
    }
    if (include_zero && (out.empty() || out.front() != 0.0)) out.insert(out.begin(), 0.0);
    if (!include_zero && !out.empty() && out.front() == 0.0) out.erase(out.begin());
    if (out.empty() || out.back() != *t_final) out.push_back(*t_final);
    return out;
}

std::optional<InitialState> read_initial_state(ObjectReader& r, std::optional<int> dim) {
    auto& d = r.diag();
    const int given = static_cast<int>(r.has("number")) + static_cast<int>(r.has("diagonal")) +
                      static_cast<int>(r.has("amplitudes"));
    if (given != 1) {
        d.add(r.path(), "give exactly one of number, diagonal or amplitudes");
        r.raw("number", Need::optional);
        r.raw("diagonal", Need::optional);
        r.raw("amplitudes", Need::optional);
        r.finish("initial_state");
        return std::nullopt;
    }
    std::optional<InitialState> out;
    if (r.has("number")) {
        const auto n = r.integer("number", Need::required);
        if (n && dim && (*n < 0 || *n >= *dim)) {
            d.add(r.at("number"), "number state must lie in [0, dim)");
        } else if (n) {
            out = NumberState{*n};
        }
    } else if (r.has("diagonal")) {
        const auto probs = r.numbers("diagonal", Need::required);
        if (probs) {
            bool ok = true;
            if (dim && static_cast<int>(probs->size()) > *dim) {
                d.add(r.at("diagonal"), "at most " + std::to_string(*dim) + " probabilities");
                ok = false;
            }
            double total = 0.0;
            for (const double p : *probs) {
                if (p < 0.0) ok = false;
                total += p;
            }
            if (!ok || !(total > 0.0)) {
                if (ok) d.add(r.at("diagonal"), "probabilities must not all vanish");
                else d.add(r.at("diagonal"), "probabilities must be nonnegative");
            } else {
                std::vector<double> padded = *probs;
                if (dim) padded.resize(static_cast<std::size_t>(*dim), 0.0);
                out = DiagonalMixture{std::move(padded)};
            }
        }
    } else {
        const json* v = r.raw("amplitudes", Need::required);
        if (v != nullptr) {
            std::vector<Complex> amps;
            bool ok = v->is_array();
            if (ok) {
                for (const auto& e : *v) {
                    if (e.is_number()) {
                        amps.emplace_back(e.get<double>(), 0.0);
                    } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
                        amps.emplace_back(e[0].get<double>(), e[1].get<double>());
                    } else {
                        ok = false;
                    }
                }
            }
            if (!ok) {
                d.add(r.at("amplitudes"), "expected an array of numbers or [re, im] pairs");
            } else if (dim && static_cast<int>(amps.size()) > *dim) {
                d.add(r.at("amplitudes"), "at most " + std::to_string(*dim) + " amplitudes");
            } else {
                double norm = 0.0;
                for (const auto& a : amps) norm += std::norm(a);
                if (!(norm > 0.0)) d.add(r.at("amplitudes"), "state vector must not vanish");
                else {
                    if (dim) amps.resize(static_cast<std::size_t>(*dim), Complex{});
                    out = PureAmplitudes{std::move(amps)};
                }
            }
        }
    }
    r.finish("initial_state");
    return out;
}

std::optional<FockConfig> read_fock(ObjectReader& r) {
    auto& d = r.diag();
    FockConfig fc;
    const auto dim = r.integer("dim", Need::required);
    bool ok = dim.has_value();
    if (dim && *dim < kMinFockDim) d.add(r.at("dim"), "dim must be at least " + std::to_string(kMinFockDim)), ok = false;
    std::optional<InitialState> init;
    if (auto ir = r.object("initial_state", Need::required)) {
        init = read_initial_state(*ir, ok ? dim : std::nullopt);
    }
    const auto t_final = r.number("t_final", Need::required);
    const auto dt = r.number("dt", Need::required);
    if (t_final && !(*t_final > 0.0)) d.add(r.at("t_final"), "t_final must be positive"), ok = false;
    if (dt && !(*dt > 0.0)) d.add(r.at("dt"), "dt must be positive"), ok = false;
    if (dt && t_final && *dt > *t_final) d.add(r.at("dt"), "dt must not exceed t_final"), ok = false;
    if (const auto s = r.string("subtraction", Need::optional)) {
        try {
            fc.subtraction = subtraction_from_string(*s);
        } catch (const std::invalid_argument& e) {
            d.add(r.at("subtraction"), e.what());
            ok = false;
        }
    }
    if (const auto gb = r.integer("guard_band", Need::optional)) {
        if (*gb < 0 || (dim && *gb >= *dim)) d.add(r.at("guard_band"), "guard_band must lie in [0, dim)"), ok = false;
        fc.options.guard_band = *gb;
    }
    if (const auto lim = r.number("leakage_limit", Need::optional)) {
        if (!(*lim > 0.0)) d.add(r.at("leakage_limit"), "leakage_limit must be positive"), ok = false;
        fc.options.leakage_limit = *lim;
    }
    const auto snaps = read_snapshots(r, t_final && *t_final > 0.0 ? t_final : std::nullopt, false);
    r.finish("evolve-fock");
    if (!ok || !init || !t_final || !dt || !snaps) return std::nullopt;
    fc.dim = *dim;
    fc.initial = *init;
    fc.t_final = *t_final;
    fc.dt = *dt;
    fc.snapshot_times = *snaps;
    return fc;
}

std::optional<PositionConfig> read_position(ObjectReader& r, std::vector<std::string>& warnings) {
    auto& d = r.diag();
    PositionConfig pc;
    bool ok = true;
    if (auto g = r.object("grid", Need::required)) {
        const auto lo = g->number("x_min", Need::required);
        const auto hi = g->number("x_max", Need::required);
        const auto n = g->integer("n_points", Need::required);
        g->finish("grid");
        if (lo && hi && !(*lo < *hi)) d.add(g->at("x_max"), "x_max must exceed x_min"), ok = false;
        if (n && *n < 16) d.add(g->at("n_points"), "n_points must be at least 16"), ok = false;
        if (lo && hi && n) pc.grid = {*lo, *hi, *n};
        else ok = false;
    } else {
        ok = false;
    }
    if (auto p = r.object("pair", Need::required)) {
        const auto x1 = p->number("x1", Need::required);
        const auto x2 = p->number("x2", Need::required);
        const auto sigma = p->number("sigma", Need::required);
        const auto w1 = p->number("weight1", Need::optional);
        const auto w2 = p->number("weight2", Need::optional);
        p->finish("pair");
        if (sigma && !(*sigma > 0.0)) d.add(p->at("sigma"), "sigma must be positive"), ok = false;
        if (x1 && x2 && sigma) {
            pc.pair = {*x1, *x2, *sigma, w1.value_or(pc.pair.weight1), w2.value_or(pc.pair.weight2)};
            if (ok) {
                const double lo = std::min(*x1, *x2) - 4.0 * *sigma;
                const double hi = std::max(*x1, *x2) + 4.0 * *sigma;
                if (lo < pc.grid.x_min || hi > pc.grid.x_max) {
                    d.add(r.at("grid"), "grid does not cover the 4-sigma window [" + format_double(lo) + ", " +
                                            format_double(hi) + "] of the gaussian pair");
                    ok = false;
                }
            }
        } else {
            ok = false;
        }
    } else {
        ok = false;
    }
    const auto n_quanta = r.integer("n_quanta", Need::required);
    if (n_quanta && *n_quanta < 0) d.add(r.at("n_quanta"), "n_quanta must be nonnegative"), ok = false;
    if (auto m = r.object("model", Need::required)) {
        if (auto model = read_model(*m, n_quanta, warnings)) pc.model = *model;
        else ok = false;
    } else {
        ok = false;
    }
    const auto t_final = r.number("t_final", Need::required);
    if (t_final && !(*t_final > 0.0)) d.add(r.at("t_final"), "t_final must be positive"), ok = false;
    const auto snaps = read_snapshots(r, t_final && *t_final > 0.0 ? t_final : std::nullopt, true);
    pc.dump_kernel = r.boolean("dump_kernel", Need::optional).value_or(false);
    r.finish("evolve-position");
    if (!ok || !snaps || !n_quanta) return std::nullopt;
    pc.t_final = *t_final;
    pc.snapshot_times = *snaps;
    return pc;
}

std::optional<CompareConfig> read_compare(ObjectReader& r, std::vector<std::string>& warnings) {
    auto& d = r.diag();
    CompareConfig cc;
    bool ok = true;
    const auto n_quanta = r.integer("n_quanta", Need::required);
    if (n_quanta && *n_quanta < 0) d.add(r.at("n_quanta"), "n_quanta must be nonnegative"), ok = false;
    if (auto w = r.object("wormhole", Need::required)) {
        if (auto m = read_model(*w, n_quanta, warnings, "wormhole")) cc.wormhole = *m;
        else ok = false;
    } else {
        ok = false;
    }
    if (auto b = r.object("brownian", Need::required)) {
        if (auto m = read_model(*b, n_quanta, warnings, "brownian")) cc.brownian = *m;
        else ok = false;
    } else {
        ok = false;
    }
    const auto seps = r.numbers("separations", Need::required);
    if (seps) {
        if (seps->empty()) d.add(r.at("separations"), "at least one separation is required"), ok = false;
        for (std::size_t i = 0; i < seps->size(); ++i) {
            if (!((*seps)[i] > 0.0)) {
                d.add(r.at("separations"), "separations must be positive");
                ok = false;
                break;
            }
            if (i > 0 && !((*seps)[i] > (*seps)[i - 1])) {
                d.add(r.at("separations"), "separations must be sorted ascending");
                ok = false;
                break;
            }
        }
        cc.separations = *seps;
    }
    r.finish("compare");
    if (!ok || !seps || !n_quanta) return std::nullopt;
    return cc;
}

std::optional<RatesConfig> read_rates(ObjectReader& r) {
    auto& d = r.diag();
    const auto n_max = r.integer("n_max", Need::required);
    const auto seps = r.numbers("separations", Need::required);
    r.finish("rates");
    bool ok = n_max && seps;
    if (n_max && *n_max < 0) d.add(r.at("n_max"), "n_max must be nonnegative"), ok = false;
    if (seps && seps->empty()) d.add(r.at("separations"), "at least one separation is required"), ok = false;
    if (seps && !std::is_sorted(seps->begin(), seps->end())) {
        d.add(r.at("separations"), "separations must be sorted ascending");
        ok = false;
    }
    if (!ok) return std::nullopt;
    return RatesConfig{*n_max, *seps};
}

// Writes `value` at a dotted path, creating the leaf when its parent exists.
bool set_path(json& doc, const std::string& path, double value) {
    json* node = &doc;
    std::stringstream ss(path);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(ss, part, '.')) parts.push_back(part);
    if (parts.empty()) return false;
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
        if (!node->is_object() || !node->contains(parts[i])) return false;
        node = &(*node)[parts[i]];
    }
    if (!node->is_object()) return false;
    if (std::floor(value) == value && std::abs(value) < 9.007199254740992e15) {
        (*node)[parts.back()] = static_cast<std::int64_t>(value);
    } else {
        (*node)[parts.back()] = value;
    }
    return true;
}

ScenarioConfig parse_document(const json& doc, Diagnostics& diag, std::optional<Mode> expected_mode,
                              const std::string& prefix, bool allow_sweep);

std::optional<SweepConfig> read_sweep(ObjectReader& r, Diagnostics& diag, std::vector<std::string>& warnings) {
    SweepConfig sc;
    const auto param = r.string("parameter", Need::required);
    const auto values = r.numbers("values", Need::required);
    const auto workers = r.integer("workers", Need::optional);
    const json* base = r.raw("base", Need::required);
    r.finish("sweep");
    bool ok = param && values && base;
    if (values && values->empty()) diag.add(r.at("values"), "at least one value is required"), ok = false;
    if (workers && *workers < 1) diag.add(r.at("workers"), "workers must be at least 1"), ok = false;
    if (base && !base->is_object()) diag.add(r.at("base"), "expected an object"), ok = false;
    if (!ok) return std::nullopt;

    sc.parameter = *param;
    sc.values = *values;
    sc.workers = workers.value_or(1);
    sc.base = *base;
    const std::string base_path = r.at("base");
    if (const auto it = base->find("mode"); it != base->end() && it->is_string()) {
        const auto m = mode_from_string(it->get<std::string>());
        if (m == Mode::sweep) {
            diag.add(join(base_path, "mode"), "a sweep cannot nest another sweep");
            return std::nullopt;
        }
        if (m) sc.base_mode = *m;
    }
    // Every sweep point must validate on its own.
    for (const double v : sc.values) {
        json point = sc.base;
        if (!set_path(point, sc.parameter, v)) {
            diag.add(r.at("parameter"), "'" + sc.parameter + "' does not name a field of the base scenario");
            return std::nullopt;
        }
        const std::size_t before = diag.issues().size();
        ScenarioConfig sub = parse_document(point, diag, std::nullopt, base_path, false);
        for (std::size_t i = before; i < diag.issues().size(); ++i) {
            diag.issues()[i].message = "[" + sc.parameter + "=" + format_double(v) + "] " + diag.issues()[i].message;
        }
        if (diag.issues().size() > before) return std::nullopt;
        sc.base_mode = sub.mode;
        for (auto& w : sub.warnings) warnings.push_back("[" + sc.parameter + "=" + format_double(v) + "] " + w);
    }
    return sc;
}

ScenarioConfig parse_document(const json& doc, Diagnostics& diag, std::optional<Mode> expected_mode,
                              const std::string& prefix, bool allow_sweep) {
    ScenarioConfig cfg;
    if (!doc.is_object()) {
        diag.add(prefix, "the configuration must be a JSON object");
        return cfg;
    }
    ObjectReader top(doc, prefix, diag);
    std::optional<Mode> mode = expected_mode;
    if (const auto name = top.string("mode", expected_mode ? Need::optional : Need::required)) {
        const auto m = mode_from_string(*name);
        if (!m) {
            diag.add(top.at("mode"), "unknown mode '" + *name +
                                         "' (expected coeffs, rates, evolve-fock, evolve-position, compare or sweep)");
        } else if (expected_mode && *m != *expected_mode) {
            diag.add(top.at("mode"), "document mode '" + *name + "' does not match subcommand '" +
                                         to_string(*expected_mode) + "'");
        } else {
            mode = m;
        }
    }
    if (!mode) {
        top.finish("this configuration");
        return cfg;
    }
    cfg.mode = *mode;
    if (cfg.mode == Mode::sweep && !allow_sweep) diag.add(top.at("mode"), "a sweep cannot nest another sweep");

    const bool needs_wormhole = cfg.mode == Mode::coeffs || cfg.mode == Mode::rates || cfg.mode == Mode::evolve_fock;
    if (needs_wormhole) cfg.wormhole = read_wormhole(top);

    switch (cfg.mode) {
        case Mode::coeffs: break;
        case Mode::rates: {
            if (auto sr = top.object("semiclassical", Need::required)) {
                const double r0 = cfg.wormhole ? r0_of(*cfg.wormhole) : 1.0;
                cfg.semiclassical = read_semiclassical(*sr, r0, cfg.warnings);
            }
            if (auto rr = top.object("rates", Need::required)) cfg.rates = read_rates(*rr);
            break;
        }
        case Mode::evolve_fock:
            if (auto fr = top.object("fock", Need::required)) cfg.fock = read_fock(*fr);
            break;
        case Mode::evolve_position:
            if (auto pr = top.object("position", Need::required)) cfg.position = read_position(*pr, cfg.warnings);
            break;
        case Mode::compare:
            if (auto cr = top.object("compare", Need::required)) cfg.compare = read_compare(*cr, cfg.warnings);
            break;
        case Mode::sweep:
            if (auto sr = top.object("sweep", Need::required)) cfg.sweep = read_sweep(*sr, diag, cfg.warnings);
            break;
    }

    if (auto out = top.object("output", Need::optional)) {
        cfg.output.path = out->string("path", Need::optional);
        if (const auto f = out->string("format", Need::optional)) {
            try {
                cfg.output.format = format_from_string(*f);
            } catch (const std::invalid_argument& e) {
                diag.add(out->at("format"), e.what());
            }
        }
        out->finish("output");
    }
    top.finish("mode " + to_string(cfg.mode));
    return cfg;
}

}  // namespace

json sweep_point(const SweepConfig& sweep, std::size_t index) {
    json doc = sweep.base;
    if (!set_path(doc, sweep.parameter, sweep.values.at(index))) {
        throw std::invalid_argument("'" + sweep.parameter + "' does not name a field of the base scenario");
    }
    return doc;
}

ScenarioConfig parse_config_json(const json& doc, const std::string& source, std::optional<Mode> expected_mode) {
    Diagnostics diag(nullptr);
    ScenarioConfig cfg = parse_document(doc, diag, expected_mode, "", true);
    if (!diag.empty()) throw ConfigError(source, std::move(diag.issues()));
    return cfg;
}

ScenarioConfig parse_config(const std::string& text, const std::string& source, std::optional<Mode> expected_mode) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto upto = std::min<std::size_t>(e.byte, text.size());
        const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n'));
        throw ConfigError(source, {{"", line, std::string("JSON parse error: ") + e.what()}});
    }
    Diagnostics diag(&text);
    ScenarioConfig cfg = parse_document(doc, diag, expected_mode, "", true);
    if (!diag.empty()) throw ConfigError(source, std::move(diag.issues()));
    return cfg;
}

ScenarioConfig load_config(const std::string& path, std::optional<Mode> expected_mode) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path, expected_mode);
}

}  // namespace wormdec
