#include "jcdiss/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace jcdiss {

std::vector<double> GridSpec::values() const {
    std::vector<double> out;
    if (points <= 0) return out;
    if (points == 1) return {min};
    for (int i = 0; i < points; ++i) out.push_back(i == points - 1 ? max : min + (max - min) * i / (points - 1));
    return out;
}

DressedLabel parse_dressed_label(const std::string& name) {
    if (name == "E0") return {};
    if (name.size() >= 2 && (name.back() == 'p' || name.back() == 'm')) {
        const std::string digits = name.substr(0, name.size() - 1);
        if (!digits.empty() && std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
            const int N = std::stoi(digits);
            if (N >= 1) return {N, name.back() == 'p' ? Sign::Plus : Sign::Minus};
        }
    }
    throw ConfigError("dressed label '" + name + "' is not E0 or <N>p / <N>m with N >= 1");
}

namespace {

enum class Unit { None, Frequency, Time };

class Reader {
public:
    Reader(std::string source, double scale) : source_(std::move(source)), scale_(scale) {}

    [[noreturn]] void fail(const YAML::Node& at, const std::string& field, const std::string& msg) const {
        std::ostringstream os;
        os << source_;
        if (at.IsDefined() && at.Mark().line >= 0) os << ":" << at.Mark().line + 1 << ":" << at.Mark().column + 1;
        os << ": " << field << ": " << msg;
        throw ConfigError(os.str());
    }

    void require_map(const YAML::Node& n, const std::string& path) const {
        if (!n.IsMap()) fail(n, path, "expected a mapping");
    }

    void check_keys(const YAML::Node& n, const std::string& path, std::initializer_list<const char*> allowed) const {
        require_map(n, path);
        for (const auto& kv : n) {
            const auto key = kv.first.as<std::string>();
            if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
                std::string list;
                for (const char* a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
                fail(kv.first, join(path, key), "unknown key (allowed: " + list + ")");
            }
        }
    }

    double number(const YAML::Node& parent, const std::string& key, const std::string& path, Unit unit,
                  std::optional<double> fallback = std::nullopt) const {
        const YAML::Node n = parent[key];
        if (!n) {
            if (fallback) return *fallback;
            fail(parent, join(path, key), "required number is missing");
        }
        return scaled(n, join(path, key), unit);
    }

    double scaled(const YAML::Node& n, const std::string& field, Unit unit) const {
        double v = 0;
        try {
            if (!n.IsScalar()) throw YAML::Exception(n.Mark(), "not a scalar");
            v = n.as<double>();
        } catch (const YAML::Exception&) {
            fail(n, field, "expected a number");
        }
        if (!std::isfinite(v)) fail(n, field, "must be finite");
        if (unit == Unit::Frequency) v *= scale_;
        if (unit == Unit::Time) v /= scale_;
        return v;
    }

    int integer(const YAML::Node& parent, const std::string& key, const std::string& path,
                std::optional<int> fallback = std::nullopt) const {
        const YAML::Node n = parent[key];
        if (!n) {
            if (fallback) return *fallback;
            fail(parent, join(path, key), "required integer is missing");
        }
        try {
            if (!n.IsScalar()) throw YAML::Exception(n.Mark(), "not a scalar");
            return n.as<int>();
        } catch (const YAML::Exception&) {
            fail(n, join(path, key), "expected an integer");
        }
    }

    std::string text(const YAML::Node& parent, const std::string& key, const std::string& path,
                     std::optional<std::string> fallback = std::nullopt) const {
        const YAML::Node n = parent[key];
        if (!n) {
            if (fallback) return *fallback;
            fail(parent, join(path, key), "required string is missing");
        }
        if (!n.IsScalar()) fail(n, join(path, key), "expected a string");
        return n.as<std::string>();
    }

    std::vector<double> numbers(const YAML::Node& n, const std::string& field, Unit unit) const {
        if (!n.IsSequence()) fail(n, field, "expected a list of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < n.size(); ++i) out.push_back(scaled(n[i], field + "[" + std::to_string(i) + "]", unit));
        return out;
    }

    static std::string join(const std::string& path, const std::string& key) {
        return path.empty() ? key : path + "." + key;
    }

    const std::string& source() const { return source_; }

private:
    std::string source_;
    double scale_;
};

Unit axis_unit(const std::string& axis) {
    static const std::vector<std::string> freq{"system.Omega",        "bath.temperature",    "bath.spectrum.J0",
                                               "bath.spectrum.cutoff", "bath.spectrum.omega_c", "bath.spectrum.strength",
                                               "bath.spectrum.center", "bath.spectrum.width", "generator.gamma"};
    if (std::find(freq.begin(), freq.end(), axis) != freq.end()) return Unit::Frequency;
    if (axis == "evolution.t_end" || axis == "evolution.dt") return Unit::Time;
    return Unit::None;
}

SpectralModel read_spectrum(const Reader& r, const YAML::Node& n, const std::string& path) {
    r.require_map(n, path);
    const std::string kind = r.text(n, "kind", path);
    if (kind == "flat") {
        r.check_keys(n, path, {"kind", "J0", "cutoff"});
        return FlatSpectrum{r.number(n, "J0", path, Unit::Frequency), r.number(n, "cutoff", path, Unit::Frequency)};
    }
    if (kind == "ohmic") {
        r.check_keys(n, path, {"kind", "eta", "omega_c"});
        return OhmicSpectrum{r.number(n, "eta", path, Unit::None), r.number(n, "omega_c", path, Unit::Frequency)};
    }
    if (kind == "lorentzian") {
        r.check_keys(n, path, {"kind", "strength", "center", "width"});
        return LorentzianSpectrum{r.number(n, "strength", path, Unit::Frequency),
                                  r.number(n, "center", path, Unit::Frequency),
                                  r.number(n, "width", path, Unit::Frequency)};
    }
    r.fail(n["kind"], path + ".kind", "unknown spectrum kind '" + kind + "' (flat, ohmic, lorentzian)");
}

LambShiftPolicy read_lamb_shift(const Reader& r, const YAML::Node& n, const std::string& path) {
    r.require_map(n, path);
    const std::string policy = r.text(n, "policy", path);
    if (policy == "zero") {
        r.check_keys(n, path, {"policy"});
        return ZeroLambShift{};
    }
    if (policy == "principal_value") {
        r.check_keys(n, path, {"policy", "epsilon", "tolerance"});
        PrincipalValueLambShift pv;
        pv.epsilon = r.number(n, "epsilon", path, Unit::Frequency, pv.epsilon);
        pv.tolerance = r.number(n, "tolerance", path, Unit::None, pv.tolerance);
        return pv;
    }
    r.fail(n["policy"], path + ".policy", "unknown policy '" + policy + "' (zero, principal_value)");
}

PureStateSpec read_pure(const Reader& r, const YAML::Node& n, const std::string& path, bool allow_weight) {
    if (allow_weight) {
        r.check_keys(n, path, {"weight", "bare", "dressed"});
    } else {
        r.check_keys(n, path, {"bare", "dressed"});
    }
    const bool bare = bool(n["bare"]);
    const bool dressed = bool(n["dressed"]);
    if (bare == dressed) r.fail(n, path, "give exactly one of 'bare' or 'dressed'");
    if (bare) {
        const auto b = n["bare"];
        const std::string p = path + ".bare";
        r.check_keys(b, p, {"photons", "atom"});
        const std::string atom = r.text(b, "atom", p);
        if (atom != "g" && atom != "e") r.fail(b["atom"], p + ".atom", "expected 'g' or 'e'");
        return BareStateSpec{r.integer(b, "photons", p), atom == "e"};
    }
    try {
        return DressedStateSpec{parse_dressed_label(r.text(n, "dressed", path))};
    } catch (const ConfigError& e) {
        r.fail(n["dressed"], path + ".dressed", e.what());
    }
}

InitialStateSpec read_initial(const Reader& r, const YAML::Node& n) {
    const std::string path = "initial_state";
    r.check_keys(n, path, {"bare", "dressed", "mixture"});
    if (n["mixture"]) {
        if (n.size() != 1) r.fail(n, path, "'mixture' cannot be combined with 'bare' or 'dressed'");
        const auto m = n["mixture"];
        if (!m.IsSequence() || m.size() == 0) r.fail(m, path + ".mixture", "expected a non-empty list");
        MixtureSpec mix;
        for (std::size_t i = 0; i < m.size(); ++i) {
            const std::string p = path + ".mixture[" + std::to_string(i) + "]";
            r.require_map(m[i], p);
            const double w = r.number(m[i], "weight", p, Unit::None);
            mix.components.push_back({w, read_pure(r, m[i], p, true)});
        }
        return mix;
    }
    const auto pure = read_pure(r, n, path, false);
    if (const auto* b = std::get_if<BareStateSpec>(&pure)) return *b;
    return std::get<DressedStateSpec>(pure);
}

GridSpec read_grid(const Reader& r, const YAML::Node& n, const std::string& path, const GridSpec& fallback, Unit unit) {
    if (!n) return fallback;
    r.check_keys(n, path, {"min", "max", "points"});
    return {r.number(n, "min", path, unit, fallback.min), r.number(n, "max", path, unit, fallback.max),
            r.integer(n, "points", path, fallback.points)};
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& source) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        std::ostringstream os;
        os << source << ":" << e.mark.line + 1 << ":" << e.mark.column + 1 << ": syntax error: " << e.msg;
        throw ConfigError(os.str());
    }
    if (!root || root.IsNull()) throw ConfigError(source + ": empty configuration");

    Reader plain(source, 1.0);
    plain.check_keys(root, "", {"units", "system", "bath", "generator", "initial_state", "evolution", "output",
                                "sweep", "fig1", "lindblad_check"});

    Scenario s;
    s.source = source;

    double scale = 1.0;
    const std::string units = plain.text(root, "units", "", std::string("absolute"));
    if (units == "omega0") {
        if (!root["system"] || !root["system"].IsMap() || !root["system"]["omega0"]) {
            plain.fail(root["units"], "units", "'omega0' units need system.omega0");
        }
        scale = plain.number(root["system"], "omega0", "system", Unit::None);
    } else if (units != "absolute") {
        plain.fail(root["units"], "units", "expected 'absolute' or 'omega0'");
    }
    const Reader r(source, scale);

    if (const auto n = root["system"]) {
        r.check_keys(n, "system", {"omega0", "Omega", "n_max"});
        s.system = SystemParams<double>{r.number(n, "omega0", "system", Unit::None),
                                        r.number(n, "Omega", "system", Unit::Frequency), r.integer(n, "n_max", "system")};
    }
    if (const auto n = root["bath"]) {
        r.check_keys(n, "bath", {"spectrum", "temperature", "lamb_shift"});
        if (n["spectrum"]) s.bath.spectrum = read_spectrum(r, n["spectrum"], "bath.spectrum");
        s.bath.temperature = r.number(n, "temperature", "bath", Unit::Frequency, 0.0);
        if (n["lamb_shift"]) s.bath.lamb_shift = read_lamb_shift(r, n["lamb_shift"], "bath.lamb_shift");
    }
    if (const auto n = root["generator"]) {
        r.check_keys(n, "generator", {"kind", "gamma"});
        const std::string kind = r.text(n, "kind", "generator");
        const auto parsed = parse_generator_kind(kind);
        if (!parsed) {
            r.fail(n["kind"], "generator.kind",
                   "unknown kind '" + kind + "' (phenom_bare, phenom_dressed, secular_rwa, quasi_rwa)");
        }
        GeneratorSpec g{*parsed, std::nullopt};
        if (n["gamma"]) g.gamma = r.number(n, "gamma", "generator", Unit::Frequency);
        s.generator = g;
    }
    if (const auto n = root["initial_state"]) s.initial_state = read_initial(r, n);
    if (const auto n = root["evolution"]) {
        r.check_keys(n, "evolution", {"t_end", "dt", "record_every"});
        s.evolution = EvolutionSpec{r.number(n, "t_end", "evolution", Unit::Time),
                                    r.number(n, "dt", "evolution", Unit::Time, 0.0),
                                    r.integer(n, "record_every", "evolution", 1)};
    }
    if (const auto n = root["output"]) {
        r.check_keys(n, "output", {"directory", "trajectory", "summary", "report", "sweep", "surface"});
        OutputSpec o;
        o.directory = r.text(n, "directory", "output", o.directory);
        o.trajectory = r.text(n, "trajectory", "output", o.trajectory);
        o.summary = r.text(n, "summary", "output", o.summary);
        o.report = r.text(n, "report", "output", o.report);
        o.sweep = r.text(n, "sweep", "output", o.sweep);
        o.surface = r.text(n, "surface", "output", o.surface);
        s.output = o;
    }
    if (const auto n = root["sweep"]) {
        r.check_keys(n, "sweep", {"axis", "values", "metrics"});
        SweepSpec sw;
        sw.axis = r.text(n, "axis", "sweep");
        if (!n["values"]) r.fail(n, "sweep.values", "required list is missing");
        sw.values = r.numbers(n["values"], "sweep.values", axis_unit(sw.axis));
        if (!n["metrics"] || !n["metrics"].IsSequence()) r.fail(n, "sweep.metrics", "expected a list of metric names");
        for (const auto& m : n["metrics"]) {
            if (!m.IsScalar()) r.fail(m, "sweep.metrics", "expected a metric name");
            sw.metrics.push_back(m.as<std::string>());
        }
        s.sweep = sw;
    }
    if (const auto n = root["fig1"]) {
        r.check_keys(n, "fig1", {"omega", "temperatures", "offsets"});
        Fig1Spec f;
        // the surface is expressed in units of its own omega
        f.omega = plain.number(n, "omega", "fig1", Unit::None, f.omega);
        f.temperatures = read_grid(plain, n["temperatures"], "fig1.temperatures", f.temperatures, Unit::None);
        f.offsets = read_grid(plain, n["offsets"], "fig1.offsets", f.offsets, Unit::None);
        s.fig1 = f;
    }
    if (const auto n = root["lindblad_check"]) {
        r.check_keys(n, "lindblad_check", {"temperatures", "eta", "omega_c"});
        LindbladCheckSpec l;
        l.temperatures = read_grid(r, n["temperatures"], "lindblad_check.temperatures", l.temperatures, Unit::Frequency);
        if (n["eta"]) l.eta = r.numbers(n["eta"], "lindblad_check.eta", Unit::None);
        if (n["omega_c"]) l.omega_c = r.numbers(n["omega_c"], "lindblad_check.omega_c", Unit::Frequency);
        s.lindblad_check = l;
    }
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open configuration file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str(), path);
}

// ------------------------------------------------------------------ emission

namespace {

void emit_pure(YAML::Emitter& e, const PureStateSpec& p) {
    if (const auto* b = std::get_if<BareStateSpec>(&p)) {
        e << YAML::Key << "bare" << YAML::Value << YAML::Flow << YAML::BeginMap << YAML::Key << "photons"
          << YAML::Value << b->photons << YAML::Key << "atom" << YAML::Value << (b->excited ? "e" : "g")
          << YAML::EndMap;
    } else {
        e << YAML::Key << "dressed" << YAML::Value << std::get<DressedStateSpec>(p).label.name();
    }
}

void emit_grid(YAML::Emitter& e, const char* key, const GridSpec& g) {
    e << YAML::Key << key << YAML::Value << YAML::Flow << YAML::BeginMap << YAML::Key << "min" << YAML::Value << g.min
      << YAML::Key << "max" << YAML::Value << g.max << YAML::Key << "points" << YAML::Value << g.points << YAML::EndMap;
}

}  // namespace

std::string emit_scenario(const Scenario& s) {
    YAML::Emitter e;
    e.SetDoublePrecision(17);
    e << YAML::BeginMap;
    e << YAML::Key << "units" << YAML::Value << "absolute";
    if (s.system) {
        e << YAML::Key << "system" << YAML::Value << YAML::BeginMap << YAML::Key << "omega0" << YAML::Value
          << s.system->omega0 << YAML::Key << "Omega" << YAML::Value << s.system->Omega << YAML::Key << "n_max"
          << YAML::Value << s.system->n_max << YAML::EndMap;
    }
    e << YAML::Key << "bath" << YAML::Value << YAML::BeginMap;
    if (s.bath.spectrum) {
        e << YAML::Key << "spectrum" << YAML::Value << YAML::BeginMap;
        std::visit(
            [&](const auto& sp) {
                using T = std::decay_t<decltype(sp)>;
                if constexpr (std::is_same_v<T, FlatSpectrum>) {
                    e << YAML::Key << "kind" << YAML::Value << "flat" << YAML::Key << "J0" << YAML::Value << sp.J0
                      << YAML::Key << "cutoff" << YAML::Value << sp.cutoff;
                } else if constexpr (std::is_same_v<T, OhmicSpectrum>) {
                    e << YAML::Key << "kind" << YAML::Value << "ohmic" << YAML::Key << "eta" << YAML::Value << sp.eta
                      << YAML::Key << "omega_c" << YAML::Value << sp.omega_c;
                } else {
                    e << YAML::Key << "kind" << YAML::Value << "lorentzian" << YAML::Key << "strength" << YAML::Value
                      << sp.strength << YAML::Key << "center" << YAML::Value << sp.center << YAML::Key << "width"
                      << YAML::Value << sp.width;
                }
            },
            *s.bath.spectrum);
        e << YAML::EndMap;
    }
    e << YAML::Key << "temperature" << YAML::Value << s.bath.temperature;
    e << YAML::Key << "lamb_shift" << YAML::Value << YAML::BeginMap;
    if (const auto* pv = std::get_if<PrincipalValueLambShift>(&s.bath.lamb_shift)) {
        e << YAML::Key << "policy" << YAML::Value << "principal_value" << YAML::Key << "epsilon" << YAML::Value
          << pv->epsilon << YAML::Key << "tolerance" << YAML::Value << pv->tolerance;
    } else {
        e << YAML::Key << "policy" << YAML::Value << "zero";
    }
    e << YAML::EndMap << YAML::EndMap;

    if (s.generator) {
        e << YAML::Key << "generator" << YAML::Value << YAML::BeginMap << YAML::Key << "kind" << YAML::Value
          << to_string(s.generator->kind);
        if (s.generator->gamma) e << YAML::Key << "gamma" << YAML::Value << *s.generator->gamma;
        e << YAML::EndMap;
    }
    if (s.initial_state) {
        e << YAML::Key << "initial_state" << YAML::Value << YAML::BeginMap;
        std::visit(
            [&](const auto& st) {
                using T = std::decay_t<decltype(st)>;
                if constexpr (std::is_same_v<T, MixtureSpec>) {
                    e << YAML::Key << "mixture" << YAML::Value << YAML::BeginSeq;
                    for (const auto& c : st.components) {
                        e << YAML::BeginMap << YAML::Key << "weight" << YAML::Value << c.weight;
                        emit_pure(e, c.state);
                        e << YAML::EndMap;
                    }
                    e << YAML::EndSeq;
                } else {
                    emit_pure(e, PureStateSpec(st));
                }
            },
            *s.initial_state);
        e << YAML::EndMap;
    }
    if (s.evolution) {
        e << YAML::Key << "evolution" << YAML::Value << YAML::BeginMap << YAML::Key << "t_end" << YAML::Value
          << s.evolution->t_end << YAML::Key << "dt" << YAML::Value << s.evolution->dt << YAML::Key << "record_every"
          << YAML::Value << s.evolution->record_every << YAML::EndMap;
    }
    e << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "directory" << YAML::Value << s.output.directory;
    e << YAML::Key << "trajectory" << YAML::Value << s.output.trajectory;
    e << YAML::Key << "summary" << YAML::Value << s.output.summary;
    e << YAML::Key << "report" << YAML::Value << s.output.report;
    e << YAML::Key << "sweep" << YAML::Value << s.output.sweep;
    e << YAML::Key << "surface" << YAML::Value << s.output.surface;
    e << YAML::EndMap;
    if (s.sweep) {
        e << YAML::Key << "sweep" << YAML::Value << YAML::BeginMap << YAML::Key << "axis" << YAML::Value << s.sweep->axis
          << YAML::Key << "values" << YAML::Value << YAML::Flow << s.sweep->values << YAML::Key << "metrics"
          << YAML::Value << YAML::Flow << s.sweep->metrics << YAML::EndMap;
    }
    if (s.fig1) {
        e << YAML::Key << "fig1" << YAML::Value << YAML::BeginMap << YAML::Key << "omega" << YAML::Value << s.fig1->omega;
        emit_grid(e, "temperatures", s.fig1->temperatures);
        emit_grid(e, "offsets", s.fig1->offsets);
        e << YAML::EndMap;
    }
    if (s.lindblad_check) {
        e << YAML::Key << "lindblad_check" << YAML::Value << YAML::BeginMap;
        emit_grid(e, "temperatures", s.lindblad_check->temperatures);
        e << YAML::Key << "eta" << YAML::Value << YAML::Flow << s.lindblad_check->eta;
        e << YAML::Key << "omega_c" << YAML::Value << YAML::Flow << s.lindblad_check->omega_c;
        e << YAML::EndMap;
    }
    e << YAML::EndMap;
    return std::string(e.c_str()) + "\n";
}

// ------------------------------------------------------------------ access and validation

const SystemParams<double>& require_system(const Scenario& s) {
    if (!s.system) throw ConfigError(s.source + ": system: section is required");
    return *s.system;
}

const GeneratorSpec& require_generator(const Scenario& s) {
    if (!s.generator) throw ConfigError(s.source + ": generator: section is required");
    return *s.generator;
}

const EvolutionSpec& require_evolution(const Scenario& s) {
    if (!s.evolution) throw ConfigError(s.source + ": evolution: section is required");
    return *s.evolution;
}

const InitialStateSpec& require_initial_state(const Scenario& s) {
    if (!s.initial_state) throw ConfigError(s.source + ": initial_state: section is required");
    return *s.initial_state;
}

BathModel require_bath_model(const Scenario& s) {
    if (!s.bath.spectrum) throw ConfigError(s.source + ": bath.spectrum: required for microscopic generators");
    return {*s.bath.spectrum, s.bath.temperature, s.bath.lamb_shift};
}

namespace {

void check_pure(const Scenario& s, const PureStateSpec& p, const std::string& field) {
    const int n_max = require_system(s).n_max;
    if (const auto* b = std::get_if<BareStateSpec>(&p)) {
        if (b->photons < 0) throw ConfigError(s.source + ": " + field + ".photons: must be >= 0");
        if (b->photons + (b->excited ? 1 : 0) > n_max) {
            throw ConfigError(s.source + ": " + field + ": state lies outside the truncation n_max=" +
                              std::to_string(n_max));
        }
    } else if (std::get<DressedStateSpec>(p).label.manifold > n_max) {
        throw ConfigError(s.source + ": " + field + ": dressed label " + std::get<DressedStateSpec>(p).label.name() +
                          " lies outside the truncation n_max=" + std::to_string(n_max));
    }
}

void check_grid(const Scenario& s, const GridSpec& g, const std::string& field) {
    if (g.points < 1) throw ConfigError(s.source + ": " + field + ".points: must be >= 1");
    if (!(g.min <= g.max)) throw ConfigError(s.source + ": " + field + ": min must not exceed max");
}

}  // namespace

void validate_scenario(const Scenario& s) {
    if (s.system) validate(*s.system);
    if (!(s.bath.temperature >= 0)) throw ConfigError(s.source + ": bath.temperature: must be >= 0");
    if (s.bath.spectrum) validate(require_bath_model(s));
    if (s.generator) {
        const auto& g = *s.generator;
        if (is_phenomenological(g.kind)) {
            if (!g.gamma) throw ConfigError(s.source + ": generator.gamma: required for " + to_string(g.kind));
            if (!(*g.gamma >= 0)) throw ConfigError(s.source + ": generator.gamma: must be >= 0");
        } else {
            if (g.gamma) {
                throw ConfigError(s.source + ": generator.gamma: only phenomenological kinds take gamma; " +
                                  to_string(g.kind) + " derives its rates from bath.spectrum");
            }
            if (s.system) validate_for_system(require_bath_model(s), *s.system);
        }
    }
    if (s.initial_state) {
        require_system(s);
        if (const auto* m = std::get_if<MixtureSpec>(&*s.initial_state)) {
            double total = 0;
            for (std::size_t i = 0; i < m->components.size(); ++i) {
                const auto& c = m->components[i];
                const std::string field = "initial_state.mixture[" + std::to_string(i) + "]";
                if (!(c.weight >= 0)) throw ConfigError(s.source + ": " + field + ".weight: must be >= 0");
                total += c.weight;
                check_pure(s, c.state, field);
            }
            if (std::abs(total - 1) > 1e-12) {
                std::ostringstream os;
                os << s.source << ": initial_state.mixture: weights sum to " << total << ", not 1";
                throw ConfigError(os.str());
            }
        } else if (const auto* b = std::get_if<BareStateSpec>(&*s.initial_state)) {
            check_pure(s, *b, "initial_state.bare");
        } else {
            check_pure(s, std::get<DressedStateSpec>(*s.initial_state), "initial_state.dressed");
        }
    }
    if (s.evolution) {
        if (!(s.evolution->t_end > 0)) throw ConfigError(s.source + ": evolution.t_end: must be > 0");
        if (!(s.evolution->dt >= 0)) throw ConfigError(s.source + ": evolution.dt: must be >= 0 (0 selects the default)");
        if (s.evolution->record_every < 1) throw ConfigError(s.source + ": evolution.record_every: must be >= 1");
    }
    for (const auto* name : {&s.output.trajectory, &s.output.summary, &s.output.report, &s.output.sweep,
                             &s.output.surface, &s.output.directory}) {
        if (name->empty()) throw ConfigError(s.source + ": output: file names must not be empty");
    }
    if (s.sweep) {
        const auto axes = sweep_axes();
        if (std::find(axes.begin(), axes.end(), s.sweep->axis) == axes.end()) {
            // reuse the axis diagnostics of with_axis_value
            with_axis_value(s, s.sweep->axis, 0.0);
        }
    }
    if (s.fig1) {
        if (!(s.fig1->omega > 0)) throw ConfigError(s.source + ": fig1.omega: must be > 0");
        check_grid(s, s.fig1->temperatures, "fig1.temperatures");
        check_grid(s, s.fig1->offsets, "fig1.offsets");
        if (s.fig1->temperatures.min < 0) throw ConfigError(s.source + ": fig1.temperatures.min: must be >= 0");
        if (s.fig1->offsets.min < 0 || s.fig1->offsets.max >= 1) {
            throw ConfigError(s.source + ": fig1.offsets: must lie in [0, 1) units of omega");
        }
    }
    if (s.lindblad_check) {
        check_grid(s, s.lindblad_check->temperatures, "lindblad_check.temperatures");
        if (s.lindblad_check->temperatures.min < 0) {
            throw ConfigError(s.source + ": lindblad_check.temperatures.min: must be >= 0");
        }
        for (double e : s.lindblad_check->eta)
            if (!(e > 0)) throw ConfigError(s.source + ": lindblad_check.eta: entries must be > 0");
        for (double w : s.lindblad_check->omega_c)
            if (!(w > 0)) throw ConfigError(s.source + ": lindblad_check.omega_c: entries must be > 0");
    }
}

Liouvillian<double> build_generator(const Scenario& s) {
    const auto& p = require_system(s);
    const auto& g = require_generator(s);
    switch (g.kind) {
        case GeneratorKind::PhenomBare:
        case GeneratorKind::PhenomDressed: {
            if (!g.gamma) throw ConfigError(s.source + ": generator.gamma: required for " + to_string(g.kind));
            return g.kind == GeneratorKind::PhenomBare ? build_phenom_bare(p, *g.gamma, s.bath.temperature)
                                                       : build_phenom_dressed(p, *g.gamma, s.bath.temperature);
        }
        case GeneratorKind::SecularRWA: return build_secular(p, require_bath_model(s));
        case GeneratorKind::QuasiRWA: return build_quasi_rwa(p, require_bath_model(s));
    }
    throw ConfigError(s.source + ": generator.kind: unsupported");
}

namespace {

CMatrix<double> pure_projector(const PureStateSpec& p, const DressedBasis<double>& basis) {
    if (const auto* b = std::get_if<BareStateSpec>(&p)) return bare_fock_state(basis, b->photons, b->excited).entries;
    return dressed_projector(basis, std::get<DressedStateSpec>(p).label).entries;
}

}  // namespace

DensityMatrix<double> build_initial_state(const Scenario& s, const DressedBasis<double>& basis) {
    const auto& spec = require_initial_state(s);
    if (const auto* m = std::get_if<MixtureSpec>(&spec)) {
        CMatrix<double> rho = CMatrix<double>::Zero(basis.dim(), basis.dim());
        for (const auto& c : m->components) rho += c.weight * pure_projector(c.state, basis);
        return make_density_matrix<double>(rho);
    }
    if (const auto* b = std::get_if<BareStateSpec>(&spec)) return bare_fock_state(basis, b->photons, b->excited);
    return dressed_projector(basis, std::get<DressedStateSpec>(spec).label);
}

// ------------------------------------------------------------------ sweep axes

std::vector<std::string> sweep_axes() {
    return {"system.omega0",        "system.Omega",        "system.n_max",          "bath.temperature",
            "bath.spectrum.J0",     "bath.spectrum.cutoff", "bath.spectrum.eta",     "bath.spectrum.omega_c",
            "bath.spectrum.strength", "bath.spectrum.center", "bath.spectrum.width", "generator.gamma",
            "generator.damping_ratio", "evolution.t_end",   "evolution.dt"};
}

Scenario with_axis_value(const Scenario& s, const std::string& axis, double value) {
    static const std::vector<std::string> non_numeric{"generator.kind", "bath.spectrum.kind", "bath.lamb_shift.policy",
                                                      "initial_state", "units"};
    const auto fail = [&](const std::string& msg) -> Scenario { throw ConfigError(s.source + ": sweep.axis: " + msg); };
    if (std::find(non_numeric.begin(), non_numeric.end(), axis) != non_numeric.end()) {
        return fail("'" + axis + "' is not a numeric field");
    }
    const auto axes = sweep_axes();
    if (std::find(axes.begin(), axes.end(), axis) == axes.end()) return fail("unknown axis '" + axis + "'");

    Scenario out = s;
    auto need_system = [&]() -> SystemParams<double>& {
        if (!out.system) fail("axis '" + axis + "' needs a system section");
        return *out.system;
    };
    auto need_generator = [&]() -> GeneratorSpec& {
        if (!out.generator) fail("axis '" + axis + "' needs a generator section");
        return *out.generator;
    };
    auto need_evolution = [&]() -> EvolutionSpec& {
        if (!out.evolution) fail("axis '" + axis + "' needs an evolution section");
        return *out.evolution;
    };
    auto spectrum_field = [&](const std::string& field) -> double& {
        if (!out.bath.spectrum) fail("axis '" + axis + "' needs bath.spectrum");
        double* slot = nullptr;
        std::visit(
            [&](auto& sp) {
                using T = std::decay_t<decltype(sp)>;
                if constexpr (std::is_same_v<T, FlatSpectrum>) {
                    if (field == "J0") slot = &sp.J0;
                    if (field == "cutoff") slot = &sp.cutoff;
                } else if constexpr (std::is_same_v<T, OhmicSpectrum>) {
                    if (field == "eta") slot = &sp.eta;
                    if (field == "omega_c") slot = &sp.omega_c;
                } else {
                    if (field == "strength") slot = &sp.strength;
                    if (field == "center") slot = &sp.center;
                    if (field == "width") slot = &sp.width;
                }
            },
            *out.bath.spectrum);
        if (!slot) fail("'" + axis + "' does not apply to a " + spectrum_kind(*out.bath.spectrum) + " spectrum");
        return *slot;
    };

    if (axis == "system.omega0") need_system().omega0 = value;
    else if (axis == "system.Omega") need_system().Omega = value;
    else if (axis == "system.n_max") {
        if (value != std::floor(value)) fail("system.n_max values must be integers");
        need_system().n_max = static_cast<int>(value);
    } else if (axis == "bath.temperature") out.bath.temperature = value;
    else if (axis.rfind("bath.spectrum.", 0) == 0) spectrum_field(axis.substr(14)) = value;
    else if (axis == "generator.gamma") need_generator().gamma = value;
    else if (axis == "generator.damping_ratio") need_generator().gamma = 4 * need_system().Omega * value;
    else if (axis == "evolution.t_end") need_evolution().t_end = value;
    else if (axis == "evolution.dt") need_evolution().dt = value;
    return out;
}

}  // namespace jcdiss
