// scenario.hpp: YAML scenario documents for the command-line driver.
//
// Layout (every section optional; each subcommand checks what it needs):
//
//   units: absolute            # or omega0: frequencies in units of system.omega0, times in 1/omega0
//   system:        {omega0, Omega, n_max}
//   bath:
//     spectrum:    {kind: flat, J0, cutoff} | {kind: ohmic, eta, omega_c} | {kind: lorentzian, strength, center, width}
//     temperature: k_B T / hbar
//     lamb_shift:  {policy: zero} | {policy: principal_value, epsilon, tolerance}
//   generator:     {kind: phenom_bare | phenom_dressed | secular_rwa | quasi_rwa, gamma}
//   initial_state: {bare: {photons, atom: g|e}} | {dressed: E0|1m|1p|...} | {mixture: [{weight, bare|dressed}]}
//   evolution:     {t_end, dt, record_every}
//   output:        {directory, trajectory, summary, report, sweep, surface}
//   sweep:         {axis, values, metrics}
//   fig1:          {omega, temperatures: {min, max, points}, offsets: {min, max, points}}
//   lindblad_check: {temperatures: {...}, eta: [...], omega_c: [...]}

#pragma once

#include "jcdiss/bath.hpp"
#include "jcdiss/evolve.hpp"
#include "jcdiss/generators.hpp"
#include "jcdiss/hilbert.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace jcdiss {

// Invalid document: carries "source:line:column: field: message" when a position is known.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct BareStateSpec {
    int photons{0};
    bool excited{false};
    bool operator==(const BareStateSpec&) const = default;
};

struct DressedStateSpec {
    DressedLabel label;
    bool operator==(const DressedStateSpec&) const = default;
};

using PureStateSpec = std::variant<BareStateSpec, DressedStateSpec>;

struct MixtureComponent {
    double weight{0};
    PureStateSpec state;
    bool operator==(const MixtureComponent&) const = default;
};

struct MixtureSpec {
    std::vector<MixtureComponent> components;
    bool operator==(const MixtureSpec&) const = default;
};

using InitialStateSpec = std::variant<BareStateSpec, DressedStateSpec, MixtureSpec>;

struct BathSpec {
    std::optional<SpectralModel> spectrum;
    double temperature{0};
    LambShiftPolicy lamb_shift{ZeroLambShift{}};
    bool operator==(const BathSpec&) const = default;
};

struct GeneratorSpec {
    GeneratorKind kind{GeneratorKind::QuasiRWA};
    std::optional<double> gamma;
    bool operator==(const GeneratorSpec&) const = default;
};

struct EvolutionSpec {
    double t_end{0};
    double dt{0};
    int record_every{1};
    bool operator==(const EvolutionSpec&) const = default;
};

struct OutputSpec {
    std::string directory{"."};
    std::string trajectory{"trajectory.csv"};
    std::string summary{"summary.json"};
    std::string report{"report.json"};
    std::string sweep{"sweep.csv"};
    std::string surface{"fig1.csv"};
    bool operator==(const OutputSpec&) const = default;
};

struct GridSpec {
    double min{0};
    double max{0};
    int points{0};
    std::vector<double> values() const;
    bool operator==(const GridSpec&) const = default;
};

struct SweepSpec {
    std::string axis;
    std::vector<double> values;
    std::vector<std::string> metrics;
    bool operator==(const SweepSpec&) const = default;
};

struct Fig1Spec {
    double omega{1.0};
    GridSpec temperatures{0.01, 0.5, 50};
    GridSpec offsets{0.0, 0.5, 51};
    bool operator==(const Fig1Spec&) const = default;
};

struct LindbladCheckSpec {
    GridSpec temperatures{0.05, 1.0, 5};
    std::vector<double> eta{0.01, 0.05};
    std::vector<double> omega_c{0.5, 2.0};
    bool operator==(const LindbladCheckSpec&) const = default;
};

struct Scenario {
    std::string source{"<config>"};  // file name for diagnostics; not part of equality
    std::optional<SystemParams<double>> system;
    BathSpec bath;
    std::optional<GeneratorSpec> generator;
    std::optional<InitialStateSpec> initial_state;
    std::optional<EvolutionSpec> evolution;
    OutputSpec output;
    std::optional<SweepSpec> sweep;
    std::optional<Fig1Spec> fig1;
    std::optional<LindbladCheckSpec> lindblad_check;

    bool operator==(const Scenario& o) const {
        return system == o.system && bath == o.bath && generator == o.generator && initial_state == o.initial_state &&
               evolution == o.evolution && output == o.output && sweep == o.sweep && fig1 == o.fig1 &&
               lindblad_check == o.lindblad_check;
    }
};

Scenario parse_scenario(const std::string& text, const std::string& source = "<config>");
Scenario load_scenario(const std::string& path);

// Re-emits with absolute units; parse_scenario(emit_scenario(s)) == s.
std::string emit_scenario(const Scenario& s);

// Section accessors that raise ConfigError naming the missing field.
const SystemParams<double>& require_system(const Scenario& s);
const GeneratorSpec& require_generator(const Scenario& s);
const EvolutionSpec& require_evolution(const Scenario& s);
const InitialStateSpec& require_initial_state(const Scenario& s);
BathModel require_bath_model(const Scenario& s);

// Physical validation of every present section; throws ConfigError or InvalidParameters.
void validate_scenario(const Scenario& s);

Liouvillian<double> build_generator(const Scenario& s);
DensityMatrix<double> build_initial_state(const Scenario& s, const DressedBasis<double>& basis);

DressedLabel parse_dressed_label(const std::string& name);

// Numeric fields addressable by a sweep axis, e.g. "generator.gamma" or "bath.spectrum.J0".
// "generator.damping_ratio" sets gamma = 4 Omega * value.
std::vector<std::string> sweep_axes();
Scenario with_axis_value(const Scenario& s, const std::string& axis, double value);

}  // namespace jcdiss
