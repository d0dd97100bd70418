// analysis.hpp: comparisons and diagnostics over generators and trajectories.

#pragma once

#include "jcdiss/bath.hpp"
#include "jcdiss/evolve.hpp"
#include "jcdiss/generators.hpp"
#include "jcdiss/jumps.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace jcdiss {

// ------------------------------------------------------------------ generator comparison

struct SectorDeviation {
    int excitation_difference{0};  // (N_row - N_col) of the output element
    double max_abs_deviation{0};
};

struct ComparisonReport {
    GeneratorKind kind_a{};
    GeneratorKind kind_b{};
    double distance{0};  // ||La - Lb||_F / max(||La||_F, ||Lb||_F)
    std::vector<SectorDeviation> sectors;
    double tolerance{1e-12};
    bool coincident{false};
};

ComparisonReport compare_generators(const Liouvillian<double>& a, const Liouvillian<double>& b,
                                    double tolerance = 1e-12);

// ------------------------------------------------------------------ Rabi fit

// y(t) = exp(-kappa t) (a_cos cos(nu t) + a_sin sin(nu t) + baseline) + offset
struct RabiFit {
    double frequency{0};
    double decay_rate{0};
    double a_cos{0};
    double a_sin{0};
    double baseline{0};
    double offset{0};
    double amplitude{0};  // hypot(a_cos, a_sin)
    double phase{0};      // a_cos cos + a_sin sin = amplitude cos(nu t + phase)
    double residual_norm{0};
    double rms_residual{0};
    int iterations{0};
    std::optional<double> predicted_frequency;  // 2 Omega sqrt(1 - (gamma / 4 Omega)^2)
    std::optional<double> relative_error;       // |nu - predicted| / predicted
};

struct RabiGuess {
    double frequency{0};
    double decay_rate{0};
};

class RabiFitError : public std::runtime_error {
public:
    RabiFitError(const std::string& what, RabiGuess g) : std::runtime_error(what), guess(g) {}
    RabiGuess guess;
};

// Underdamped splitting of the one-excitation doublet; empty when gamma >= 4 Omega.
std::optional<double> predicted_rabi_frequency(double Omega, double gamma);

RabiGuess rabi_initial_guess(const std::vector<double>& t, const std::vector<double>& y);
RabiFit fit_rabi(const std::vector<double>& t, const std::vector<double>& y);
RabiFit fit_rabi(const Trajectory<double>& traj, const std::string& observable);
RabiFit fit_rabi(const Trajectory<double>& traj, const std::string& observable, double Omega, double gamma);

// ------------------------------------------------------------------ rate spread

struct RateEntry {
    JumpLabel label;
    double bohr_frequency{0};
    double downward_rate{0};  // 2 Re Gamma(w)
    double upward_rate{0};    // 2 Re Gamma(-w)
};

struct RateSpreadReport {
    std::vector<RateEntry> table;
    double downward_spread{0};  // max / min - 1 over downward rates
    double upward_spread{0};
    double band_low{0};         // omega0 - (sqrt(n_max) + sqrt(n_max - 1)) Omega
    double band_high{0};
    bool band_edges_confirmed{false};
};

// max/min - 1; 0 when every rate vanishes, +inf when only some do.
double relative_spread(const std::vector<double>& rates);

RateSpreadReport rate_spread(const SystemParams<double>& p, const BathModel& bath);

// ------------------------------------------------------------------ timescales

struct TimescaleCheck {
    double gamma_max{0};
    double strong_coupling_ratio{0};  // 2 Omega / gamma_max
    double optical_ratio{0};          // omega0 / gamma_max
    double threshold{10};
    bool strong_coupling_holds{false};
    bool optical_holds{false};
    bool secular_rwa_valid{false};    // needs both
    bool quasi_rwa_valid{false};      // needs the optical condition
    bool phenomenological_valid{false};
};

TimescaleCheck timescale_check(const SystemParams<double>& p, double gamma, double threshold = 10);
TimescaleCheck timescale_check(const SystemParams<double>& p, const BathModel& bath, double threshold = 10);

// ------------------------------------------------------------------ occupation-difference surface

struct Surface {
    std::vector<double> temperatures;  // rows, units of omega
    std::vector<double> offsets;       // columns, delta omega in units of omega
    std::vector<std::vector<double>> values;
};

// n(omega) - n(omega + delta omega) with T and delta omega scaled by omega.
Surface delta_n_surface(double omega, const std::vector<double>& temperatures, const std::vector<double>& offsets);

std::vector<double> linear_grid(double lo, double hi, int points);
std::vector<double> default_surface_temperatures();  // 0.01 .. 0.5, 50 points
std::vector<double> default_surface_offsets();       // 0 .. 0.5, 51 points

}  // namespace jcdiss
