// bath.hpp: bosonic reservoir spectra and the complex rate coefficients
// Gamma(omega) = pi J(omega) + i * (Lamb shift).
//
// Units: hbar = k_B = 1. The phenomenological cavity loss rate gamma corresponds to
// 2 pi J0 for a flat spectrum, i.e. Re Gamma = gamma / 2.

#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <variant>

namespace jcdiss {

struct FlatSpectrum {
    double J0{0};      // rate density
    double cutoff{0};  // J0(omega) = J0 for 0 <= omega <= cutoff, 0 beyond
    bool operator==(const FlatSpectrum&) const = default;
};

// J0(omega) = eta * omega * exp(-omega / omega_c)
struct OhmicSpectrum {
    double eta{0};
    double omega_c{0};
    bool operator==(const OhmicSpectrum&) const = default;
};

// J0(omega) = strength * width^2 / ((omega - center)^2 + width^2)
struct LorentzianSpectrum {
    double strength{0};
    double center{0};
    double width{0};
    bool operator==(const LorentzianSpectrum&) const = default;
};

using SpectralModel = std::variant<FlatSpectrum, OhmicSpectrum, LorentzianSpectrum>;

struct ZeroLambShift {
    bool operator==(const ZeroLambShift&) const = default;
};

struct PrincipalValueLambShift {
    double epsilon{1e-4};     // half-width of the excluded window around the pole
    double tolerance{1e-10};  // absolute tolerance on the quadrature
    bool operator==(const PrincipalValueLambShift&) const = default;
};

using LambShiftPolicy = std::variant<ZeroLambShift, PrincipalValueLambShift>;

struct BathModel {
    SpectralModel spectral{FlatSpectrum{}};
    double temperature{0};
    LambShiftPolicy lamb_shift{ZeroLambShift{}};
    bool operator==(const BathModel&) const = default;
};

struct GammaCoefficient {
    std::complex<double> value;
    double frequency{0};
};

class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double residual)
        : std::runtime_error(what), residual_estimate(residual) {}
    double residual_estimate;
};

// Throws std::invalid_argument on non-positive parameters or negative temperature.
void validate(const BathModel& bath);

std::string spectrum_kind(const SpectralModel& s);

// J0(omega) for omega >= 0.
double zero_temperature_density(const SpectralModel& s, double omega);

// 1 / (exp(omega / T) - 1); 0 at T = 0. Rejects omega <= 0.
double bose_occupation(double omega, double temperature);

// (n(omega) + 1) J0(omega) for omega >= 0, n(|omega|) J0(|omega|) for omega < 0.
double thermal_spectral_density(double omega, const BathModel& bath);

// Principal value of the integral of J(w') / (omega - w') over the real line.
// Only meaningful under PrincipalValueLambShift; returns 0 under ZeroLambShift.
double lamb_shift(double omega, const BathModel& bath);

GammaCoefficient gamma_coefficient(double omega, const BathModel& bath);

// 2 Re Gamma(omega).
inline double transition_rate(double omega, const BathModel& bath) {
    return 2.0 * gamma_coefficient(omega, bath).value.real();
}

}  // namespace jcdiss
