#include "jcdiss/bath.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>
#include <vector>

namespace jcdiss {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool positive(double x) { return std::isfinite(x) && x > 0; }

// Gauss-Legendre rule on [-1, 1] via Golub-Welsch.
struct GaussRule {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;

    explicit GaussRule(int n) {
        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
        for (int k = 1; k < n; ++k) {
            const double b = k / std::sqrt(4.0 * k * k - 1.0);
            J(k, k - 1) = J(k - 1, k) = b;
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
        nodes = es.eigenvalues();
        weights = 2.0 * es.eigenvectors().row(0).transpose().array().square();
    }

    template <class F>
    double apply(const F& f, double a, double b) const {
        const double half = 0.5 * (b - a);
        const double mid = 0.5 * (a + b);
        double s = 0;
        for (Eigen::Index i = 0; i < nodes.size(); ++i) s += weights(i) * f(mid + half * nodes(i));
        return half * s;
    }
};

const GaussRule& coarse_rule() {
    static const GaussRule r(7);
    return r;
}
const GaussRule& fine_rule() {
    static const GaussRule r(15);
    return r;
}

struct QuadResult {
    double value{0};
    double error{0};
    bool converged{true};
};

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

// Globally adaptive Gauss-Legendre 15/7: repeatedly bisects the panel with the largest
// error estimate until the summed estimate meets tol or the panel budget runs out.
template <class F>
QuadResult integrate(const F& f, const std::vector<std::pair<double, double>>& intervals, double tol,
                     int budget = 4000) {
    auto make = [&](double a, double b) {
        const double fine = fine_rule().apply(f, a, b);
        return Panel{a, b, fine, std::abs(fine - coarse_rule().apply(f, a, b))};
    };
    std::priority_queue<Panel> panels;
    double value = 0;
    double error = 0;
    for (const auto& [a, b] : intervals) {
        if (!(b > a)) continue;
        Panel p = make(a, b);
        value += p.value;
        error += p.error;
        panels.push(p);
    }
    for (int it = 0; it < budget && error > tol && !panels.empty(); ++it) {
        const Panel worst = panels.top();
        panels.pop();
        const double m = 0.5 * (worst.a + worst.b);
        const Panel left = make(worst.a, m);
        const Panel right = make(m, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
    }
    // re-sum to shed accumulated cancellation in the running totals
    QuadResult out;
    while (!panels.empty()) {
        out.value += panels.top().value;
        out.error += panels.top().error;
        panels.pop();
    }
    out.converged = std::isfinite(out.value) && out.error <= tol;
    return out;
}

// Upper edge of the positive-frequency support used for quadrature, plus a bound
// on the neglected tail of |J(w') / (omega - w')| beyond it.
struct Support {
    double upper{0};
    double tail{0};
};

Support support_for(const SpectralModel& s, double omega, double tol) {
    return std::visit(
        overloaded{
            [&](const FlatSpectrum& f) { return Support{f.cutoff, 0.0}; },
            [&](const OhmicSpectrum& o) {
                const double upper = std::max(80.0 * o.omega_c, 2.0 * std::abs(omega) + 10.0 * o.omega_c);
                return Support{upper, o.eta * upper * std::exp(-upper / o.omega_c) * o.omega_c};
            },
            [&](const LorentzianSpectrum& l) {
                const double ref = std::max(l.center, std::abs(omega));
                const double span = std::sqrt(l.strength * l.width * l.width / (0.2 * tol)) + 10.0 * l.width;
                const double upper = ref + span;
                return Support{upper, l.strength * l.width * l.width / (2.0 * span * span)};
            },
        },
        s);
}

}  // namespace

void validate(const BathModel& bath) {
    std::visit(overloaded{
                   [](const FlatSpectrum& f) {
                       if (!positive(f.J0) || !positive(f.cutoff))
                           throw std::invalid_argument("bath: flat spectrum needs J0 > 0 and cutoff > 0");
                   },
                   [](const OhmicSpectrum& o) {
                       if (!positive(o.eta) || !positive(o.omega_c))
                           throw std::invalid_argument("bath: ohmic spectrum needs eta > 0 and omega_c > 0");
                   },
                   [](const LorentzianSpectrum& l) {
                       if (!positive(l.strength) || !positive(l.center) || !positive(l.width))
                           throw std::invalid_argument(
                               "bath: lorentzian spectrum needs strength, center and width > 0");
                   },
               },
               bath.spectral);
    if (!std::isfinite(bath.temperature) || bath.temperature < 0) {
        throw std::invalid_argument("bath: temperature must be finite and >= 0");
    }
    if (const auto* pv = std::get_if<PrincipalValueLambShift>(&bath.lamb_shift)) {
        if (!positive(pv->epsilon) || !positive(pv->tolerance)) {
            throw std::invalid_argument("bath: principal-value policy needs epsilon > 0 and tolerance > 0");
        }
    }
}

std::string spectrum_kind(const SpectralModel& s) {
    return std::visit(overloaded{
                          [](const FlatSpectrum&) { return std::string("flat"); },
                          [](const OhmicSpectrum&) { return std::string("ohmic"); },
                          [](const LorentzianSpectrum&) { return std::string("lorentzian"); },
                      },
                      s);
}

double zero_temperature_density(const SpectralModel& s, double omega) {
    if (omega < 0) return 0.0;
    return std::visit(overloaded{
                          [&](const FlatSpectrum& f) { return omega <= f.cutoff ? f.J0 : 0.0; },
                          [&](const OhmicSpectrum& o) { return o.eta * omega * std::exp(-omega / o.omega_c); },
                          [&](const LorentzianSpectrum& l) {
                              const double x = omega - l.center;
                              return l.strength * l.width * l.width / (x * x + l.width * l.width);
                          },
                      },
                      s);
}

double bose_occupation(double omega, double temperature) {
    if (!(omega > 0)) throw std::invalid_argument("bose_occupation: omega must be > 0");
    if (temperature < 0) throw std::invalid_argument("bose_occupation: temperature must be >= 0");
    if (temperature == 0) return 0.0;
    return 1.0 / std::expm1(omega / temperature);
}

double thermal_spectral_density(double omega, const BathModel& bath) {
    const double T = bath.temperature;
    if (omega > 0) return (bose_occupation(omega, T) + 1.0) * zero_temperature_density(bath.spectral, omega);
    if (omega < 0) return bose_occupation(-omega, T) * zero_temperature_density(bath.spectral, -omega);
    // omega == 0: limit of J0(w) / (1 - exp(-w/T))
    if (T == 0) return zero_temperature_density(bath.spectral, 0.0);
    if (const auto* o = std::get_if<OhmicSpectrum>(&bath.spectral)) return o->eta * T;
    return std::numeric_limits<double>::infinity();
}

double lamb_shift(double omega, const BathModel& bath) {
    const auto* pv = std::get_if<PrincipalValueLambShift>(&bath.lamb_shift);
    if (pv == nullptr) return 0.0;

    const double eps = pv->epsilon;
    const double T = bath.temperature;
    if (const auto* f = std::get_if<FlatSpectrum>(&bath.spectral); f && std::abs(omega) + eps >= f->cutoff) {
        std::ostringstream os;
        os << "lamb_shift: flat cutoff " << f->cutoff << " does not exceed |omega| + epsilon = " << std::abs(omega) + eps
           << " (divergent principal-value integral)";
        throw std::invalid_argument(os.str());
    }
    if (T > 0 && !std::holds_alternative<OhmicSpectrum>(bath.spectral) &&
        zero_temperature_density(bath.spectral, 0.0) > 0) {
        throw std::invalid_argument(
            "lamb_shift: thermal density diverges as T/|w| at w=0 for a spectrum with J0(0) > 0; "
            "the principal-value integral does not exist");
    }
    if (std::abs(omega) <= 2 * eps) {
        throw std::invalid_argument("lamb_shift: |omega| must exceed twice the exclusion half-width epsilon");
    }

    const Support sup = support_for(bath.spectral, omega, pv->tolerance);
    const double lower = T > 0 ? -sup.upper : 0.0;
    const bool pole_inside = omega + eps > lower && omega - eps < sup.upper;
    if (pole_inside && (omega - eps <= lower || omega + eps >= sup.upper)) {
        throw std::invalid_argument("lamb_shift: exclusion window straddles the edge of the spectral support");
    }

    const auto J = [&](double w) { return thermal_spectral_density(w, bath); };
    const auto integrand = [&](double w) { return J(w) / (omega - w); };

    std::vector<double> cuts{lower, sup.upper};
    if (pole_inside) {
        cuts.push_back(omega - eps);
        cuts.push_back(omega + eps);
    }
    if (lower < 0) cuts.push_back(0.0);
    std::sort(cuts.begin(), cuts.end());

    std::vector<std::pair<double, double>> intervals;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (pole_inside && cuts[i] == omega - eps) continue;  // excluded window
        intervals.emplace_back(cuts[i], cuts[i + 1]);
    }
    const QuadResult acc = integrate(integrand, intervals, pv->tolerance);

    // Window (omega - eps, omega + eps): PV of J(w')/(omega - w') -> -2 eps J'(omega) + O(eps^3).
    const double h = eps;
    const double window = pole_inside ? -2.0 * eps * (J(omega + h) - J(omega - h)) / (2 * h) : 0.0;

    const double residual = acc.error + sup.tail;
    if (!acc.converged || residual > pv->tolerance) {
        std::ostringstream os;
        os << "lamb_shift: quadrature did not converge at omega=" << omega << " (residual estimate " << residual
           << ", tolerance " << pv->tolerance << ")";
        throw QuadratureError(os.str(), residual);
    }
    return acc.value + window;
}

GammaCoefficient gamma_coefficient(double omega, const BathModel& bath) {
    const double re = std::numbers::pi * thermal_spectral_density(omega, bath);
    const double im = lamb_shift(omega, bath);
    return {{re, im}, omega};
}

}  // namespace jcdiss
