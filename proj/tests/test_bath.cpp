#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "jcdiss/bath.hpp"

#include <cmath>
#include <functional>
#include <numbers>

using namespace jcdiss;

namespace {

BathModel flat(double j, double cutoff, double T, LambShiftPolicy policy = ZeroLambShift{}) {
    return {FlatSpectrum{j, cutoff}, T, policy};
}

// Composite Simpson on [a, b] with n (even) panels.
double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

// Principal value by singularity subtraction:
//   PV int_a^b J(w)/(x - w) dw = int_a^b (J(w) - J(x)) / (x - w) dw + J(x) ln((x - a) / (b - x)).
// Independent of the windowed quadrature used by lamb_shift.
double pv_by_subtraction(const std::function<double(double)>& J, double x, std::vector<double> cuts, int n) {
    const double Jx = J(x);
    const double slope = (J(x + 1e-6) - J(x - 1e-6)) / 2e-6;
    auto g = [&](double w) { return std::abs(w - x) < 1e-12 ? -slope : (J(w) - Jx) / (x - w); };
    double total = 0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) total += simpson(g, cuts[i], cuts[i + 1], n);
    return total + Jx * std::log((x - cuts.front()) / (cuts.back() - x));
}

}  // namespace

TEST_CASE("bose occupation closed forms") {
    CHECK(bose_occupation(1.0, 0.0) == 0.0);
    CHECK(bose_occupation(std::log(2.0), 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(bose_occupation(3.0 * std::log(1.5), 3.0) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK_THROWS_AS(bose_occupation(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(bose_occupation(-1.0, 1.0), std::invalid_argument);
}

TEST_CASE("bose occupation is monotone") {
    for (double T : {0.05, 0.3, 1.0, 4.0}) {
        double prev = bose_occupation(0.1, T);
        for (double w = 0.2; w < 5.0; w += 0.1) {
            const double cur = bose_occupation(w, T);
            CHECK(cur < prev);
            prev = cur;
        }
    }
    for (double w : {0.1, 1.0, 3.0}) {
        double prev = bose_occupation(w, 0.05);
        for (double T = 0.1; T < 5.0; T += 0.1) {
            const double cur = bose_occupation(w, T);
            CHECK(cur > prev);
            prev = cur;
        }
    }
}

TEST_CASE("thermal spectral density branches") {
    CHECK(thermal_spectral_density(-0.7, flat(0.2, 10, 0.0)) == 0.0);
    CHECK(thermal_spectral_density(0.7, flat(0.2, 10, 0.0)) == 0.2);
    CHECK(thermal_spectral_density(11.0, flat(0.2, 10, 0.0)) == 0.0);

    const BathModel ohm{OhmicSpectrum{0.1, 2.0}, 0.5, ZeroLambShift{}};
    const double w = 0.8;
    const double n = 1.0 / std::expm1(w / 0.5);
    CHECK(thermal_spectral_density(w, ohm) == doctest::Approx((n + 1) * 0.1 * w * std::exp(-w / 2.0)));
    CHECK(thermal_spectral_density(-w, ohm) == doctest::Approx(n * 0.1 * w * std::exp(-w / 2.0)));
    CHECK(thermal_spectral_density(0.0, ohm) == doctest::Approx(0.1 * 0.5));
}

TEST_CASE("detailed balance for a flat spectrum") {
    for (double w : {0.1, 0.5, 1.0, 2.0}) {
        for (double T : {0.05, 0.2, 1.0, 10.0}) {
            const auto b = flat(0.3, 100.0, T);
            const double ratio = thermal_spectral_density(-w, b) / thermal_spectral_density(w, b);
            CHECK(ratio == doctest::Approx(std::exp(-w / T)).epsilon(1e-12));
        }
    }
}

TEST_CASE("gamma coefficients") {
    const double j = 0.01;
    const auto b0 = flat(j, 10, 0.0);
    const auto g = gamma_coefficient(1.2, b0);
    CHECK(g.value.real() == doctest::Approx(std::numbers::pi * j).epsilon(1e-15));
    CHECK(g.value.imag() == 0.0);
    CHECK(g.frequency == 1.2);
    const auto up = gamma_coefficient(-1.2, b0);
    CHECK(up.value == std::complex<double>(0, 0));
    CHECK(transition_rate(1.2, b0) == doctest::Approx(2 * std::numbers::pi * j));

    const BathModel ohm{OhmicSpectrum{0.1, 2.0}, 0.5, ZeroLambShift{}};
    for (double w : {-2.0, -0.5, 0.5, 2.0}) {
        CHECK(gamma_coefficient(w, ohm).value.imag() == 0.0);
        CHECK(gamma_coefficient(w, ohm).value.real() >= 0.0);
    }
}

TEST_CASE("lamb shift: flat spectrum against the closed form") {
    const double j = 0.05;
    const double cutoff = 4.0;
    const auto b = flat(j, cutoff, 0.0, PrincipalValueLambShift{1e-4, 1e-10});
    for (double w : {0.3, 1.0, 1.7, 3.2}) {
        const double expect = j * std::log(w / (cutoff - w));
        CHECK(lamb_shift(w, b) == doctest::Approx(expect).epsilon(1e-9));
        CHECK(gamma_coefficient(w, b).value.imag() == doctest::Approx(expect).epsilon(1e-9));
    }
    // J even about the pole over the support -> zero
    CHECK(std::abs(lamb_shift(cutoff / 2, b)) < 1e-10);
    // pole outside the support at T = 0: ordinary integral j ln(|w| / (cutoff + |w|))
    CHECK(lamb_shift(-1.0, b) == doctest::Approx(j * std::log(1.0 / 5.0)).epsilon(1e-9));
}

TEST_CASE("lamb shift: zero policy") {
    CHECK(lamb_shift(1.0, flat(0.05, 4.0, 0.3)) == 0.0);
}

TEST_CASE("lamb shift: thermal ohmic spectrum against singularity subtraction") {
    const BathModel b{OhmicSpectrum{0.1, 2.0}, 0.3, PrincipalValueLambShift{1e-4, 1e-10}};
    auto J = [&](double w) { return thermal_spectral_density(w, b); };
    const double U = 160.0;
    for (double x : {1.0, -0.7}) {
        const double oracle = pv_by_subtraction(J, x, {-U, -20.0, 0.0, 20.0, U}, 40000);
        CHECK(lamb_shift(x, b) == doctest::Approx(oracle).epsilon(1e-7));
    }
}

TEST_CASE("lamb shift: rejected configurations") {
    // cutoff below the frequency
    CHECK_THROWS_AS(lamb_shift(5.0, flat(0.05, 4.0, 0.0, PrincipalValueLambShift{})), std::invalid_argument);
    // flat J0 at T > 0 diverges at w' = 0
    CHECK_THROWS_AS(lamb_shift(1.0, flat(0.05, 4.0, 0.2, PrincipalValueLambShift{})), std::invalid_argument);
    // unreachable tolerance reports a residual estimate
    const BathModel tight{OhmicSpectrum{0.1, 2.0}, 0.3, PrincipalValueLambShift{1e-4, 1e-300}};
    try {
        lamb_shift(1.0, tight);
        FAIL("expected QuadratureError");
    } catch (const QuadratureError& e) {
        CHECK(e.residual_estimate > 0);
    }
}

TEST_CASE("bath validation") {
    CHECK_THROWS_AS(validate(flat(0.0, 1.0, 0.0)), std::invalid_argument);
    CHECK_THROWS_AS(validate(flat(1.0, 1.0, -0.1)), std::invalid_argument);
    CHECK_THROWS_AS(validate(BathModel{OhmicSpectrum{0.1, -1.0}, 0.0, ZeroLambShift{}}), std::invalid_argument);
    CHECK_THROWS_AS(validate(BathModel{LorentzianSpectrum{1.0, 1.0, 0.0}, 0.0, ZeroLambShift{}}), std::invalid_argument);
    CHECK_NOTHROW(validate(BathModel{LorentzianSpectrum{1.0, 1.0, 0.1}, 0.2, PrincipalValueLambShift{}}));
    CHECK(spectrum_kind(LorentzianSpectrum{}) == "lorentzian");
}
