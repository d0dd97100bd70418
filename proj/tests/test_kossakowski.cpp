#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "jcdiss/generators.hpp"
#include "test_support.hpp"

#include <numbers>

using namespace jcdiss;
using namespace jcdiss::testing;

namespace {

// Traceless random operators.
std::vector<OperatorMatrix<double>> random_traceless(Eigen::Index d, int count, std::mt19937& rng) {
    std::vector<OperatorMatrix<double>> out;
    for (int i = 0; i < count; ++i) {
        Mat F = random_matrix(d, rng);
        F -= (F.trace() / double(d)) * Mat::Identity(d, d);
        out.push_back({F, BasisTag::Dressed});
    }
    return out;
}

// -i[H, .] + sum_ij K_ij (F_i . F_j† - 1/2 {F_j† F_i, .}) assembled directly.
Liouvillian<double> assemble(const SystemParams<double>& p, const Mat& H, const Mat& K,
                             const std::vector<OperatorMatrix<double>>& F) {
    Liouvillian<double> L;
    L.params = p;
    L.matrix = commutator_generator<double>(H);
    for (std::size_t i = 0; i < F.size(); ++i)
        for (std::size_t j = 0; j < F.size(); ++j) {
            const auto k = K(Eigen::Index(i), Eigen::Index(j));
            L.matrix += k * (sandwich<double>(F[i].entries, F[j].entries) -
                             0.5 * left_multiply<double>(F[j].entries.adjoint() * F[i].entries) -
                             0.5 * right_multiply<double>(F[j].entries.adjoint() * F[i].entries));
        }
    return L;
}

}  // namespace

TEST_CASE("recovers a known coefficient matrix") {
    std::mt19937 rng(5);
    const SystemParams<double> p{1.0, 0.1, 1};
    const auto F = random_traceless(3, 4, rng);
    const Mat G = random_matrix(4, rng);
    const Mat K = G * G.adjoint() - 1.5 * Mat::Identity(4, 4);  // Hermitian, indefinite
    Mat H = random_matrix(3, rng);
    H = (H + H.adjoint()).eval();
    const auto rep = kossakowski_report(assemble(p, H, K, F), F);
    CHECK((rep.coefficients - K).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(rep.residual <= 1e-12);
    REQUIRE(rep.is_lindblad.has_value());
    Eigen::SelfAdjointEigenSolver<Mat> es(K);
    CHECK(rep.min_eigenvalue == doctest::Approx(es.eigenvalues().minCoeff()).epsilon(1e-10));
    CHECK(*rep.is_lindblad == (es.eigenvalues().minCoeff() >= -1e-10));
}

TEST_CASE("basis that does not span the dissipator gives no verdict") {
    const SystemParams<double> p{1.0, 0.1, 2};
    const auto L = build_phenom_bare(p, 0.05, 0.0);
    const auto ops = jump_operator_basis(build_dressed_basis(p));
    const std::vector<OperatorMatrix<double>> partial(ops.begin(), ops.begin() + 1);
    const auto rep = kossakowski_report(L, partial);
    CHECK(rep.residual > 1e-3);
    CHECK_FALSE(rep.is_lindblad.has_value());
}

TEST_CASE("operators with a trace are rejected") {
    const SystemParams<double> p{1.0, 0.1, 1};
    const auto L = build_phenom_bare(p, 0.05, 0.0);
    const std::vector<OperatorMatrix<double>> ops{{Mat::Identity(3, 3), BasisTag::Dressed}};
    CHECK_THROWS_AS(kossakowski_report(L, ops), std::invalid_argument);
}

TEST_CASE("phenomenological and secular generators are Lindblad") {
    for (const auto& p : system_grid()) {
        const auto ops = jump_operator_basis(build_dressed_basis(p));
        for (double T : {0.0, 0.5}) {
            const auto rep = kossakowski_report(build_phenom_bare(p, 0.03, T), ops);
            REQUIRE(rep.is_lindblad.has_value());
            CHECK(*rep.is_lindblad);
            CHECK(rep.hermiticity_defect <= 1e-12);
        }
        for (const auto& bath : bath_grid()) {
            const auto rep = kossakowski_report(build_secular(p, bath), ops);
            REQUIRE(rep.is_lindblad.has_value());
            CHECK(*rep.is_lindblad);
            CHECK(rep.residual <= 1e-10);
        }
    }
}

TEST_CASE("quasi-RWA with a flat spectrum at T = 0 is Lindblad") {
    for (int n = 1; n <= 4; ++n) {
        const SystemParams<double> p{1.0, 0.05, n};
        const auto rep = kossakowski_report(build_quasi_rwa(p, flat_bath(0.01, 0.0)),
                                            jump_operator_basis(build_dressed_basis(p)));
        REQUIRE(rep.is_lindblad.has_value());
        CHECK(*rep.is_lindblad);
    }
}

TEST_CASE("quasi-RWA with unequal rates has K_ab = g_a + g_b") {
    // n_max = 1, ohmic at T = 0: rates g = pi J(w) at w = omega0 -/+ Omega, no upward channel
    const SystemParams<double> p{1.0, 0.2, 1};
    const BathModel bath{OhmicSpectrum{0.05, 1.0}, 0.0, ZeroLambShift{}};
    const double a = std::numbers::pi * 0.05 * 0.8 * std::exp(-0.8);
    const double b = std::numbers::pi * 0.05 * 1.2 * std::exp(-1.2);
    const auto rep = kossakowski_report(build_quasi_rwa(p, bath), jump_operator_basis(build_dressed_basis(p)));
    CHECK(std::abs(rep.coefficients(0, 0) - 2 * a) <= 1e-13);
    CHECK(std::abs(rep.coefficients(1, 1) - 2 * b) <= 1e-13);
    CHECK(std::abs(rep.coefficients(0, 1) - (a + b)) <= 1e-13);
    CHECK(rep.coefficients.bottomRows(2).cwiseAbs().maxCoeff() <= 1e-13);
    const double lmin = (a + b) - std::hypot(a - b, a + b);
    CHECK(rep.min_eigenvalue == doctest::Approx(lmin).epsilon(1e-10));
    REQUIRE(rep.is_lindblad.has_value());
    CHECK_FALSE(*rep.is_lindblad);
}

TEST_CASE("quasi-RWA with a thermal ohmic bath is not Lindblad") {
    for (double T : {0.1, 0.5, 1.0}) {
        for (double eta : {0.01, 0.05}) {
            const SystemParams<double> p{1.0, 0.1, 2};
            const BathModel bath{OhmicSpectrum{eta, 1.0}, T, ZeroLambShift{}};
            const auto rep = kossakowski_report(build_quasi_rwa(p, bath), jump_operator_basis(build_dressed_basis(p)));
            REQUIRE(rep.is_lindblad.has_value());
            CHECK(rep.min_eigenvalue < -1e-6);
            CHECK_FALSE(*rep.is_lindblad);
        }
    }
}
