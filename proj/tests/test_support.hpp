// Shared helpers for the test suites: seeded random states and matrix-level
// reference implementations of the master equations (no superoperators involved).

#pragma once

#include "jcdiss/bath.hpp"
#include "jcdiss/generators.hpp"
#include "jcdiss/hilbert.hpp"
#include "jcdiss/jumps.hpp"

#include <numbers>
#include <random>
#include <vector>

namespace jcdiss::testing {

using Mat = CMatrix<double>;

inline Mat random_matrix(Eigen::Index d, std::mt19937& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Mat m(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) m(i, j) = {n(rng), n(rng)};
    return m;
}

// Hermitian, unit trace; not necessarily positive.
inline Mat random_hermitian_unit_trace(Eigen::Index d, std::mt19937& rng) {
    Mat m = random_matrix(d, rng);
    m = 0.5 * (m + m.adjoint()).eval();
    m += ((1.0 - m.trace().real()) / double(d)) * Mat::Identity(d, d);
    return m;
}

// Positive semidefinite, unit trace.
inline Mat random_density(Eigen::Index d, std::mt19937& rng) {
    const Mat g = random_matrix(d, rng);
    Mat rho = g * g.adjoint();
    return rho / rho.trace();
}

inline double rel_frobenius(const Mat& a, const Mat& b) {
    const double s = std::max(a.norm(), b.norm());
    return s > 0 ? (a - b).norm() / s : 0.0;
}

inline BathModel flat_bath(double J0, double T, double cutoff = 100.0) {
    return {FlatSpectrum{J0, cutoff}, T, ZeroLambShift{}};
}

inline std::vector<SystemParams<double>> system_grid() {
    return {{1.0, 0.1, 1}, {1.0, 0.05, 3}, {2.0, 0.3, 2}, {5.0, 0.2, 4}};
}

inline std::vector<BathModel> bath_grid() {
    return {flat_bath(0.01, 0.0),
            flat_bath(0.02, 0.4),
            {OhmicSpectrum{0.02, 1.5}, 0.0, ZeroLambShift{}},
            {OhmicSpectrum{0.05, 0.5}, 0.8, ZeroLambShift{}},
            {LorentzianSpectrum{0.01, 1.0, 0.3}, 0.2, ZeroLambShift{}},
            {OhmicSpectrum{0.02, 1.5}, 0.3, PrincipalValueLambShift{1e-4, 1e-10}}};
}

// -i[H, rho] + gamma (n+1) D[a] rho + gamma n D[a†] rho, all d x d products in the bare basis.
inline Mat phenom_rhs_bare(const SystemParams<double>& p, double gamma, double T, const Mat& rho_bare) {
    const Mat H = jc_hamiltonian_bare(p).entries;
    const Mat a = bare_annihilation(p).entries;
    const Mat ad = a.adjoint();
    const double n = bose_occupation(p.omega0, T);
    const std::complex<double> I(0, 1);
    Mat out = -I * (H * rho_bare - rho_bare * H);
    out += gamma * (n + 1) * (a * rho_bare * ad - 0.5 * (ad * a * rho_bare + rho_bare * ad * a));
    out += gamma * n * (ad * rho_bare * a - 0.5 * (a * ad * rho_bare + rho_bare * a * ad));
    return out;
}

// Quasi-RWA (or secular when cross_terms is false) right-hand side, term by term in the dressed basis.
inline Mat microscopic_rhs(const SystemParams<double>& p, const BathModel& bath, const Mat& rho, bool cross_terms) {
    const auto b = build_dressed_basis(p);
    const auto labels = enumerate_jumps(p);
    const std::complex<double> I(0, 1);
    const Mat H = jc_hamiltonian(b).entries;
    Mat out = -I * (H * rho - rho * H);
    for (const auto& x : labels) {
        const double w = bohr_frequency(x, p).value;
        const auto g = gamma_coefficient(w, bath).value;
        const auto gt = gamma_coefficient(-w, bath).value;
        const Mat A = jump_operator(x, b).entries;
        const Mat Ad = A.adjoint();
        for (const auto& y : labels) {
            if (!cross_terms && name(x) != name(y)) continue;
            const Mat B = jump_operator(y, b).entries;
            const Mat Bd = B.adjoint();
            // conjugate partners written out so the map stays linear for non-Hermitian input
            out += g * (A * rho * Bd - Bd * A * rho) + std::conj(g) * (B * rho * Ad - rho * Ad * B);
            out += gt * (Ad * rho * B - B * Ad * rho) + std::conj(gt) * (Bd * rho * A - rho * A * Bd);
        }
    }
    return out;
}

}  // namespace jcdiss::testing
