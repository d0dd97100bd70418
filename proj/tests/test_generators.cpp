#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "jcdiss/generators.hpp"
#include "test_support.hpp"

#include <numbers>

using namespace jcdiss;
using namespace jcdiss::testing;

namespace {

std::vector<Liouvillian<double>> all_kinds(const SystemParams<double>& p, const BathModel& bath) {
    const double gamma = 2 * std::numbers::pi * 0.01;
    return {build_phenom_bare(p, gamma, bath.temperature), build_phenom_dressed(p, gamma, bath.temperature),
            build_secular(p, bath), build_quasi_rwa(p, bath)};
}

}  // namespace

TEST_CASE("phenomenological generator matches the matrix-level equation") {
    std::mt19937 rng(7);
    for (const auto& p : system_grid()) {
        const auto b = build_dressed_basis(p);
        for (double T : {0.0, 0.3, 1.0}) {
            const auto L = build_phenom_bare(p, 0.04, T);
            CHECK(L.kind == GeneratorKind::PhenomBare);
            for (int k = 0; k < 3; ++k) {
                const Mat rho_bare = random_density(b.dim(), rng);
                const Mat rho_dressed = b.U.adjoint() * rho_bare * b.U;
                const Mat expect = b.U.adjoint() * phenom_rhs_bare(p, 0.04, T, rho_bare) * b.U;
                CHECK((L.apply(rho_dressed) - expect).cwiseAbs().maxCoeff() <= 1e-13);
            }
        }
    }
}

TEST_CASE("gamma = 0 leaves a purely Hamiltonian generator") {
    const SystemParams<double> p{1.0, 0.1, 3};
    const auto L = build_phenom_bare(p, 0.0, 0.5);
    Eigen::ComplexEigenSolver<Mat> es(L.matrix);
    CHECK(es.eigenvalues().real().cwiseAbs().maxCoeff() <= 1e-12);
    const auto Ld = build_phenom_dressed(p, 0.0, 0.5);
    CHECK(Ld.downward_terms == 0);
    CHECK(rel_frobenius(Ld.matrix, commutator_generator<double>(jc_hamiltonian(build_dressed_basis(p)).entries)) == 0.0);
}

TEST_CASE("zero temperature drops the upward channel") {
    const SystemParams<double> p{1.0, 0.1, 2};
    const auto b = build_dressed_basis(p);
    const Mat a = annihilation_dressed(b).entries;
    const Mat expect = commutator_generator<double>(to_dressed(b, jc_hamiltonian_bare(p)).entries) +
                       0.05 * lindblad_dissipator<double>(a);
    CHECK(rel_frobenius(build_phenom_bare(p, 0.05, 0.0).matrix, expect) <= 1e-14);
    CHECK(build_phenom_dressed(p, 0.05, 0.0).upward_terms == 0);
}

TEST_CASE("n_max = 1 at T = 0: the ground state is the unique stationary state") {
    const SystemParams<double> p{1.0, 0.1, 1};
    const auto L = build_phenom_bare(p, 0.05, 0.0);
    Eigen::FullPivLU<Mat> lu(L.matrix);
    lu.setThreshold(1e-10);
    const Mat kernel = lu.kernel();
    REQUIRE(kernel.cols() == 1);
    Mat rho = unvec<double>(kernel.col(0), 3);
    rho /= rho.trace();
    Mat ground = Mat::Zero(3, 3);
    ground(0, 0) = 1.0;
    CHECK((rho - ground).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("dressed rewrite equals the bare phenomenological generator") {
    for (const auto& p : system_grid()) {
        for (double gamma : {0.0, 0.01, 0.2}) {
            for (double T : {0.0, 0.2, 2.0}) {
                const auto Lb = build_phenom_bare(p, gamma, T);
                const auto Ld = build_phenom_dressed(p, gamma, T);
                CHECK(rel_frobenius(Ld.matrix, Lb.matrix) <= 1e-12);
            }
        }
    }
}

TEST_CASE("dressed rewrite enumerates every cross-product of the four sums") {
    for (int n = 1; n <= 6; ++n) {
        // sums over (k,m); (N',k,l,m); (N,k,m,n); (N,N',k,l,m,n) with N, N' in 1..n-1
        const std::size_t oracle = 4 + 8 * (n - 1) + 8 * (n - 1) + 16 * (n - 1) * (n - 1);
        const auto L = build_phenom_dressed(SystemParams<double>{1.0, 0.05, n}, 0.01, 0.3);
        CHECK(L.downward_terms == oracle);
        CHECK(L.upward_terms == oracle);
    }
}

TEST_CASE("quasi-RWA matches its term-by-term definition") {
    std::mt19937 rng(11);
    for (const auto& p : system_grid()) {
        const auto d = dimension(p.n_max);
        for (const auto& bath : bath_grid()) {
            const auto Lq = build_quasi_rwa(p, bath);
            const auto Ls = build_secular(p, bath);
            for (int k = 0; k < 2; ++k) {
                const Mat rho = random_density(d, rng);
                CHECK((Lq.apply(rho) - microscopic_rhs(p, bath, rho, true)).cwiseAbs().maxCoeff() <= 1e-13);
                CHECK((Ls.apply(rho) - microscopic_rhs(p, bath, rho, false)).cwiseAbs().maxCoeff() <= 1e-13);
            }
        }
    }
}

TEST_CASE("n_max = 1 quasi-RWA against a hand-assembled three-level generator") {
    const SystemParams<double> p{1.0, 0.1, 1};
    const BathModel bath{OhmicSpectrum{0.03, 1.0}, 0.0, ZeroLambShift{}};
    const auto L = build_quasi_rwa(p, bath);
    // A0- = |E0><E1-| / sqrt2, A0+ = |E0><E1+| / sqrt2, rates from the ohmic density
    const double h = 1.0 / std::sqrt(2.0);
    Mat Am = Mat::Zero(3, 3), Ap = Mat::Zero(3, 3);
    Am(0, 1) = h;
    Ap(0, 2) = h;
    const double gm = std::numbers::pi * 0.03 * 0.9 * std::exp(-0.9);
    const double gp = std::numbers::pi * 0.03 * 1.1 * std::exp(-1.1);
    const Mat H = Eigen::Vector3cd(-0.5, 0.4, 0.6).asDiagonal();
    const std::complex<double> I(0, 1);
    std::mt19937 rng(3);
    const Mat rho = random_density(3, rng);
    Mat expect = -I * (H * rho - rho * H);
    for (auto [A, g] : {std::pair{Am, gm}, std::pair{Ap, gp}}) {
        for (const Mat& B : {Am, Ap}) {
            const Mat term = g * (A * rho * B.adjoint() - B.adjoint() * A * rho);
            expect += term + term.adjoint();
        }
    }
    CHECK((L.apply(rho) - expect).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK(L.upward_terms == 0);
    CHECK(L.downward_terms == 4);
}

TEST_CASE("coincidence: quasi-RWA at T = 0 with a flat spectrum is the phenomenological generator") {
    const double J0 = 0.01;
    const double gamma = 2 * std::numbers::pi * J0;
    for (int n = 1; n <= 8; ++n) {
        const SystemParams<double> p{1.0, 0.05, n};
        const auto Lq = build_quasi_rwa(p, flat_bath(J0, 0.0));
        const auto Lp = build_phenom_bare(p, gamma, 0.0);
        CHECK(rel_frobenius(Lq.matrix, Lp.matrix) <= 1e-12);
    }
}

TEST_CASE("zero temperature: no upward blocks for any spectrum") {
    const SystemParams<double> p{1.0, 0.1, 3};
    for (const auto& spec : {SpectralModel{FlatSpectrum{0.01, 10}}, SpectralModel{OhmicSpectrum{0.02, 2.0}},
                             SpectralModel{LorentzianSpectrum{0.01, 1.0, 0.2}}}) {
        const BathModel bath{spec, 0.0, ZeroLambShift{}};
        CHECK(build_quasi_rwa(p, bath).upward_terms == 0);
        CHECK(build_secular(p, bath).upward_terms == 0);
        const auto table = gamma_table(p, bath);
        for (const auto& g : table.up) CHECK(g == std::complex<double>(0));
    }
}

TEST_CASE("secular equals quasi-RWA with the cross-label blocks removed") {
    const SystemParams<double> p{1.0, 0.1, 3};
    const auto b = build_dressed_basis(p);
    for (const auto& bath : bath_grid()) {
        const auto table = gamma_table(p, bath);
        Mat cross = Mat::Zero((2 * 3 + 1) * (2 * 3 + 1), (2 * 3 + 1) * (2 * 3 + 1));
        for (std::size_t x = 0; x < table.labels.size(); ++x) {
            const Mat A = jump_operator(table.labels[x], b).entries;
            for (std::size_t y = 0; y < table.labels.size(); ++y) {
                if (x == y) continue;
                const Mat B = jump_operator(table.labels[y], b).entries;
                const Mat BdA = B.adjoint() * A;
                const auto g = table.down[x];
                const auto gt = table.up[x];
                cross += g * (sandwich<double>(A, B) - left_multiply<double>(BdA));
                cross += std::conj(g) * (sandwich<double>(B, A) - right_multiply<double>(BdA.adjoint()));
                const Mat Ad = A.adjoint(), Bd = B.adjoint();
                cross += gt * (sandwich<double>(Ad, Bd) - left_multiply<double>(B * Ad));
                cross += std::conj(gt) * (sandwich<double>(Bd, Ad) - right_multiply<double>(A * Bd));
            }
        }
        const auto Lq = build_quasi_rwa(p, bath);
        const auto Ls = build_secular(p, bath);
        CHECK((Lq.matrix - cross - Ls.matrix).cwiseAbs().maxCoeff() <= 1e-14);
    }
}

TEST_CASE("secular decay of |E_{1,+}> at T = 0 with a flat spectrum") {
    // rate-equation oracle: dp/dt = -2 Re Gamma |1/sqrt2|^2 p = -(gamma / 2) p
    const double J0 = 0.01;
    const double gamma = 2 * std::numbers::pi * J0;
    const SystemParams<double> p{1.0, 0.1, 1};
    const auto L = build_secular(p, flat_bath(J0, 0.0));
    const Eigen::Index idx = vec_index(2, 2, 3);
    CHECK(L.matrix(idx, idx).real() == doctest::Approx(-gamma / 2).epsilon(1e-14));
    CHECK(L.matrix(vec_index(0, 0, 3), idx).real() == doctest::Approx(gamma / 2).epsilon(1e-14));
}

TEST_CASE("trace and hermiticity preservation for every generator kind") {
    std::mt19937 rng(2024);
    for (const auto& p : system_grid()) {
        const auto d = dimension(p.n_max);
        for (const auto& bath : bath_grid()) {
            for (const auto& L : all_kinds(p, bath)) {
                // vec(I)^T L = 0
                CVector<double> left = vec<double>(Mat::Identity(d, d));
                CHECK((left.transpose() * L.matrix).norm() <= 1e-10 * L.matrix.norm());
                for (int k = 0; k < 100; ++k) {
                    const Mat rho = random_hermitian_unit_trace(d, rng);
                    const Mat out = L.apply(rho);
                    CHECK(std::abs(out.trace()) <= 1e-10);
                    CHECK((out - out.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
                }
                // L(X†) = L(X)† for non-Hermitian X
                const Mat X = random_matrix(d, rng);
                CHECK((L.apply(X.adjoint()) - L.apply(X).adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
            }
        }
    }
}

TEST_CASE("secular nonzero pattern is contained in the quasi-RWA pattern") {
    for (const auto& p : system_grid()) {
        for (const auto& bath : bath_grid()) {
            const auto Ls = build_secular(p, bath);
            const auto Lq = build_quasi_rwa(p, bath);
            bool contained = true;
            for (Eigen::Index i = 0; i < Ls.matrix.rows(); ++i)
                for (Eigen::Index j = 0; j < Ls.matrix.cols(); ++j)
                    if (std::abs(Ls.matrix(i, j)) > 1e-15 && Lq.matrix(i, j) == std::complex<double>(0)) contained = false;
            CHECK(contained);
        }
    }
}

TEST_CASE("generators conserve the excitation-difference sector") {
    for (const auto& p : system_grid()) {
        const auto d = dimension(p.n_max);
        for (const auto& bath : bath_grid()) {
            for (const auto& L : all_kinds(p, bath)) {
                double leak = 0;
                for (Eigen::Index r = 0; r < d; ++r)
                    for (Eigen::Index c = 0; c < d; ++c)
                        for (Eigen::Index rp = 0; rp < d; ++rp)
                            for (Eigen::Index cp = 0; cp < d; ++cp) {
                                if (manifold_of(r) - manifold_of(c) == manifold_of(rp) - manifold_of(cp)) continue;
                                leak = std::max(leak, std::abs(L.matrix(vec_index(r, c, d), vec_index(rp, cp, d))));
                            }
                CHECK(leak <= 1e-14);
            }
        }
    }
}

TEST_CASE("flat cutoff must cover the Bohr band") {
    const SystemParams<double> p{1.0, 0.1, 2};
    CHECK_THROWS_AS(build_quasi_rwa(p, flat_bath(0.01, 0.0, 1.1)), InvalidParameters);
    CHECK_NOTHROW(build_quasi_rwa(p, flat_bath(0.01, 0.0, 1.3)));
    CHECK_THROWS_AS(build_phenom_bare(p, -1.0, 0.0), InvalidParameters);
}

TEST_CASE("generator kind names round-trip") {
    for (auto k : {GeneratorKind::PhenomBare, GeneratorKind::PhenomDressed, GeneratorKind::SecularRWA,
                   GeneratorKind::QuasiRWA}) {
        CHECK(parse_generator_kind(to_string(k)) == k);
    }
    CHECK_FALSE(parse_generator_kind("lindblad").has_value());
}
