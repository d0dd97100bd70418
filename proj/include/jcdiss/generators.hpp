// generators.hpp: master-equation generators as dense superoperators in the dressed basis.
//
// Four kinds are assembled:
//   PhenomBare     cavity-loss Lindbladian built from the truncated bare operator a
//   PhenomDressed  the same equation expanded term by term over dressed jump operators
//   SecularRWA     microscopic generator keeping only diagonal label pairs
//   QuasiRWA       microscopic generator keeping every slow cross-label product
//
// All Liouvillians act on column-stacked density matrices expressed in the dressed basis.

#pragma once

#include "jcdiss/bath.hpp"
#include "jcdiss/hilbert.hpp"
#include "jcdiss/jumps.hpp"
#include "jcdiss/superop.hpp"

#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace jcdiss {

enum class GeneratorKind { PhenomBare, PhenomDressed, SecularRWA, QuasiRWA };

inline std::string to_string(GeneratorKind k) {
    switch (k) {
        case GeneratorKind::PhenomBare: return "phenom_bare";
        case GeneratorKind::PhenomDressed: return "phenom_dressed";
        case GeneratorKind::SecularRWA: return "secular_rwa";
        case GeneratorKind::QuasiRWA: return "quasi_rwa";
    }
    return "unknown";
}

inline std::optional<GeneratorKind> parse_generator_kind(const std::string& s) {
    for (auto k : {GeneratorKind::PhenomBare, GeneratorKind::PhenomDressed, GeneratorKind::SecularRWA,
                   GeneratorKind::QuasiRWA}) {
        if (to_string(k) == s) return k;
    }
    return std::nullopt;
}

inline bool is_phenomenological(GeneratorKind k) {
    return k == GeneratorKind::PhenomBare || k == GeneratorKind::PhenomDressed;
}

template <typename Real = double>
struct Liouvillian {
    GeneratorKind kind{GeneratorKind::PhenomBare};
    CMatrix<Real> matrix;
    SystemParams<Real> params;
    std::optional<BathModel> bath;    // microscopic kinds
    std::optional<double> gamma;      // phenomenological kinds
    std::optional<double> temperature;
    std::size_t downward_terms{0};    // dissipative cross-products enumerated
    std::size_t upward_terms{0};

    Eigen::Index hilbert_dim() const noexcept { return dimension(params.n_max); }

    CMatrix<Real> apply(const CMatrix<Real>& rho) const {
        return unvec<Real>(CVector<Real>(matrix * vec<Real>(rho)), hilbert_dim());
    }
};

// Complex coefficients per enumerated jump label: Gamma at the Bohr frequency
// (downward) and at its negation (upward).
struct GammaTable {
    std::vector<JumpLabel> labels;
    std::vector<std::complex<double>> down;
    std::vector<std::complex<double>> up;
};

template <typename Real>
GammaTable gamma_table(const SystemParams<Real>& p, const BathModel& bath) {
    GammaTable t;
    t.labels = enumerate_jumps(p);
    for (const auto& lab : t.labels) {
        const double w = static_cast<double>(bohr_frequency(lab, p).value);
        t.down.push_back(gamma_coefficient(w, bath).value);
        t.up.push_back(gamma_coefficient(-w, bath).value);
    }
    return t;
}

// A flat spectrum must cover every Bohr frequency the truncated model uses.
template <typename Real>
void validate_for_system(const BathModel& bath, const SystemParams<Real>& p) {
    validate(bath);
    if (const auto* f = std::get_if<FlatSpectrum>(&bath.spectral)) {
        double top = 0;
        for (const auto& lab : enumerate_jumps(p)) top = std::max(top, static_cast<double>(bohr_frequency(lab, p).value));
        if (!(f->cutoff > top)) {
            std::ostringstream os;
            os << "bath: flat cutoff " << f->cutoff << " must exceed the largest Bohr frequency " << top;
            throw InvalidParameters(os.str());
        }
    }
}

namespace detail {

template <typename Real>
std::vector<CMatrix<Real>> jump_matrices(const DressedBasis<Real>& b, const std::vector<JumpLabel>& labels) {
    std::vector<CMatrix<Real>> out;
    out.reserve(labels.size());
    for (const auto& lab : labels) out.push_back(jump_operator(lab, b).entries);
    return out;
}

template <typename Real>
Liouvillian<Real> microscopic(const SystemParams<Real>& p, const BathModel& bath, bool cross_terms) {
    validate_for_system(bath, p);
    const auto basis = build_dressed_basis(p);
    const auto table = gamma_table(p, bath);
    const auto A = jump_matrices(basis, table.labels);
    const std::size_t n = A.size();

    Liouvillian<Real> L;
    L.kind = cross_terms ? GeneratorKind::QuasiRWA : GeneratorKind::SecularRWA;
    L.params = p;
    L.bath = bath;
    L.temperature = bath.temperature;
    L.matrix = commutator_generator<Real>(jc_hamiltonian(basis).entries);

    for (std::size_t acting = 0; acting < n; ++acting) {
        const Complex<Real> g_down(static_cast<Real>(table.down[acting].real()),
                                   static_cast<Real>(table.down[acting].imag()));
        const Complex<Real> g_up(static_cast<Real>(table.up[acting].real()),
                                 static_cast<Real>(table.up[acting].imag()));
        const CMatrix<Real> Ad_acting = A[acting].adjoint();
        for (std::size_t other = 0; other < n; ++other) {
            if (!cross_terms && other != acting) continue;
            const CMatrix<Real> Ad_other = A[other].adjoint();
            // Gamma(w) [A rho B† - B† A rho] + h.c.
            if (g_down != Complex<Real>(0)) {
                add_sandwich_minus_left<Real>(L.matrix, g_down, A[acting], A[other]);
                add_sandwich_minus_right<Real>(L.matrix, std::conj(g_down), A[other], A[acting]);
                ++L.downward_terms;
            }
            // Gamma(-w) [A† rho B - B A† rho] + h.c.
            if (g_up != Complex<Real>(0)) {
                add_sandwich_minus_left<Real>(L.matrix, g_up, Ad_acting, Ad_other);
                add_sandwich_minus_right<Real>(L.matrix, std::conj(g_up), Ad_other, Ad_acting);
                ++L.upward_terms;
            }
        }
    }
    return L;
}

}  // namespace detail

template <typename Real>
Liouvillian<Real> build_phenom_bare(const SystemParams<Real>& p, double gamma, double temperature) {
    if (!(gamma >= 0)) throw InvalidParameters("phenomenological gamma must be >= 0");
    if (!(temperature >= 0)) throw InvalidParameters("temperature must be >= 0");
    const auto basis = build_dressed_basis(p);
    const double n = bose_occupation(static_cast<double>(p.omega0), temperature);

    const CMatrix<Real> H = to_dressed(basis, jc_hamiltonian_bare(p)).entries;
    const CMatrix<Real> a = to_dressed(basis, bare_annihilation(p)).entries;

    Liouvillian<Real> L;
    L.kind = GeneratorKind::PhenomBare;
    L.params = p;
    L.gamma = gamma;
    L.temperature = temperature;
    L.matrix = commutator_generator<Real>(H);
    if (gamma > 0) {
        L.matrix += Real(gamma * (n + 1)) * lindblad_dissipator<Real>(a);
        if (n > 0) L.matrix += Real(gamma * n) * lindblad_dissipator<Real>(CMatrix<Real>(a.adjoint()));
    }
    return L;
}

template <typename Real>
Liouvillian<Real> build_phenom_dressed(const SystemParams<Real>& p, double gamma, double temperature) {
    if (!(gamma >= 0)) throw InvalidParameters("phenomenological gamma must be >= 0");
    if (!(temperature >= 0)) throw InvalidParameters("temperature must be >= 0");
    const auto basis = build_dressed_basis(p);
    const double n = bose_occupation(static_cast<double>(p.omega0), temperature);
    const auto labels = enumerate_jumps(p);
    const auto A = detail::jump_matrices(basis, labels);

    Liouvillian<Real> L;
    L.kind = GeneratorKind::PhenomDressed;
    L.params = p;
    L.gamma = gamma;
    L.temperature = temperature;
    L.matrix = commutator_generator<Real>(jc_hamiltonian(basis).entries);
    if (gamma == 0) return L;

    // gamma (n+1) [X rho Y† - 1/2 {Y† X, rho}] + gamma n [X† rho Y - 1/2 {Y X†, rho}]
    const Complex<Real> down(Real(gamma * (n + 1)) / 2);
    const Complex<Real> up(Real(gamma * n) / 2);
    for (std::size_t x = 0; x < A.size(); ++x) {
        for (std::size_t y = 0; y < A.size(); ++y) {
            add_sandwich_minus_left<Real>(L.matrix, down, A[x], A[y]);
            add_sandwich_minus_right<Real>(L.matrix, down, A[x], A[y]);
            ++L.downward_terms;
            if (n > 0) {
                const CMatrix<Real> Xd = A[x].adjoint();
                const CMatrix<Real> Yd = A[y].adjoint();
                add_sandwich_minus_left<Real>(L.matrix, up, Xd, Yd);
                add_sandwich_minus_right<Real>(L.matrix, up, Xd, Yd);
                ++L.upward_terms;
            }
        }
    }
    return L;
}

template <typename Real>
Liouvillian<Real> build_quasi_rwa(const SystemParams<Real>& p, const BathModel& bath) {
    return detail::microscopic(p, bath, true);
}

template <typename Real>
Liouvillian<Real> build_secular(const SystemParams<Real>& p, const BathModel& bath) {
    return detail::microscopic(p, bath, false);
}

// ------------------------------------------------------------------ Kossakowski

template <typename Real = double>
struct KossakowskiReport {
    CMatrix<Real> coefficients;      // raw coefficient matrix over the operator basis
    CMatrix<Real> hermitian_part;    // (K + K†) / 2
    Real hermiticity_defect{0};      // max |K - K†|
    Real min_eigenvalue{0};
    Real residual{0};                // ||L - reconstruction||_F / ||L||_F
    std::optional<bool> is_lindblad; // empty when the basis does not span the dissipator
    Real tolerance{1e-10};
};

// Downward jump operators in label order followed by their adjoints.
template <typename Real>
std::vector<OperatorMatrix<Real>> jump_operator_basis(const DressedBasis<Real>& b) {
    std::vector<OperatorMatrix<Real>> out;
    for (const auto& lab : enumerate_jumps(b.params)) out.push_back(jump_operator(lab, b));
    const std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i) out.push_back({out[i].entries.adjoint(), BasisTag::Dressed});
    return out;
}

// Writes the generator as -i[H_eff, rho] + sum_ij K_ij (F_i rho F_j† - 1/2 {F_j† F_i, rho})
// over traceless, linearly independent operators F_i, and reports the spectrum of K.
//
// The sandwich part is read off the realigned superoperator
//   C[(r, r'), (c, c')] = L[(r, c), (r', c')],
// in which F_i rho F_j† contributes f_i f_j^H (f = row-major flattening of F) and the
// left/right multiplications only contribute along vec(I), orthogonal to every f_i.
template <typename Real>
KossakowskiReport<Real> kossakowski_report(const Liouvillian<Real>& L, const std::vector<OperatorMatrix<Real>>& ops,
                                           Real tolerance = Real(1e-10), Real residual_tolerance = Real(1e-10)) {
    const Eigen::Index d = L.hilbert_dim();
    const Eigen::Index n = static_cast<Eigen::Index>(ops.size());
    if (L.matrix.rows() != d * d || L.matrix.cols() != d * d) {
        throw std::invalid_argument("kossakowski_report: Liouvillian shape does not match its Hilbert dimension");
    }

    CMatrix<Real> Phi(d * d, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& F = ops[static_cast<std::size_t>(i)].entries;
        if (F.rows() != d || F.cols() != d) throw std::invalid_argument("kossakowski_report: operator dimension mismatch");
        if (std::abs(F.trace()) > Real(1e-12) * (Real(1) + F.norm())) {
            throw std::invalid_argument("kossakowski_report: basis operators must be traceless");
        }
        for (Eigen::Index r = 0; r < d; ++r)
            for (Eigen::Index rp = 0; rp < d; ++rp) Phi(r * d + rp, i) = F(r, rp);
    }

    CMatrix<Real> C(d * d, d * d);
    for (Eigen::Index r = 0; r < d; ++r)
        for (Eigen::Index rp = 0; rp < d; ++rp)
            for (Eigen::Index c = 0; c < d; ++c)
                for (Eigen::Index cp = 0; cp < d; ++cp)
                    C(r * d + rp, c * d + cp) = L.matrix(vec_index(r, c, d), vec_index(rp, cp, d));

    const CMatrix<Real> gram = Phi.adjoint() * Phi;
    const Eigen::CompleteOrthogonalDecomposition<CMatrix<Real>> cod(gram);
    const CMatrix<Real> gram_inv = cod.pseudoInverse();
    const CMatrix<Real> K = gram_inv * (Phi.adjoint() * C * Phi) * gram_inv;

    // Reconstruct the dissipative part and strip it from L.
    CMatrix<Real> G = CMatrix<Real>::Zero(d, d);
    for (Eigen::Index j = 0; j < n; ++j) {
        CMatrix<Real> acc = CMatrix<Real>::Zero(d, d);
        for (Eigen::Index i = 0; i < n; ++i) {
            if (K(i, j) != Complex<Real>(0)) acc += K(i, j) * ops[static_cast<std::size_t>(i)].entries;
        }
        G += ops[static_cast<std::size_t>(j)].entries.adjoint() * acc;
    }
    const CMatrix<Real> S_realigned = Phi * K * Phi.adjoint();
    CMatrix<Real> R = L.matrix + Real(0.5) * (left_multiply<Real>(G) + right_multiply<Real>(G));
    for (Eigen::Index r = 0; r < d; ++r)
        for (Eigen::Index rp = 0; rp < d; ++rp)
            for (Eigen::Index c = 0; c < d; ++c)
                for (Eigen::Index cp = 0; cp < d; ++cp)
                    R(vec_index(r, c, d), vec_index(rp, cp, d)) -= S_realigned(r * d + rp, c * d + cp);

    // Remainder should be -i[H_eff, .]; recover H_eff from the first block column.
    CMatrix<Real> H(d, d);
    const Complex<Real> I(0, 1);
    for (Eigen::Index p = 0; p < d; ++p)
        for (Eigen::Index q = 0; q < d; ++q) H(p, q) = I * R(vec_index(p, 0, d), vec_index(q, 0, d));
    H(0, 0) = Complex<Real>(0);
    R -= commutator_generator<Real>(H);

    KossakowskiReport<Real> rep;
    rep.tolerance = tolerance;
    rep.coefficients = K;
    rep.hermitian_part = Real(0.5) * (K + K.adjoint());
    rep.hermiticity_defect = n > 0 ? (K - K.adjoint()).cwiseAbs().maxCoeff() : Real(0);
    const Real scale = L.matrix.norm();
    rep.residual = scale > 0 ? R.norm() / scale : R.norm();
    if (n > 0) {
        Eigen::SelfAdjointEigenSolver<CMatrix<Real>> es(rep.hermitian_part, Eigen::EigenvaluesOnly);
        rep.min_eigenvalue = es.eigenvalues().minCoeff();
    }
    if (rep.residual <= residual_tolerance) rep.is_lindblad = rep.min_eigenvalue >= -tolerance;
    return rep;
}

}  // namespace jcdiss
