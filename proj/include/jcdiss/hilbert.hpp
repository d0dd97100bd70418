// hilbert.hpp: truncated JC Hilbert space, dressed eigenbasis, bare-mode operators.
//
// Index conventions (fixed, so matrices are reproducible across runs):
//   bare basis    : 0 -> |0,g>,   2N-1 -> |N,g>,     2N -> |N-1,e>      (N = 1..n_max)
//   dressed basis : 0 -> |E0>,    2N-1 -> |E_{N,-}>, 2N -> |E_{N,+}>
// Both bases are ordered by total excitation number, so index i lives in
// manifold (i + 1) / 2 in either basis.

#pragma once

#include "jcdiss/types.hpp"

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

namespace jcdiss {

template <typename Real = double>
struct SystemParams {
    Real omega0{1};  // atomic Bohr frequency, resonant with the cavity mode
    Real Omega{0};   // vacuum Rabi coupling
    int n_max{1};    // largest total excitation number retained

    bool operator==(const SystemParams&) const = default;
};

// Throws InvalidParameters naming the first manifold whose lowest Bohr
// frequency omega0 - (sqrt(N+1) + sqrt(N)) Omega is not strictly positive.
template <typename Real>
void validate(const SystemParams<Real>& p) {
    using std::isfinite;
    using std::sqrt;
    if (!(isfinite(p.omega0) && p.omega0 > 0)) {
        throw InvalidParameters("system: omega0 must be finite and > 0");
    }
    if (!(isfinite(p.Omega) && p.Omega > 0)) {
        throw InvalidParameters("system: Omega must be finite and > 0 (degenerate doublets are not supported)");
    }
    if (p.n_max < 1) {
        throw InvalidParameters("system: n_max must be >= 1");
    }
    for (int N = 0; N <= p.n_max; ++N) {
        const Real spread = (sqrt(Real(N + 1)) + sqrt(Real(N))) * p.Omega;
        if (!(p.omega0 > spread)) {
            std::ostringstream os;
            os << "system: Bohr-frequency positivity violated at manifold N=" << N
               << ": omega0 - (sqrt(" << N + 1 << ")+sqrt(" << N << "))*Omega = "
               << static_cast<double>(p.omega0 - spread) << " <= 0"
               << " (need omega0 > " << static_cast<double>(spread) << " for n_max=" << p.n_max << ")";
            throw InvalidParameters(os.str());
        }
    }
}

inline int dimension(int n_max) noexcept { return 2 * n_max + 1; }
inline int manifold_of(Eigen::Index i) noexcept { return static_cast<int>((i + 1) / 2); }

struct DressedLabel {
    int manifold{0};          // 0 for the ground state
    Sign s{Sign::Plus};       // ignored for the ground state

    bool is_ground() const noexcept { return manifold == 0; }
    Eigen::Index index() const noexcept {
        return is_ground() ? 0 : 2 * manifold - (s == Sign::Minus ? 1 : 0);
    }
    std::string name() const {
        return is_ground() ? std::string("E0") : std::to_string(manifold) + (s == Sign::Plus ? "p" : "m");
    }
    bool operator==(const DressedLabel& o) const noexcept {
        return manifold == o.manifold && (is_ground() || s == o.s);
    }
};

inline DressedLabel dressed_label_at(Eigen::Index i) {
    if (i == 0) return {};
    return {manifold_of(i), (i % 2 == 1) ? Sign::Minus : Sign::Plus};
}

template <typename Real = double>
struct OperatorMatrix {
    CMatrix<Real> entries;
    BasisTag basis{BasisTag::Dressed};

    Eigen::Index dim() const noexcept { return entries.rows(); }
};

template <typename Real = double>
struct DressedBasis {
    SystemParams<Real> params;
    std::vector<DressedLabel> labels;  // Ground, (1,-), (1,+), (2,-), ...
    RVector<Real> energies;
    CMatrix<Real> U;                   // column k = dressed state k in bare components

    Eigen::Index dim() const noexcept { return static_cast<Eigen::Index>(labels.size()); }
};

template <typename Real>
Real dressed_energy(const SystemParams<Real>& p, const DressedLabel& lab) {
    if (lab.is_ground()) return -p.omega0 / 2;
    return (Real(lab.manifold) - Real(0.5)) * p.omega0 + Real(value(lab.s)) * p.Omega * std::sqrt(Real(lab.manifold));
}

template <typename Real>
DressedBasis<Real> build_dressed_basis(const SystemParams<Real>& p) {
    validate(p);
    const int d = dimension(p.n_max);
    DressedBasis<Real> b;
    b.params = p;
    b.labels.reserve(d);
    b.energies.resize(d);
    b.U = CMatrix<Real>::Zero(d, d);
    const Real h = Real(1) / std::sqrt(Real(2));
    for (Eigen::Index k = 0; k < d; ++k) {
        const DressedLabel lab = dressed_label_at(k);
        b.labels.push_back(lab);
        b.energies(k) = dressed_energy(p, lab);
        if (lab.is_ground()) {
            b.U(0, 0) = Real(1);
        } else {
            // (|N,g> + s |N-1,e>) / sqrt(2)
            const Eigen::Index ng = 2 * lab.manifold - 1;
            const Eigen::Index ne = 2 * lab.manifold;
            b.U(ng, k) = h;
            b.U(ne, k) = Real(value(lab.s)) * h;
        }
    }
    return b;
}

template <typename Real>
OperatorMatrix<Real> to_dressed(const DressedBasis<Real>& b, const OperatorMatrix<Real>& op) {
    if (op.basis == BasisTag::Dressed) return op;
    return {b.U.adjoint() * op.entries * b.U, BasisTag::Dressed};
}

template <typename Real>
OperatorMatrix<Real> to_bare(const DressedBasis<Real>& b, const OperatorMatrix<Real>& op) {
    if (op.basis == BasisTag::Bare) return op;
    return {b.U * op.entries * b.U.adjoint(), BasisTag::Bare};
}

// ---------------------------------------------------------------- bare operators

// Truncated cavity annihilation operator a ⊗ I_atom, restricted to total excitation <= n_max.
template <typename Real>
OperatorMatrix<Real> bare_annihilation(const SystemParams<Real>& p) {
    const int d = dimension(p.n_max);
    CMatrix<Real> a = CMatrix<Real>::Zero(d, d);
    // a|N,g> = sqrt(N)|N-1,g> ; a|N-1,e> = sqrt(N-1)|N-2,e>
    for (int N = 1; N <= p.n_max; ++N) {
        const Eigen::Index ng = 2 * N - 1;
        const Eigen::Index lower_g = (N == 1) ? 0 : 2 * (N - 1) - 1;
        a(lower_g, ng) = std::sqrt(Real(N));
        if (N >= 2) {
            a(2 * (N - 1), 2 * N) = std::sqrt(Real(N - 1));
        }
    }
    return {a, BasisTag::Bare};
}

template <typename Real>
OperatorMatrix<Real> bare_sigma_z(const SystemParams<Real>& p) {
    const int d = dimension(p.n_max);
    CMatrix<Real> sz = CMatrix<Real>::Zero(d, d);
    sz(0, 0) = Real(-1);
    for (int N = 1; N <= p.n_max; ++N) {
        sz(2 * N - 1, 2 * N - 1) = Real(-1);
        sz(2 * N, 2 * N) = Real(1);
    }
    return {sz, BasisTag::Bare};
}

template <typename Real>
OperatorMatrix<Real> bare_photon_number(const SystemParams<Real>& p) {
    const int d = dimension(p.n_max);
    CMatrix<Real> n = CMatrix<Real>::Zero(d, d);
    for (int N = 1; N <= p.n_max; ++N) {
        n(2 * N - 1, 2 * N - 1) = Real(N);
        n(2 * N, 2 * N) = Real(N - 1);
    }
    return {n, BasisTag::Bare};
}

// Total excitation number a†a + |e><e|; diagonal in both bases.
template <typename Real>
OperatorMatrix<Real> excitation_number(const SystemParams<Real>& p, BasisTag basis = BasisTag::Bare) {
    const int d = dimension(p.n_max);
    CMatrix<Real> n = CMatrix<Real>::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) n(i, i) = Real(manifold_of(i));
    return {n, basis};
}

// Jaynes-Cummings Hamiltonian assembled directly in the bare basis.
template <typename Real>
OperatorMatrix<Real> jc_hamiltonian_bare(const SystemParams<Real>& p) {
    const int d = dimension(p.n_max);
    CMatrix<Real> H = CMatrix<Real>::Zero(d, d);
    H(0, 0) = -p.omega0 / 2;
    for (int N = 1; N <= p.n_max; ++N) {
        const Eigen::Index ng = 2 * N - 1;
        const Eigen::Index ne = 2 * N;
        H(ng, ng) = -p.omega0 / 2 + Real(N) * p.omega0;
        H(ne, ne) = p.omega0 / 2 + Real(N - 1) * p.omega0;
        H(ng, ne) = H(ne, ng) = p.Omega * std::sqrt(Real(N));
    }
    return {H, BasisTag::Bare};
}

template <typename Real>
OperatorMatrix<Real> jc_hamiltonian(const DressedBasis<Real>& b, BasisTag basis = BasisTag::Dressed) {
    OperatorMatrix<Real> H{b.energies.template cast<Complex<Real>>().asDiagonal(), BasisTag::Dressed};
    return basis == BasisTag::Dressed ? H : to_bare(b, H);
}

// Cavity annihilation operator assembled in the dressed basis from the closed-form
// matrix elements <E0|a|E_{1,m}> = 1/sqrt(2), <E_{N,m}|a|E_{N+1,l}> = (sqrt(N+1) + l m sqrt(N)) / 2.
template <typename Real>
OperatorMatrix<Real> annihilation_dressed(const DressedBasis<Real>& b) {
    const int n_max = b.params.n_max;
    const Eigen::Index d = b.dim();
    CMatrix<Real> a = CMatrix<Real>::Zero(d, d);
    for (Sign m : {Sign::Minus, Sign::Plus}) {
        a(0, DressedLabel{1, m}.index()) = Real(1) / std::sqrt(Real(2));
    }
    for (int N = 1; N + 1 <= n_max; ++N) {
        for (Sign l : {Sign::Minus, Sign::Plus}) {
            for (Sign m : {Sign::Minus, Sign::Plus}) {
                const Real c = (std::sqrt(Real(N + 1)) + Real(value(l) * value(m)) * std::sqrt(Real(N))) / 2;
                a(DressedLabel{N, m}.index(), DressedLabel{N + 1, l}.index()) = c;
            }
        }
    }
    return {a, BasisTag::Dressed};
}

}  // namespace jcdiss
