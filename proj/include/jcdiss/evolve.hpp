// evolve.hpp: fixed-step RK4 propagation of dρ/dt = L ρ with per-sample diagnostics.

#pragma once

#include "jcdiss/generators.hpp"
#include "jcdiss/hilbert.hpp"
#include "jcdiss/superop.hpp"

#include <Eigen/SparseCore>

#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace jcdiss {

template <typename Real = double>
struct DensityMatrix {
    CMatrix<Real> entries;
    BasisTag basis{BasisTag::Dressed};

    Eigen::Index dim() const noexcept { return entries.rows(); }
};

template <typename Real = double>
struct Health {
    Real trace_deviation{0};     // |tr rho - 1|
    Real hermiticity_defect{0};  // max |rho - rho†|
    Real min_eigenvalue{0};      // of (rho + rho†) / 2
};

template <typename Real>
Health<Real> health(const CMatrix<Real>& rho) {
    Health<Real> h;
    h.trace_deviation = std::abs(rho.trace() - Complex<Real>(1));
    h.hermiticity_defect = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    const CMatrix<Real> sym = Real(0.5) * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix<Real>> es(sym, Eigen::EigenvaluesOnly);
    h.min_eigenvalue = es.eigenvalues().minCoeff();
    return h;
}

template <typename Real>
Health<Real> health(const DensityMatrix<Real>& rho) {
    return health<Real>(rho.entries);
}

// Validated construction: Hermitian and unit trace to 1e-12, min eigenvalue >= -1e-10.
template <typename Real>
DensityMatrix<Real> make_density_matrix(CMatrix<Real> rho, BasisTag basis = BasisTag::Dressed) {
    if (rho.rows() != rho.cols() || rho.rows() == 0) throw std::invalid_argument("density matrix must be square");
    const auto h = health<Real>(rho);
    if (!(h.hermiticity_defect <= Real(1e-12)) || !(h.trace_deviation <= Real(1e-12)) ||
        !(h.min_eigenvalue >= Real(-1e-10))) {
        std::ostringstream os;
        os << "density matrix invalid: trace deviation " << static_cast<double>(h.trace_deviation)
           << ", hermiticity defect " << static_cast<double>(h.hermiticity_defect) << ", min eigenvalue "
           << static_cast<double>(h.min_eigenvalue);
        throw std::invalid_argument(os.str());
    }
    return {std::move(rho), basis};
}

template <typename Real>
DensityMatrix<Real> pure_state(const CVector<Real>& psi, BasisTag basis = BasisTag::Dressed) {
    const CVector<Real> v = psi / psi.norm();
    return make_density_matrix<Real>(v * v.adjoint(), basis);
}

template <typename Real>
DensityMatrix<Real> dressed_projector(const DressedBasis<Real>& b, const DressedLabel& lab) {
    CVector<Real> psi = CVector<Real>::Zero(b.dim());
    psi(lab.index()) = Real(1);
    return pure_state<Real>(psi);
}

// |n, g> or |n, e> mapped to the dressed basis.
template <typename Real>
DensityMatrix<Real> bare_fock_state(const DressedBasis<Real>& b, int photons, bool excited) {
    const int total = photons + (excited ? 1 : 0);
    if (photons < 0 || total > b.params.n_max) {
        throw InvalidParameters("bare state |" + std::to_string(photons) + "," + (excited ? "e" : "g") +
                                "> lies outside the truncated space");
    }
    CVector<Real> bare = CVector<Real>::Zero(b.dim());
    bare(total == 0 ? 0 : (excited ? 2 * total : 2 * total - 1)) = Real(1);
    return pure_state<Real>(CVector<Real>(b.U.adjoint() * bare));
}

template <typename Real = double>
struct Observables {
    Real sigma_z{0};
    Real photon_number{0};
    RVector<Real> populations;  // dressed, in label order
    Real purity{0};
};

template <typename Real>
struct ObservableOperators {
    CMatrix<Real> sigma_z;
    CMatrix<Real> photon_number;

    explicit ObservableOperators(const DressedBasis<Real>& b)
        : sigma_z(to_dressed(b, bare_sigma_z(b.params)).entries),
          photon_number(to_dressed(b, bare_photon_number(b.params)).entries) {}
};

template <typename Real>
Observables<Real> observables(const CMatrix<Real>& rho, const ObservableOperators<Real>& ops) {
    Observables<Real> o;
    o.sigma_z = (ops.sigma_z * rho).trace().real();
    o.photon_number = (ops.photon_number * rho).trace().real();
    o.populations = rho.diagonal().real();
    o.purity = (rho * rho).trace().real();
    return o;
}

template <typename Real>
Observables<Real> observables(const DensityMatrix<Real>& rho, const DressedBasis<Real>& b) {
    return observables<Real>(rho.entries, ObservableOperators<Real>(b));
}

template <typename Real = double>
struct IntegratorConfig {
    Real dt{0};              // <= 0 selects the default 0.01 / max(omega0, ||L||_inf)
    int record_every{1};
    Real safety_factor{2.5}; // dt * max(omega0, ||L||_inf) must not exceed this
};

template <typename Real = double>
struct Trajectory {
    std::vector<Real> times;
    std::vector<DensityMatrix<Real>> states;
    std::map<std::string, std::vector<Real>> series;
    std::vector<std::string> series_order;  // CSV column order after "t"; "purity" is kept out of the CSV
    Real dt{0};

    std::size_t size() const noexcept { return times.size(); }
    const std::vector<Real>& operator[](const std::string& name) const { return series.at(name); }
};

template <typename Real = double>
class EvolutionAborted : public std::runtime_error {
public:
    EvolutionAborted(const std::string& what, Real last_valid, Trajectory<Real> partial)
        : std::runtime_error(what), last_valid_time(last_valid), trajectory(std::move(partial)) {}
    Real last_valid_time;
    Trajectory<Real> trajectory;
};

template <typename Real>
Real generator_norm_bound(const CMatrix<Real>& L) {
    return L.cwiseAbs().rowwise().sum().maxCoeff();
}

template <typename Real>
Real default_time_step(const Liouvillian<Real>& L) {
    return Real(0.01) / std::max(L.params.omega0, generator_norm_bound<Real>(L.matrix));
}

template <typename Real>
Trajectory<Real> evolve(const Liouvillian<Real>& L, const DensityMatrix<Real>& rho0, Real t_end,
                        const IntegratorConfig<Real>& config = {}) {
    const Eigen::Index d = L.hilbert_dim();
    if (rho0.dim() != d) throw std::invalid_argument("evolve: initial state dimension mismatch");
    if (rho0.basis != BasisTag::Dressed) throw std::invalid_argument("evolve: initial state must be in the dressed basis");
    if (!(t_end > 0)) throw std::invalid_argument("evolve: t_end must be > 0");
    if (config.record_every < 1) throw std::invalid_argument("evolve: record_every must be >= 1");

    const Real bound = std::max(L.params.omega0, generator_norm_bound<Real>(L.matrix));
    Real dt = config.dt > 0 ? config.dt : default_time_step(L);
    if (dt * bound > config.safety_factor) {
        std::ostringstream os;
        os << "evolve: dt=" << static_cast<double>(dt) << " violates the stability bound dt <= "
           << static_cast<double>(config.safety_factor / bound);
        throw std::invalid_argument(os.str());
    }
    const auto steps = static_cast<long long>(std::ceil(t_end / dt - Real(1e-9)));
    dt = t_end / Real(steps);

    const auto basis = build_dressed_basis(L.params);
    const ObservableOperators<Real> ops(basis);

    Trajectory<Real> traj;
    traj.dt = dt;
    traj.series_order = {"trace", "min_eig", "herm_defect", "sz", "n_phot"};
    for (const auto& lab : basis.labels) traj.series_order.push_back("p_" + lab.name());

    auto record = [&](Real t, const CVector<Real>& v) {
        const CMatrix<Real> rho = unvec<Real>(v, d);
        const auto h = health<Real>(rho);
        const auto o = observables<Real>(rho, ops);
        traj.times.push_back(t);
        traj.states.push_back({rho, BasisTag::Dressed});
        traj.series["trace"].push_back(rho.trace().real());
        traj.series["min_eig"].push_back(h.min_eigenvalue);
        traj.series["herm_defect"].push_back(h.hermiticity_defect);
        traj.series["sz"].push_back(o.sigma_z);
        traj.series["n_phot"].push_back(o.photon_number);
        for (Eigen::Index k = 0; k < d; ++k) traj.series["p_" + basis.labels[k].name()].push_back(o.populations(k));
        traj.series["purity"].push_back(o.purity);
    };

    CVector<Real> v = vec<Real>(rho0.entries);
    record(Real(0), v);
    // Generators conserve excitation structure and are mostly zeros; a sparse product is much cheaper.
    const auto& M = L.matrix;
    const Eigen::SparseMatrix<Complex<Real>, Eigen::RowMajor> Ms = M.sparseView();
    const bool use_sparse = Ms.nonZeros() * 4 < M.size();
    auto apply = [&](CVector<Real>& out, const CVector<Real>& in) {
        if (use_sparse) {
            out.noalias() = Ms * in;
        } else {
            out.noalias() = M * in;
        }
    };
    const Eigen::Index n = v.size();
    CVector<Real> k1(n), k2(n), k3(n), k4(n), tmp(n), next(n);
    for (long long step = 1; step <= steps; ++step) {
        apply(k1, v);
        tmp = v + (dt / 2) * k1;
        apply(k2, tmp);
        tmp = v + (dt / 2) * k2;
        apply(k3, tmp);
        tmp = v + dt * k3;
        apply(k4, tmp);
        next = v + (dt / 6) * (k1 + 2 * k2 + 2 * k3 + k4);

        const Real t = step == steps ? t_end : Real(step) * dt;
        const Real t_prev = Real(step - 1) * dt;
        Complex<Real> tr(0);
        for (Eigen::Index i = 0; i < d; ++i) tr += next(i * d + i);
        auto abort_with = [&](const std::string& why) {
            if (traj.times.back() != t_prev) record(t_prev, v);
            throw EvolutionAborted<Real>(why, t_prev, std::move(traj));
        };
        if (!next.allFinite()) {
            std::ostringstream os;
            os << "evolve: non-finite state at t=" << static_cast<double>(t);
            abort_with(os.str());
        }
        if (std::abs(tr - Complex<Real>(1)) > Real(1e-6)) {
            std::ostringstream os;
            os << "evolve: trace drift " << static_cast<double>(std::abs(tr - Complex<Real>(1))) << " at t="
               << static_cast<double>(t) << " exceeds 1e-6";
            abort_with(os.str());
        }
        v.swap(next);
        if (step % config.record_every == 0 || step == steps) record(t, v);
    }
    return traj;
}

}  // namespace jcdiss
