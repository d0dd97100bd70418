// jumps.hpp: dressed-state jump operators and Bohr-frequency arithmetic.

#pragma once

#include "jcdiss/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <variant>
#include <vector>

namespace jcdiss {

// A_{0m} = A(E_{1,m} - E0)
struct GroundJump {
    Sign m{Sign::Plus};
    bool operator==(const GroundJump&) const = default;
};

// A_{Nlm} = A(E_{N+1,l} - E_{N,m}),  N >= 1
struct ExcitedJump {
    int N{1};
    Sign l{Sign::Plus};
    Sign m{Sign::Plus};
    bool operator==(const ExcitedJump&) const = default;
};

using JumpLabel = std::variant<GroundJump, ExcitedJump>;

inline DressedLabel upper_state(const JumpLabel& j) {
    if (const auto* g = std::get_if<GroundJump>(&j)) return {1, g->m};
    const auto& e = std::get<ExcitedJump>(j);
    return {e.N + 1, e.l};
}

inline DressedLabel lower_state(const JumpLabel& j) {
    if (std::holds_alternative<GroundJump>(j)) return {};
    const auto& e = std::get<ExcitedJump>(j);
    return {e.N, e.m};
}

// "A0p", "A0m", "A1pm", ...
inline std::string name(const JumpLabel& j) {
    if (const auto* g = std::get_if<GroundJump>(&j)) {
        return std::string("A0") + (g->m == Sign::Plus ? "p" : "m");
    }
    const auto& e = std::get<ExcitedJump>(j);
    return "A" + std::to_string(e.N) + (e.l == Sign::Plus ? "p" : "m") + (e.m == Sign::Plus ? "p" : "m");
}

class LabelOutOfRange : public InvalidParameters {
public:
    LabelOutOfRange(const JumpLabel& j, int n_max)
        : InvalidParameters("jump label " + name(j) + " reaches manifold " +
                            std::to_string(upper_state(j).manifold) + " beyond n_max=" + std::to_string(n_max)),
          label(j) {}
    JumpLabel label;
};

template <typename Real>
struct BohrFrequency {
    Real value{};
    JumpLabel label;
};

// Ground(-), Ground(+), then for N = 1..n_max-1: (l,m) = (-,-), (-,+), (+,-), (+,+).
template <typename Real>
std::vector<JumpLabel> enumerate_jumps(const SystemParams<Real>& p) {
    std::vector<JumpLabel> out;
    out.reserve(2 + 4 * static_cast<std::size_t>(std::max(p.n_max - 1, 0)));
    for (Sign m : {Sign::Minus, Sign::Plus}) out.emplace_back(GroundJump{m});
    for (int N = 1; N + 1 <= p.n_max; ++N) {
        for (Sign l : {Sign::Minus, Sign::Plus}) {
            for (Sign m : {Sign::Minus, Sign::Plus}) out.emplace_back(ExcitedJump{N, l, m});
        }
    }
    return out;
}

template <typename Real = double>
Real jump_coefficient(const JumpLabel& j) {
    if (std::holds_alternative<GroundJump>(j)) return Real(1) / std::sqrt(Real(2));
    const auto& e = std::get<ExcitedJump>(j);
    return (std::sqrt(Real(e.N + 1)) + Real(value(e.l) * value(e.m)) * std::sqrt(Real(e.N))) / 2;
}

template <typename Real>
OperatorMatrix<Real> jump_operator(const JumpLabel& j, const DressedBasis<Real>& b) {
    const int n_max = b.params.n_max;
    if (const auto* e = std::get_if<ExcitedJump>(&j); e && (e->N < 1 || e->N + 1 > n_max)) {
        throw LabelOutOfRange(j, n_max);
    }
    CMatrix<Real> A = CMatrix<Real>::Zero(b.dim(), b.dim());
    A(lower_state(j).index(), upper_state(j).index()) = jump_coefficient<Real>(j);
    return {A, BasisTag::Dressed};
}

// Closed form omega0 + (l sqrt(N+1) - m sqrt(N)) Omega; Ground(m) gives omega0 + m Omega.
template <typename Real>
BohrFrequency<Real> bohr_frequency(const JumpLabel& j, const SystemParams<Real>& p) {
    if (const auto* g = std::get_if<GroundJump>(&j)) {
        return {p.omega0 + Real(value(g->m)) * p.Omega, j};
    }
    const auto& e = std::get<ExcitedJump>(j);
    const Real shift = Real(value(e.l)) * std::sqrt(Real(e.N + 1)) - Real(value(e.m)) * std::sqrt(Real(e.N));
    return {p.omega0 + shift * p.Omega, j};
}

// Coefficient of Omega in the Bohr frequency (no omega0 contribution).
template <typename Real = double>
Real bohr_offset(const JumpLabel& j) {
    if (const auto* g = std::get_if<GroundJump>(&j)) return Real(value(g->m));
    const auto& e = std::get<ExcitedJump>(j);
    return Real(value(e.l)) * std::sqrt(Real(e.N + 1)) - Real(value(e.m)) * std::sqrt(Real(e.N));
}

// Slow frequencies retained by the quasi-RWA generator; omega0 cancels exactly.
template <typename Real>
Real frequency_difference(const JumpLabel& a, const JumpLabel& b, const SystemParams<Real>& p) {
    return (bohr_offset<Real>(a) - bohr_offset<Real>(b)) * p.Omega;
}

// Fast frequencies of the discarded terms.
template <typename Real>
Real frequency_sum(const JumpLabel& a, const JumpLabel& b, const SystemParams<Real>& p) {
    return 2 * p.omega0 + (bohr_offset<Real>(a) + bohr_offset<Real>(b)) * p.Omega;
}

template <typename Real>
struct TimescaleSeparation {
    Real min_sum{};
    Real max_abs_difference{};
    Real bound{};  // 2 (sqrt(n_max+1) + sqrt(n_max)) Omega
    Real ratio{};  // min_sum / max_abs_difference; +inf when only one label exists
};

template <typename Real>
TimescaleSeparation<Real> timescale_separation(const SystemParams<Real>& p) {
    const auto labels = enumerate_jumps(p);
    TimescaleSeparation<Real> out;
    out.min_sum = std::numeric_limits<Real>::infinity();
    for (const auto& a : labels) {
        for (const auto& b : labels) {
            out.min_sum = std::min(out.min_sum, frequency_sum(a, b, p));
            out.max_abs_difference = std::max(out.max_abs_difference, std::abs(frequency_difference(a, b, p)));
        }
    }
    out.bound = 2 * (std::sqrt(Real(p.n_max + 1)) + std::sqrt(Real(p.n_max))) * p.Omega;
    out.ratio = out.max_abs_difference > 0 ? out.min_sum / out.max_abs_difference
                                           : std::numeric_limits<Real>::infinity();
    return out;
}

}  // namespace jcdiss
