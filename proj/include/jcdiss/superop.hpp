// superop.hpp: column-stacking vectorization and superoperator building blocks.
//
// vec(rho) stacks columns, so vec(A rho B) = (B^T ⊗ A) vec(rho) and
// A rho B† maps to conj(B) ⊗ A.

#pragma once

#include "jcdiss/types.hpp"

#include <unsupported/Eigen/KroneckerProduct>

namespace jcdiss {

template <typename Real>
CVector<Real> vec(const CMatrix<Real>& m) {
    return Eigen::Map<const CVector<Real>>(m.data(), m.size());
}

template <typename Real>
CMatrix<Real> unvec(const CVector<Real>& v, Eigen::Index d) {
    return Eigen::Map<const CMatrix<Real>>(v.data(), d, d);
}

inline Eigen::Index vec_index(Eigen::Index row, Eigen::Index col, Eigen::Index d) noexcept { return col * d + row; }

// rho -> A rho
template <typename Real>
CMatrix<Real> left_multiply(const CMatrix<Real>& A) {
    const auto I = CMatrix<Real>::Identity(A.rows(), A.rows());
    return Eigen::kroneckerProduct(I, A).eval();
}

// rho -> rho B
template <typename Real>
CMatrix<Real> right_multiply(const CMatrix<Real>& B) {
    const auto I = CMatrix<Real>::Identity(B.rows(), B.rows());
    return Eigen::kroneckerProduct(B.transpose(), I).eval();
}

// rho -> A rho B†
template <typename Real>
CMatrix<Real> sandwich(const CMatrix<Real>& A, const CMatrix<Real>& B) {
    return Eigen::kroneckerProduct(B.conjugate(), A).eval();
}

// rho -> -i [H, rho]
template <typename Real>
CMatrix<Real> commutator_generator(const CMatrix<Real>& H) {
    const Complex<Real> mi(0, -1);
    return mi * (left_multiply<Real>(H) - right_multiply<Real>(H));
}

// rho -> A rho A† - 1/2 {A†A, rho}
template <typename Real>
CMatrix<Real> lindblad_dissipator(const CMatrix<Real>& A) {
    const CMatrix<Real> AdA = A.adjoint() * A;
    return sandwich<Real>(A, A) - Real(0.5) * (left_multiply<Real>(AdA) + right_multiply<Real>(AdA));
}

// Accumulates coef * (A rho B† - B† A rho) into L without forming Kronecker products;
// A and B are rank-1 matrix units here, but any dense pair works.
template <typename Real>
void add_sandwich_minus_left(CMatrix<Real>& L, const Complex<Real>& coef, const CMatrix<Real>& A, const CMatrix<Real>& B) {
    const Eigen::Index d = A.rows();
    const CMatrix<Real> BdA = B.adjoint() * A;
    for (Eigen::Index cp = 0; cp < d; ++cp) {
        for (Eigen::Index c = 0; c < d; ++c) {
            const Complex<Real> bc = std::conj(B(c, cp));
            if (bc == Complex<Real>(0)) continue;
            for (Eigen::Index rp = 0; rp < d; ++rp) {
                for (Eigen::Index r = 0; r < d; ++r) {
                    if (A(r, rp) != Complex<Real>(0)) L(vec_index(r, c, d), vec_index(rp, cp, d)) += coef * A(r, rp) * bc;
                }
            }
        }
    }
    // -coef (B†A) rho : rows/cols share the column index
    for (Eigen::Index col = 0; col < d; ++col) {
        for (Eigen::Index q = 0; q < d; ++q) {
            for (Eigen::Index p = 0; p < d; ++p) {
                if (BdA(p, q) != Complex<Real>(0)) L(vec_index(p, col, d), vec_index(q, col, d)) -= coef * BdA(p, q);
            }
        }
    }
}

// Accumulates coef * (A rho B† - rho B† A) into L (the Hermitian-conjugate partner shape).
template <typename Real>
void add_sandwich_minus_right(CMatrix<Real>& L, const Complex<Real>& coef, const CMatrix<Real>& A, const CMatrix<Real>& B) {
    const Eigen::Index d = A.rows();
    const CMatrix<Real> BdA = B.adjoint() * A;
    for (Eigen::Index cp = 0; cp < d; ++cp) {
        for (Eigen::Index c = 0; c < d; ++c) {
            const Complex<Real> bc = std::conj(B(c, cp));
            if (bc == Complex<Real>(0)) continue;
            for (Eigen::Index rp = 0; rp < d; ++rp) {
                for (Eigen::Index r = 0; r < d; ++r) {
                    if (A(r, rp) != Complex<Real>(0)) L(vec_index(r, c, d), vec_index(rp, cp, d)) += coef * A(r, rp) * bc;
                }
            }
        }
    }
    // -coef rho (B†A): (rho M)(p, col) = sum_q rho(p, q) M(q, col)
    for (Eigen::Index row = 0; row < d; ++row) {
        for (Eigen::Index q = 0; q < d; ++q) {
            for (Eigen::Index col = 0; col < d; ++col) {
                if (BdA(q, col) != Complex<Real>(0)) L(vec_index(row, col, d), vec_index(row, q, d)) -= coef * BdA(q, col);
            }
        }
    }
}

}  // namespace jcdiss
