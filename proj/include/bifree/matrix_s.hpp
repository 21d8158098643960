#pragma once

// Transforms of X = diag(a, b) restricted to Gamma = [[z, zeta], [0, w]].
//
//   Psi_X(Gamma) = [[psi_a(z), zeta (psi_ab + psi_b(w)) / w], [0, psi_b(w)]]
//   S_X(Gamma)   = Gamma^{-1} (1 + Gamma) Psi_X^{-1}(Gamma)
//               = [[S_a(z), zeta rho(z, w)], [0, S_b(w)]]
//   rho          = S_b(w) (1 - S_ab) / (z S_ab + w + 1)
//
// Everything is linear in zeta, so a matrix series is a UTGammaSeries and
// substituting G = [[u, zeta e], [0, v]] for Gamma replaces z, w by u, v and
// scales the off-diagonal entry by e.

#include <optional>
#include <string>

#include "bifree/measure.hpp"
#include "bifree/ut_gamma.hpp"

namespace bifree {

template <class T>
UTGammaSeries<T> psi_X(const PairDistribution<T>& p);

// Psi_X at [[u(z), zeta e(z,w)], [0, v(w)]]; u and v must vanish at 0.
template <class T>
UTGammaSeries<T> psi_X_at(const PairDistribution<T>& p, const Series1<T>& u, const Series1<T>& v,
                          const Series2<T>& e);

template <class T>
UTGammaSeries<T> psi_X_inverse(const PairDistribution<T>& p);

// Closed form; also evaluates Gamma^{-1}(1 + Gamma) Psi_X^{-1}(Gamma) and throws
// ConsistencyError if the two disagree.
template <class T>
UTGammaSeries<T> s_X(const PairDistribution<T>& p);

template <class T>
UTGammaSeries<T> s_X_at(const PairDistribution<T>& p, const Series1<T>& u, const Series1<T>& v,
                        const Series2<T>& e);

// S_X2(Gamma) S_X1(S_X2(Gamma)^{-1} Gamma S_X2(Gamma)), by the closed form for
// the off-diagonal entry and again by matrix products; both must agree.
template <class T>
UTGammaSeries<T> dykema_rhs(const PairDistribution<T>& p1, const PairDistribution<T>& p2);

template <class T>
struct DykemaReport {
    int order = 0;
    UTGammaSeries<T> lhs;
    UTGammaSeries<T> rhs;
    bool holds = false;
    std::optional<UTDiscrepancy<T>> first_discrepancy;
    // zeta coefficients at z = w = 0, from the moment tables alone
    T limit_lhs12{};
    T limit_rhs12{};
    // diagonal limits 1/(phi(a1) phi(a2)) and 1/(phi(b1) phi(b2))
    T limit_d1{};
    T limit_d2{};
};

// lhs = S_X of the product table of order n.
template <class T>
DykemaReport<T> dykema_check(const PairDistribution<T>& p1, const PairDistribution<T>& p2, int n,
                             const Tolerance& tol = {});

// Same with a precomputed product table (its order is used).
template <class T>
DykemaReport<T> dykema_check(const PairDistribution<T>& p1, const PairDistribution<T>& p2,
                             const PairDistribution<T>& product, const Tolerance& tol = {});

template <class T>
T limit_lhs12(const PairDistribution<T>& p1, const PairDistribution<T>& p2);
template <class T>
T limit_rhs12(const PairDistribution<T>& p1, const PairDistribution<T>& p2);

template <class T>
struct MatrixSubordinationReport {
    int order = 0;
    // max |Psi_{X1X2}(Gamma) - Psi_{Xj}(omega_j(Gamma))| for j = 1, 2
    double residual1 = 0.0;
    double residual2 = 0.0;
    std::optional<UTDiscrepancy<T>> first_discrepancy1;
    std::optional<UTDiscrepancy<T>> first_discrepancy2;
    bool holds = false;
};

// Requires both pairs factoring with nonzero first moments.
template <class T>
MatrixSubordinationReport<T> matrix_subordination_check(const PairDistribution<T>& p1, const PairDistribution<T>& p2, int n,
                                   const Tolerance& tol = {});

} // namespace bifree
