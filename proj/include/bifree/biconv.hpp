#pragma once

// Bi-free multiplicative convolution of two two-band tables, computed three ways
// from the transforms and compared with the free product oracle.
//
// With alpha = psi_{a1a2}, beta = psi_{b1b2}, A = 1 + alpha + beta, B = alpha beta:
//
//   route S:   1/psi_2 = (1/A + 1/B) / (S_1 S_2)(alpha, beta) - 1/A
//   route germs:  the same equation with S_i(alpha, beta) rewritten through the
//              subordination germs omega = psi_i^{-1} o alpha (resp. beta)
//   route quotient:  psi_2 = F / G with F = A (1+alpha)(1+beta) eta_1 psi_2',
//              G = H_1 H_2 zeta_a1 zeta_b1 - (1+alpha)(1+beta) eta_1 psi_2'
//
// All three recover psi_2 = psi_{a1a2,b1b2} to the full order of the inputs.

#include <optional>
#include <string>
#include <vector>

#include "bifree/measure.hpp"
#include "bifree/series.hpp"
#include "bifree/valuated.hpp"

namespace bifree {

// Germs of the subordination functions and the marginal products they realize.
template <class T>
struct Subordination {
    Series1<T> psi_a12;  // psi_{a1a2}
    Series1<T> psi_b12;  // psi_{b1b2}
    Series1<T> omega_a1;
    Series1<T> omega_b1;
    Series1<T> omega_a2;
    Series1<T> omega_b2;
};

// Marginals from the S-transform route, germs from inversion.
template <class T>
Subordination<T> subordination(const PairDistribution<T>& p1, const PairDistribution<T>& p2);

// Germs built against given product marginals (e.g. those of an oracle table).
template <class T>
Subordination<T> subordination(const PairDistribution<T>& p1, const PairDistribution<T>& p2,
                               const Series1<T>& psi_a12, const Series1<T>& psi_b12);

// Table with marginals from psi_a, psi_b and mixed entries from psi2 (orders >= n).
template <class T>
PairDistribution<T> assemble_table(int n, const Series1<T>& psi_a, const Series1<T>& psi_b,
                                   const ValuatedSeries2<T>& psi2);

// All routes require phi(a_i), phi(b_i), phi(a_i b_i) nonzero and tables of order >= n.
template <class T>
PairDistribution<T> biconv_via_S(const PairDistribution<T>& p1, const PairDistribution<T>& p2, int n);
template <class T>
PairDistribution<T> biconv_via_germs(const PairDistribution<T>& p1, const PairDistribution<T>& p2, int n);
template <class T>
PairDistribution<T> biconv_via_quotient(const PairDistribution<T>& p1, const PairDistribution<T>& p2, int n);

template <class T>
struct ResidualReport {
    // max |coefficient| of (lhs - rhs) * psi_{a1a2} psi_{b1b2} over its known range
    double residual = 0.0;
    bool exact_zero = false;
    int precision_z = 0;
    int precision_w = 0;
};

// Both sides of the subordination equation, left side from `product` (the oracle table).
template <class T>
ResidualReport<T> subordination_residual(const PairDistribution<T>& p1, const PairDistribution<T>& p2,
                                   const PairDistribution<T>& product);

template <class T>
struct RouteResult {
    std::string name;
    PairDistribution<T> table;
    double max_discrepancy = 0.0;
    // first (m, n) where the route and the oracle differ, by total degree
    std::optional<std::pair<int, int>> first_mismatch;
};

template <class T>
struct ConvolutionReport {
    int order = 0;
    PairDistribution<T> oracle;
    std::vector<RouteResult<T>> routes;  // "S", "germs", "quotient"
    ResidualReport<T> subordination;
    bool agree = false;
};

// Oracle table plus all routes and the residual; `agree` requires every route to
// match the oracle within `tol` and the residual to vanish (or be below tol.abs
// scaled by the table size in complex mode).
template <class T>
ConvolutionReport<T> convolve(const PairDistribution<T>& p1, const PairDistribution<T>& p2, int n,
                              const Tolerance& tol = {});

template <class T>
std::optional<std::pair<int, int>> first_table_mismatch(const PairDistribution<T>& p, const PairDistribution<T>& q,
                                                        const Tolerance& tol = {});

} // namespace bifree
