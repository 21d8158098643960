#pragma once

// Scalar transforms of a two-band table as truncated series.
//
//   h_a = sum_{n>=0} phi(a^n) z^n,  psi_a = h_a - 1,  eta_a = psi_a / (1 + psi_a)
//   H_ab = sum_{m,n>=0} phi(a^m b^n) z^m w^n,  psi_ab = sum_{m,n>=1} ...
//   S_a = (z+1)/z * psi_a^{-1}
//   S_ab = (z+1)(w+1)/(zw) * (1 - (1+z+w) / H_ab(psi_a^{-1}(z), psi_b^{-1}(w)))
//   Sigma_ab(z, w) = S_ab(z/(1-z), w/(1-w))
//
// Precision: a table of order N gives psi-type series of order N; anything that
// divides by z (S, partial S, Sigma, zeta) has order N-1.

#include <optional>
#include <string>

#include "bifree/measure.hpp"
#include "bifree/series.hpp"
#include "bifree/valuated.hpp"

namespace bifree {

template <class T>
Series1<T> psi_a(const PairDistribution<T>& p);
template <class T>
Series1<T> psi_b(const PairDistribution<T>& p);
template <class T>
Series2<T> psi_ab(const PairDistribution<T>& p);
template <class T>
Series2<T> big_h(const PairDistribution<T>& p);

template <class T>
Series1<T> eta(const Series1<T>& psi);

// psi / z, order N-1.
template <class T>
Series1<T> zeta(const Series1<T>& psi);

// psi_ab / (zw) as a valuated series.
template <class T>
ValuatedSeries2<T> eta_ab(const PairDistribution<T>& p);

// Throws PreconditionError(zero_first_moment_a) naming `label` when psi[1] = 0.
template <class T>
Series1<T> s_transform(const Series1<T>& psi, const std::string& label = "a");

template <class T>
Series2<T> partial_s(const PairDistribution<T>& p);

template <class T>
Series2<T> sigma_transform(const PairDistribution<T>& p);

// omega = psi_factor^{-1} o psi_target, so that psi_factor o omega = psi_target.
template <class T>
Series1<T> subordination_series(const Series1<T>& psi_target, const Series1<T>& psi_factor);

// psi of the free multiplicative convolution of two marginals, via S_1 S_2.
template <class T>
Series1<T> free_mult_convolve_marginal(const Series1<T>& psi1, const Series1<T>& psi2,
                                       const std::string& label1 = "a1", const std::string& label2 = "a2");

// 4 psi_ab + 2 (psi_a + psi_b) + 1.
template <class T>
Series2<T> g_series(const PairDistribution<T>& p);

template <class T>
struct TransformBundle {
    int order = 0;
    Series1<T> psi_a;
    Series1<T> psi_b;
    Series2<T> psi_ab;
    Series1<T> h_a;
    Series1<T> h_b;
    Series2<T> h_ab;
    Series1<T> eta_a;
    Series1<T> eta_b;
    // present only when phi(a) and phi(b) are nonzero
    std::optional<Series1<T>> s_a;
    std::optional<Series1<T>> s_b;
    std::optional<Series2<T>> partial_s;
    std::optional<Series2<T>> sigma;
    // names of failed hypotheses when the S members are absent
    std::vector<std::string> missing;
};

template <class T>
TransformBundle<T> bundle(const PairDistribution<T>& p);

// Throws PreconditionError listing phi(a)=0, phi(b)=0 (and phi(ab)=0 when
// `need_mixed`) for the pair labelled `label`.
template <class T>
void require_admissible(const PairDistribution<T>& p, const std::string& label, bool need_mixed);

// Same for two pairs at once, failures of both listed together.
template <class T>
void require_admissible(const PairDistribution<T>& p1, const PairDistribution<T>& p2, bool need_mixed);

} // namespace bifree
