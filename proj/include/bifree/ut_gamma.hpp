#pragma once

#include "bifree/series.hpp"

namespace bifree {

// The matrix [[d1, zeta * off], [0, d2]] whose entries are series in (z, w).
// Upper-triangular products never multiply two off-diagonal entries, so the
// representation is exactly linear in zeta.
template <class T>
struct UTGammaSeries {
    Series2<T> d1;
    Series2<T> off;
    Series2<T> d2;

    static UTGammaSeries identity(int nz, int nw)
    {
        return {Series2<T>::constant(nz, nw, T(1)), Series2<T>(nz, nw), Series2<T>::constant(nz, nw, T(1))};
    }

    // Gamma = [[z, zeta], [0, w]].
    static UTGammaSeries gamma(int nz, int nw)
    {
        return {Series2<T>::monomial(nz, nw, 1, 0, T(1)), Series2<T>::constant(nz, nw, T(1)),
                Series2<T>::monomial(nz, nw, 0, 1, T(1))};
    }

    friend UTGammaSeries operator*(const UTGammaSeries& a, const UTGammaSeries& b)
    {
        return {a.d1 * b.d1, a.d1 * b.off + a.off * b.d2, a.d2 * b.d2};
    }
};

template <class T>
UTGammaSeries<T> inverse(const UTGammaSeries<T>& a)
{
    if (Field<T>::is_zero(a.d1(0, 0)) || Field<T>::is_zero(a.d2(0, 0)))
        throw ArithmeticError("upper-triangular series with a non-invertible diagonal entry");
    const Series2<T> inv1 = reciprocal(a.d1);
    const Series2<T> inv2 = reciprocal(a.d2);
    return {inv1, -(a.off * inv1 * inv2), inv2};
}

template <class T>
struct UTDiscrepancy {
    const char* entry = "";
    Discrepancy<T> at;
};

// Compares entries over their common truncation: d1, then off, then d2.
template <class T>
std::optional<UTDiscrepancy<T>> first_discrepancy(const UTGammaSeries<T>& a, const UTGammaSeries<T>& b,
                                                  const Tolerance& tol = {})
{
    if (auto d = first_discrepancy(a.d1, b.d1, tol))
        return UTDiscrepancy<T>{"d1", *d};
    if (auto d = first_discrepancy(a.off, b.off, tol))
        return UTDiscrepancy<T>{"off", *d};
    if (auto d = first_discrepancy(a.d2, b.d2, tol))
        return UTDiscrepancy<T>{"d2", *d};
    return std::nullopt;
}

template <class T>
double max_difference(const UTGammaSeries<T>& a, const UTGammaSeries<T>& b)
{
    return std::fmax(max_difference(a.d1, b.d1), std::fmax(max_difference(a.off, b.off), max_difference(a.d2, b.d2)));
}

} // namespace bifree
