#pragma once

// Truncated formal power series in one and two variables.
//
// A Series1 of order N stands for c_0 + c_1 z + ... + c_N z^N + O(z^{N+1}).
// A Series2 of orders (Nz, Nw) stands for the rectangular truncation
// sum_{j<=Nz, k<=Nw} c_{j,k} z^j w^k modulo (z^{Nz+1}, w^{Nw+1}).
//
// Binary arithmetic carries precision: the result is known to the smaller of the
// operand orders, never more.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bifree/coefficient.hpp"
#include "bifree/errors.hpp"

namespace bifree {

enum class InversionMethod { newton, triangular };

namespace detail {

inline int checked_order(int n)
{
    if (n < 0)
        throw ArithmeticError("negative truncation order " + std::to_string(n));
    return n;
}

} // namespace detail

template <class T>
class Series1 {
public:
    Series1() : c_(1, T(0)) {}
    explicit Series1(int order) : c_(detail::checked_order(order) + 1, T(0)) {}
    explicit Series1(std::vector<T> coeffs) : c_(std::move(coeffs))
    {
        if (c_.empty())
            throw ArithmeticError("Series1 needs at least one coefficient");
    }

    static Series1 constant(int order, const T& c)
    {
        Series1 s(order);
        s.c_[0] = c;
        return s;
    }

    static Series1 monomial(int order, int k, const T& c)
    {
        Series1 s(order);
        if (k <= order)
            s.c_[k] = c;
        return s;
    }

    static Series1 variable(int order) { return monomial(order, 1, T(1)); }

    int order() const noexcept { return static_cast<int>(c_.size()) - 1; }
    const T& operator[](int k) const { return c_[k]; }
    T& operator[](int k) { return c_[k]; }
    std::span<const T> coeffs() const noexcept { return c_; }

    Series1 truncated(int n) const
    {
        if (n > order())
            throw ArithmeticError("cannot raise truncation order " + std::to_string(order()) + " to "
                                  + std::to_string(n));
        detail::checked_order(n);
        return Series1(std::vector<T>(c_.begin(), c_.begin() + n + 1));
    }

    // Multiply by z^k.
    Series1 shifted_up(int k) const
    {
        Series1 r(order() + k);
        for (int i = 0; i <= order(); ++i)
            r.c_[i + k] = c_[i];
        return r;
    }

    // Divide by z^k. The k lowest coefficients must vanish.
    Series1 shifted_down(int k) const
    {
        if (k > order())
            throw ArithmeticError("division by z^" + std::to_string(k) + " exhausts order "
                                  + std::to_string(order()));
        const double scale = max_magnitude();
        for (int i = 0; i < k; ++i)
            if (!Field<T>::negligible(c_[i], scale))
                throw ArithmeticError("series not divisible by z^" + std::to_string(k));
        return Series1(std::vector<T>(c_.begin() + k, c_.end()));
    }

    Series1 derivative() const
    {
        if (order() == 0)
            return Series1(0);
        Series1 r(order() - 1);
        for (int i = 1; i <= order(); ++i)
            r.c_[i - 1] = c_[i] * T(i);
        return r;
    }

    double max_magnitude() const
    {
        double m = 0.0;
        for (const auto& c : c_)
            m = std::fmax(m, Field<T>::magnitude(c));
        return m;
    }

    Series1 operator-() const
    {
        Series1 r(*this);
        for (auto& c : r.c_)
            c = -c;
        return r;
    }

    friend Series1 operator+(const Series1& a, const Series1& b)
    {
        const int n = std::min(a.order(), b.order());
        Series1 r(n);
        for (int i = 0; i <= n; ++i)
            r.c_[i] = a.c_[i] + b.c_[i];
        return r;
    }

    friend Series1 operator-(const Series1& a, const Series1& b)
    {
        const int n = std::min(a.order(), b.order());
        Series1 r(n);
        for (int i = 0; i <= n; ++i)
            r.c_[i] = a.c_[i] - b.c_[i];
        return r;
    }

    friend Series1 operator*(const Series1& a, const Series1& b)
    {
        const int n = std::min(a.order(), b.order());
        Series1 r(n);
        for (int i = 0; i <= n; ++i) {
            if (Field<T>::is_zero(a.c_[i]) && Field<T>::mode == Mode::rational)
                continue;
            for (int j = 0; i + j <= n; ++j)
                r.c_[i + j] += a.c_[i] * b.c_[j];
        }
        return r;
    }

    friend Series1 operator*(const T& s, const Series1& a)
    {
        Series1 r(a);
        for (auto& c : r.c_)
            c *= s;
        return r;
    }

    friend Series1 operator+(const Series1& a, const T& s)
    {
        Series1 r(a);
        r.c_[0] += s;
        return r;
    }

    friend Series1 operator+(const T& s, const Series1& a) { return a + s; }

    friend Series1 operator-(const T& s, const Series1& a)
    {
        Series1 r = -a;
        r.c_[0] += s;
        return r;
    }

private:
    std::vector<T> c_;
};

// Pads with zero coefficients. Only valid where the caller knows the padding is
// later overwritten or irrelevant (Newton steps).
template <class T>
Series1<T> padded(const Series1<T>& s, int n)
{
    Series1<T> r(std::max(n, s.order()));
    for (int i = 0; i <= s.order(); ++i)
        r[i] = s[i];
    return r;
}

template <class T>
Series1<T> reciprocal(const Series1<T>& f, InversionMethod method = InversionMethod::newton)
{
    if (Field<T>::is_zero(f[0]))
        throw ArithmeticError("reciprocal of a series with zero constant term");
    const int n = f.order();
    const T inv0 = T(1) / f[0];

    if (method == InversionMethod::triangular) {
        Series1<T> g(n);
        g[0] = inv0;
        for (int k = 1; k <= n; ++k) {
            T s(0);
            for (int i = 1; i <= k; ++i)
                s += f[i] * g[k - i];
            g[k] = -s * inv0;
        }
        return g;
    }

    // g <- g (2 - f g): 1 - f g_new = (1 - f g)^2 doubles the number of correct terms.
    Series1<T> g = Series1<T>::constant(0, inv0);
    int prec = 0;
    while (prec < n) {
        const int next = std::min(2 * prec + 1, n);
        const Series1<T> gp = padded(g, next);
        g = gp * (T(2) - f.truncated(next) * gp);
        prec = next;
    }
    return g;
}

// f(g(z)). Requires g(0) = 0.
template <class T>
Series1<T> compose(const Series1<T>& f, const Series1<T>& g)
{
    if (!Field<T>::is_zero(g[0]))
        throw ArithmeticError("composition with an inner series that does not vanish at 0");
    const int n = std::min(f.order(), g.order());
    Series1<T> inner = g.truncated(n);
    inner[0] = T(0);
    Series1<T> r = Series1<T>::constant(n, f[n]);
    for (int k = n - 1; k >= 0; --k) {
        r = r * inner;
        r[0] += f[k];
    }
    return r;
}

// Compositional inverse: f(result(z)) = z = result(f(z)) modulo z^{N+1}.
template <class T>
Series1<T> invert(const Series1<T>& f, InversionMethod method = InversionMethod::newton)
{
    if (f.order() < 1)
        throw ArithmeticError("compositional inverse needs order >= 1");
    if (!Field<T>::is_zero(f[0]))
        throw ArithmeticError("compositional inverse of a series not vanishing at 0");
    if (Field<T>::is_zero(f[1]))
        throw ArithmeticError("compositional inverse of a series with zero linear coefficient");

    const int n = f.order();
    const T inv1 = T(1) / f[1];
    Series1<T> g = Series1<T>::monomial(1, 1, inv1);

    if (method == InversionMethod::triangular) {
        g = padded(g, n);
        for (int k = 2; k <= n; ++k) {
            // g[k] is still zero; the z^k coefficient of f(g) is f1 g[k] + (terms in g[<k]).
            const T ck = compose(f.truncated(k), g.truncated(k))[k];
            g[k] = -ck * inv1;
        }
        return g;
    }

    // g <- g - (f(g) - z) / f'(g).
    const Series1<T> fp = f.derivative();
    int prec = 1;
    while (prec < n) {
        const int next = std::min(2 * prec + 1, n);
        const int v = prec + 1;
        const Series1<T> gp = padded(g, next);
        const Series1<T> residual = compose(f.truncated(next), gp) - Series1<T>::variable(next);
        const Series1<T> slope = compose(fp.truncated(next - v), gp.truncated(next - v));
        const Series1<T> step = (residual.shifted_down(v) * reciprocal(slope)).shifted_up(v);
        g = gp - step;
        prec = next;
    }
    return g;
}

template <class T>
bool equal_to_order(const Series1<T>& a, const Series1<T>& b, int n, const Tolerance& tol = {})
{
    if (n > a.order() || n > b.order())
        throw ArithmeticError("comparison beyond known order");
    for (int i = 0; i <= n; ++i)
        if (!Field<T>::near(a[i], b[i], tol))
            return false;
    return true;
}

template <class T>
bool equal_on_common(const Series1<T>& a, const Series1<T>& b, const Tolerance& tol = {})
{
    return equal_to_order(a, b, std::min(a.order(), b.order()), tol);
}

template <class T>
class Series2 {
public:
    Series2() : Series2(0, 0) {}
    explicit Series2(int n) : Series2(n, n) {}
    Series2(int nz, int nw)
        : nz_(detail::checked_order(nz)), nw_(detail::checked_order(nw)),
          c_(static_cast<std::size_t>(nz + 1) * static_cast<std::size_t>(nw + 1), T(0))
    {
    }

    static Series2 constant(int nz, int nw, const T& c)
    {
        Series2 s(nz, nw);
        s(0, 0) = c;
        return s;
    }

    static Series2 monomial(int nz, int nw, int j, int k, const T& c)
    {
        Series2 s(nz, nw);
        if (j <= nz && k <= nw)
            s(j, k) = c;
        return s;
    }

    // A function of z alone, viewed with w-order nw.
    static Series2 in_z(const Series1<T>& f, int nw)
    {
        Series2 s(f.order(), nw);
        for (int j = 0; j <= f.order(); ++j)
            s(j, 0) = f[j];
        return s;
    }

    static Series2 in_w(const Series1<T>& f, int nz)
    {
        Series2 s(nz, f.order());
        for (int k = 0; k <= f.order(); ++k)
            s(0, k) = f[k];
        return s;
    }

    int order_z() const noexcept { return nz_; }
    int order_w() const noexcept { return nw_; }

    const T& operator()(int j, int k) const { return c_[index(j, k)]; }
    T& operator()(int j, int k) { return c_[index(j, k)]; }

    Series2 truncated(int nz, int nw) const
    {
        if (nz > nz_ || nw > nw_)
            throw ArithmeticError("cannot raise truncation orders (" + std::to_string(nz_) + ","
                                  + std::to_string(nw_) + ") to (" + std::to_string(nz) + ","
                                  + std::to_string(nw) + ")");
        Series2 r(nz, nw);
        for (int j = 0; j <= nz; ++j)
            for (int k = 0; k <= nw; ++k)
                r(j, k) = (*this)(j, k);
        return r;
    }

    // Multiply by z^dz w^dw. Negative shifts divide and require the vacated
    // rows/columns to vanish; positive shifts raise the order accordingly.
    Series2 shifted(int dz, int dw) const
    {
        const double scale = max_magnitude();
        for (int j = 0; j < -dz && j <= nz_; ++j)
            for (int k = 0; k <= nw_; ++k)
                if (!Field<T>::negligible((*this)(j, k), scale))
                    throw ArithmeticError("bivariate series not divisible by z^" + std::to_string(-dz));
        for (int k = 0; k < -dw && k <= nw_; ++k)
            for (int j = 0; j <= nz_; ++j)
                if (!Field<T>::negligible((*this)(j, k), scale))
                    throw ArithmeticError("bivariate series not divisible by w^" + std::to_string(-dw));
        Series2 r(nz_ + dz, nw_ + dw);
        for (int j = std::max(0, -dz); j <= nz_; ++j)
            for (int k = std::max(0, -dw); k <= nw_; ++k)
                r(j + dz, k + dw) = (*this)(j, k);
        return r;
    }

    bool row_vanishes(int j, double scale) const
    {
        for (int k = 0; k <= nw_; ++k)
            if (!Field<T>::negligible((*this)(j, k), scale))
                return false;
        return true;
    }

    bool column_vanishes(int k, double scale) const
    {
        for (int j = 0; j <= nz_; ++j)
            if (!Field<T>::negligible((*this)(j, k), scale))
                return false;
        return true;
    }

    double max_magnitude() const
    {
        double m = 0.0;
        for (const auto& c : c_)
            m = std::fmax(m, Field<T>::magnitude(c));
        return m;
    }

    Series2 operator-() const
    {
        Series2 r(*this);
        for (auto& c : r.c_)
            c = -c;
        return r;
    }

    friend Series2 operator+(const Series2& a, const Series2& b)
    {
        Series2 r(std::min(a.nz_, b.nz_), std::min(a.nw_, b.nw_));
        for (int j = 0; j <= r.nz_; ++j)
            for (int k = 0; k <= r.nw_; ++k)
                r(j, k) = a(j, k) + b(j, k);
        return r;
    }

    friend Series2 operator-(const Series2& a, const Series2& b)
    {
        Series2 r(std::min(a.nz_, b.nz_), std::min(a.nw_, b.nw_));
        for (int j = 0; j <= r.nz_; ++j)
            for (int k = 0; k <= r.nw_; ++k)
                r(j, k) = a(j, k) - b(j, k);
        return r;
    }

    friend Series2 operator*(const Series2& a, const Series2& b)
    {
        Series2 r(std::min(a.nz_, b.nz_), std::min(a.nw_, b.nw_));
        for (int j1 = 0; j1 <= r.nz_; ++j1)
            for (int k1 = 0; k1 <= r.nw_; ++k1) {
                const T& x = a(j1, k1);
                if (Field<T>::mode == Mode::rational && Field<T>::is_zero(x))
                    continue;
                for (int j2 = 0; j1 + j2 <= r.nz_; ++j2)
                    for (int k2 = 0; k1 + k2 <= r.nw_; ++k2)
                        r(j1 + j2, k1 + k2) += x * b(j2, k2);
            }
        return r;
    }

    friend Series2 operator*(const T& s, const Series2& a)
    {
        Series2 r(a);
        for (auto& c : r.c_)
            c *= s;
        return r;
    }

    friend Series2 operator+(const Series2& a, const T& s)
    {
        Series2 r(a);
        r(0, 0) += s;
        return r;
    }

    friend Series2 operator+(const T& s, const Series2& a) { return a + s; }

    friend Series2 operator-(const T& s, const Series2& a)
    {
        Series2 r = -a;
        r(0, 0) += s;
        return r;
    }

private:
    std::size_t index(int j, int k) const
    {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(nw_ + 1) + static_cast<std::size_t>(k);
    }

    int nz_;
    int nw_;
    std::vector<T> c_;
};

template <class T>
Series2<T> reciprocal(const Series2<T>& f)
{
    if (Field<T>::is_zero(f(0, 0)))
        throw ArithmeticError("reciprocal of a bivariate series with zero constant term");
    const int nz = f.order_z();
    const int nw = f.order_w();
    const T inv0 = T(1) / f(0, 0);
    Series2<T> g(nz, nw);
    // Solve f g = 1 coefficient by coefficient in lexicographic order.
    for (int j = 0; j <= nz; ++j)
        for (int k = 0; k <= nw; ++k) {
            if (j == 0 && k == 0) {
                g(0, 0) = inv0;
                continue;
            }
            T s(0);
            for (int a = 0; a <= j; ++a)
                for (int b = 0; b <= k; ++b) {
                    if (a == 0 && b == 0)
                        continue;
                    s += f(a, b) * g(j - a, k - b);
                }
            g(j, k) = -s * inv0;
        }
    return g;
}

// F(g(z), h(w)). Requires g(0) = h(0) = 0.
template <class T>
Series2<T> compose_slots(const Series2<T>& f, const Series1<T>& g, const Series1<T>& h)
{
    if (!Field<T>::is_zero(g[0]) || !Field<T>::is_zero(h[0]))
        throw ArithmeticError("slot substitution with a series that does not vanish at 0");
    const int nz = std::min(f.order_z(), g.order());
    const int nw = std::min(f.order_w(), h.order());

    std::vector<Series1<T>> gpow;
    std::vector<Series1<T>> hpow;
    Series1<T> gz = g.truncated(nz);
    Series1<T> hw = h.truncated(nw);
    gz[0] = T(0);
    hw[0] = T(0);
    gpow.push_back(Series1<T>::constant(nz, T(1)));
    for (int j = 1; j <= nz; ++j)
        gpow.push_back(gpow.back() * gz);
    hpow.push_back(Series1<T>::constant(nw, T(1)));
    for (int k = 1; k <= nw; ++k)
        hpow.push_back(hpow.back() * hw);

    // tmp(j, n) = sum_k f(j,k) [w^n] h^k
    Series2<T> tmp(nz, nw);
    for (int j = 0; j <= nz; ++j)
        for (int k = 0; k <= nw; ++k) {
            const T& x = f(j, k);
            if (Field<T>::mode == Mode::rational && Field<T>::is_zero(x))
                continue;
            for (int n = k; n <= nw; ++n)
                tmp(j, n) += x * hpow[k][n];
        }
    Series2<T> r(nz, nw);
    for (int j = 0; j <= nz; ++j)
        for (int m = j; m <= nz; ++m) {
            const T& gj = gpow[j][m];
            if (Field<T>::mode == Mode::rational && Field<T>::is_zero(gj))
                continue;
            for (int n = 0; n <= nw; ++n)
                r(m, n) += gj * tmp(j, n);
        }
    return r;
}

template <class T>
struct Discrepancy {
    int j = 0;
    int k = 0;
    T lhs{};
    T rhs{};
};

// First differing coefficient over the common truncation, graded by total degree.
template <class T>
std::optional<Discrepancy<T>> first_discrepancy(const Series2<T>& a, const Series2<T>& b,
                                                const Tolerance& tol = {})
{
    const int nz = std::min(a.order_z(), b.order_z());
    const int nw = std::min(a.order_w(), b.order_w());
    for (int d = 0; d <= nz + nw; ++d)
        for (int j = std::max(0, d - nw); j <= std::min(d, nz); ++j) {
            const int k = d - j;
            if (!Field<T>::near(a(j, k), b(j, k), tol))
                return Discrepancy<T>{j, k, a(j, k), b(j, k)};
        }
    return std::nullopt;
}

template <class T>
bool equal_on_common(const Series2<T>& a, const Series2<T>& b, const Tolerance& tol = {})
{
    return !first_discrepancy(a, b, tol).has_value();
}

// Largest |a - b| over the common truncation.
template <class T>
double max_difference(const Series2<T>& a, const Series2<T>& b)
{
    const int nz = std::min(a.order_z(), b.order_z());
    const int nw = std::min(a.order_w(), b.order_w());
    double m = 0.0;
    for (int j = 0; j <= nz; ++j)
        for (int k = 0; k <= nw; ++k)
            m = std::fmax(m, Field<T>::magnitude(T(a(j, k) - b(j, k))));
    return m;
}

// True when every coefficient agrees with the constant series c.
template <class T>
bool is_constant(const Series2<T>& a, const T& c, const Tolerance& tol = {})
{
    for (int j = 0; j <= a.order_z(); ++j)
        for (int k = 0; k <= a.order_w(); ++k)
            if (!Field<T>::near(a(j, k), (j == 0 && k == 0) ? c : T(0), tol))
                return false;
    return true;
}

} // namespace bifree
