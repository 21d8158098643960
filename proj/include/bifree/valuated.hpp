#pragma once

// z^p w^q * U(z, w) with integer (possibly negative) valuation (p, q).
//
// Canonical form: the valuation is maximal, i.e. row 0 and column 0 of U are not
// identically zero. U may still have a zero constant term (e.g. z + w); such a value
// is representable but not invertible.
//
// Precision: U of orders (Nz, Nw) means coefficients of z^a w^b are known for
// a <= p + Nz and b <= q + Nw. Every operation propagates this absolute precision.

#include <algorithm>
#include <string>
#include <vector>

#include "bifree/series.hpp"

namespace bifree {

template <class T>
class ValuatedSeries2 {
public:
    ValuatedSeries2() : ValuatedSeries2(Series2<T>::constant(0, 0, T(1))) {}

    // Strips vanishing leading rows/columns of `s`.
    explicit ValuatedSeries2(const Series2<T>& s, int vz = 0, int vw = 0) : vz_(vz), vw_(vw), unit_(s)
    {
        normalize();
    }

    static ValuatedSeries2 zero(int prec_z, int prec_w)
    {
        ValuatedSeries2 v;
        v.zero_ = true;
        v.prec_z_ = prec_z;
        v.prec_w_ = prec_w;
        return v;
    }

    bool is_zero() const noexcept { return zero_; }
    int valuation_z() const noexcept { return vz_; }
    int valuation_w() const noexcept { return vw_; }
    const Series2<T>& unit() const noexcept { return unit_; }

    // Largest exponents with known coefficients.
    int precision_z() const noexcept { return zero_ ? prec_z_ : vz_ + unit_.order_z(); }
    int precision_w() const noexcept { return zero_ ? prec_w_ : vw_ + unit_.order_w(); }

    bool invertible() const { return !zero_ && !Field<T>::is_zero(unit_(0, 0)); }

    // Coefficient of z^a w^b in absolute exponents.
    T coefficient(int a, int b) const
    {
        if (a > precision_z() || b > precision_w())
            throw ArithmeticError("coefficient beyond known precision");
        if (zero_ || a < vz_ || b < vw_)
            return T(0);
        return unit_(a - vz_, b - vw_);
    }

    // Plain Series2 of orders (nz, nw). Requires non-negative valuation and enough precision.
    Series2<T> to_series2(int nz, int nw) const
    {
        if (nz > precision_z() || nw > precision_w())
            throw ArithmeticError("valuated series known to (" + std::to_string(precision_z()) + ","
                                  + std::to_string(precision_w()) + "), requested ("
                                  + std::to_string(nz) + "," + std::to_string(nw) + ")");
        Series2<T> r(nz, nw);
        if (zero_)
            return r;
        if (vz_ < 0 || vw_ < 0)
            throw ArithmeticError("valuated series has a pole, not a power series");
        for (int a = vz_; a <= nz; ++a)
            for (int b = vw_; b <= nw; ++b)
                r(a, b) = unit_(a - vz_, b - vw_);
        return r;
    }

    ValuatedSeries2 reciprocal() const
    {
        if (!invertible())
            throw ArithmeticError("valuated series is not invertible (unit has zero constant term)");
        return ValuatedSeries2(bifree::reciprocal(unit_), -vz_, -vw_);
    }

    ValuatedSeries2 operator-() const
    {
        if (zero_)
            return *this;
        return ValuatedSeries2(-unit_, vz_, vw_);
    }

    friend ValuatedSeries2 operator*(const ValuatedSeries2& a, const ValuatedSeries2& b)
    {
        if (a.zero_ || b.zero_) {
            // zero times x is known up to zero's precision shifted by x's valuation
            const ValuatedSeries2& z = a.zero_ ? a : b;
            const ValuatedSeries2& x = a.zero_ ? b : a;
            if (x.zero_)
                return zero(z.prec_z_ + x.prec_z_ + 1, z.prec_w_ + x.prec_w_ + 1);
            return zero(std::min(z.prec_z_ + x.vz_, x.precision_z() + z.prec_z_ + 1),
                        std::min(z.prec_w_ + x.vw_, x.precision_w() + z.prec_w_ + 1));
        }
        return ValuatedSeries2(a.unit_ * b.unit_, a.vz_ + b.vz_, a.vw_ + b.vw_);
    }

    friend ValuatedSeries2 operator/(const ValuatedSeries2& a, const ValuatedSeries2& b)
    {
        if (!b.invertible())
            throw ArithmeticError("division by a valuated series that is zero or has no invertible unit");
        return a * b.reciprocal();
    }

    friend ValuatedSeries2 operator+(const ValuatedSeries2& a, const ValuatedSeries2& b)
    {
        const int pz = std::min(a.precision_z(), b.precision_z());
        const int pw = std::min(a.precision_w(), b.precision_w());
        if (a.zero_ && b.zero_)
            return zero(pz, pw);
        const int vz = a.zero_ ? b.vz_ : (b.zero_ ? a.vz_ : std::min(a.vz_, b.vz_));
        const int vw = a.zero_ ? b.vw_ : (b.zero_ ? a.vw_ : std::min(a.vw_, b.vw_));
        if (pz < vz || pw < vw)
            return zero(pz, pw);
        Series2<T> u(pz - vz, pw - vw);
        // per-coefficient size of the summands, to recognize cancellation
        std::vector<double> size(static_cast<std::size_t>((u.order_z() + 1) * (u.order_w() + 1)), 0.0);
        for (const ValuatedSeries2* x : {&a, &b}) {
            if (x->zero_)
                continue;
            const int dz = x->vz_ - vz;
            const int dw = x->vw_ - vw;
            for (int j = 0; j + dz <= u.order_z(); ++j)
                for (int k = 0; k + dw <= u.order_w(); ++k) {
                    u(j + dz, k + dw) += x->unit_(j, k);
                    double& s = size[static_cast<std::size_t>((j + dz) * (u.order_w() + 1) + k + dw)];
                    s = std::fmax(s, Field<T>::magnitude(x->unit_(j, k)));
                }
        }
        for (int j = 0; j <= u.order_z(); ++j)
            for (int k = 0; k <= u.order_w(); ++k)
                if (Field<T>::negligible(u(j, k), size[static_cast<std::size_t>(j * (u.order_w() + 1) + k)]))
                    u(j, k) = T(0);
        ValuatedSeries2 r;
        r.vz_ = vz;
        r.vw_ = vw;
        r.unit_ = std::move(u);
        r.normalize();
        return r;
    }

    friend ValuatedSeries2 operator-(const ValuatedSeries2& a, const ValuatedSeries2& b) { return a + (-b); }

    // Largest coefficient magnitude within known precision.
    double max_magnitude() const { return zero_ ? 0.0 : unit_.max_magnitude(); }

private:
    // Leading rows and columns are stripped when their entries are negligible in
    // absolute terms; sums zero their cancelled entries before getting here.
    void normalize()
    {
        if (zero_)
            return;
        const double scale = 1.0;
        int drop_z = 0;
        while (drop_z <= unit_.order_z() && unit_.row_vanishes(drop_z, scale))
            ++drop_z;
        if (drop_z > unit_.order_z()) {
            prec_z_ = precision_z();
            prec_w_ = precision_w();
            zero_ = true;
            unit_ = Series2<T>(0, 0);
            return;
        }
        int drop_w = 0;
        while (drop_w <= unit_.order_w() && unit_.column_vanishes(drop_w, scale))
            ++drop_w;
        if (drop_z == 0 && drop_w == 0)
            return;
        Series2<T> u(unit_.order_z() - drop_z, unit_.order_w() - drop_w);
        for (int j = 0; j <= u.order_z(); ++j)
            for (int k = 0; k <= u.order_w(); ++k)
                u(j, k) = unit_(j + drop_z, k + drop_w);
        unit_ = std::move(u);
        vz_ += drop_z;
        vw_ += drop_w;
    }

    bool zero_ = false;
    int prec_z_ = 0;
    int prec_w_ = 0;
    int vz_ = 0;
    int vw_ = 0;
    Series2<T> unit_;
};

} // namespace bifree
