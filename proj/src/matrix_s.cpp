#include "bifree/matrix_s.hpp"

#include "bifree/biconv.hpp"
#include "bifree/free_oracle.hpp"
#include "bifree/transforms.hpp"
#include "bifree/valuated.hpp"

namespace bifree {

namespace {

template <class T>
Series2<T> z_series(int nz, int nw)
{
    return Series2<T>::monomial(nz, nw, 1, 0, T(1));
}

template <class T>
Series2<T> w_series(int nz, int nw)
{
    return Series2<T>::monomial(nz, nw, 0, 1, T(1));
}

// (psi_ab + psi_b(w)) / w.
template <class T>
Series2<T> psi_X_off(const PairDistribution<T>& p)
{
    const int n = p.order();
    return (psi_ab(p) + Series2<T>::in_w(psi_b(p), n)).shifted(0, -1);
}

template <class T>
Series2<T> rho(const PairDistribution<T>& p, const Series1<T>& s_b)
{
    const Series2<T> s = partial_s(p);
    const int nz = s.order_z();
    const int nw = s.order_w();
    const Series2<T> den = z_series<T>(nz, nw) * s + w_series<T>(nz, nw) + T(1);
    return Series2<T>::in_w(s_b, nz) * (T(1) - s) * reciprocal(den);
}

template <class T>
void require_equal(const UTGammaSeries<T>& a, const UTGammaSeries<T>& b, const char* what)
{
    if (const auto d = first_discrepancy(a, b))
        throw ConsistencyError(std::string(what) + ": entry " + d->entry + " differs at (" + std::to_string(d->at.j)
                               + "," + std::to_string(d->at.k) + "): " + format_plain(d->at.lhs) + " vs "
                               + format_plain(d->at.rhs));
}

template <class T>
void require_identity_germ(const Series2<T>& s, int j, int k, double scale, const char* what)
{
    for (int a = 0; a <= s.order_z(); ++a)
        for (int b = 0; b <= s.order_w(); ++b)
            if (!Field<T>::negligible(T(s(a, b) - T(a == j && b == k ? 1 : 0)), scale))
                throw ConsistencyError(std::string(what) + " is not the coordinate it should be");
}

} // namespace

template <class T>
UTGammaSeries<T> psi_X(const PairDistribution<T>& p)
{
    const int n = p.order();
    return {Series2<T>::in_z(psi_a(p), n), psi_X_off(p), Series2<T>::in_w(psi_b(p), n)};
}

template <class T>
UTGammaSeries<T> psi_X_at(const PairDistribution<T>& p, const Series1<T>& u, const Series1<T>& v,
                          const Series2<T>& e)
{
    if (!Field<T>::is_zero(u[0]) || !Field<T>::is_zero(v[0]))
        throw ArithmeticError("diagonal of the argument must vanish at 0");
    return {Series2<T>::in_z(compose(psi_a(p), u), v.order()), e * compose_slots(psi_X_off(p), u, v),
            Series2<T>::in_w(compose(psi_b(p), v), u.order())};
}

template <class T>
UTGammaSeries<T> psi_X_inverse(const PairDistribution<T>& p)
{
    require_admissible(p, "", true);
    const int n = p.order();
    const Series1<T> pa = invert(psi_a(p));
    const Series1<T> r = invert(psi_b(p));
    const Series2<T> k = compose_slots(psi_ab(p), pa, r);
    // r / (K + w): the denominator is w times a unit
    const ValuatedSeries2<T> off =
        ValuatedSeries2<T>(Series2<T>::in_w(r, n)) / ValuatedSeries2<T>(k + w_series<T>(n, n));
    return {Series2<T>::in_z(pa, n), off.to_series2(n, n - 1), Series2<T>::in_w(r, n)};
}

template <class T>
UTGammaSeries<T> s_X(const PairDistribution<T>& p)
{
    require_admissible(p, "", true);
    const int n = p.order() - 1;
    const Series1<T> s_a = s_transform(psi_a(p), "a");
    const Series1<T> s_b = s_transform(psi_b(p), "b");
    UTGammaSeries<T> closed{Series2<T>::in_z(s_a, n), rho(p, s_b), Series2<T>::in_w(s_b, n)};

    // Gamma^{-1} (1 + Gamma) Psi_X^{-1}(Gamma), written out entrywise since Gamma^{-1}
    // has poles: off = ((1 + z) q - r / w) / z.
    const UTGammaSeries<T> inv = psi_X_inverse(p);
    const Series2<T> r_over_w = inv.d2.shifted(0, -1);
    const Series2<T> x = (T(1) + z_series<T>(n + 1, n)) * inv.off - r_over_w;
    const Series2<T> direct_off = x.shifted(-1, 0);
    const UTGammaSeries<T> direct{((T(1) + z_series<T>(n + 1, n + 1)) * inv.d1).shifted(-1, 0).truncated(n, n),
                                  direct_off.truncated(n, n),
                                  ((T(1) + w_series<T>(n + 1, n + 1)) * inv.d2).shifted(0, -1).truncated(n, n)};
    require_equal(closed, direct, "S_X derivations");
    return closed;
}

template <class T>
UTGammaSeries<T> s_X_at(const PairDistribution<T>& p, const Series1<T>& u, const Series1<T>& v,
                        const Series2<T>& e)
{
    if (!Field<T>::is_zero(u[0]) || !Field<T>::is_zero(v[0]))
        throw ArithmeticError("diagonal of the argument must vanish at 0");
    const UTGammaSeries<T> s = s_X(p);
    const Series1<T> s_a = s_transform(psi_a(p), "a");
    const Series1<T> s_b = s_transform(psi_b(p), "b");
    return {Series2<T>::in_z(compose(s_a, u), v.order()), e * compose_slots(s.off, u, v),
            Series2<T>::in_w(compose(s_b, v), u.order())};
}

template <class T>
UTGammaSeries<T> dykema_rhs(const PairDistribution<T>& p1, const PairDistribution<T>& p2)
{
    require_admissible(p1, p2, true);
    const UTGammaSeries<T> x1 = s_X(p1);
    const UTGammaSeries<T> x2 = s_X(p2);
    const int nz = std::min(x1.off.order_z(), x2.off.order_z());
    const int nw = std::min(x1.off.order_w(), x2.off.order_w());
    const Series2<T> z_minus_w = z_series<T>(nz, nw) - w_series<T>(nz, nw);
    const UTGammaSeries<T> closed{x2.d1 * x1.d1, x1.off * (z_minus_w * x2.off + x2.d2) + x2.off * x1.d2,
                                  x2.d2 * x1.d2};

    const UTGammaSeries<T> x2_inv = inverse(x2);
    const UTGammaSeries<T> m = x2_inv * UTGammaSeries<T>::gamma(nz, nw) * x2;
    // rounding in complex mode grows with the size of S_X2 times its inverse
    const double scale1 = x2.d1.max_magnitude() * x2_inv.d1.max_magnitude();
    const double scale2 = x2.d2.max_magnitude() * x2_inv.d2.max_magnitude();
    require_identity_germ(m.d1, 1, 0, scale1, "(1,1) entry of the twisted argument");
    require_identity_germ(m.d2, 0, 1, scale2, "(2,2) entry of the twisted argument");
    const Series1<T> z = Series1<T>::variable(nz);
    const Series1<T> w = Series1<T>::variable(nw);
    const UTGammaSeries<T> composed = x2 * s_X_at(p1, z, w, m.off);
    require_equal(closed, composed, "twisted product derivations");
    return closed;
}

template <class T>
T limit_lhs12(const PairDistribution<T>& p1, const PairDistribution<T>& p2)
{
    const T a1 = p1(1, 0), b1 = p1(0, 1), ab1 = p1(1, 1);
    const T a2 = p2(1, 0), b2 = p2(0, 1), ab2 = p2(1, 1);
    const T bb = b1 * b2;
    return T(a1 * a2 * b1 * b2 - ab1 * ab2) / T(a1 * a2 * bb * bb);
}

template <class T>
T limit_rhs12(const PairDistribution<T>& p1, const PairDistribution<T>& p2)
{
    auto term = [](const PairDistribution<T>& pi, const PairDistribution<T>& pj) {
        const T a = pi(1, 0), b = pi(0, 1), ab = pi(1, 1);
        return T(T(a * b - ab) / T(a * b * b * pj(0, 1)));
    };
    return T(term(p1, p2) + term(p2, p1));
}

template <class T>
DykemaReport<T> dykema_check(const PairDistribution<T>& p1, const PairDistribution<T>& p2,
                             const PairDistribution<T>& product, const Tolerance& tol)
{
    const int n = product.order();
    require_admissible(p1, p2, true);
    require_admissible(product, "1a2", true);
    DykemaReport<T> r;
    r.order = n;
    r.lhs = s_X(product);
    r.rhs = dykema_rhs(p1.truncated(n), p2.truncated(n));
    r.first_discrepancy = first_discrepancy(r.lhs, r.rhs, tol);
    r.holds = !r.first_discrepancy;
    r.limit_lhs12 = limit_lhs12(p1, p2);
    r.limit_rhs12 = limit_rhs12(p1, p2);
    r.limit_d1 = T(1) / T(p1(1, 0) * p2(1, 0));
    r.limit_d2 = T(1) / T(p1(0, 1) * p2(0, 1));
    return r;
}

template <class T>
DykemaReport<T> dykema_check(const PairDistribution<T>& p1, const PairDistribution<T>& p2, int n,
                             const Tolerance& tol)
{
    require_admissible(p1, p2, true);
    return dykema_check(p1, p2, product_pair_moments(p1, p2, n), tol);
}

template <class T>
MatrixSubordinationReport<T> matrix_subordination_check(const PairDistribution<T>& p1, const PairDistribution<T>& p2, int n,
                                   const Tolerance& tol)
{
    require_admissible(p1, p2, false);
    std::vector<std::string> failed;
    if (!is_factoring(p1, tol))
        failed.push_back("pair 1 does not have factoring two-band moments");
    if (!is_factoring(p2, tol))
        failed.push_back("pair 2 does not have factoring two-band moments");
    if (!failed.empty())
        throw PreconditionError(Precondition::not_factoring, failed);

    const PairDistribution<T> product = product_pair_moments(p1, p2, n);
    const PairDistribution<T> q1 = p1.truncated(n);
    const PairDistribution<T> q2 = p2.truncated(n);
    const Subordination<T> s = subordination(q1, q2, psi_a(product), psi_b(product));
    const UTGammaSeries<T> lhs = psi_X(product);

    // omega_j(Gamma) = [[omega_aj(z), zeta omega_bj(w) / w], [0, omega_bj(w)]]
    auto at = [&](const PairDistribution<T>& q, const Series1<T>& oa, const Series1<T>& ob) {
        return psi_X_at(q, oa, ob, Series2<T>::in_w(ob.shifted_down(1), n));
    };
    const UTGammaSeries<T> r1 = at(q1, s.omega_a1, s.omega_b1);
    const UTGammaSeries<T> r2 = at(q2, s.omega_a2, s.omega_b2);

    MatrixSubordinationReport<T> r;
    r.order = n;
    r.residual1 = max_difference(lhs, r1);
    r.residual2 = max_difference(lhs, r2);
    r.first_discrepancy1 = first_discrepancy(lhs, r1, tol);
    r.first_discrepancy2 = first_discrepancy(lhs, r2, tol);
    r.holds = !r.first_discrepancy1 && !r.first_discrepancy2;
    return r;
}

#define BIFREE_INSTANTIATE(T)                                                                                 \
    template UTGammaSeries<T> psi_X<T>(const PairDistribution<T>&);                                         \
    template UTGammaSeries<T> psi_X_at<T>(const PairDistribution<T>&, const Series1<T>&, const Series1<T>&, \
                                          const Series2<T>&);                                               \
    template UTGammaSeries<T> psi_X_inverse<T>(const PairDistribution<T>&);                                 \
    template UTGammaSeries<T> s_X<T>(const PairDistribution<T>&);                                           \
    template UTGammaSeries<T> s_X_at<T>(const PairDistribution<T>&, const Series1<T>&, const Series1<T>&,   \
                                        const Series2<T>&);                                                 \
    template UTGammaSeries<T> dykema_rhs<T>(const PairDistribution<T>&, const PairDistribution<T>&);        \
    template T limit_lhs12<T>(const PairDistribution<T>&, const PairDistribution<T>&);                      \
    template T limit_rhs12<T>(const PairDistribution<T>&, const PairDistribution<T>&);                      \
    template DykemaReport<T> dykema_check<T>(const PairDistribution<T>&, const PairDistribution<T>&, int,   \
                                             const Tolerance&);                                             \
    template DykemaReport<T> dykema_check<T>(const PairDistribution<T>&, const PairDistribution<T>&,        \
                                             const PairDistribution<T>&, const Tolerance&);                 \
    template MatrixSubordinationReport<T> matrix_subordination_check<T>(const PairDistribution<T>&, const PairDistribution<T>&,  \
                                                   int, const Tolerance&);

BIFREE_INSTANTIATE(Rational)
BIFREE_INSTANTIATE(Complex)

#undef BIFREE_INSTANTIATE

} // namespace bifree
