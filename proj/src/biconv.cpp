#include "bifree/biconv.hpp"

#include "bifree/free_oracle.hpp"
#include "bifree/transforms.hpp"

namespace bifree {

namespace {

template <class T>
using V2 = ValuatedSeries2<T>;

template <class T>
V2<T> in_z(const Series1<T>& f, int n)
{
    return V2<T>(Series2<T>::in_z(f, n));
}

template <class T>
V2<T> in_w(const Series1<T>& f, int n)
{
    return V2<T>(Series2<T>::in_w(f, n));
}

template <class T>
V2<T> one(int n)
{
    return V2<T>(Series2<T>::constant(n, n, T(1)));
}

// Both inputs cut to order n after the standing hypotheses are checked.
template <class T>
std::pair<PairDistribution<T>, PairDistribution<T>> prepare(const PairDistribution<T>& p1,
                                                            const PairDistribution<T>& p2, int n)
{
    if (n < 1)
        throw ArithmeticError("convolution order must be at least 1");
    if (p1.order() < n || p2.order() < n)
        throw ArithmeticError("input tables of order " + std::to_string(std::min(p1.order(), p2.order()))
                              + " cannot give order " + std::to_string(n));
    require_admissible(p1, p2, true);
    return {p1.truncated(n), p2.truncated(n)};
}

// A = 1 + u(z) + v(w), B = u(z) v(w).
template <class T>
std::pair<V2<T>, V2<T>> a_and_b(const Series1<T>& u, const Series1<T>& v, int n)
{
    const Series2<T> uz = Series2<T>::in_z(u, n);
    const Series2<T> vw = Series2<T>::in_w(v, n);
    return {V2<T>(T(1) + uz + vw), V2<T>(uz * vw)};
}

template <class T>
V2<T> composed(const Series2<T>& f, const Series1<T>& g, const Series1<T>& h)
{
    return V2<T>(compose_slots(f, g, h));
}

template <class T>
void require_same(const V2<T>& x, const V2<T>& y, const char* what)
{
    const V2<T> d = x - y;
    if (d.is_zero())
        return;
    const double scale = std::fmax(x.max_magnitude(), y.max_magnitude());
    if (d.max_magnitude() <= 1e-9 * std::fmax(1.0, scale))
        return;
    throw ConsistencyError(std::string(what) + " differs between the two faces by "
                           + std::to_string(d.max_magnitude()));
}

} // namespace

template <class T>
Subordination<T> subordination(const PairDistribution<T>& p1, const PairDistribution<T>& p2,
                               const Series1<T>& psi_a12, const Series1<T>& psi_b12)
{
    Subordination<T> s;
    s.psi_a12 = psi_a12;
    s.psi_b12 = psi_b12;
    s.omega_a1 = subordination_series(psi_a12, psi_a(p1));
    s.omega_b1 = subordination_series(psi_b12, psi_b(p1));
    s.omega_a2 = subordination_series(psi_a12, psi_a(p2));
    s.omega_b2 = subordination_series(psi_b12, psi_b(p2));
    return s;
}

template <class T>
Subordination<T> subordination(const PairDistribution<T>& p1, const PairDistribution<T>& p2)
{
    require_admissible(p1, p2, false);
    return subordination(p1, p2, free_mult_convolve_marginal(psi_a(p1), psi_a(p2), "a1", "a2"),
                         free_mult_convolve_marginal(psi_b(p1), psi_b(p2), "b1", "b2"));
}

template <class T>
PairDistribution<T> assemble_table(int n, const Series1<T>& psi_a, const Series1<T>& psi_b,
                                   const ValuatedSeries2<T>& psi2)
{
    if (psi_a.order() < n || psi_b.order() < n)
        throw ArithmeticError("marginal series too short for a table of order " + std::to_string(n));
    const Series2<T> mixed = psi2.to_series2(n, n);
    std::vector<T> t(static_cast<std::size_t>((n + 1) * (n + 1)));
    auto at = [&](int m, int k) -> T& { return t[static_cast<std::size_t>(m * (n + 1) + k)]; };
    at(0, 0) = T(1);
    for (int k = 1; k <= n; ++k) {
        at(k, 0) = psi_a[k];
        at(0, k) = psi_b[k];
    }
    for (int m = 1; m <= n; ++m)
        for (int k = 1; k <= n; ++k)
            at(m, k) = mixed(m, k);
    return PairDistribution<T>(n, std::move(t));
}

template <class T>
PairDistribution<T> biconv_via_S(const PairDistribution<T>& p1_, const PairDistribution<T>& p2_, int n)
{
    const auto [p1, p2] = prepare(p1_, p2_, n);
    const Series1<T> alpha = free_mult_convolve_marginal(psi_a(p1), psi_a(p2), "a1", "a2");
    const Series1<T> beta = free_mult_convolve_marginal(psi_b(p1), psi_b(p2), "b1", "b2");
    const Series2<T> s12 = partial_s(p1) * partial_s(p2);
    const V2<T> s_at = composed(s12, alpha, beta);
    const auto [a, b] = a_and_b(alpha, beta, n);
    const V2<T> inv_a = a.reciprocal();
    const V2<T> inv_psi2 = (inv_a + b.reciprocal()) / s_at - inv_a;
    return assemble_table(n, alpha, beta, inv_psi2.reciprocal());
}

template <class T>
PairDistribution<T> biconv_via_germs(const PairDistribution<T>& p1_, const PairDistribution<T>& p2_, int n)
{
    const auto [p1, p2] = prepare(p1_, p2_, n);
    const Subordination<T> s = subordination(p1, p2);

    const Series1<T> a1 = compose(psi_a(p1), s.omega_a1);
    const Series1<T> b1 = compose(psi_b(p1), s.omega_b1);
    const auto [a, b] = a_and_b(a1, b1, n);
    // The second face realizes the same marginals; the formula keeps face 1 as printed.
    const auto [a_face2, b_face2] = a_and_b(compose(psi_a(p2), s.omega_a2), compose(psi_b(p2), s.omega_b2), n);
    require_same(a, a_face2, "A");
    require_same(b, b_face2, "B");

    const V2<T> r1 = composed(psi_ab(p1), s.omega_a1, s.omega_b1) / composed(big_h(p1), s.omega_a1, s.omega_b1);
    const V2<T> r2 = composed(psi_ab(p2), s.omega_a2, s.omega_b2) / composed(big_h(p2), s.omega_a2, s.omega_b2);
    const V2<T> q = one<T>(n) + a / b;
    const V2<T> den = q * q * r1 * r2;
    const V2<T> inv_a = a.reciprocal();
    const V2<T> psi2 = ((inv_a + b.reciprocal()) / den - inv_a).reciprocal();
    return assemble_table(n, s.psi_a12, s.psi_b12, psi2);
}

template <class T>
PairDistribution<T> biconv_via_quotient(const PairDistribution<T>& p1_, const PairDistribution<T>& p2_, int n)
{
    const auto [p1, p2] = prepare(p1_, p2_, n);
    const Subordination<T> s = subordination(p1, p2);

    const V2<T> a0 = a_and_b(s.psi_a12, s.psi_b12, n).first;
    const V2<T> lifted = V2<T>((T(1) + Series2<T>::in_z(s.psi_a12, n)) * (T(1) + Series2<T>::in_w(s.psi_b12, n)));
    const V2<T> eta1 = composed(psi_ab(p1), s.omega_a1, s.omega_b1) / (in_z(s.omega_a1, n) * in_w(s.omega_b1, n));
    const V2<T> psi2_face2 = composed(psi_ab(p2), s.omega_a2, s.omega_b2);
    const V2<T> h1 = composed(big_h(p1), s.omega_a1, s.omega_b1);
    const V2<T> h2 = composed(big_h(p2), s.omega_a2, s.omega_b2);
    const V2<T> zeta_a1 = in_z(compose(psi_a(p1), s.omega_a1), n) / in_z(s.omega_a1, n);
    const V2<T> zeta_b1 = in_w(compose(psi_b(p1), s.omega_b1), n) / in_w(s.omega_b1, n);

    const V2<T> common = lifted * eta1 * psi2_face2;
    const V2<T> f = a0 * common;
    const V2<T> g = h1 * h2 * zeta_a1 * zeta_b1 - common;
    if (!g.invertible() || g.valuation_z() != 0 || g.valuation_w() != 0)
        throw ArithmeticError("G has a vanishing constant term");
    return assemble_table(n, s.psi_a12, s.psi_b12, f / g);
}

template <class T>
ResidualReport<T> subordination_residual(const PairDistribution<T>& p1_, const PairDistribution<T>& p2_,
                                   const PairDistribution<T>& product)
{
    const int n = product.order();
    const auto [p1, p2] = prepare(p1_, p2_, n);
    const Subordination<T> s = subordination(p1, p2, psi_a(product), psi_b(product));

    const auto [a0, b0] = a_and_b(s.psi_a12, s.psi_b12, n);
    const V2<T> psi2(psi_ab(product));
    if (!psi2.invertible() || psi2.valuation_z() != 1 || psi2.valuation_w() != 1)
        throw PreconditionError(Precondition::zero_mixed_moment, {"phi(a1a2b1b2)=0"});
    const V2<T> lhs = psi2.reciprocal() + a0.reciprocal();

    const Series1<T> a1 = compose(psi_a(p1), s.omega_a1);
    const Series1<T> b1 = compose(psi_b(p1), s.omega_b1);
    const auto [a, b] = a_and_b(a1, b1, n);
    const V2<T> square = V2<T>((T(1) + Series2<T>::in_z(a1, n)) * (T(1) + Series2<T>::in_w(b1, n))) / b;
    const V2<T> r1 = composed(psi_ab(p1), s.omega_a1, s.omega_b1) / composed(big_h(p1), s.omega_a1, s.omega_b1);
    const V2<T> r2 = composed(psi_ab(p2), s.omega_a2, s.omega_b2) / composed(big_h(p2), s.omega_a2, s.omega_b2);
    const V2<T> rhs = (a.reciprocal() + b.reciprocal()) / (square * square * r1 * r2);

    const V2<T> cleared = (lhs - rhs) * b0;
    ResidualReport<T> r;
    r.exact_zero = cleared.is_zero();
    r.residual = cleared.max_magnitude();
    r.precision_z = cleared.precision_z();
    r.precision_w = cleared.precision_w();
    return r;
}

template <class T>
std::optional<std::pair<int, int>> first_table_mismatch(const PairDistribution<T>& p, const PairDistribution<T>& q,
                                                        const Tolerance& tol)
{
    const int n = std::min(p.order(), q.order());
    for (int d = 0; d <= 2 * n; ++d)
        for (int m = std::max(0, d - n); m <= std::min(d, n); ++m)
            if (!Field<T>::near(p(m, d - m), q(m, d - m), tol))
                return std::make_pair(m, d - m);
    return std::nullopt;
}

template <class T>
ConvolutionReport<T> convolve(const PairDistribution<T>& p1, const PairDistribution<T>& p2, int n,
                              const Tolerance& tol)
{
    require_admissible(p1, p2, true);
    ConvolutionReport<T> r{n, product_pair_moments(p1, p2, n), {}, {}, false};
    r.routes.push_back({"S", biconv_via_S(p1, p2, n), 0.0, std::nullopt});
    r.routes.push_back({"germs", biconv_via_germs(p1, p2, n), 0.0, std::nullopt});
    r.routes.push_back({"quotient", biconv_via_quotient(p1, p2, n), 0.0, std::nullopt});
    r.agree = true;
    for (auto& route : r.routes) {
        route.max_discrepancy = max_difference(route.table, r.oracle);
        route.first_mismatch = first_table_mismatch(route.table, r.oracle, tol);
        r.agree = r.agree && !route.first_mismatch;
    }
    r.subordination = subordination_residual(p1, p2, r.oracle);
    const bool residual_ok = Field<T>::mode == Mode::rational ? r.subordination.exact_zero
                                                              : (r.subordination.exact_zero || r.subordination.residual <= 1e3 * tol.abs);
    r.agree = r.agree && residual_ok;
    return r;
}

#define BIFREE_INSTANTIATE(T)                                                                                   \
    template Subordination<T> subordination<T>(const PairDistribution<T>&, const PairDistribution<T>&);       \
    template Subordination<T> subordination<T>(const PairDistribution<T>&, const PairDistribution<T>&,        \
                                               const Series1<T>&, const Series1<T>&);                         \
    template PairDistribution<T> assemble_table<T>(int, const Series1<T>&, const Series1<T>&,                 \
                                                   const ValuatedSeries2<T>&);                                \
    template PairDistribution<T> biconv_via_S<T>(const PairDistribution<T>&, const PairDistribution<T>&, int);  \
    template PairDistribution<T> biconv_via_germs<T>(const PairDistribution<T>&, const PairDistribution<T>&, int); \
    template PairDistribution<T> biconv_via_quotient<T>(const PairDistribution<T>&, const PairDistribution<T>&, int); \
    template ResidualReport<T> subordination_residual<T>(const PairDistribution<T>&, const PairDistribution<T>&,    \
                                                   const PairDistribution<T>&);                               \
    template std::optional<std::pair<int, int>> first_table_mismatch<T>(                                      \
        const PairDistribution<T>&, const PairDistribution<T>&, const Tolerance&);                            \
    template ConvolutionReport<T> convolve<T>(const PairDistribution<T>&, const PairDistribution<T>&, int,    \
                                              const Tolerance&);

BIFREE_INSTANTIATE(Rational)
BIFREE_INSTANTIATE(Complex)

#undef BIFREE_INSTANTIATE

} // namespace bifree
