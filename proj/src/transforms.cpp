#include "bifree/transforms.hpp"

namespace bifree {

namespace {

template <class T>
Series2<T> one_plus_z_plus_w(int nz, int nw)
{
    return Series2<T>::constant(nz, nw, T(1)) + Series2<T>::monomial(nz, nw, 1, 0, T(1))
           + Series2<T>::monomial(nz, nw, 0, 1, T(1));
}

template <class T>
Series2<T> one_plus_z_times_one_plus_w(int nz, int nw)
{
    return one_plus_z_plus_w<T>(nz, nw) + Series2<T>::monomial(nz, nw, 1, 1, T(1));
}

// Zeroes row 0 and column 0 when they vanish (up to rounding in complex mode).
template <class T>
void require_divisible_by_zw(Series2<T>& s, const char* what)
{
    const double scale = s.max_magnitude();
    for (int j = 0; j <= s.order_z(); ++j)
        for (int k = 0; k <= s.order_w(); ++k) {
            if (j != 0 && k != 0)
                continue;
            if (!Field<T>::negligible(s(j, k), scale))
                throw ConsistencyError(std::string(what) + ": coefficient (" + std::to_string(j) + ","
                                       + std::to_string(k) + ") should vanish but is " + format_plain(s(j, k)));
            s(j, k) = T(0);
        }
}

template <class T>
std::vector<std::pair<Precondition, std::string>> failures(const PairDistribution<T>& p, const std::string& label,
                                                           bool need_mixed)
{
    std::vector<std::pair<Precondition, std::string>> f;
    if (p.order() < 1)
        throw ArithmeticError("moment table of order 0 has no first moments");
    if (Field<T>::is_zero(p(1, 0)))
        f.emplace_back(Precondition::zero_first_moment_a, "phi(a" + label + ")=0");
    if (Field<T>::is_zero(p(0, 1)))
        f.emplace_back(Precondition::zero_first_moment_b, "phi(b" + label + ")=0");
    if (need_mixed && Field<T>::is_zero(p(1, 1)))
        f.emplace_back(Precondition::zero_mixed_moment, "phi(a" + label + "b" + label + ")=0");
    return f;
}

[[noreturn]] void raise(const std::vector<std::pair<Precondition, std::string>>& f)
{
    std::vector<std::string> names;
    for (const auto& [kind, name] : f)
        names.push_back(name);
    throw PreconditionError(f.front().first, names);
}

} // namespace

template <class T>
void require_admissible(const PairDistribution<T>& p, const std::string& label, bool need_mixed)
{
    const auto f = failures(p, label, need_mixed);
    if (!f.empty())
        raise(f);
}

template <class T>
void require_admissible(const PairDistribution<T>& p1, const PairDistribution<T>& p2, bool need_mixed)
{
    auto f = failures(p1, "1", need_mixed);
    const auto f2 = failures(p2, "2", need_mixed);
    f.insert(f.end(), f2.begin(), f2.end());
    if (!f.empty())
        raise(f);
}

template <class T>
Series1<T> psi_a(const PairDistribution<T>& p)
{
    Series1<T> s(p.order());
    for (int k = 1; k <= p.order(); ++k)
        s[k] = p(k, 0);
    return s;
}

template <class T>
Series1<T> psi_b(const PairDistribution<T>& p)
{
    Series1<T> s(p.order());
    for (int k = 1; k <= p.order(); ++k)
        s[k] = p(0, k);
    return s;
}

template <class T>
Series2<T> big_h(const PairDistribution<T>& p)
{
    Series2<T> s(p.order(), p.order());
    for (int m = 0; m <= p.order(); ++m)
        for (int n = 0; n <= p.order(); ++n)
            s(m, n) = p(m, n);
    return s;
}

template <class T>
Series2<T> psi_ab(const PairDistribution<T>& p)
{
    Series2<T> s(p.order(), p.order());
    for (int m = 1; m <= p.order(); ++m)
        for (int n = 1; n <= p.order(); ++n)
            s(m, n) = p(m, n);
    return s;
}

template <class T>
Series1<T> eta(const Series1<T>& psi)
{
    return psi * reciprocal(T(1) + psi);
}

template <class T>
Series1<T> zeta(const Series1<T>& psi)
{
    return psi.shifted_down(1);
}

template <class T>
ValuatedSeries2<T> eta_ab(const PairDistribution<T>& p)
{
    const int n = p.order();
    return ValuatedSeries2<T>(psi_ab(p)) * ValuatedSeries2<T>(Series2<T>::constant(n - 1, n - 1, T(1)), -1, -1);
}

template <class T>
Series1<T> s_transform(const Series1<T>& psi, const std::string& label)
{
    if (psi.order() < 1 || Field<T>::is_zero(psi[1]))
        throw PreconditionError(!label.empty() && label[0] == 'b' ? Precondition::zero_first_moment_b
                                                                  : Precondition::zero_first_moment_a,
                                {"phi(" + label + ")=0"});
    const Series1<T> inv = invert(psi);
    const int n = psi.order() - 1;
    return inv.shifted_down(1) * (T(1) + Series1<T>::variable(n));
}

template <class T>
Series2<T> partial_s(const PairDistribution<T>& p)
{
    require_admissible(p, "", false);
    const int n = p.order();
    const Series2<T> h = compose_slots(big_h(p), invert(psi_a(p)), invert(psi_b(p)));
    Series2<T> bracket = T(1) - one_plus_z_plus_w<T>(n, n) * reciprocal(h);
    require_divisible_by_zw(bracket, "partial S-transform bracket");
    return bracket.shifted(-1, -1) * one_plus_z_times_one_plus_w<T>(n - 1, n - 1);
}

template <class T>
Series2<T> sigma_transform(const PairDistribution<T>& p)
{
    const Series2<T> s = partial_s(p);
    Series1<T> g(s.order_z());
    for (int k = 1; k <= g.order(); ++k)
        g[k] = T(1);
    return compose_slots(s, g, g);
}

template <class T>
Series1<T> subordination_series(const Series1<T>& psi_target, const Series1<T>& psi_factor)
{
    if (psi_factor.order() < 1 || Field<T>::is_zero(psi_factor[1]))
        throw PreconditionError(Precondition::zero_first_moment_a, {"linear coefficient of the factor is 0"});
    return compose(invert(psi_factor), psi_target);
}

template <class T>
Series1<T> free_mult_convolve_marginal(const Series1<T>& psi1, const Series1<T>& psi2, const std::string& label1,
                                       const std::string& label2)
{
    const Series1<T> s = s_transform(psi1, label1) * s_transform(psi2, label2);
    const Series1<T> inv = (s * reciprocal(T(1) + Series1<T>::variable(s.order()))).shifted_up(1);
    return invert(inv);
}

template <class T>
Series2<T> g_series(const PairDistribution<T>& p)
{
    const int n = p.order();
    return T(4) * psi_ab(p) + T(2) * (Series2<T>::in_z(psi_a(p), n) + Series2<T>::in_w(psi_b(p), n)) + T(1);
}

template <class T>
TransformBundle<T> bundle(const PairDistribution<T>& p)
{
    TransformBundle<T> b;
    b.order = p.order();
    b.psi_a = psi_a(p);
    b.psi_b = psi_b(p);
    b.psi_ab = psi_ab(p);
    b.h_a = T(1) + b.psi_a;
    b.h_b = T(1) + b.psi_b;
    b.h_ab = big_h(p);
    b.eta_a = eta(b.psi_a);
    b.eta_b = eta(b.psi_b);
    for (const auto& [kind, name] : failures(p, "", false))
        b.missing.push_back(name);
    if (b.missing.empty()) {
        b.s_a = s_transform(b.psi_a, "a");
        b.s_b = s_transform(b.psi_b, "b");
        b.partial_s = partial_s(p);
        b.sigma = sigma_transform(p);
    }
    return b;
}

#define BIFREE_INSTANTIATE(T)                                                                                 \
    template Series1<T> psi_a<T>(const PairDistribution<T>&);                                                 \
    template Series1<T> psi_b<T>(const PairDistribution<T>&);                                                 \
    template Series2<T> psi_ab<T>(const PairDistribution<T>&);                                                \
    template Series2<T> big_h<T>(const PairDistribution<T>&);                                                 \
    template Series1<T> eta<T>(const Series1<T>&);                                                            \
    template Series1<T> zeta<T>(const Series1<T>&);                                                           \
    template ValuatedSeries2<T> eta_ab<T>(const PairDistribution<T>&);                                        \
    template Series1<T> s_transform<T>(const Series1<T>&, const std::string&);                                \
    template Series2<T> partial_s<T>(const PairDistribution<T>&);                                             \
    template Series2<T> sigma_transform<T>(const PairDistribution<T>&);                                       \
    template Series1<T> subordination_series<T>(const Series1<T>&, const Series1<T>&);                        \
    template Series1<T> free_mult_convolve_marginal<T>(const Series1<T>&, const Series1<T>&, const std::string&,      \
                                                        const std::string&);                                  \
    template Series2<T> g_series<T>(const PairDistribution<T>&);                                              \
    template TransformBundle<T> bundle<T>(const PairDistribution<T>&);                                        \
    template void require_admissible<T>(const PairDistribution<T>&, const std::string&, bool);                \
    template void require_admissible<T>(const PairDistribution<T>&, const PairDistribution<T>&, bool);

BIFREE_INSTANTIATE(Rational)
BIFREE_INSTANTIATE(Complex)

#undef BIFREE_INSTANTIATE

} // namespace bifree
