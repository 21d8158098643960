#include "bifree/verify.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

#include "bifree/biconv.hpp"
#include "bifree/free_oracle.hpp"
#include "bifree/matrix_s.hpp"
#include "bifree/sampling.hpp"
#include "bifree/transforms.hpp"
#include "bifree/ut_gamma.hpp"
#include "bifree/valuated.hpp"

namespace bifree {

namespace {

using Q = Rational;

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Context {
    MeasureSampler sampler;
    int order;
    int cases;
    int done = 0;
};

void check(bool ok, const std::string& what)
{
    if (!ok)
        throw Failure(what);
}

PairDistribution<Q> table(const AtomicPairMeasure& mu, int n)
{
    return moments_from_atoms<Q>(mu, n);
}

PairDistribution<Q> point(int s, int t, int n)
{
    return table(AtomicPairMeasure::point(Space::torus, s, t), n);
}

PairDistribution<Q> bernoulli(int n)
{
    return table(AtomicPairMeasure(Space::torus, {Atom{{1, 0}, {1, 0}, Q(3, 4)}, Atom{{-1, 0}, {-1, 0}, Q(1, 4)}}),
                 n);
}

Q small_rational(MeasureSampler& s)
{
    Q q(s.integer(-5, 5), s.integer(1, 4));
    q.canonicalize();
    return q;
}

Series1<Q> random_series(MeasureSampler& s, int n, bool invertible_under_composition)
{
    Series1<Q> f(n);
    for (int k = 0; k <= n; ++k)
        f[k] = small_rational(s);
    if (invertible_under_composition) {
        f[0] = 0;
        while (f[1] == 0)
            f[1] = small_rational(s);
    } else {
        while (f[0] == 0)
            f[0] = small_rational(s);
    }
    return f;
}

Series2<Q> random_series2(MeasureSampler& s, int n)
{
    Series2<Q> f(n, n);
    for (int j = 0; j <= n; ++j)
        for (int k = 0; k <= n; ++k)
            f(j, k) = small_rational(s);
    return f;
}

bool is_variable(const Series1<Q>& f)
{
    for (int k = 0; k <= f.order(); ++k)
        if (f[k] != (k == 1 ? 1 : 0))
            return false;
    return true;
}

bool canonical(const ValuatedSeries2<Q>& v)
{
    if (v.is_zero())
        return true;
    return !v.unit().row_vanishes(0, 0.0) && !v.unit().column_vanishes(0, 0.0);
}

std::string at(int m, int n)
{
    return "(" + std::to_string(m) + "," + std::to_string(n) + ")";
}

void tables_equal(const PairDistribution<Q>& got, const PairDistribution<Q>& want, const std::string& what)
{
    if (const auto d = first_table_mismatch(got, want))
        throw Failure(what + " differs at " + at(d->first, d->second) + ": " + format_rational(got(d->first, d->second))
                      + " vs " + format_rational(want(d->first, d->second)));
}

void series_round_trips(Context& c)
{
    const int n = c.order;
    for (; c.done < c.cases; ++c.done) {
        const Series1<Q> f = random_series(c.sampler, n, true);
        const Series1<Q> g = invert(f);
        check(is_variable(compose(f, g)), "f(f^{-1}(z)) != z");
        check(is_variable(compose(g, f)), "f^{-1}(f(z)) != z");
        check(equal_on_common(g, invert(f, InversionMethod::triangular)), "Newton and triangular inverses differ");
        const Series1<Q> u = random_series(c.sampler, n, false);
        check(equal_on_common(u * reciprocal(u), Series1<Q>::constant(n, Q(1))), "f * (1/f) != 1");
    }
}

void ut_and_valuated(Context& c)
{
    const int n = c.order;
    auto ut = [&] {
        UTGammaSeries<Q> a{random_series2(c.sampler, n), random_series2(c.sampler, n), random_series2(c.sampler, n)};
        return a;
    };
    for (; c.done < c.cases; ++c.done) {
        const auto a = ut();
        const auto b = ut();
        const auto d = ut();
        check(!first_discrepancy((a * b) * d, a * (b * d)), "UT product not associative");

        Series2<Q> x = random_series2(c.sampler, n);
        x(0, 0) = Q(1);
        const ValuatedSeries2<Q> v(x.shifted(1, 2).truncated(n, n));
        Series2<Q> ys = random_series2(c.sampler, n);
        ys(0, 0) = Q(2);
        const ValuatedSeries2<Q> y(ys);
        for (const auto& r : {v * y, v + y, v - v, v / ValuatedSeries2<Q>(x), y * y.reciprocal() - y * y.reciprocal()})
            check(canonical(r), "valuated result not in canonical form");
        check(v.valuation_z() == 1 && v.valuation_w() == 2, "valuation not maximal");
    }
}

void product_measures_factor(Context& c)
{
    for (; c.done < c.cases; ++c.done)
        check(is_factoring(table(c.sampler.factoring(), c.order)), "product measure does not factor");
}

void oracle_words(Context& c)
{
    const auto words = canonical_words(std::min(8, c.order));
    const int laws = std::max(2, c.cases / 2);
    for (int k = 0; k < laws; ++k, ++c.done) {
        FreeProductOracle<Q> o(table(c.sampler.two_atom_signs(), 8), table(c.sampler.two_atom_signs(), 8));
        for (const Word& w : words)
            if (o.word_moment(w) != o.nc_word_moment(w))
                throw Failure("word_moment and nc_word_moment differ on " + w.to_string());
    }
}

void oracle_traciality(Context& c)
{
    for (; c.done < c.cases; ++c.done) {
        FreeProductOracle<Q> o(table(c.sampler.admissible(), 8), table(c.sampler.two_atom_signs(), 8));
        std::vector<Letter> letters;
        const int len = c.sampler.integer(2, 8);
        for (int k = 0; k < len; ++k) {
            Letter l;
            l.algebra = c.sampler.integer(1, 2);
            (c.sampler.integer(0, 1) ? l.x : l.y) = 1;
            letters.push_back(l);
        }
        const Q base = o.word_moment(Word(letters));
        for (int r = 1; r < len; ++r) {
            std::rotate(letters.begin(), letters.begin() + 1, letters.end());
            check(o.nc_word_moment(Word(letters)) == base, "trace changes under rotation of " + Word(letters).to_string());
        }
    }
}

void oracle_factorization(Context& c)
{
    for (; c.done < c.cases; ++c.done) {
        const auto p1 = table(c.sampler.admissible(), c.order);
        const auto p2 = table(c.sampler.admissible(), c.order);
        const auto q = product_pair_moments(p1, p2, c.order);
        check(q(1, 1) == p1(1, 1) * p2(1, 1), "M(1,1) of the product is not M1(1,1) M2(1,1)");
        const Series1<Q> a = free_mult_convolve_marginal(psi_a(p1), psi_a(p2));
        const Series1<Q> b = free_mult_convolve_marginal(psi_b(p1), psi_b(p2), "b1", "b2");
        for (int m = 1; m <= c.order; ++m) {
            check(q(m, 0) == a[m], "a-marginal of the product differs from S-transform convolution at " + at(m, 0));
            check(q(0, m) == b[m], "b-marginal of the product differs from S-transform convolution at " + at(0, m));
        }
    }
}

void transform_identities(Context& c)
{
    for (; c.done < c.cases; ++c.done) {
        const auto p = table(c.sampler.admissible(), c.order);
        const Series1<Q> pa = psi_a(p);
        check(is_variable(compose(pa, invert(pa))), "psi_a(psi_a^{-1}(z)) != z");
        check(equal_on_common(eta(pa), pa * reciprocal(Q(1) + pa)), "eta != psi / (1 + psi)");
        check(partial_s(p)(0, 0) == p(1, 1) / (p(1, 0) * p(0, 1)), "S_ab(0,0) != M(1,1) / (M(1,0) M(0,1))");
        const auto p2 = table(c.sampler.admissible(), c.order);
        const Series1<Q> target = free_mult_convolve_marginal(pa, psi_a(p2));
        check(equal_on_common(compose(pa, subordination_series(target, pa)), target), "psi o omega != target");
    }
}

void factoring_iff_trivial(Context& c)
{
    for (; c.done < c.cases; ++c.done) {
        const auto mu = c.done % 2 ? c.sampler.factoring() : c.sampler.admissible();
        const auto p = table(mu, c.order);
        check(is_factoring(p) == is_constant(partial_s(p), Q(1)), "factoring and partial S == 1 disagree");
    }
}

void partial_s_multiplicative(Context& c)
{
    for (; c.done < c.cases; ++c.done) {
        const auto p1 = table(c.sampler.admissible(), c.order);
        const auto p2 = table(c.sampler.admissible(), c.order);
        const auto q = product_pair_moments(p1, p2, c.order);
        const auto d = first_discrepancy(partial_s(q), partial_s(p1) * partial_s(p2));
        if (d)
            throw Failure("S of the product differs from S1 S2 at " + at(d->j, d->k));
    }
}

void route_agreement(Context& c)
{
    for (; c.done < c.cases; ++c.done) {
        const auto p1 = table(c.sampler.admissible(), c.order);
        const auto p2 = table(c.done % 3 == 2 ? c.sampler.factoring() : c.sampler.admissible(), c.order);
        const auto r = convolve(p1, p2, c.order);
        for (const auto& route : r.routes)
            tables_equal(route.table, r.oracle, "route " + route.name);
        check(r.subordination.exact_zero, "subordination equation residual is not zero");
    }
}

void identity_and_scalars(Context& c)
{
    for (; c.done < c.cases; ++c.done) {
        const auto p = table(c.sampler.admissible(), c.order);
        const int s = c.sampler.integer(0, 1) ? 1 : -1;
        const int t = c.sampler.integer(0, 1) ? 1 : -1;
        const auto d = point(s, t, c.order);
        const auto oracle = product_pair_moments(p, d, c.order);
        for (int m = 0; m <= c.order; ++m)
            for (int n = 0; n <= c.order; ++n)
                check(oracle(m, n) == p(m, n) * ((m % 2 && s < 0) ? -1 : 1) * ((n % 2 && t < 0) ? -1 : 1),
                      "oracle scalar equivariance at " + at(m, n));
        tables_equal(biconv_via_S(p, d, c.order), oracle, "route S with a scalar pair");
        tables_equal(biconv_via_germs(p, d, c.order), oracle, "germ route with a scalar pair");
        tables_equal(biconv_via_quotient(p, d, c.order), oracle, "quotient route with a scalar pair");
        const auto id = point(1, 1, c.order);
        tables_equal(biconv_via_S(p, id, c.order), p, "identity law, route S");
        tables_equal(biconv_via_germs(id, p, c.order), p, "identity law, germ route");
        tables_equal(biconv_via_quotient(p, id, c.order), p, "identity law, quotient route");
    }
}

void matrix_derivations(Context& c)
{
    for (; c.done < c.cases; ++c.done) {
        const auto p1 = table(c.sampler.admissible(), c.order);
        const auto p2 = table(c.sampler.admissible(), c.order);
        // both throw ConsistencyError when their two derivations disagree
        s_X(p1);
        dykema_rhs(p1, p2);
        const auto inv = psi_X_inverse(p1);
        const auto g = psi_X_at(p1, invert(psi_a(p1)), invert(psi_b(p1)), inv.off);
        check(!first_discrepancy(g, UTGammaSeries<Q>::gamma(c.order, c.order)), "Psi_X(Psi_X^{-1}(Gamma)) != Gamma");
    }
}

void dykema_equivalence(Context& c)
{
    for (; c.done < c.cases; ++c.done) {
        const auto p1 = table(c.done % 3 == 0 ? c.sampler.factoring() : c.sampler.admissible(), c.order);
        const auto p2 = table(c.sampler.admissible(), c.order);
        const auto r = dykema_check(p1, p2, c.order);
        const bool trivial = is_constant(partial_s(p1), Q(1)) || is_constant(partial_s(p2), Q(1));
        check(r.holds == trivial, "twisted equation holds != some partial S is 1");
    }
}

void limits(Context& c)
{
    for (; c.done < c.cases; ++c.done) {
        const auto p1 = table(c.sampler.admissible(), c.order);
        const auto p2 = table(c.sampler.admissible(), c.order);
        const auto q = product_pair_moments(p1, p2, c.order);
        check(q(1, 1) == p1(1, 1) * p2(1, 1), "phi(a1a2b1b2) != phi(a1b1) phi(a2b2)");
        const auto r = dykema_check(p1, p2, q);
        check(r.lhs.off(0, 0) == r.limit_lhs12, "zeta coefficient of S_X1X2 at 0 != closed form");
        check(r.rhs.off(0, 0) == r.limit_rhs12, "zeta coefficient of the twisted product at 0 != closed form");
        check(r.lhs.d1(0, 0) == r.limit_d1 && r.lhs.d2(0, 0) == r.limit_d2, "diagonal limits differ");
    }
}

void non_factoring_fails_at_zero(Context& c)
{
    for (; c.done < c.cases; ++c.done) {
        const auto p1 = table(c.sampler.non_factoring(), c.order);
        const auto p2 = table(c.sampler.non_factoring(), c.order);
        const auto r = dykema_check(p1, p2, c.order);
        check(!r.holds, "twisted equation holds for two non-factoring pairs");
        check(r.first_discrepancy && std::string(r.first_discrepancy->entry) == "off"
                  && r.first_discrepancy->at.j == 0 && r.first_discrepancy->at.k == 0,
              "first discrepancy is not the constant zeta coefficient");
    }
}

void matrix_subordination(Context& c)
{
    for (; c.done < c.cases; ++c.done) {
        const auto p1 = table(c.sampler.factoring(), c.order);
        const auto p2 = table(c.sampler.factoring(), c.order);
        const auto r = matrix_subordination_check(p1, p2, c.order);
        check(r.holds && r.residual1 == 0.0 && r.residual2 == 0.0, "Psi_X1X2 != Psi_Xj(omega_j)");
        bool rejected = false;
        try {
            matrix_subordination_check(table(c.sampler.non_factoring(), c.order), p2, c.order);
        } catch (const PreconditionError& e) {
            rejected = e.kind() == Precondition::not_factoring;
        }
        check(rejected, "non-factoring input not rejected");
    }
}

void complex_routes(Context& c)
{
    for (; c.done < std::max(1, c.cases / 3); ++c.done) {
        const auto p1 = moments_from_atoms<Complex>(c.sampler.complex_torus(), c.order);
        const auto p2 = moments_from_atoms<Complex>(c.sampler.complex_torus(), c.order);
        const auto r = convolve(p1, p2, c.order);
        check(r.agree, "complex routes disagree with the oracle");
    }
}

void bernoulli_values(Context& c)
{
    const int n = std::max(c.order, 3);
    const auto b = bernoulli(n);
    const auto t = biconv_via_S(b, b, n);
    check(t(1, 1) == 1 && t(2, 0) == Q(7, 16), "B with B: M(1,1) or M(2,0) wrong");
    const Series1<Q> s = s_transform(psi_a(b));
    check(s[0] == 2 && s[1] == -6 && s[2] == 48, "S_B wrong");
    check(partial_s(b)(0, 0) == 4, "partial S of B at 0 wrong");
    const auto r = dykema_check(b, b, n);
    check(!r.holds && r.limit_lhs12 == -60 && r.limit_rhs12 == -24, "B with B twisted limits wrong");
    c.done = 1;
}

struct Property {
    const char* name;
    std::function<void(Context&)> run;
};

const std::vector<Property>& properties()
{
    static const std::vector<Property> all{
        {"series.round_trips", series_round_trips},
        {"series.ut_and_valuated", ut_and_valuated},
        {"measures.product_factors", product_measures_factor},
        {"oracle.word_vs_noncrossing", oracle_words},
        {"oracle.traciality", oracle_traciality},
        {"oracle.factorization_and_marginals", oracle_factorization},
        {"transforms.identities", transform_identities},
        {"transforms.factoring_iff_trivial_s", factoring_iff_trivial},
        {"biconv.partial_s_multiplicative", partial_s_multiplicative},
        {"biconv.route_agreement", route_agreement},
        {"biconv.identity_and_scalars", identity_and_scalars},
        {"matrix.derivations_agree", matrix_derivations},
        {"matrix.twisted_iff_trivial_s", dykema_equivalence},
        {"matrix.limits", limits},
        {"matrix.non_factoring_fails_at_zero", non_factoring_fails_at_zero},
        {"matrix.subordination", matrix_subordination},
        {"complex.route_agreement", complex_routes},
        {"worked.bernoulli", bernoulli_values},
    };
    return all;
}

} // namespace

bool VerifyReport::passed() const
{
    return first_failure() == nullptr;
}

const PropertyResult* VerifyReport::first_failure() const
{
    for (const auto& r : results)
        if (!r.passed)
            return &r;
    return nullptr;
}

std::vector<std::string> verify_property_names()
{
    std::vector<std::string> names;
    for (const auto& p : properties())
        names.emplace_back(p.name);
    return names;
}

VerifyReport run_verify(std::uint64_t seed, int order, const VerifyOptions& options)
{
    if (order < 2)
        throw ArithmeticError("verify needs order >= 2");
    VerifyReport report;
    report.seed = seed;
    report.order = order;
    std::uint64_t index = 0;
    for (const auto& p : properties()) {
        // one independent stream per property, so results do not depend on which ran before
        Context c{MeasureSampler(seed * 1000003u + index++), order, options.cases};
        PropertyResult r;
        r.name = p.name;
        try {
            p.run(c);
        } catch (const Failure& e) {
            r.passed = false;
            r.detail = e.what();
        } catch (const std::exception& e) {
            r.passed = false;
            r.detail = std::string("unexpected error: ") + e.what();
        }
        r.cases = r.passed ? c.done : c.done + 1;
        report.results.push_back(r);
        if (!r.passed && options.stop_on_failure)
            break;
    }
    return report;
}

} // namespace bifree
