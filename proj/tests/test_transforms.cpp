#include <doctest.h>

#include "bifree/free_oracle.hpp"
#include "bifree/sampling.hpp"
#include "bifree/transforms.hpp"

using namespace bifree;

namespace {

using Q = Rational;

PairDistribution<Q> bernoulli(int order)
{
    return moments_from_atoms<Q>(
        AtomicPairMeasure(Space::torus, {Atom{{1, 0}, {1, 0}, Q(3, 4)}, Atom{{-1, 0}, {-1, 0}, Q(1, 4)}}), order);
}

PairDistribution<Q> point(int s, int t, int order)
{
    return moments_from_atoms<Q>(AtomicPairMeasure::point(Space::torus, s, t), order);
}

bool is_one(const Series1<Q>& s)
{
    for (int k = 0; k <= s.order(); ++k)
        if (s[k] != (k == 0 ? 1 : 0))
            return false;
    return true;
}

} // namespace

TEST_CASE("identity law transforms are trivial")
{
    const auto p = point(1, 1, 6);
    const auto b = bundle(p);
    for (int k = 1; k <= 6; ++k)
        CHECK(b.psi_a[k] == 1);
    for (int m = 0; m <= 6; ++m)
        for (int n = 0; n <= 6; ++n)
            CHECK(b.h_ab(m, n) == 1);
    REQUIRE(b.s_a);
    CHECK(b.s_a->order() == 5);
    CHECK(is_one(*b.s_a));
    CHECK(is_one(*b.s_b));
    CHECK(is_constant(*b.partial_s, Q(1)));
    CHECK(is_constant(*b.sigma, Q(1)));
    CHECK(b.missing.empty());
}

TEST_CASE("Bernoulli S-transforms")
{
    const auto p = bernoulli(6);
    const Series1<Q> s = s_transform(psi_a(p));
    CHECK(s[0] == 2);
    CHECK(s[1] == -6);
    CHECK(s[2] == 48);
    const Series2<Q> ps = partial_s(p);
    CHECK(ps.order_z() == 5);
    CHECK(ps(0, 0) == 4);
    CHECK(ps(0, 0) == p(1, 1) / (p(1, 0) * p(0, 1)));
    CHECK_FALSE(is_constant(ps, Q(1)));
}

TEST_CASE("partial S constant term and factoring")
{
    MeasureSampler s(11);
    for (int trial = 0; trial < 10; ++trial) {
        const auto p = moments_from_atoms<Q>(s.admissible(), 5);
        CHECK(partial_s(p)(0, 0) == p(1, 1) / (p(1, 0) * p(0, 1)));
        CHECK(is_constant(partial_s(p), Q(1)) == is_factoring(p));

        const auto f = moments_from_atoms<Q>(s.factoring(), 5);
        CHECK(is_constant(partial_s(f), Q(1)));
        CHECK(is_constant(sigma_transform(f), Q(1)));
    }
}

TEST_CASE("haar pair has no S-transforms")
{
    const auto mu = AtomicPairMeasure(Space::torus, {Atom{{1, 0}, {1, 0}, Q(1, 2)}, Atom{{-1, 0}, {-1, 0}, Q(1, 2)}});
    const auto p = moments_from_atoms<Q>(mu, 4);
    const auto b = bundle(p);
    CHECK_FALSE(b.s_a);
    CHECK_FALSE(b.partial_s);
    REQUIRE(b.missing.size() == 2);
    CHECK(b.missing[0] == "phi(a)=0");
    try {
        partial_s(p);
        FAIL("expected a precondition error");
    } catch (const PreconditionError& e) {
        CHECK(e.kind() == Precondition::zero_first_moment_a);
        CHECK(e.failures().size() == 2);
    }
    CHECK_THROWS_AS(s_transform(psi_b(p), "b1"), PreconditionError);
}

TEST_CASE("subordination germ and marginal convolution")
{
    const auto p = bernoulli(6);
    const Series1<Q> conv = free_mult_convolve_marginal(psi_a(p), psi_a(p));
    CHECK(conv[1] == Q(1, 4));
    CHECK(conv[2] == Q(7, 16));

    const auto table = product_pair_moments(p, p, 6);
    for (int k = 1; k <= 6; ++k)
        CHECK(conv[k] == table(k, 0));

    const Series1<Q> omega = subordination_series(conv, psi_a(p));
    CHECK(omega[0] == 0);
    CHECK(omega[1] == Q(1, 2));
    CHECK(omega[2] == Q(3, 8));
    CHECK(equal_on_common(compose(psi_a(p), omega), conv));

    // multiplying by the scalar -1 flips odd moments
    const Series1<Q> flipped = free_mult_convolve_marginal(psi_a(p), psi_a(point(-1, -1, 6)));
    for (int k = 1; k <= 6; ++k)
        CHECK(flipped[k] == p(k, 0) * (k % 2 ? -1 : 1));
}

TEST_CASE("marginal convolution matches the oracle on random laws")
{
    MeasureSampler s(4);
    for (int trial = 0; trial < 8; ++trial) {
        const auto p1 = moments_from_atoms<Q>(s.admissible(), 6);
        const auto p2 = moments_from_atoms<Q>(s.admissible(), 6);
        const auto table = product_pair_moments(p1, p2, 6);
        const Series1<Q> a = free_mult_convolve_marginal(psi_a(p1), psi_a(p2));
        const Series1<Q> b = free_mult_convolve_marginal(psi_b(p1), psi_b(p2), "b1", "b2");
        for (int k = 1; k <= 6; ++k) {
            CHECK(a[k] == table(k, 0));
            CHECK(b[k] == table(0, k));
        }
    }
}

TEST_CASE("eta, zeta and g")
{
    const auto p = bernoulli(5);
    const Series1<Q> psi = psi_a(p);
    const Series1<Q> e = eta(psi);
    CHECK(equal_on_common(e * (Q(1) + psi), psi));
    CHECK(zeta(psi)[0] == p(1, 0));
    const Series2<Q> g = g_series(p);
    CHECK(g(0, 0) == 1);
    CHECK(g(1, 0) == 2 * p(1, 0));
    CHECK(g(2, 3) == 4 * p(2, 3));
    const auto v = eta_ab(p);
    CHECK(v.valuation_z() == 0);
    CHECK(v.coefficient(0, 0) == p(1, 1));
}

TEST_CASE("complex mode transforms")
{
    MeasureSampler s(2);
    const auto mu = s.complex_torus();
    const auto p = moments_from_atoms<Complex>(mu, 5);
    const Series1<Complex> sa = s_transform(psi_a(p));
    const Series1<Complex> back = (sa * reciprocal(Complex(1) + Series1<Complex>::variable(4))).shifted_up(1);
    CHECK(equal_on_common(invert(back), psi_a(p)));
    const Series2<Complex> ps = partial_s(p);
    CHECK(std::abs(ps(0, 0) - p(1, 1) / (p(1, 0) * p(0, 1))) < 1e-12);
}
