#include <doctest.h>

#include "bifree/biconv.hpp"
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

PairDistribution<Q> factoring(int order)
{
    const std::vector<std::pair<Q, Q>> bern{{1, Q(3, 4)}, {-1, Q(1, 4)}};
    return moments_from_atoms<Q>(AtomicPairMeasure::product(Space::torus, bern, bern), order);
}

PairDistribution<Q> point(int s, int t, int order)
{
    return moments_from_atoms<Q>(AtomicPairMeasure::point(Space::torus, s, t), order);
}

void check_routes(const PairDistribution<Q>& p1, const PairDistribution<Q>& p2, int n)
{
    const auto oracle = product_pair_moments(p1, p2, n);
    CHECK(equal_tables(biconv_via_S(p1, p2, n), oracle));
    CHECK(equal_tables(biconv_via_germs(p1, p2, n), oracle));
    CHECK(equal_tables(biconv_via_quotient(p1, p2, n), oracle));
    const auto t = subordination_residual(p1, p2, oracle);
    CHECK(t.exact_zero);
    CHECK(t.residual == 0.0);
}

} // namespace

TEST_CASE("identity law")
{
    const auto b = bernoulli(6);
    const auto id = point(1, 1, 6);
    CHECK(equal_tables(biconv_via_S(b, id, 6), b));
    CHECK(equal_tables(biconv_via_germs(b, id, 6), b));
    CHECK(equal_tables(biconv_via_quotient(b, id, 6), b));
    CHECK(equal_tables(biconv_via_quotient(id, b, 6), b));
}

TEST_CASE("Bernoulli with itself")
{
    const auto b = bernoulli(6);
    const auto t = biconv_via_S(b, b, 6);
    CHECK(t(1, 1) == 1);
    CHECK(t(2, 0) == Q(7, 16));
    CHECK(t(0, 2) == Q(7, 16));
    check_routes(b, b, 6);
}

TEST_CASE("factoring pairs stay factoring")
{
    const auto f = factoring(6);
    const auto t = biconv_via_quotient(f, f, 6);
    CHECK(is_factoring(t));
    for (int k = 1; k <= 6; ++k)
        CHECK(t(k, 0) == free_mult_convolve_marginal(psi_a(f), psi_a(f))[k]);
    check_routes(f, f, 6);
    check_routes(f, bernoulli(6), 6);
}

TEST_CASE("routes agree with the oracle on random pairs")
{
    MeasureSampler s(7);
    for (int trial = 0; trial < 8; ++trial) {
        const auto p1 = moments_from_atoms<Q>(s.admissible(), 6);
        const auto p2 = moments_from_atoms<Q>(s.admissible(), 6);
        check_routes(p1, p2, 6);
        const auto oracle = product_pair_moments(p1, p2, 6);
        CHECK(is_constant(partial_s(oracle) - partial_s(p1) * partial_s(p2), Q(0)));
    }
}

TEST_CASE("scalar atoms multiply moments")
{
    MeasureSampler s(13);
    const auto p = moments_from_atoms<Q>(s.admissible(), 5);
    for (const auto& [u, v] : std::vector<std::pair<int, int>>{{-1, 1}, {1, -1}, {-1, -1}}) {
        const auto t = biconv_via_germs(p, point(u, v, 5), 5);
        for (int m = 0; m <= 5; ++m)
            for (int n = 0; n <= 5; ++n)
                CHECK(t(m, n) == p(m, n) * ((m % 2 && u < 0) ? -1 : 1) * ((n % 2 && v < 0) ? -1 : 1));
    }
}

TEST_CASE("report and preconditions")
{
    const auto b = bernoulli(5);
    const auto r = convolve(b, b, 5);
    CHECK(r.agree);
    REQUIRE(r.routes.size() == 3);
    CHECK(r.routes[1].name == "germs");
    for (const auto& route : r.routes) {
        CHECK(route.max_discrepancy == 0.0);
        CHECK_FALSE(route.first_mismatch);
    }

    const auto haar = moments_from_atoms<Q>(
        AtomicPairMeasure(Space::torus, {Atom{{1, 0}, {1, 0}, Q(1, 2)}, Atom{{-1, 0}, {-1, 0}, Q(1, 2)}}), 5);
    try {
        biconv_via_S(haar, b, 5);
        FAIL("expected a precondition error");
    } catch (const PreconditionError& e) {
        CHECK(e.kind() == Precondition::zero_first_moment_a);
        CHECK(e.failures().front() == "phi(a1)=0");
    }
    CHECK_THROWS_AS(convolve(b, haar, 5), PreconditionError);
    CHECK_THROWS_AS(biconv_via_S(b, b, 6), ArithmeticError);
}

TEST_CASE("complex mode routes")
{
    MeasureSampler s(31);
    for (int trial = 0; trial < 3; ++trial) {
        const auto p1 = moments_from_atoms<Complex>(s.complex_torus(), 6);
        const auto p2 = moments_from_atoms<Complex>(s.complex_torus(), 6);
        const auto r = convolve(p1, p2, 6);
        CHECK(r.agree);
        for (const auto& route : r.routes)
            CHECK(route.max_discrepancy < 1e-8);
        CHECK(r.subordination.residual < 1e-8);
    }
}
