#include <doctest.h>

#include "bifree/measure.hpp"
#include "bifree/sampling.hpp"

using namespace bifree;

namespace {

const char* bernoulli_json = R"({"space": "torus", "atoms": [
  {"s": "1", "t": "1", "w": "3/4"},
  {"s": "-1", "t": "-1", "w": "1/4"}]})";

} // namespace

TEST_CASE("point mass moments")
{
    const auto p = moments_from_atoms<Rational>(AtomicPairMeasure::point(Space::torus, 1, 1), 5);
    for (int m = 0; m <= 5; ++m)
        for (int n = 0; n <= 5; ++n)
            CHECK(p(m, n) == 1);
    CHECK(is_factoring(p));
}

TEST_CASE("Bernoulli pair")
{
    const auto mu = parse_measure_json(bernoulli_json);
    CHECK(mu.is_real());
    CHECK(resolve_mode(mu, std::nullopt) == Mode::rational);
    const auto p = moments_from_atoms<Rational>(mu, 4);
    CHECK(p(1, 0) == Rational(1, 2));
    CHECK(p(0, 1) == Rational(1, 2));
    CHECK(p(1, 1) == 1);
    CHECK(p(2, 0) == 1);
    CHECK(p(3, 2) == Rational(1, 2));
    CHECK(p.first_moments_nonzero());
    CHECK(p.mixed_nonzero());
    CHECK_FALSE(is_factoring(p));
}

TEST_CASE("product measure factors")
{
    const std::vector<std::pair<Rational, Rational>> bern{{1, Rational(3, 4)}, {-1, Rational(1, 4)}};
    const auto p = moments_from_atoms<Rational>(AtomicPairMeasure::product(Space::torus, bern, bern), 6);
    for (int m = 0; m <= 6; ++m)
        for (int n = 0; n <= 6; ++n) {
            const Rational a = Rational(3, 4) + Rational(m % 2 ? -1 : 1, 4);
            const Rational b = Rational(3, 4) + Rational(n % 2 ? -1 : 1, 4);
            CHECK(p(m, n) == a * b);
        }
    CHECK(is_factoring(p));

    MeasureSampler s(99);
    for (int k = 0; k < 10; ++k)
        CHECK(is_factoring(moments_from_atoms<Rational>(s.factoring(), 6)));
}

TEST_CASE("haar marginal is flagged")
{
    const auto mu = parse_measure_json(R"({"atoms": [{"s": 1, "t": 1, "w": 0.5}, {"s": -1, "t": 1, "w": 0.5}]})");
    const auto p = moments_from_atoms<Rational>(mu, 3);
    CHECK_FALSE(p.first_moments_nonzero());
    const auto f = admissibility_failures(p, "1");
    REQUIRE(f.size() == 2);
    CHECK(f[0] == "phi(a1)=0");
    CHECK(f[1] == "phi(a1b1)=0");
}

TEST_CASE("measure validation")
{
    CHECK_THROWS_AS(parse_measure_json("{"), ParseError);
    CHECK_THROWS_AS(parse_measure_json(R"({"atoms": []})"), ParseError);
    CHECK_THROWS_AS(parse_measure_json(R"({"atoms": [{"s": "1", "t": "1", "w": "1/2"}]})"), ParseError);
    CHECK_THROWS_AS(parse_measure_json(R"({"atoms": [{"s": "2", "t": "1", "w": "1"}]})"), ParseError);
    CHECK_THROWS_AS(parse_measure_json(R"({"atoms": [{"s": "1", "t": "1", "w": "1/2"},
                                                     {"s": "1", "t": "1", "w": "1/2"}]})"),
                    ParseError);
    CHECK_THROWS_AS(parse_measure_json(R"({"space": "positive", "atoms": [{"s": "-1", "t": "1", "w": "1"}]})"),
                    ParseError);
    CHECK_THROWS_AS(parse_measure_json(R"({"space": "sphere", "atoms": [{"s": "1", "t": "1", "w": "1"}]})"),
                    ParseError);
    CHECK_THROWS_AS(parse_measure_json(R"({"atoms": [{"s": "1", "t": "1", "w": "-1"}]})"), ParseError);
    CHECK_THROWS_AS(parse_measure_json(R"({"atoms": [{"s": "x", "t": "1", "w": "1"}]})"), ParseError);

    const auto pos = parse_measure_json(R"({"space": "positive", "atoms": [{"s": "2", "t": "0.5", "w": "1"}]})");
    const auto p = moments_from_atoms<Rational>(pos, 3);
    CHECK(p(3, 1) == 4);
}

TEST_CASE("complex atoms select complex mode")
{
    const auto mu = parse_measure_json(R"({"atoms": [
        {"s": {"re": "3/5", "im": "4/5"}, "t": "1", "w": "1/3"},
        {"s": "1", "t": {"re": 0, "im": -1}, "w": "2/3"}]})");
    CHECK_FALSE(mu.is_real());
    CHECK(resolve_mode(mu, std::nullopt) == Mode::complex);
    CHECK_THROWS_AS(resolve_mode(mu, Mode::rational), ParseError);
    const auto p = moments_from_atoms<Complex>(mu, 2);
    CHECK(std::abs(p(1, 0) - Complex(0.2 + 2.0 / 3.0, 4.0 / 15.0)) < 1e-14);
    CHECK(std::abs(p(0, 1) - Complex(1.0 / 3.0, -2.0 / 3.0)) < 1e-14);

    // an exactly zero imaginary part still counts as real
    const auto real = parse_measure_json(R"({"atoms": [{"s": {"re": "-1", "im": "0"}, "t": "1", "w": "1"}]})");
    CHECK(real.is_real());
}

TEST_CASE("decimal weights within rounding are rescaled")
{
    const auto mu = parse_measure_json(R"({"atoms": [
        {"s": "1", "t": "1", "w": "0.3333333333333"},
        {"s": "-1", "t": "1", "w": "0.6666666666667"}]})");
    Rational total = 0;
    for (const auto& a : mu.atoms())
        total += a.weight;
    CHECK(total == 1);
}

TEST_CASE("sampler is deterministic and admissible")
{
    MeasureSampler a(5);
    MeasureSampler b(5);
    for (int k = 0; k < 20; ++k) {
        const auto x = a.admissible();
        const auto y = b.admissible();
        REQUIRE(x.atoms().size() == y.atoms().size());
        for (std::size_t i = 0; i < x.atoms().size(); ++i)
            CHECK(x.atoms()[i].weight == y.atoms()[i].weight);
        CHECK(admissibility_failures(moments_from_atoms<Rational>(x, 1)).empty());
        CHECK_FALSE(is_factoring(moments_from_atoms<Rational>(a.non_factoring(), 4)));
        b.non_factoring();
    }
    for (int k = 0; k < 5; ++k)
        CHECK_FALSE(a.complex_torus().is_real());
}
