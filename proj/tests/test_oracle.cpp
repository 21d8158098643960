#include <doctest.h>

#include "bifree/free_oracle.hpp"
#include "bifree/sampling.hpp"

using namespace bifree;

namespace {

using Q = Rational;

AtomicPairMeasure bernoulli()
{
    return AtomicPairMeasure(Space::torus, {Atom{{1, 0}, {1, 0}, Q(3, 4)}, Atom{{-1, 0}, {-1, 0}, Q(1, 4)}});
}

FreeProductOracle<Q> oracle(const AtomicPairMeasure& a, const AtomicPairMeasure& b, int order)
{
    return FreeProductOracle<Q>(moments_from_atoms<Q>(a, order), moments_from_atoms<Q>(b, order));
}

Word random_word(MeasureSampler& s, int length)
{
    std::vector<Letter> w;
    for (int k = 0; k < length; ++k) {
        Letter l;
        l.algebra = s.integer(1, 2);
        (s.integer(0, 1) ? l.x : l.y) = 1;
        w.push_back(l);
    }
    return Word(w);
}

} // namespace

TEST_CASE("word parsing and canonical forms")
{
    const Word w = Word::parse("x1 x2 y2 y1");
    CHECK(w.size() == 4);
    const Word c = w.canonical();
    REQUIRE(c.size() == 3);
    CHECK(c.letters()[1] == Letter{2, 1, 1});
    CHECK(c.to_string() == "x1 x2 y2 y1");
    CHECK(w.cyclic_canonical().size() == 2);
    CHECK(Word::parse("x1^2*y1 x2").canonical().to_string() == "x1^2 y1 x2");
    CHECK(Word::parse("").empty());
    CHECK_THROWS_AS(Word::parse("x3"), ParseError);
    CHECK_THROWS_AS(Word::parse("z1"), ParseError);
    CHECK_THROWS_AS(Word::parse("x1^"), ParseError);
    CHECK(product_word(2, 1).canonical().size() == 5);
    CHECK(Word::parse("x1 x2 x1 x2").cyclic_canonical() == Word::parse("x2 x1 x2 x1").cyclic_canonical());

    const auto words = canonical_words(8);
    CHECK(words.size() == 31518);
    CHECK(canonical_words(1).size() == 4);
    CHECK(canonical_words(2).size() == 4 + 6 + 8);
    for (const auto& w : canonical_words(4))
        CHECK(w.is_canonical());
}

TEST_CASE("non-crossing partitions")
{
    const long long catalan[] = {1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796};
    for (int n = 0; n <= 10; ++n)
        CHECK(noncrossing_partitions(n).size() == static_cast<std::size_t>(catalan[n]));
    for (int n = 1; n <= 8; ++n) {
        long long total = 0;
        for (const auto& pi : noncrossing_partitions(n)) {
            total += noncrossing_moebius(pi, n);
            if (static_cast<int>(pi.size()) == n)
                CHECK(noncrossing_moebius(pi, n) == (n % 2 ? 1 : -1) * catalan[n - 1]);
            if (pi.size() == 1)
                CHECK(noncrossing_moebius(pi, n) == 1);
        }
        CHECK(total == (n == 1 ? 1 : 0));
    }
}

TEST_CASE("Bernoulli words")
{
    auto o = oracle(bernoulli(), bernoulli(), 4);
    CHECK(o.word_moment(Word::parse("x1 x2")) == Q(1, 4));
    CHECK(o.word_moment(Word::parse("x1 x2 x1 x2")) == Q(7, 16));
    CHECK(o.word_moment(Word::parse("x1 x2 y2 y1")) == 1);
    CHECK(o.word_moment(Word()) == 1);
    CHECK(o.nc_word_moment(Word::parse("x1 x2 x1 x2")) == Q(7, 16));
    CHECK(o.nc_word_moment(Word::parse("x1 x2 y2 y1")) == 1);
    CHECK(o.nc_word_moment(Word::parse("y2")) == Q(1, 2));
    CHECK(o.nc_word_moment(Word()) == 1);
    CHECK_THROWS_AS(o.nc_word_moment(product_word(4, 3)), PreconditionError);
}

TEST_CASE("alternating centered words vanish")
{
    MeasureSampler s(21);
    for (int trial = 0; trial < 5; ++trial) {
        auto o = oracle(s.two_atom_signs(), s.two_atom_signs(), 4);
        // tau((x1 - m)(x2 - m')(y1 - m'')(y2 - m''')) expanded by linearity
        const Word w = Word::parse("x1 x2 y1 y2");
        const auto& ls = w.letters();
        Q total = 0;
        for (unsigned mask = 0; mask < 16; ++mask) {
            Q coeff = 1;
            std::vector<Letter> rest;
            for (unsigned j = 0; j < 4; ++j) {
                if (mask & (1u << j))
                    coeff *= -o.nc_word_moment(Word({ls[j]}));
                else
                    rest.push_back(ls[j]);
            }
            total += coeff * o.nc_word_moment(Word(rest));
        }
        CHECK(total == 0);
    }
}

TEST_CASE("the two word evaluators agree and are tracial")
{
    MeasureSampler s(3);
    for (int trial = 0; trial < 6; ++trial) {
        auto o = oracle(s.admissible(), s.two_atom_signs(), 8);
        for (int k = 0; k < 30; ++k) {
            const Word w = random_word(s, s.integer(1, 8));
            const Q a = o.word_moment(w);
            CHECK(a == o.nc_word_moment(w.canonical()));
            CHECK(a == o.nc_word_moment(w));
            std::vector<Letter> rot = w.letters();
            std::rotate(rot.begin(), rot.begin() + 1, rot.end());
            CHECK(a == o.nc_word_moment(Word(rot)));
        }
    }
}

TEST_CASE("complex laws")
{
    MeasureSampler s(8);
    for (int trial = 0; trial < 3; ++trial) {
        FreeProductOracle<Complex> o(moments_from_atoms<Complex>(s.complex_torus(), 6),
                                     moments_from_atoms<Complex>(s.complex_torus(), 6));
        for (int k = 0; k < 10; ++k) {
            const Word w = random_word(s, s.integer(1, 6));
            CHECK(std::abs(o.word_moment(w) - o.nc_word_moment(w)) < 1e-12);
        }
        const auto p = product_pair_moments(o.law(1), o.law(2), 3);
        CHECK(std::abs(p(2, 3) - o.word_moment(product_word(2, 3))) < 1e-12);
    }
}

TEST_CASE("product pair tables")
{
    const auto b = moments_from_atoms<Q>(bernoulli(), 6);
    const auto bb = product_pair_moments(b, b, 6);
    CHECK(bb(1, 1) == 1);
    CHECK(bb(2, 0) == Q(7, 16));
    CHECK(bb(0, 2) == Q(7, 16));

    const auto id = moments_from_atoms<Q>(AtomicPairMeasure::point(Space::torus, 1, 1), 6);
    CHECK(equal_tables(product_pair_moments(b, id, 6), b));
    CHECK(equal_tables(product_pair_moments(id, b, 6), b));

    MeasureSampler s(17);
    for (int trial = 0; trial < 6; ++trial) {
        const auto mu1 = s.admissible();
        const auto mu2 = s.admissible();
        const auto p1 = moments_from_atoms<Q>(mu1, 3);
        const auto p2 = moments_from_atoms<Q>(mu2, 3);
        const auto p = product_pair_moments(p1, p2, 3);
        auto o = FreeProductOracle<Q>(p1, p2);
        for (int m = 0; m <= 3; ++m)
            for (int n = 0; n <= 3; ++n)
                CHECK(p(m, n) == o.word_moment(product_word(m, n)));
        CHECK(p(1, 1) == p1(1, 1) * p2(1, 1));

        // a scalar pair (-1, -1) multiplies by (-1)^(m+n)
        const auto flip = moments_from_atoms<Q>(AtomicPairMeasure::point(Space::torus, -1, -1), 5);
        const auto pf = product_pair_moments(moments_from_atoms<Q>(mu1, 5), flip, 5);
        const auto p1f = moments_from_atoms<Q>(mu1, 5);
        for (int m = 0; m <= 5; ++m)
            for (int n = 0; n <= 5; ++n)
                CHECK(pf(m, n) == p1f(m, n) * ((m + n) % 2 ? -1 : 1));
    }
    CHECK_THROWS_AS(product_pair_moments(b, b, 7), ArithmeticError);
}
