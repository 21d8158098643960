#include "bifree/sampling.hpp"

#include <array>

namespace bifree {

namespace {

std::vector<Rational> random_weights(MeasureSampler& s, int n)
{
    std::vector<int> k;
    int total = 0;
    for (int i = 0; i < n; ++i) {
        k.push_back(s.integer(1, 6));
        total += k.back();
    }
    std::vector<Rational> w;
    for (int v : k) {
        Rational q(v, total);
        q.canonicalize();
        w.push_back(q);
    }
    return w;
}

bool admissible_exact(const AtomicPairMeasure& mu)
{
    return admissibility_failures(moments_from_atoms<Rational>(mu, 1)).empty();
}

} // namespace

int MeasureSampler::integer(int lo, int hi)
{
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<int>(rng_() % span);
}

Rational MeasureSampler::weight(int max_den)
{
    const int d = integer(2, max_den);
    Rational q(integer(1, d - 1), d);
    q.canonicalize();
    return q;
}

AtomicPairMeasure MeasureSampler::two_atom_signs()
{
    const int i = integer(0, 3);
    int j = integer(0, 2);
    if (j >= i)
        ++j;
    auto atom = [](int code, const Rational& w) {
        return Atom{{Rational(code & 1 ? -1 : 1), 0}, {Rational(code & 2 ? -1 : 1), 0}, w};
    };
    const Rational w = weight();
    return AtomicPairMeasure(Space::torus, {atom(i, w), atom(j, Rational(1 - w))});
}

AtomicPairMeasure MeasureSampler::admissible()
{
    for (;;) {
        const int n = integer(2, 3);
        std::array<int, 4> codes{0, 1, 2, 3};
        for (int k = 3; k > 0; --k)
            std::swap(codes[static_cast<std::size_t>(k)], codes[static_cast<std::size_t>(integer(0, k))]);
        const std::vector<Rational> w = random_weights(*this, n);
        std::vector<Atom> atoms;
        for (int k = 0; k < n; ++k) {
            const int c = codes[static_cast<std::size_t>(k)];
            atoms.push_back(Atom{{Rational(c & 1 ? -1 : 1), 0}, {Rational(c & 2 ? -1 : 1), 0}, w[static_cast<std::size_t>(k)]});
        }
        AtomicPairMeasure mu(Space::torus, std::move(atoms));
        if (admissible_exact(mu))
            return mu;
    }
}

AtomicPairMeasure MeasureSampler::factoring()
{
    auto marginal = [&] {
        for (;;) {
            if (integer(0, 3) == 0)
                return std::vector<std::pair<Rational, Rational>>{{Rational(integer(0, 1) ? 1 : -1), Rational(1)}};
            const Rational p = weight();
            if (2 * p != 1)
                return std::vector<std::pair<Rational, Rational>>{{Rational(1), p}, {Rational(-1), Rational(1 - p)}};
        }
    };
    return AtomicPairMeasure::product(Space::torus, marginal(), marginal());
}

AtomicPairMeasure MeasureSampler::non_factoring()
{
    for (;;) {
        AtomicPairMeasure mu = admissible();
        if (!is_factoring(moments_from_atoms<Rational>(mu, 2)))
            return mu;
    }
}

AtomicPairMeasure MeasureSampler::complex_torus()
{
    static const std::array<std::pair<int, int>, 5> legs{{{1, 0}, {3, 4}, {4, 3}, {5, 12}, {12, 5}}};
    static const std::array<int, 5> hyp{1, 5, 5, 13, 13};
    auto point = [&] {
        const int k = integer(0, 4);
        Rational re(legs[static_cast<std::size_t>(k)].first * (integer(0, 1) ? 1 : -1), hyp[static_cast<std::size_t>(k)]);
        Rational im(legs[static_cast<std::size_t>(k)].second * (integer(0, 1) ? 1 : -1), hyp[static_cast<std::size_t>(k)]);
        re.canonicalize();
        im.canonicalize();
        if (integer(0, 1))
            std::swap(re, im);
        return ExactScalar{re, im};
    };
    for (;;) {
        const int n = integer(2, 3);
        const std::vector<Rational> w = random_weights(*this, n);
        std::vector<Atom> atoms;
        for (int k = 0; k < n; ++k)
            atoms.push_back(Atom{point(), point(), w[static_cast<std::size_t>(k)]});
        bool distinct = true;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < a; ++b)
                distinct = distinct && !(atoms[static_cast<std::size_t>(a)].s.re == atoms[static_cast<std::size_t>(b)].s.re
                                         && atoms[static_cast<std::size_t>(a)].s.im == atoms[static_cast<std::size_t>(b)].s.im
                                         && atoms[static_cast<std::size_t>(a)].t.re == atoms[static_cast<std::size_t>(b)].t.re
                                         && atoms[static_cast<std::size_t>(a)].t.im == atoms[static_cast<std::size_t>(b)].t.im);
        if (!distinct)
            continue;
        AtomicPairMeasure mu(Space::torus, std::move(atoms));
        if (mu.is_real())
            continue;
        const auto m = moments_from_atoms<Complex>(mu, 1);
        if (std::abs(m(1, 0)) > 1e-3 && std::abs(m(0, 1)) > 1e-3 && std::abs(m(1, 1)) > 1e-3)
            return mu;
    }
}

} // namespace bifree
