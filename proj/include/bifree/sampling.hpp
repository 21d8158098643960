#pragma once

// Deterministic random measures for property suites. The integer mapping is done by
// hand so a seed gives the same measures with every standard library.

#include <cstdint>
#include <random>

#include "bifree/measure.hpp"

namespace bifree {

class MeasureSampler {
public:
    explicit MeasureSampler(std::uint64_t seed) : rng_(seed) {}

    // Uniform in [lo, hi].
    int integer(int lo, int hi);
    // k/d with 2 <= d <= max_den and 1 <= k < d.
    Rational weight(int max_den = 8);

    // Two distinct atoms in {-1, 1}^2 with rational weights. May be inadmissible.
    AtomicPairMeasure two_atom_signs();
    // Two to three atoms in {-1, 1}^2 with phi(a), phi(b), phi(ab) all nonzero.
    AtomicPairMeasure admissible();
    // Product of two {-1, 1} laws with nonzero means: factoring two-band moments.
    AtomicPairMeasure factoring();
    // Admissible and not factoring.
    AtomicPairMeasure non_factoring();
    // Two to three atoms at rational points of the unit circle, at least one non-real.
    AtomicPairMeasure complex_torus();

private:
    std::mt19937_64 rng_;
};

} // namespace bifree
