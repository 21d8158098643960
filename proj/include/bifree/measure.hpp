#pragma once

// Finitely supported joint laws of commuting pairs (a, b) and their two-band
// moment tables phi(a^m b^n).

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bifree/coefficient.hpp"
#include "bifree/errors.hpp"

namespace bifree {

enum class Space { torus, positive };

const char* to_string(Space s);

// Exact complex number with rational parts. Atom coordinates are kept in this form
// so the coefficient mode can be chosen after parsing.
struct ExactScalar {
    Rational re;
    Rational im;

    bool is_real() const { return sgn(im) == 0; }
};

struct Atom {
    ExactScalar s;
    ExactScalar t;
    Rational weight;
};

class AtomicPairMeasure {
public:
    // Validates: positive weights summing to 1, distinct atoms, torus atoms of modulus 1
    // and positive atoms real and > 0. Throws ParseError on violation.
    AtomicPairMeasure(Space space, std::vector<Atom> atoms);

    Space space() const noexcept { return space_; }
    const std::vector<Atom>& atoms() const noexcept { return atoms_; }

    // True when every coordinate is real, so rational mode is available.
    bool is_real() const;

    // delta at (s, t).
    static AtomicPairMeasure point(Space space, const Rational& s, const Rational& t);

    // Product of two marginal laws on a line, each given as (value, weight) pairs.
    static AtomicPairMeasure product(Space space, const std::vector<std::pair<Rational, Rational>>& a,
                                     const std::vector<std::pair<Rational, Rational>>& b);

private:
    Space space_;
    std::vector<Atom> atoms_;
};

// Reads {"space": ..., "atoms": [{"s": ..., "t": ..., "w": ...}, ...]}. Throws ParseError.
AtomicPairMeasure parse_measure_json(std::string_view text);
AtomicPairMeasure load_measure_file(const std::string& path);

// Coefficient mode implied by the atoms, or the forced one. Forcing rational on a
// measure with complex atoms throws ParseError.
Mode resolve_mode(const AtomicPairMeasure& mu, std::optional<Mode> forced);
Mode resolve_mode(const std::vector<const AtomicPairMeasure*>& mus, std::optional<Mode> forced);

template <class T>
T to_coefficient(const ExactScalar& x);

template <class T>
class PairDistribution {
public:
    // `table` is row-major, (order+1)^2 entries, M(0,0) must be 1.
    PairDistribution(int order, std::vector<T> table);

    int order() const noexcept { return n_; }
    const T& operator()(int m, int n) const { return m_[index(m, n)]; }
    const std::vector<T>& table() const noexcept { return m_; }

    bool first_moments_nonzero() const;
    bool mixed_nonzero() const;

    // The same table cut to a smaller order.
    PairDistribution truncated(int order) const;

private:
    std::size_t index(int m, int n) const { return static_cast<std::size_t>(m) * (n_ + 1) + n; }

    int n_;
    std::vector<T> m_;
};

// M(m,n) = sum_i w_i s_i^m t_i^n.
template <class T>
PairDistribution<T> moments_from_atoms(const AtomicPairMeasure& mu, int order);

// M(m,n) = M(m,0) M(0,n) for 1 <= m,n <= N.
template <class T>
bool is_factoring(const PairDistribution<T>& p, const Tolerance& tol = {});

// Names of the failed standing hypotheses phi(a) != 0, phi(b) != 0, phi(ab) != 0,
// with `label` appended to the variable names (e.g. "1" gives "phi(a1)=0").
template <class T>
std::vector<std::string> admissibility_failures(const PairDistribution<T>& p, const std::string& label = "");

// Largest |p - q| over the common order.
template <class T>
double max_difference(const PairDistribution<T>& p, const PairDistribution<T>& q);

template <class T>
bool equal_tables(const PairDistribution<T>& p, const PairDistribution<T>& q, const Tolerance& tol = {});

} // namespace bifree
