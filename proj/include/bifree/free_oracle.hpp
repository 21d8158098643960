#pragma once

// Moments in the free product of two commutative algebras, computed from first
// principles. Algebra j carries the commuting pair (x_j, y_j) whose joint law is a
// two-band table: tau(x_j^p y_j^q) = M_j(p, q).
//
// Three independent evaluators:
//   word_moment     centering expansion of alternating words, memoized on cyclic classes;
//   nc_word_moment  explicit sum over non-crossing partitions with one-algebra blocks,
//                   cumulants from Moebius inversion on the non-crossing lattice;
//   IntervalOracle  first-block recursion over all subintervals of one long word, the
//                   only one that scales to the product words (x1 x2)^m (y2 y1)^n.

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bifree/measure.hpp"

namespace bifree {

// x_j^x y_j^y with j = algebra.
struct Letter {
    int algebra = 1;
    int x = 0;
    int y = 0;

    friend auto operator<=>(const Letter&, const Letter&) = default;
};

struct LettersHash {
    std::size_t operator()(const std::vector<Letter>& w) const noexcept
    {
        std::size_t h = w.size();
        for (const Letter& l : w)
            h = h * 1000003u ^ (static_cast<std::size_t>(l.algebra) << 20 ^ static_cast<std::size_t>(l.x) << 10
                                ^ static_cast<std::size_t>(l.y));
        return h;
    }
};

class Word {
public:
    Word() = default;
    explicit Word(std::vector<Letter> letters);

    // Tokens x1, y1, x2, y2 with optional ^k, separated by optional whitespace or '*'.
    // Throws ParseError.
    static Word parse(std::string_view text);

    // Adjacent letters of the same algebra merged, empty letters dropped.
    Word canonical() const;
    // Canonical and, in addition, first and last letters from different algebras
    // (merged by cyclic rotation), rotated to the least rotation. Same trace.
    Word cyclic_canonical() const;

    const std::vector<Letter>& letters() const noexcept { return letters_; }
    std::size_t size() const noexcept { return letters_.size(); }
    bool empty() const noexcept { return letters_.empty(); }
    // Number of generator occurrences, counting exponents.
    int degree() const;
    bool is_canonical() const;

    std::string to_string() const;

    friend bool operator==(const Word&, const Word&) = default;

private:
    std::vector<Letter> letters_;
};

// (x1 x2)^m (y2 y1)^n, whose trace is phi((a1 a2)^m (b1 b2)^n) in the operator model
// where b_j acts by right multiplication: right multiplication reverses the order.
Word product_word(int m, int n);

// Every canonical word of degree 1..max_degree, grouped by degree.
std::vector<Word> canonical_words(int max_degree);

inline constexpr int nc_max_length = 12;

template <class T>
class FreeProductOracle {
public:
    FreeProductOracle(PairDistribution<T> law1, PairDistribution<T> law2);

    const PairDistribution<T>& law(int algebra) const { return algebra == 1 ? law1_ : law2_; }

    // Any word; it is canonicalized first. The empty word has trace 1.
    // Cost grows like 2^(letters), memoized; intended for short words.
    T word_moment(const Word& w);

    // Non-crossing partition sum over the letters of w as given (no merging).
    // Throws PreconditionError(word_too_long) beyond nc_max_length letters.
    T nc_word_moment(const Word& w);

    // Multivariate free cumulant of letters from one algebra, by Moebius inversion.
    T cumulant(const std::vector<Letter>& args);

    std::size_t memo_size() const noexcept { return memo_.size(); }

private:
    T block_moment(int algebra, int x, int y) const;
    T centered_expansion(const std::vector<Letter>& w);

    PairDistribution<T> law1_;
    PairDistribution<T> law2_;
    std::unordered_map<std::vector<Letter>, T, LettersHash> memo_;
    std::unordered_map<std::vector<Letter>, T, LettersHash> cumulants_;
    std::map<int, std::vector<std::vector<std::vector<int>>>> partitions_;
    // non-crossing partitions with blocks as bitmasks over letter positions
    std::map<int, std::vector<std::vector<std::uint32_t>>> block_masks_;
};

// Traces of every subinterval of one fixed word, tau(w[i..j)), by the first-block
// recursion of the moment-cumulant formula. Cumulant arguments are keyed by their
// run-length encoding, which keeps the state space polynomial whenever each
// algebra's letters appear in a fixed order of types (true for product words).
template <class T>
class IntervalOracle {
public:
    IntervalOracle(const PairDistribution<T>& law1, const PairDistribution<T>& law2, const Word& w);

    int length() const noexcept { return static_cast<int>(letters_.size()); }
    const T& moment(int i, int j) const { return table_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }

private:
    // (letter, repetition count) runs
    using Key = std::vector<std::pair<Letter, int>>;

    T kappa(const Key& key);
    T law_moment(int algebra, int x, int y) const;

    PairDistribution<T> law1_;
    PairDistribution<T> law2_;
    std::vector<Letter> letters_;
    std::vector<std::vector<T>> table_;
    std::map<Key, T> kappa_memo_;
};

// Two-band table of (a1 a2, b1 b2) when (a1, b1) and (a2, b2) are bi-free with the
// given laws: M(m, n) = tau((x1 x2)^m (y2 y1)^n), up to order N. Laws must have
// order >= N.
template <class T>
PairDistribution<T> product_pair_moments(const PairDistribution<T>& p1, const PairDistribution<T>& p2, int order);

template <class T>
PairDistribution<T> product_pair_moments(const AtomicPairMeasure& mu1, const AtomicPairMeasure& mu2, int order);

// All non-crossing partitions of {0..n-1} as block lists, each block increasing,
// blocks ordered by first element.
std::vector<std::vector<std::vector<int>>> noncrossing_partitions(int n);

// Moebius function mu(pi, 1_n) of the non-crossing lattice.
long long noncrossing_moebius(const std::vector<std::vector<int>>& pi, int n);

} // namespace bifree
