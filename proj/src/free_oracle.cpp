#include "bifree/free_oracle.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <optional>

namespace bifree {

namespace {

long long catalan(int n)
{
    long long c = 1;
    for (int k = 0; k < n; ++k)
        c = c * 2 * (2 * k + 1) / (k + 2);
    return c;
}

void merge_into(Letter& a, const Letter& b)
{
    a.x += b.x;
    a.y += b.y;
}

} // namespace

Word::Word(std::vector<Letter> letters) : letters_(std::move(letters))
{
    for (const Letter& l : letters_)
        if ((l.algebra != 1 && l.algebra != 2) || l.x < 0 || l.y < 0)
            throw ParseError("malformed letter in word");
}

Word Word::parse(std::string_view text)
{
    std::vector<Letter> out;
    std::size_t i = 0;
    auto fail = [&](const std::string& why) {
        throw ParseError("word '" + std::string(text) + "': " + why + " at position " + std::to_string(i));
    };
    while (i < text.size()) {
        const char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c)) || c == '*') {
            ++i;
            continue;
        }
        if (c != 'x' && c != 'y')
            fail("expected x or y");
        ++i;
        if (i >= text.size() || (text[i] != '1' && text[i] != '2'))
            fail("expected algebra index 1 or 2");
        Letter l;
        l.algebra = text[i] - '0';
        ++i;
        int e = 1;
        if (i < text.size() && text[i] == '^') {
            ++i;
            const std::size_t start = i;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
                ++i;
            if (i == start || i - start > 4)
                fail("bad exponent");
            e = std::stoi(std::string(text.substr(start, i - start)));
        }
        (c == 'x' ? l.x : l.y) = e;
        out.push_back(l);
    }
    return Word(std::move(out));
}

Word Word::canonical() const
{
    std::vector<Letter> out;
    for (const Letter& l : letters_) {
        if (l.x == 0 && l.y == 0)
            continue;
        if (!out.empty() && out.back().algebra == l.algebra)
            merge_into(out.back(), l);
        else
            out.push_back(l);
    }
    return Word(std::move(out));
}

Word Word::cyclic_canonical() const
{
    std::vector<Letter> w = canonical().letters_;
    while (w.size() >= 2 && w.front().algebra == w.back().algebra) {
        merge_into(w.front(), w.back());
        w.pop_back();
    }
    std::vector<Letter> best = w;
    for (std::size_t r = 1; r < w.size(); ++r) {
        std::rotate(w.begin(), w.begin() + 1, w.end());
        if (w < best)
            best = w;
    }
    return Word(std::move(best));
}

int Word::degree() const
{
    int d = 0;
    for (const Letter& l : letters_)
        d += l.x + l.y;
    return d;
}

bool Word::is_canonical() const { return canonical() == *this; }

std::string Word::to_string() const
{
    if (letters_.empty())
        return "1";
    std::string s;
    auto put = [&](char g, int alg, int e) {
        if (e == 0)
            return;
        if (!s.empty())
            s += ' ';
        s += g;
        s += static_cast<char>('0' + alg);
        if (e > 1)
            s += "^" + std::to_string(e);
    };
    for (const Letter& l : letters_) {
        put('x', l.algebra, l.x);
        put('y', l.algebra, l.y);
    }
    return s;
}

Word product_word(int m, int n)
{
    std::vector<Letter> w;
    for (int k = 0; k < m; ++k) {
        w.push_back({1, 1, 0});
        w.push_back({2, 1, 0});
    }
    for (int k = 0; k < n; ++k) {
        w.push_back({2, 0, 1});
        w.push_back({1, 0, 1});
    }
    return Word(std::move(w));
}

namespace {

void extend_words(std::vector<Letter>& prefix, int remaining, std::vector<Word>& out)
{
    if (remaining == 0) {
        out.emplace_back(prefix);
        return;
    }
    for (int algebra = 1; algebra <= 2; ++algebra) {
        if (!prefix.empty() && prefix.back().algebra == algebra)
            continue;
        for (int d = 1; d <= remaining; ++d)
            for (int x = d; x >= 0; --x) {
                prefix.push_back({algebra, x, d - x});
                extend_words(prefix, remaining - d, out);
                prefix.pop_back();
            }
    }
}

} // namespace

std::vector<Word> canonical_words(int max_degree)
{
    std::vector<Word> out;
    std::vector<Letter> prefix;
    for (int d = 1; d <= max_degree; ++d)
        extend_words(prefix, d, out);
    return out;
}

std::vector<std::vector<std::vector<int>>> noncrossing_partitions(int n)
{
    // Elements are placed left to right. An element opens a block or joins a block
    // still open on the stack; joining closes every block opened after it.
    std::vector<std::vector<std::vector<int>>> out;
    std::vector<std::vector<int>> blocks;
    std::vector<int> stack;
    auto rec = [&](auto&& self, int i) -> void {
        if (i == n) {
            out.push_back(blocks);
            return;
        }
        blocks.push_back({i});
        stack.push_back(static_cast<int>(blocks.size()) - 1);
        self(self, i + 1);
        stack.pop_back();
        blocks.pop_back();
        for (std::size_t depth = stack.size(); depth-- > 0;) {
            const std::vector<int> saved(stack.begin() + static_cast<std::ptrdiff_t>(depth) + 1, stack.end());
            const int b = stack[depth];
            stack.resize(depth + 1);
            blocks[static_cast<std::size_t>(b)].push_back(i);
            self(self, i + 1);
            blocks[static_cast<std::size_t>(b)].pop_back();
            stack.insert(stack.end(), saved.begin(), saved.end());
        }
    };
    if (n < 0)
        throw Error("negative partition size");
    rec(rec, 0);
    return out;
}

long long noncrossing_moebius(const std::vector<std::vector<int>>& pi, int n)
{
    // mu(pi, 1) is a product over the blocks of the Kreweras complement, read off the
    // cycles of P_pi^{-1} gamma with gamma the cycle (0 1 ... n-1).
    std::vector<int> inv_p(static_cast<std::size_t>(n));
    for (const auto& b : pi)
        for (std::size_t k = 0; k < b.size(); ++k)
            inv_p[static_cast<std::size_t>(b[(k + 1) % b.size()])] = b[k];
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    long long mu = 1;
    for (int s = 0; s < n; ++s) {
        if (seen[static_cast<std::size_t>(s)])
            continue;
        int len = 0;
        for (int v = s; !seen[static_cast<std::size_t>(v)]; v = inv_p[static_cast<std::size_t>((v + 1) % n)]) {
            seen[static_cast<std::size_t>(v)] = true;
            ++len;
        }
        mu *= (len % 2 == 1 ? 1 : -1) * catalan(len - 1);
    }
    return mu;
}

template <class T>
FreeProductOracle<T>::FreeProductOracle(PairDistribution<T> law1, PairDistribution<T> law2)
    : law1_(std::move(law1)), law2_(std::move(law2))
{
}

template <class T>
T FreeProductOracle<T>::block_moment(int algebra, int x, int y) const
{
    const PairDistribution<T>& m = law(algebra);
    if (x > m.order() || y > m.order())
        throw ArithmeticError("word needs tau(x" + std::to_string(algebra) + "^" + std::to_string(x) + " y"
                              + std::to_string(algebra) + "^" + std::to_string(y) + ") beyond the law's order "
                              + std::to_string(m.order()));
    return m(x, y);
}

template <class T>
T FreeProductOracle<T>::word_moment(const Word& w)
{
    const Word c = w.cyclic_canonical();
    if (c.empty())
        return T(1);
    if (c.size() == 1)
        return block_moment(c.letters()[0].algebra, c.letters()[0].x, c.letters()[0].y);
    if (auto it = memo_.find(c.letters()); it != memo_.end())
        return it->second;
    T v = centered_expansion(c.letters());
    memo_.emplace(c.letters(), v);
    return v;
}

// For alternating b_1 ... b_k the centered product has trace zero:
//   0 = tau(prod (b_j - tau(b_j))) = sum_S prod_{j in S} (-tau(b_j)) tau(w without S),
// so tau(w) is the negated sum over nonempty S, each term a shorter word.
template <class T>
T FreeProductOracle<T>::centered_expansion(const std::vector<Letter>& w)
{
    const int k = static_cast<int>(w.size());
    std::vector<T> means;
    means.reserve(w.size());
    for (const Letter& l : w)
        means.push_back(block_moment(l.algebra, l.x, l.y));
    T total(0);
    std::vector<Letter> rest;
    for (unsigned long mask = 1; mask < (1UL << k); ++mask) {
        T coeff(1);
        rest.clear();
        for (int j = 0; j < k; ++j) {
            if (mask & (1UL << j))
                coeff *= -means[static_cast<std::size_t>(j)];
            else
                rest.push_back(w[static_cast<std::size_t>(j)]);
        }
        if (Field<T>::mode == Mode::rational && Field<T>::is_zero(coeff))
            continue;
        total += coeff * word_moment(Word(rest));
    }
    return -total;
}

template <class T>
T FreeProductOracle<T>::cumulant(const std::vector<Letter>& args)
{
    if (args.empty())
        throw Error("cumulant of no arguments");
    const int alg = args.front().algebra;
    for (const Letter& l : args)
        if (l.algebra != alg)
            return T(0);
    if (auto it = cumulants_.find(args); it != cumulants_.end())
        return it->second;
    const int n = static_cast<int>(args.size());
    auto& parts = partitions_[n];
    if (parts.empty())
        parts = noncrossing_partitions(n);
    T k(0);
    for (const auto& pi : parts) {
        T term(static_cast<long>(noncrossing_moebius(pi, n)));
        for (const auto& b : pi) {
            int x = 0;
            int y = 0;
            for (int i : b) {
                x += args[static_cast<std::size_t>(i)].x;
                y += args[static_cast<std::size_t>(i)].y;
            }
            term *= block_moment(alg, x, y);
        }
        k += term;
    }
    cumulants_.emplace(args, k);
    return k;
}

template <class T>
T FreeProductOracle<T>::nc_word_moment(const Word& w)
{
    const auto& letters = w.letters();
    const int n = static_cast<int>(letters.size());
    if (n > nc_max_length)
        throw PreconditionError(Precondition::word_too_long,
                                {"length " + std::to_string(n) + " > " + std::to_string(nc_max_length)});
    if (n == 0)
        return T(1);
    auto& parts = block_masks_[n];
    if (parts.empty()) {
        for (const auto& pi : noncrossing_partitions(n)) {
            std::vector<std::uint32_t> masks;
            for (const auto& b : pi) {
                std::uint32_t m = 0;
                for (int i : b)
                    m |= 1u << i;
                masks.push_back(m);
            }
            parts.push_back(std::move(masks));
        }
    }
    std::uint32_t first = 0;
    for (int i = 0; i < n; ++i)
        if (letters[static_cast<std::size_t>(i)].algebra == 1)
            first |= 1u << i;

    // cumulant of each block, computed once per word
    std::vector<std::optional<T>> block(std::size_t{1} << n);
    std::vector<Letter> args;
    auto kappa = [&](std::uint32_t m) -> const T& {
        auto& k = block[m];
        if (!k) {
            args.clear();
            for (int i = 0; i < n; ++i)
                if (m & (1u << i))
                    args.push_back(letters[static_cast<std::size_t>(i)]);
            k = cumulant(args);
        }
        return *k;
    };

    T total(0);
    T term;
    for (const auto& pi : parts) {
        bool mono = true;
        for (std::uint32_t m : pi)
            mono = mono && ((m & first) == 0 || (m & first) == m);
        if (!mono)
            continue;
        term = kappa(pi[0]);
        for (std::size_t b = 1; b < pi.size(); ++b) {
            if (Field<T>::mode == Mode::rational && Field<T>::is_zero(term))
                break;
            term *= kappa(pi[b]);
        }
        total += term;
    }
    return total;
}

template <class T>
T IntervalOracle<T>::law_moment(int algebra, int x, int y) const
{
    const PairDistribution<T>& m = algebra == 1 ? law1_ : law2_;
    if (x > m.order() || y > m.order())
        throw ArithmeticError("word needs a moment beyond the law's order " + std::to_string(m.order()));
    return m(x, y);
}

template <class T>
T IntervalOracle<T>::kappa(const Key& key)
{
    if (auto it = kappa_memo_.find(key); it != kappa_memo_.end())
        return it->second;
    std::vector<Letter> s;
    for (const auto& [l, count] : key)
        for (int c = 0; c < count; ++c)
            s.push_back(l);
    const int r = static_cast<int>(s.size());
    const int alg = s.front().algebra;
    std::vector<int> px(static_cast<std::size_t>(r) + 1, 0);
    std::vector<int> py(static_cast<std::size_t>(r) + 1, 0);
    for (int k = 0; k < r; ++k) {
        px[static_cast<std::size_t>(k) + 1] = px[static_cast<std::size_t>(k)] + s[static_cast<std::size_t>(k)].x;
        py[static_cast<std::size_t>(k) + 1] = py[static_cast<std::size_t>(k)] + s[static_cast<std::size_t>(k)].y;
    }
    // moment of the contiguous run s[a..b) is a single law entry: the algebra is commutative
    auto m = [&](int a, int b) {
        return law_moment(alg, px[static_cast<std::size_t>(b)] - px[static_cast<std::size_t>(a)],
                          py[static_cast<std::size_t>(b)] - py[static_cast<std::size_t>(a)]);
    };
    if (r == 1) {
        const T v = m(0, 1);
        kappa_memo_.emplace(key, v);
        return v;
    }

    // Sum over proper blocks V containing position 0 of kappa(s_V) times the moments
    // of the gaps V leaves. What remains of m(0, r) is the top cumulant.
    std::vector<std::map<Key, T>> states(static_cast<std::size_t>(r));
    states[0][Key{{s[0], 1}}] = T(1);
    T acc(0);
    for (int v = 0; v < r; ++v) {
        for (const auto& [k, f] : states[static_cast<std::size_t>(v)]) {
            int len = 0;
            for (const auto& run : k)
                len += run.second;
            if (len < r)
                acc += f * kappa(k) * m(v + 1, r);
            for (int v2 = v + 1; v2 < r; ++v2) {
                const T g = m(v + 1, v2);
                if (Field<T>::mode == Mode::rational && Field<T>::is_zero(g))
                    continue;
                Key next = k;
                if (next.back().first == s[static_cast<std::size_t>(v2)])
                    ++next.back().second;
                else
                    next.emplace_back(s[static_cast<std::size_t>(v2)], 1);
                states[static_cast<std::size_t>(v2)][next] += f * g;
            }
        }
    }
    const T v = m(0, r) - acc;
    kappa_memo_.emplace(key, v);
    return v;
}

template <class T>
IntervalOracle<T>::IntervalOracle(const PairDistribution<T>& law1, const PairDistribution<T>& law2, const Word& w)
    : law1_(law1), law2_(law2), letters_(w.letters())
{
    const int n = length();
    for (const Letter& l : letters_)
        if (l.x == 0 && l.y == 0)
            throw ParseError("interval oracle needs nonempty letters");
    table_.assign(static_cast<std::size_t>(n) + 1, std::vector<T>(static_cast<std::size_t>(n) + 1, T(0)));
    for (int i = 0; i <= n; ++i)
        table_[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = T(1);

    // Row i: tau(w[i..j)) for all j, by the block containing position i.
    for (int i = n - 1; i >= 0; --i) {
        const int alg = letters_[static_cast<std::size_t>(i)].algebra;
        auto& row = table_[static_cast<std::size_t>(i)];
        std::vector<std::map<Key, T>> states(static_cast<std::size_t>(n));
        states[static_cast<std::size_t>(i)][Key{{letters_[static_cast<std::size_t>(i)], 1}}] = T(1);
        for (int v = i; v < n; ++v) {
            if (letters_[static_cast<std::size_t>(v)].algebra != alg)
                continue;
            const auto& after = table_[static_cast<std::size_t>(v) + 1];
            for (const auto& [k, f] : states[static_cast<std::size_t>(v)]) {
                const T kap = kappa(k);
                if (!(Field<T>::mode == Mode::rational && Field<T>::is_zero(kap))) {
                    const T c = f * kap;
                    for (int j = v + 1; j <= n; ++j)
                        row[static_cast<std::size_t>(j)] += c * after[static_cast<std::size_t>(j)];
                }
                for (int v2 = v + 1; v2 < n; ++v2) {
                    if (letters_[static_cast<std::size_t>(v2)].algebra != alg)
                        continue;
                    const T& g = after[static_cast<std::size_t>(v2)];
                    if (Field<T>::mode == Mode::rational && Field<T>::is_zero(g))
                        continue;
                    Key next = k;
                    if (next.back().first == letters_[static_cast<std::size_t>(v2)])
                        ++next.back().second;
                    else
                        next.emplace_back(letters_[static_cast<std::size_t>(v2)], 1);
                    states[static_cast<std::size_t>(v2)][next] += f * g;
                }
            }
        }
    }
}

template <class T>
PairDistribution<T> product_pair_moments(const PairDistribution<T>& p1, const PairDistribution<T>& p2, int order)
{
    if (order < 1)
        throw ArithmeticError("product table needs order >= 1");
    if (p1.order() < order || p2.order() < order)
        throw ArithmeticError("factor tables of order " + std::to_string(std::min(p1.order(), p2.order()))
                              + " cannot give a product table of order " + std::to_string(order));
    const int n = order;
    std::vector<T> t(static_cast<std::size_t>(n + 1) * (n + 1), T(0));
    auto at = [&](int m, int k) -> T& { return t[static_cast<std::size_t>(m) * (n + 1) + k]; };
    at(0, 0) = T(1);

    // (x1 x2)^N (y2 y1)^N canonically has 4N-1 letters, the middle one x2 y2. The word
    // for (m, n) is the interval [2(N-m), 2N+2n-1).
    const IntervalOracle<T> joint(p1, p2, product_word(n, n).canonical());
    for (int m = 1; m <= n; ++m)
        for (int k = 1; k <= n; ++k)
            at(m, k) = joint.moment(2 * (n - m), 2 * n + 2 * k - 1);

    const IntervalOracle<T> left(p1, p2, product_word(n, 0));
    for (int m = 1; m <= n; ++m)
        at(m, 0) = left.moment(2 * (n - m), 2 * n);
    const IntervalOracle<T> right(p1, p2, product_word(0, n));
    for (int k = 1; k <= n; ++k)
        at(0, k) = right.moment(0, 2 * k);
    return PairDistribution<T>(n, std::move(t));
}

template <class T>
PairDistribution<T> product_pair_moments(const AtomicPairMeasure& mu1, const AtomicPairMeasure& mu2, int order)
{
    return product_pair_moments(moments_from_atoms<T>(mu1, order), moments_from_atoms<T>(mu2, order), order);
}

template class FreeProductOracle<Rational>;
template class FreeProductOracle<Complex>;
template class IntervalOracle<Rational>;
template class IntervalOracle<Complex>;
template PairDistribution<Rational> product_pair_moments(const PairDistribution<Rational>&,
                                                         const PairDistribution<Rational>&, int);
template PairDistribution<Complex> product_pair_moments(const PairDistribution<Complex>&,
                                                        const PairDistribution<Complex>&, int);
template PairDistribution<Rational> product_pair_moments<Rational>(const AtomicPairMeasure&,
                                                                   const AtomicPairMeasure&, int);
template PairDistribution<Complex> product_pair_moments<Complex>(const AtomicPairMeasure&,
                                                                 const AtomicPairMeasure&, int);

} // namespace bifree
