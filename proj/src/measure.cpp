#include "bifree/measure.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace bifree {

namespace {

using json = nlohmann::json;

bool same(const ExactScalar& x, const ExactScalar& y) { return x.re == y.re && x.im == y.im; }

std::string describe(const ExactScalar& x)
{
    if (x.is_real())
        return format_rational(x.re);
    return format_rational(x.re) + (sgn(x.im) < 0 ? "" : "+") + format_rational(x.im) + "i";
}

bool on_unit_circle(const ExactScalar& x)
{
    const Rational r2 = x.re * x.re + x.im * x.im;
    if (r2 == 1)
        return true;
    return std::fabs(std::sqrt(r2.get_d()) - 1.0) <= 1e-12;
}

Rational parse_real(const json& j, const std::string& what)
{
    if (j.is_string())
        return parse_rational(j.get<std::string>());
    // dump() gives the shortest text that round-trips, which is then read exactly
    if (j.is_number())
        return parse_rational(j.dump());
    throw ParseError(what + ": expected a number or a numeric string");
}

ExactScalar parse_scalar(const json& j, const std::string& what)
{
    if (j.is_object()) {
        if (!j.contains("re"))
            throw ParseError(what + ": complex object needs \"re\"");
        for (const auto& [key, value] : j.items())
            if (key != "re" && key != "im")
                throw ParseError(what + ": unknown key \"" + key + "\"");
        ExactScalar x{parse_real(j.at("re"), what + ".re"), Rational(0)};
        if (j.contains("im"))
            x.im = parse_real(j.at("im"), what + ".im");
        return x;
    }
    return {parse_real(j, what), Rational(0)};
}

} // namespace

const char* to_string(Space s) { return s == Space::torus ? "torus" : "positive"; }

AtomicPairMeasure::AtomicPairMeasure(Space space, std::vector<Atom> atoms) : space_(space), atoms_(std::move(atoms))
{
    if (atoms_.empty())
        throw ParseError("measure has no atoms");
    Rational total = 0;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        const Atom& a = atoms_[i];
        const std::string where = "atom " + std::to_string(i);
        if (sgn(a.weight) <= 0)
            throw ParseError(where + ": weight must be positive");
        total += a.weight;
        for (const ExactScalar* x : {&a.s, &a.t}) {
            if (space_ == Space::torus && !on_unit_circle(*x))
                throw ParseError(where + ": coordinate " + describe(*x) + " is off the unit circle");
            if (space_ == Space::positive && (!x->is_real() || sgn(x->re) <= 0))
                throw ParseError(where + ": coordinate " + describe(*x) + " is not a positive real");
        }
        for (std::size_t j = 0; j < i; ++j)
            if (same(atoms_[j].s, a.s) && same(atoms_[j].t, a.t))
                throw ParseError(where + ": duplicates atom " + std::to_string(j));
    }
    if (total != 1) {
        if (std::fabs(total.get_d() - 1.0) > 1e-12)
            throw ParseError("weights sum to " + format_rational(total) + ", not 1");
        // decimal weights within rounding of 1: rescale so that M(0,0) stays exactly 1
        for (Atom& a : atoms_)
            a.weight /= total;
    }
}

bool AtomicPairMeasure::is_real() const
{
    for (const Atom& a : atoms_)
        if (!a.s.is_real() || !a.t.is_real())
            return false;
    return true;
}

AtomicPairMeasure AtomicPairMeasure::point(Space space, const Rational& s, const Rational& t)
{
    return AtomicPairMeasure(space, {Atom{{s, 0}, {t, 0}, Rational(1)}});
}

AtomicPairMeasure AtomicPairMeasure::product(Space space, const std::vector<std::pair<Rational, Rational>>& a,
                                             const std::vector<std::pair<Rational, Rational>>& b)
{
    std::vector<Atom> atoms;
    for (const auto& [s, ws] : a)
        for (const auto& [t, wt] : b)
            atoms.push_back(Atom{{s, 0}, {t, 0}, Rational(ws * wt)});
    return AtomicPairMeasure(space, std::move(atoms));
}

AtomicPairMeasure parse_measure_json(std::string_view text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object())
        throw ParseError("measure file must be a JSON object");
    Space space = Space::torus;
    if (j.contains("space")) {
        if (!j.at("space").is_string())
            throw ParseError("\"space\" must be a string");
        const std::string s = j.at("space").get<std::string>();
        if (s == "torus")
            space = Space::torus;
        else if (s == "positive")
            space = Space::positive;
        else
            throw ParseError("unknown space \"" + s + "\"");
    }
    if (!j.contains("atoms") || !j.at("atoms").is_array())
        throw ParseError("measure file needs an \"atoms\" array");
    std::vector<Atom> atoms;
    for (std::size_t i = 0; i < j.at("atoms").size(); ++i) {
        const json& a = j.at("atoms")[i];
        const std::string where = "atoms[" + std::to_string(i) + "]";
        if (!a.is_object() || !a.contains("s") || !a.contains("t") || !a.contains("w"))
            throw ParseError(where + ": expected an object with \"s\", \"t\", \"w\"");
        const ExactScalar w = parse_scalar(a.at("w"), where + ".w");
        if (!w.is_real())
            throw ParseError(where + ".w: weight must be real");
        atoms.push_back(Atom{parse_scalar(a.at("s"), where + ".s"), parse_scalar(a.at("t"), where + ".t"), w.re});
    }
    return AtomicPairMeasure(space, std::move(atoms));
}

AtomicPairMeasure load_measure_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open measure file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_measure_json(buf.str());
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

Mode resolve_mode(const std::vector<const AtomicPairMeasure*>& mus, std::optional<Mode> forced)
{
    bool real = true;
    for (const auto* mu : mus)
        real = real && mu->is_real();
    if (!forced)
        return real ? Mode::rational : Mode::complex;
    if (*forced == Mode::rational && !real)
        throw ParseError("rational mode requested but a measure has complex atoms");
    return *forced;
}

Mode resolve_mode(const AtomicPairMeasure& mu, std::optional<Mode> forced) { return resolve_mode({&mu}, forced); }

template <>
Rational to_coefficient<Rational>(const ExactScalar& x)
{
    if (!x.is_real())
        throw Error("complex scalar in rational mode");
    return x.re;
}

template <>
Complex to_coefficient<Complex>(const ExactScalar& x)
{
    return {x.re.get_d(), x.im.get_d()};
}

template <class T>
PairDistribution<T>::PairDistribution(int order, std::vector<T> table) : n_(order), m_(std::move(table))
{
    if (order < 0 || m_.size() != static_cast<std::size_t>(order + 1) * (order + 1))
        throw Error("moment table size does not match its order");
    if (!Field<T>::near(m_[0], T(1), Tolerance{}))
        throw Error("moment table must have M(0,0) = 1");
}

template <class T>
bool PairDistribution<T>::first_moments_nonzero() const
{
    return n_ >= 1 && !Field<T>::is_zero((*this)(1, 0)) && !Field<T>::is_zero((*this)(0, 1));
}

template <class T>
bool PairDistribution<T>::mixed_nonzero() const
{
    return n_ >= 1 && !Field<T>::is_zero((*this)(1, 1));
}

template <class T>
PairDistribution<T> PairDistribution<T>::truncated(int order) const
{
    if (order > n_)
        throw ArithmeticError("cannot raise a moment table's order");
    std::vector<T> t;
    for (int m = 0; m <= order; ++m)
        for (int n = 0; n <= order; ++n)
            t.push_back((*this)(m, n));
    return PairDistribution(order, std::move(t));
}

template <class T>
PairDistribution<T> moments_from_atoms(const AtomicPairMeasure& mu, int order)
{
    if (order < 0)
        throw ArithmeticError("negative order");
    std::vector<T> table(static_cast<std::size_t>(order + 1) * (order + 1), T(0));
    for (const Atom& a : mu.atoms()) {
        const T s = to_coefficient<T>(a.s);
        const T t = to_coefficient<T>(a.t);
        const T w = Field<T>::from_rational(a.weight);
        T sp = w;
        for (int m = 0; m <= order; ++m) {
            T v = sp;
            for (int n = 0; n <= order; ++n) {
                table[static_cast<std::size_t>(m) * (order + 1) + n] += v;
                v *= t;
            }
            sp *= s;
        }
    }
    table[0] = T(1);
    return PairDistribution<T>(order, std::move(table));
}

template <class T>
bool is_factoring(const PairDistribution<T>& p, const Tolerance& tol)
{
    for (int m = 1; m <= p.order(); ++m)
        for (int n = 1; n <= p.order(); ++n)
            if (!Field<T>::near(p(m, n), T(p(m, 0) * p(0, n)), tol))
                return false;
    return true;
}

template <class T>
std::vector<std::string> admissibility_failures(const PairDistribution<T>& p, const std::string& label)
{
    std::vector<std::string> f;
    if (p.order() < 1) {
        f.push_back("order >= 1");
        return f;
    }
    if (Field<T>::is_zero(p(1, 0)))
        f.push_back("phi(a" + label + ")=0");
    if (Field<T>::is_zero(p(0, 1)))
        f.push_back("phi(b" + label + ")=0");
    if (Field<T>::is_zero(p(1, 1)))
        f.push_back("phi(a" + label + "b" + label + ")=0");
    return f;
}

template <class T>
double max_difference(const PairDistribution<T>& p, const PairDistribution<T>& q)
{
    const int n = std::min(p.order(), q.order());
    double d = 0.0;
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j)
            d = std::fmax(d, Field<T>::magnitude(T(p(i, j) - q(i, j))));
    return d;
}

template <class T>
bool equal_tables(const PairDistribution<T>& p, const PairDistribution<T>& q, const Tolerance& tol)
{
    const int n = std::min(p.order(), q.order());
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j)
            if (!Field<T>::near(p(i, j), q(i, j), tol))
                return false;
    return true;
}

#define BIFREE_INSTANTIATE(T)                                                                                  \
    template class PairDistribution<T>;                                                                        \
    template PairDistribution<T> moments_from_atoms<T>(const AtomicPairMeasure&, int);                        \
    template bool is_factoring<T>(const PairDistribution<T>&, const Tolerance&);                              \
    template std::vector<std::string> admissibility_failures<T>(const PairDistribution<T>&, const std::string&); \
    template double max_difference<T>(const PairDistribution<T>&, const PairDistribution<T>&);                 \
    template bool equal_tables<T>(const PairDistribution<T>&, const PairDistribution<T>&, const Tolerance&);

BIFREE_INSTANTIATE(Rational)
BIFREE_INSTANTIATE(Complex)

#undef BIFREE_INSTANTIATE

} // namespace bifree
