// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <json.hpp>

#include "bifree/biconv.hpp"
#include "bifree/free_oracle.hpp"
#include "bifree/matrix_s.hpp"
#include "bifree/sampling.hpp"
#include "bifree/transforms.hpp"

using namespace bifree;
using Q = Rational;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why)
    {
        if (pass)
            detail = why;
        pass = false;
    }
    void require(bool ok, const std::string& why)
    {
        if (!ok)
            fail(why);
    }
};

PairDistribution<Q> table(const AtomicPairMeasure& mu, int n)
{
    return moments_from_atoms<Q>(mu, n);
}

AtomicPairMeasure bernoulli()
{
    return AtomicPairMeasure(Space::torus, {Atom{{1, 0}, {1, 0}, Q(3, 4)}, Atom{{-1, 0}, {-1, 0}, Q(1, 4)}});
}

AtomicPairMeasure factoring_fixture()
{
    const std::vector<std::pair<Q, Q>> bern{{1, Q(3, 4)}, {-1, Q(1, 4)}};
    return AtomicPairMeasure::product(Space::torus, bern, bern);
}

bool is_variable(const Series1<Q>& f)
{
    for (int k = 0; k <= f.order(); ++k)
        if (f[k] != (k == 1 ? 1 : 0))
            return false;
    return true;
}

Q small_rational(MeasureSampler& s)
{
    Q q(s.integer(-5, 5), s.integer(1, 4));
    q.canonicalize();
    return q;
}

Series1<Q> random_series(MeasureSampler& s, int n, int nonzero)
{
    Series1<Q> f(n);
    for (int k = nonzero; k <= n; ++k)
        f[k] = small_rational(s);
    while (f[nonzero] == 0)
        f[nonzero] = small_rational(s);
    return f;
}

std::string cell(int m, int n)
{
    return "(" + std::to_string(m) + "," + std::to_string(n) + ")";
}

// The shared corpus of admissible pairs for criteria 3 and 4.
std::vector<std::pair<AtomicPairMeasure, AtomicPairMeasure>> corpus()
{
    MeasureSampler s(2024);
    std::vector<std::pair<AtomicPairMeasure, AtomicPairMeasure>> out;
    for (int k = 0; k < 20; ++k) {
        auto a = s.admissible();
        auto b = s.admissible();
        out.emplace_back(std::move(a), std::move(b));
    }
    return out;
}

Outcome series_round_trips()
{
    Outcome o;
    MeasureSampler s(1);
    const int n = 12;
    for (int k = 0; k < 200; ++k) {
        const auto f = random_series(s, n, 1);
        const auto g = invert(f);
        o.require(is_variable(compose(f, g)), "f(f^-1) != z at case " + std::to_string(k));
        o.require(is_variable(compose(g, f)), "f^-1(f) != z at case " + std::to_string(k));
        o.require(equal_on_common(g, invert(f, InversionMethod::triangular)),
                  "Newton and triangular inverses differ at case " + std::to_string(k));
        const auto u = random_series(s, n, 0);
        o.require(equal_on_common(u * reciprocal(u), Series1<Q>::constant(n, Q(1))),
                  "u/u != 1 at case " + std::to_string(k));
    }
    return o;
}

Outcome oracle_cross_validation()
{
    Outcome o;
    MeasureSampler s(2);
    const auto words = canonical_words(8);
    o.require(words.size() == 31518, "unexpected word count " + std::to_string(words.size()));
    for (int law = 0; law < 20; ++law) {
        FreeProductOracle<Q> oracle(table(s.two_atom_signs(), 8), table(s.two_atom_signs(), 8));
        for (const auto& w : words) {
            const Q a = oracle.word_moment(w);
            const Q b = oracle.nc_word_moment(w);
            if (a != b) {
                o.fail("law " + std::to_string(law) + ", word " + w.to_string() + ": " + format_rational(a) + " vs "
                       + format_rational(b));
                return o;
            }
        }
    }
    return o;
}

Outcome partial_s_multiplicative()
{
    Outcome o;
    int k = 0;
    for (const auto& [mu1, mu2] : corpus()) {
        const auto p1 = table(mu1, 9);
        const auto p2 = table(mu2, 9);
        const auto product = product_pair_moments(p1, p2, 9);
        const auto lhs = partial_s(product);
        const auto rhs = partial_s(p1) * partial_s(p2);
        o.require(lhs.order_z() == 8 && lhs.order_w() == 8, "partial S not known to order 8");
        if (const auto d = first_discrepancy(lhs, rhs))
            o.fail("pair " + std::to_string(k) + " differs at " + cell(d->j, d->k));
        ++k;
    }
    return o;
}

Outcome route_agreement()
{
    Outcome o;
    int k = 0;
    for (const auto& [mu1, mu2] : corpus()) {
        const auto p1 = table(mu1, 8);
        const auto p2 = table(mu2, 8);
        const auto r = convolve(p1, p2, 8);
        const std::string at = "pair " + std::to_string(k);
        o.require(r.routes.size() == 3, at + ": expected three routes");
        for (const auto& route : r.routes)
            if (const auto d = first_table_mismatch(route.table, r.oracle))
                o.fail(at + ": route " + route.name + " differs at " + cell(d->first, d->second));
        o.require(r.subordination.exact_zero, at + ": subordination residual nonzero");
        o.require(r.agree, at + ": report does not agree");
        ++k;
    }
    return o;
}

Outcome bernoulli_case()
{
    Outcome o;
    const auto b = table(bernoulli(), 8);
    const auto r = convolve(b, b, 8);
    o.require(r.agree, "routes disagree");
    o.require(r.oracle(1, 1) == 1, "M(1,1) = " + format_rational(r.oracle(1, 1)));
    o.require(r.oracle(2, 0) == Q(7, 16), "M(2,0) = " + format_rational(r.oracle(2, 0)));
    const auto s = s_transform(psi_a(b));
    o.require(s[0] == 2 && s[1] == -6 && s[2] == 48, "S_B starts " + format_rational(s[0]) + ", "
                                                         + format_rational(s[1]) + ", " + format_rational(s[2]));
    o.require(partial_s(b)(0, 0) == 4, "partial S(0,0) = " + format_rational(partial_s(b)(0, 0)));
    return o;
}

Outcome dykema()
{
    Outcome o;
    const int n = 9;
    const auto f = table(factoring_fixture(), n);
    MeasureSampler s(6);
    for (int k = 0; k < 10; ++k)
        o.require(dykema_check(f, table(s.admissible(), n), n).holds, "F with mu " + std::to_string(k) + " fails");

    const auto b = table(bernoulli(), n);
    const auto bb = dykema_check(b, b, n);
    o.require(!bb.holds, "B,B holds");
    o.require(bb.limit_lhs12 == -60 && bb.limit_rhs12 == -24,
              "B,B limits " + format_rational(bb.limit_lhs12) + " vs " + format_rational(bb.limit_rhs12));
    o.require(bb.lhs.off(0, 0) == -60 && bb.rhs.off(0, 0) == -24, "B,B series disagree with limits");

    int trivial = 0;
    for (int k = 0; k < 20; ++k) {
        // every third pair has a factoring member so both outcomes occur
        const auto p1 = table(k % 3 == 0 ? s.factoring() : s.admissible(), n);
        const auto p2 = table(s.admissible(), n);
        const auto r = dykema_check(p1, p2, n);
        const bool expect = is_constant(partial_s(p1), Q(1)) || is_constant(partial_s(p2), Q(1));
        trivial += expect ? 1 : 0;
        o.require(r.holds == expect, "predicate mismatch on pair " + std::to_string(k));
    }
    o.require(trivial > 0 && trivial < 20, "equivalence sample is one-sided");
    return o;
}

Outcome limits()
{
    Outcome o;
    MeasureSampler s(7);
    const int n = 9;
    for (int k = 0; k < 20; ++k) {
        const auto p1 = table(s.admissible(), n);
        const auto p2 = table(s.admissible(), n);
        const auto sx = s_X(product_pair_moments(p1, p2, n));
        const std::string at = "pair " + std::to_string(k);
        o.require(sx.off(0, 0) == limit_lhs12(p1, p2), at + ": zeta coefficient");
        o.require(sx.d1(0, 0) == 1 / Q(p1(1, 0) * p2(1, 0)), at + ": upper diagonal");
        o.require(sx.d2(0, 0) == 1 / Q(p1(0, 1) * p2(0, 1)), at + ": lower diagonal");
        o.require(dykema_rhs(p1, p2).off(0, 0) == limit_rhs12(p1, p2), at + ": twisted product zeta coefficient");
    }
    return o;
}

Outcome matrix_subordination()
{
    Outcome o;
    MeasureSampler s(8);
    const int n = 9;
    for (int k = 0; k < 10; ++k) {
        const auto r = matrix_subordination_check(table(s.factoring(), n), table(s.factoring(), n), n);
        o.require(r.holds && r.residual1 == 0.0 && r.residual2 == 0.0, "factoring pair " + std::to_string(k));
    }
    try {
        matrix_subordination_check(table(s.non_factoring(), n), table(s.factoring(), n), n);
        o.fail("non-factoring input accepted");
    } catch (const PreconditionError& e) {
        o.require(e.kind() == Precondition::not_factoring, std::string("wrong precondition: ") + e.what());
    }
    return o;
}

struct Run {
    int status = -1;
    std::string out;
};

Run run(const std::string& args)
{
    Run r;
    const std::string cmd = std::string(BIFREE_CLI) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe)
        return r;
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0)
        r.out.append(buf.data(), got);
    const int status = pclose(pipe);
    r.status = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

Outcome cli()
{
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    const auto v = run("verify --seed 1 --order 6");
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.require(v.status == 0, "verify exit " + std::to_string(v.status));
    o.require(secs < 30.0, "verify took " + std::to_string(secs) + " s");

    const std::string fx = std::string(BIFREE_FIXTURES) + "/";
    const std::string common = "--format json --order 8 ";
    const std::vector<std::string> commands{
        "convolve " + fx + "B.json " + fx + "B.json",   "convolve " + fx + "B.json " + fx + "identity.json",
        "transforms " + fx + "B.json",                  "dykema " + fx + "B.json " + fx + "B.json",
        "dykema " + fx + "F.json " + fx + "B.json",     "subordinate " + fx + "F.json " + fx + "F.json",
    };
    std::vector<nlohmann::json> reports;
    for (const auto& c : commands) {
        const auto first = run(common + c);
        const auto second = run(common + c);
        o.require(first.status == 0, c + ": exit " + std::to_string(first.status));
        o.require(first.out == second.out, c + ": output differs between runs");
        reports.push_back(nlohmann::json::parse(first.out, nullptr, false));
    }
    try {
        const auto& bb = reports[0];
        o.require(bb["oracle"][1][1] == "1" && bb["oracle"][2][0] == "7/16", "B,B product table");
        o.require(reports[1]["oracle"] == reports[1]["routes"][0]["table"], "B with identity");
        const auto& s = reports[2]["s_a"];
        o.require(s[0] == "2" && s[1] == "-6" && s[2] == "48", "S_B row");
        o.require(reports[2]["partial_s"][0][0] == "4", "partial S of B");
        const auto& d = reports[3];
        o.require(d["holds"] == false && d["limits"]["lhs12"] == "-60" && d["limits"]["rhs12"] == "-24",
                  "dykema B,B");
        o.require(reports[4]["holds"] == true, "dykema F,B");
        const auto& sub = reports[5];
        o.require(sub["scalar_subordination"]["exact_zero"] == true && sub["matrix_subordination"]["holds"] == true
                      && sub["matrix_subordination"]["residual1"] == 0.0 && sub["matrix_subordination"]["residual2"] == 0.0,
                  "subordinate F,F");
    } catch (const nlohmann::json::exception& e) {
        o.fail(std::string("report shape: ") + e.what());
    }

    const auto haar = run("convolve " + fx + "haar.json " + fx + "B.json");
    o.require(haar.status == 3, "haar exit " + std::to_string(haar.status));
    return o;
}

} // namespace

int main()
{
    struct Criterion {
        int id;
        const char* name;
        double budget;  // seconds, 0 when none is stated
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "series round trips at order 12", 5.0, series_round_trips},
        {2, "word oracle vs non-crossing sum", 10.0, oracle_cross_validation},
        {3, "partial S multiplicative", 0.0, partial_s_multiplicative},
        {4, "three routes equal the oracle", 0.0, route_agreement},
        {5, "Bernoulli worked case", 0.0, bernoulli_case},
        {6, "twisted product predicate", 20.0, dykema},
        {7, "zeta limits in closed form", 0.0, limits},
        {8, "matrix subordination", 0.0, matrix_subordination},
        {9, "command line determinism", 0.0, cli},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.budget > 0 && secs >= c.budget)
            o.fail("over budget");
        failures += o.pass ? 0 : 1;
        std::printf("criterion %d: %s  %s (%.2f s)%s%s\n", c.id, o.pass ? "PASS" : "FAIL", c.name, secs,
                    o.pass ? "" : "  ", o.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
