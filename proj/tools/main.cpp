#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include <CLI11.hpp>

#include "bifree/biconv.hpp"
#include "bifree/errors.hpp"
#include "bifree/free_oracle.hpp"
#include "bifree/matrix_s.hpp"
#include "bifree/measure.hpp"
#include "bifree/transforms.hpp"
#include "bifree/verify.hpp"
#include "render.hpp"

using namespace bifree;
using bifree::cli::Json;

namespace {

enum Exit { ok = 0, failed = 1, parse_failed = 2, precondition = 3 };

struct Config {
    int order = 8;
    std::string mode = "auto";
    std::optional<double> tol;
    std::uint64_t seed = 1;
    std::string format = "plain";
    int cases = 6;

    Tolerance tolerance() const
    {
        if (!tol)
            return {};
        return {*tol, *tol / 1000.0};
    }

    std::optional<Mode> forced() const
    {
        if (mode == "rational")
            return Mode::rational;
        if (mode == "complex")
            return Mode::complex;
        return std::nullopt;
    }
};

void emit(const Config& cfg, const Json& report)
{
    if (cfg.format == "json")
        std::cout << report.dump(2) << '\n';
    else
        std::cout << cli::plain(report);
}

template <class T>
const char* mode_name()
{
    return Field<T>::name;
}

// Runs f.template operator()<T>() for the coefficient type implied by the measures.
template <class F>
int dispatch(const Config& cfg, const std::vector<const AtomicPairMeasure*>& mus, F&& f)
{
    if (resolve_mode(mus, cfg.forced()) == Mode::rational)
        return f.template operator()<Rational>();
    return f.template operator()<Complex>();
}

Json mismatch(const std::optional<std::pair<int, int>>& at)
{
    if (!at)
        return nullptr;
    return Json::array({at->first, at->second});
}

template <class T>
Complex to_complex(const T& x)
{
    if constexpr (std::is_same_v<T, Rational>)
        return {x.get_d(), 0.0};
    else
        return x;
}

template <class T>
Complex evaluate(const Series2<T>& s, Complex z, Complex w)
{
    Complex sum = 0.0;
    Complex zj = 1.0;
    for (int j = 0; j <= s.order_z(); ++j, zj *= z) {
        Complex wk = 1.0;
        for (int k = 0; k <= s.order_w(); ++k, wk *= w)
            sum += to_complex(s(j, k)) * zj * wk;
    }
    return sum;
}

// Truncated matrix series at the numeric point Gamma = [[z, zeta], [0, w]].
template <class T>
Json evaluate(const UTGammaSeries<T>& g, Complex z, Complex w, Complex zeta)
{
    return Json{{"d1", cli::value(evaluate(g.d1, z, w))},
                {"off", cli::value(zeta * evaluate(g.off, z, w))},
                {"d2", cli::value(evaluate(g.d2, z, w))}};
}

std::vector<Complex> parse_point(const std::string& text)
{
    std::vector<Complex> out;
    std::stringstream in(text);
    std::string part;
    while (std::getline(in, part, ',')) {
        try {
            std::size_t used = 0;
            const double v = std::stod(part, &used);
            if (used != part.size())
                throw ParseError("bad number in --at: " + part);
            out.emplace_back(v, 0.0);
        } catch (const std::logic_error&) {
            throw ParseError("bad number in --at: " + part);
        }
    }
    if (out.size() != 3)
        throw ParseError("--at expects z,w,zeta");
    return out;
}

int cmd_convolve(const Config& cfg, const std::string& f1, const std::string& f2)
{
    const auto mu1 = load_measure_file(f1);
    const auto mu2 = load_measure_file(f2);
    return dispatch(cfg, {&mu1, &mu2}, [&]<class T>() {
        const auto p1 = moments_from_atoms<T>(mu1, cfg.order);
        const auto p2 = moments_from_atoms<T>(mu2, cfg.order);
        const auto r = convolve(p1, p2, cfg.order, cfg.tolerance());

        Json routes = Json::array();
        for (const auto& route : r.routes)
            routes.push_back({{"name", route.name},
                              {"max_discrepancy", route.max_discrepancy},
                              {"first_mismatch", mismatch(route.first_mismatch)},
                              {"table", cli::table(route.table)}});
        Json report{{"command", "convolve"},
                    {"mode", mode_name<T>()},
                    {"order", r.order},
                    {"oracle", cli::table(r.oracle)},
                    {"routes", routes},
                    {"subordination", {{"residual", r.subordination.residual}, {"exact_zero", r.subordination.exact_zero}}},
                    {"agree", r.agree}};
        emit(cfg, report);
        if (!r.agree) {
            std::cerr << "error: routes disagree with the oracle\n";
            return failed;
        }
        return ok;
    });
}

template <class S>
Json optional_series(const std::optional<S>& s)
{
    if (!s)
        return nullptr;
    return cli::series(*s);
}

int cmd_transforms(const Config& cfg, const std::string& f)
{
    const auto mu = load_measure_file(f);
    return dispatch(cfg, {&mu}, [&]<class T>() {
        const auto p = moments_from_atoms<T>(mu, cfg.order);
        const auto b = bundle(p);
        Json report{{"command", "transforms"},
                    {"mode", mode_name<T>()},
                    {"order", b.order},
                    {"moments", cli::table(p)},
                    {"psi_a", cli::series(b.psi_a)},
                    {"psi_b", cli::series(b.psi_b)},
                    {"psi_ab", cli::series(b.psi_ab)},
                    {"h_a", cli::series(b.h_a)},
                    {"h_b", cli::series(b.h_b)},
                    {"h_ab", cli::series(b.h_ab)},
                    {"eta_a", cli::series(b.eta_a)},
                    {"eta_b", cli::series(b.eta_b)},
                    {"s_a", optional_series(b.s_a)},
                    {"s_b", optional_series(b.s_b)},
                    {"partial_s", optional_series(b.partial_s)},
                    {"sigma", optional_series(b.sigma)},
                    {"missing", b.missing}};
        emit(cfg, report);
        return ok;
    });
}

int cmd_dykema(const Config& cfg, const std::string& f1, const std::string& f2, const std::string& at)
{
    const auto mu1 = load_measure_file(f1);
    const auto mu2 = load_measure_file(f2);
    const std::optional<std::vector<Complex>> point = at.empty() ? std::nullopt : std::optional(parse_point(at));
    return dispatch(cfg, {&mu1, &mu2}, [&]<class T>() {
        const auto p1 = moments_from_atoms<T>(mu1, cfg.order);
        const auto p2 = moments_from_atoms<T>(mu2, cfg.order);
        const auto r = dykema_check(p1, p2, cfg.order, cfg.tolerance());
        Json report{{"command", "dykema-check"},
                    {"mode", mode_name<T>()},
                    {"order", r.order},
                    {"holds", r.holds},
                    {"limits",
                     {{"lhs12", cli::value(r.limit_lhs12)},
                      {"rhs12", cli::value(r.limit_rhs12)},
                      {"d1", cli::value(r.limit_d1)},
                      {"d2", cli::value(r.limit_d2)}}},
                    {"first_discrepancy", cli::discrepancy(r.first_discrepancy)},
                    {"lhs", cli::matrix(r.lhs)},
                    {"rhs", cli::matrix(r.rhs)}};
        if (point) {
            const auto& g = *point;
            report["at"] = {{"gamma", {cli::value(g[0]), cli::value(g[1]), cli::value(g[2])}},
                            {"lhs", evaluate(r.lhs, g[0], g[1], g[2])},
                            {"rhs", evaluate(r.rhs, g[0], g[1], g[2])}};
        }
        emit(cfg, report);
        return ok;
    });
}

int cmd_subordinate(const Config& cfg, const std::string& f1, const std::string& f2)
{
    const auto mu1 = load_measure_file(f1);
    const auto mu2 = load_measure_file(f2);
    return dispatch(cfg, {&mu1, &mu2}, [&]<class T>() {
        const auto p1 = moments_from_atoms<T>(mu1, cfg.order);
        const auto p2 = moments_from_atoms<T>(mu2, cfg.order);
        require_admissible(p1, p2, true);
        const auto product = product_pair_moments(p1, p2, cfg.order);
        const auto scalar = subordination_residual(p1, p2, product);
        const auto germs = subordination(p1, p2, psi_a(product), psi_b(product));

        Json matrix;
        try {
            const auto r = matrix_subordination_check(p1, p2, cfg.order, cfg.tolerance());
            matrix = {{"applicable", true},
                   {"holds", r.holds},
                   {"residual1", r.residual1},
                   {"residual2", r.residual2},
                   {"first_discrepancy1", cli::discrepancy(r.first_discrepancy1)},
                   {"first_discrepancy2", cli::discrepancy(r.first_discrepancy2)}};
        } catch (const PreconditionError& e) {
            if (e.kind() != Precondition::not_factoring)
                throw;
            matrix = {{"applicable", false}, {"reason", e.failures()}};
        }

        Json report{{"command", "subordinate"},
                    {"mode", mode_name<T>()},
                    {"order", cfg.order},
                    {"scalar_subordination",
                     {{"residual", scalar.residual},
                      {"exact_zero", scalar.exact_zero},
                      {"precision", {scalar.precision_z, scalar.precision_w}}}},
                    {"omega",
                     {{"a1", cli::series(germs.omega_a1)},
                      {"b1", cli::series(germs.omega_b1)},
                      {"a2", cli::series(germs.omega_a2)},
                      {"b2", cli::series(germs.omega_b2)}}},
                    {"matrix_subordination", matrix}};
        emit(cfg, report);
        return ok;
    });
}

int cmd_oracle(const Config& cfg, const std::string& f1, const std::string& f2, const std::string& text)
{
    const auto mu1 = load_measure_file(f1);
    const auto mu2 = load_measure_file(f2);
    const Word word = Word::parse(text);
    const Word canonical = word.canonical();
    return dispatch(cfg, {&mu1, &mu2}, [&]<class T>() {
        const int n = std::max(cfg.order, word.degree());
        FreeProductOracle<T> oracle(moments_from_atoms<T>(mu1, n), moments_from_atoms<T>(mu2, n));
        const T moment = oracle.word_moment(word);
        Json report{{"command", "oracle"},
                    {"mode", mode_name<T>()},
                    {"word", word.to_string()},
                    {"canonical", canonical.to_string()},
                    {"moment", cli::value(moment)}};
        bool agree = true;
        if (canonical.size() <= static_cast<std::size_t>(nc_max_length)) {
            const T check = oracle.nc_word_moment(canonical);
            agree = Field<T>::near(moment, check, cfg.tolerance());
            report["noncrossing"] = cli::value(check);
        } else {
            report["noncrossing"] = nullptr;
        }
        report["agree"] = agree;
        emit(cfg, report);
        if (!agree) {
            std::cerr << "error: oracle evaluators disagree\n";
            return failed;
        }
        return ok;
    });
}

int cmd_verify(const Config& cfg)
{
    const auto r = run_verify(cfg.seed, cfg.order, {cfg.cases, false});
    Json properties = Json::array();
    for (const auto& p : r.results)
        properties.push_back({{"name", p.name}, {"cases", p.cases}, {"passed", p.passed}, {"detail", p.detail}});
    const auto* first = r.first_failure();
    Json report{{"command", "verify"},
                {"seed", r.seed},
                {"order", r.order},
                {"properties", properties},
                {"passed", r.passed()},
                {"first_failure", first ? Json(first->name) : Json(nullptr)}};
    emit(cfg, report);
    if (first) {
        std::cerr << "error: property " << first->name << " failed: " << first->detail << '\n';
        return failed;
    }
    return ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Bi-free multiplicative convolution and its transforms over truncated power series."};
    app.name("bifree");
    app.require_subcommand(1);
    app.fallthrough();

    Config cfg;
    app.add_option("--order", cfg.order, "truncation order N")->check(CLI::PositiveNumber);
    app.add_option("--mode", cfg.mode, "coefficient mode")->check(CLI::IsMember({"auto", "rational", "complex"}));
    app.add_option("--tol", cfg.tol, "complex-mode relative tolerance (absolute is tol/1000)")
        ->check(CLI::PositiveNumber);
    app.add_option("--seed", cfg.seed, "seed for verify");
    app.add_option("--format", cfg.format, "report format")->check(CLI::IsMember({"plain", "json"}));

    std::string mu1, mu2, word, at;

    auto* convolve = app.add_subcommand("convolve", "product table by the oracle and three routes");
    convolve->add_option("MU1", mu1)->required();
    convolve->add_option("MU2", mu2)->required();

    auto* transforms = app.add_subcommand("transforms", "transform bundle of one measure");
    transforms->add_option("MU", mu1)->required();

    auto* dykema = app.add_subcommand("dykema-check", "twisted product formula for S_X");
    dykema->alias("dykema");
    dykema->add_option("MU1", mu1)->required();
    dykema->add_option("MU2", mu2)->required();
    dykema->add_option("--at", at, "also evaluate both sides at z,w,zeta");

    auto* subordinate = app.add_subcommand("subordinate", "subordination residuals");
    subordinate->add_option("MU1", mu1)->required();
    subordinate->add_option("MU2", mu2)->required();

    auto* oracle = app.add_subcommand("oracle", "trace of a word in the free product");
    oracle->add_option("MU1", mu1)->required();
    oracle->add_option("MU2", mu2)->required();
    oracle->add_option("WORD", word, "e.g. \"x1 x2^2 y1\"")->required();

    auto* verify = app.add_subcommand("verify", "randomized property suite");
    verify->add_option("--cases", cfg.cases, "cases per property")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : parse_failed;
    }

    try {
        if (*convolve)
            return cmd_convolve(cfg, mu1, mu2);
        if (*transforms)
            return cmd_transforms(cfg, mu1);
        if (*dykema)
            return cmd_dykema(cfg, mu1, mu2, at);
        if (*subordinate)
            return cmd_subordinate(cfg, mu1, mu2);
        if (*oracle)
            return cmd_oracle(cfg, mu1, mu2, word);
        return cmd_verify(cfg);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return parse_failed;
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return precondition;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return failed;
    }
}
