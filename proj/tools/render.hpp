#pragma once

// Report building blocks for the command line tool. Reports are built as ordered
// JSON and printed either as JSON or as indented plain text.

#include <string>

#include <json.hpp>

#include "bifree/coefficient.hpp"
#include "bifree/measure.hpp"
#include "bifree/series.hpp"
#include "bifree/ut_gamma.hpp"

namespace bifree::cli {

using Json = nlohmann::ordered_json;

// Rationals as "p/q" strings, complex numbers as {"re", "im"}.
Json value(const Rational& x);
Json value(const Complex& x);

template <class T>
Json series(const Series1<T>& s)
{
    Json out = Json::array();
    for (int k = 0; k <= s.order(); ++k)
        out.push_back(value(s[k]));
    return out;
}

// Rows indexed by the power of z.
template <class T>
Json series(const Series2<T>& s)
{
    Json out = Json::array();
    for (int j = 0; j <= s.order_z(); ++j) {
        Json row = Json::array();
        for (int k = 0; k <= s.order_w(); ++k)
            row.push_back(value(s(j, k)));
        out.push_back(row);
    }
    return out;
}

template <class T>
Json table(const PairDistribution<T>& p)
{
    Json out = Json::array();
    for (int m = 0; m <= p.order(); ++m) {
        Json row = Json::array();
        for (int n = 0; n <= p.order(); ++n)
            row.push_back(value(p(m, n)));
        out.push_back(row);
    }
    return out;
}

template <class T>
Json matrix(const UTGammaSeries<T>& g)
{
    return Json{{"d1", series(g.d1)}, {"off", series(g.off)}, {"d2", series(g.d2)}};
}

template <class T>
Json discrepancy(const std::optional<UTDiscrepancy<T>>& d)
{
    if (!d)
        return nullptr;
    return Json{{"entry", d->entry}, {"at", {d->at.j, d->at.k}}, {"lhs", value(d->at.lhs)}, {"rhs", value(d->at.rhs)}};
}

// Indented text: scalars inline, vectors on one line, tables one row per line.
std::string plain(const Json& report);

} // namespace bifree::cli
