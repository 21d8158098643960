#include "render.hpp"

#include <sstream>

namespace bifree::cli {

namespace {

bool is_complex(const Json& j)
{
    return j.is_object() && j.size() == 2 && j.contains("re") && j.contains("im");
}

bool is_scalar(const Json& j)
{
    return j.is_primitive() || is_complex(j);
}

std::string scalar(const Json& j)
{
    if (is_complex(j))
        return format_plain(Complex(j["re"].get<double>(), j["im"].get<double>()));
    if (j.is_string())
        return j.get<std::string>();
    if (j.is_boolean())
        return j.get<bool>() ? "yes" : "no";
    if (j.is_null())
        return "-";
    return j.dump();
}

bool is_vector(const Json& j)
{
    if (!j.is_array())
        return false;
    for (const auto& x : j)
        if (!is_scalar(x))
            return false;
    return true;
}

bool is_grid(const Json& j)
{
    if (!j.is_array() || j.empty())
        return false;
    for (const auto& x : j)
        if (!is_vector(x))
            return false;
    return true;
}

std::string line(const Json& v)
{
    if (v.empty())
        return "-";
    // comma separated once an entry has its own spaces
    std::string sep = " ";
    for (const auto& x : v)
        if (scalar(x).find(' ') != std::string::npos)
            sep = ", ";
    std::string s;
    for (const auto& x : v) {
        if (!s.empty())
            s += sep;
        s += scalar(x);
    }
    return s;
}

void render(std::ostringstream& out, const Json& j, const std::string& indent)
{
    for (const auto& [key, v] : j.items()) {
        if (is_scalar(v)) {
            out << indent << key << ": " << scalar(v) << '\n';
        } else if (is_vector(v)) {
            out << indent << key << ": " << line(v) << '\n';
        } else if (is_grid(v)) {
            out << indent << key << ":\n";
            for (const auto& row : v)
                out << indent << "  " << line(row) << '\n';
        } else if (v.is_array()) {
            out << indent << key << ":\n";
            for (const auto& item : v) {
                out << indent << "  -\n";
                render(out, item, indent + "    ");
            }
        } else {
            out << indent << key << ":\n";
            render(out, v, indent + "  ");
        }
    }
}

} // namespace

Json value(const Rational& x)
{
    return format_rational(x);
}

Json value(const Complex& x)
{
    return Json{{"re", x.real()}, {"im", x.imag()}};
}

std::string plain(const Json& report)
{
    std::ostringstream out;
    render(out, report, "");
    return out.str();
}

} // namespace bifree::cli
