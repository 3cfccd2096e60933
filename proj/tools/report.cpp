#include "report.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

namespace lamq::cli {

std::string format_double(double v) {
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string format_cell(const Cell& c) {
    struct Visitor {
        std::string operator()(std::monostate) const { return ""; }
        std::string operator()(std::int64_t v) const { return std::to_string(v); }
        std::string operator()(std::uint64_t v) const { return std::to_string(v); }
        std::string operator()(double v) const { return format_double(v); }
        std::string operator()(bool v) const { return v ? "true" : "false"; }
        std::string operator()(const std::string& v) const {
            if (v.find_first_of(",\"\n") == std::string::npos)
                return v;
            std::string q = "\"";
            for (char ch : v) {
                if (ch == '"')
                    q += '"';
                q += ch;
            }
            return q + '"';
        }
    };
    return std::visit(Visitor{}, c);
}

nlohmann::ordered_json to_json(const Cell& c) {
    struct Visitor {
        nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
        nlohmann::ordered_json operator()(std::int64_t v) const { return v; }
        nlohmann::ordered_json operator()(std::uint64_t v) const { return v; }
        nlohmann::ordered_json operator()(double v) const {
            if (!std::isfinite(v))
                return format_double(v);
            return v;
        }
        nlohmann::ordered_json operator()(bool v) const { return v; }
        nlohmann::ordered_json operator()(const std::string& v) const { return v; }
    };
    return std::visit(Visitor{}, c);
}

void Report::write_csv(std::ostream& out) const {
    for (const auto& [k, v] : metadata)
        out << "# " << k << '=' << format_cell(v) << '\n';
    for (const auto& [k, v] : summary)
        out << "# result." << k << '=' << format_cell(v) << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i)
        out << (i ? "," : "") << columns[i];
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << format_cell(row[i]);
        out << '\n';
    }
}

void Report::write_json(std::ostream& out) const {
    nlohmann::ordered_json doc;
    auto& m = doc["metadata"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : metadata)
        m[k] = to_json(v);
    auto& s = doc["summary"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : summary)
        s[k] = to_json(v);
    doc["columns"] = columns;
    auto& r = doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
        nlohmann::ordered_json o = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size() && i < columns.size(); ++i)
            o[columns[i]] = to_json(row[i]);
        r.push_back(std::move(o));
    }
    for (const auto& [k, v] : extra.items())
        doc[k] = v;
    out << doc.dump(2) << '\n';
}

} // namespace lamq::cli
