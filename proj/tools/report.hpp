#pragma once

// Tabular output shared by the subcommands: '#'-prefixed metadata lines plus a
// header row for CSV, or a single JSON document {metadata, summary, rows}.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace lamq::cli {

using Cell = std::variant<std::monostate, std::int64_t, std::uint64_t, double, bool, std::string>;

/// Shortest text that keeps 17 significant digits, independent of locale.
std::string format_double(double v);
std::string format_cell(const Cell& c);
nlohmann::ordered_json to_json(const Cell& c);

struct Report {
    std::vector<std::pair<std::string, Cell>> metadata;
    std::vector<std::pair<std::string, Cell>> summary;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    /// nested data that only the JSON form carries
    nlohmann::ordered_json extra = nlohmann::ordered_json::object();

    void meta(std::string key, Cell value) { metadata.emplace_back(std::move(key), std::move(value)); }
    void result(std::string key, Cell value) { summary.emplace_back(std::move(key), std::move(value)); }

    void write_csv(std::ostream& out) const;
    void write_json(std::ostream& out) const;
};

} // namespace lamq::cli
