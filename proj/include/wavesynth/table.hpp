#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace wavesynth {

using Cell = std::variant<std::int64_t, double, std::string>;

/// Column-named result table; rows keep insertion order.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    Table() = default;
    explicit Table(std::vector<std::string> cols) : columns(std::move(cols)) {}

    void add_row(std::vector<Cell> row);
    std::size_t column_index(std::string_view name) const;
    /// Numeric view of a cell (integers widened, strings rejected).
    double number(std::size_t row, std::string_view column) const;
};

/// Integers verbatim, doubles with 17 significant digits, strings verbatim.
std::string format_cell(const Cell& c);

/// Optional `# <comment>` first line, then header and rows; LF endings.
void write_csv(const Table& table, std::ostream& out, std::string_view comment = {});

/// Inverse of write_csv: skips `#` lines, integers stay integers, tokens with
/// a decimal point, exponent, nan or inf become doubles.
Table read_csv(std::istream& in);

std::string sha256_hex(std::string_view bytes);

struct EmittedReport {
    std::filesystem::path csv_path;
    std::filesystem::path config_path;
    std::string config_sha256;
};

/// Writes `<dir>/<name>.config.json` (exactly `config_json`) and
/// `<dir>/<name>.csv` whose first line is `# config_sha256=<hex>` of the
/// sidecar bytes. Throws IoError naming the path on I/O failure.
EmittedReport emit_report(const Table& table, const std::string& config_json, const std::filesystem::path& dir,
                          const std::string& name);

} // namespace wavesynth
