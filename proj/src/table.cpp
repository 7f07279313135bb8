#include "wavesynth/table.hpp"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <openssl/evp.h>

#include "wavesynth/error.hpp"

namespace wavesynth {

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) {
        throw std::invalid_argument("Table::add_row: row has " + std::to_string(row.size()) + " cells, expected " +
                                    std::to_string(columns.size()));
    }
    rows.push_back(std::move(row));
}

std::size_t Table::column_index(std::string_view name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == name) return i;
    }
    throw std::out_of_range("no column named '" + std::string(name) + "'");
}

double Table::number(std::size_t row, std::string_view column) const {
    const Cell& c = rows.at(row).at(column_index(column));
    if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
    if (const auto* d = std::get_if<double>(&c)) return *d;
    throw std::invalid_argument("column '" + std::string(column) + "' is not numeric");
}

std::string format_cell(const Cell& c) {
    if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
    if (const auto* d = std::get_if<double>(&c)) {
        std::array<char, 40> buf{};
        std::snprintf(buf.data(), buf.size(), "%.17g", *d);
        std::string s(buf.data());
        // Keep doubles recognisable as such when re-read.
        if (s.find_first_of(".eEni") == std::string::npos) s += ".0";
        return s;
    }
    return std::get<std::string>(c);
}

void write_csv(const Table& table, std::ostream& out, std::string_view comment) {
    if (!comment.empty()) out << "# " << comment << '\n';
    for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_cell(row[i]);
        out << '\n';
    }
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream ss(line);
    while (std::getline(ss, cur, ',')) out.push_back(cur);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

Cell parse_cell(const std::string& tok) {
    if (tok.empty()) return std::string{};
    const bool floaty = tok.find_first_of(".eEnNiI") != std::string::npos;
    try {
        std::size_t used = 0;
        if (!floaty) {
            const long long v = std::stoll(tok, &used);
            if (used == tok.size()) return static_cast<std::int64_t>(v);
        } else {
            // strtod rather than stod: subnormal values must parse, not throw.
            char* end = nullptr;
            const double v = std::strtod(tok.c_str(), &end);
            if (end == tok.c_str() + tok.size()) return v;
        }
    } catch (const std::exception&) {
    }
    return tok;
}

} // namespace

Table read_csv(std::istream& in) {
    Table t;
    std::string line;
    bool header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            t.columns = split(line);
            header = true;
            continue;
        }
        std::vector<Cell> row;
        for (const auto& tok : split(line)) row.push_back(parse_cell(tok));
        t.add_row(std::move(row));
    }
    return t;
}

std::string sha256_hex(std::string_view bytes) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1) {
        throw std::runtime_error("sha256: OpenSSL digest failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string hex;
    hex.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        hex.push_back(kHex[digest[i] >> 4]);
        hex.push_back(kHex[digest[i] & 0xF]);
    }
    return hex;
}

EmittedReport emit_report(const Table& table, const std::string& config_json, const std::filesystem::path& dir,
                          const std::string& name) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    EmittedReport rep;
    rep.config_path = dir / (name + ".config.json");
    rep.csv_path = dir / (name + ".csv");
    rep.config_sha256 = sha256_hex(config_json);
    {
        std::ofstream f(rep.config_path, std::ios::binary);
        if (!f) throw IoError("cannot open " + rep.config_path.string() + " for writing");
        f << config_json;
        if (!f) throw IoError("write failed: " + rep.config_path.string());
    }
    std::ofstream f(rep.csv_path, std::ios::binary);
    if (!f) throw IoError("cannot open " + rep.csv_path.string() + " for writing");
    write_csv(table, f, "config_sha256=" + rep.config_sha256);
    if (!f) throw IoError("write failed: " + rep.csv_path.string());
    return rep;
}

} // namespace wavesynth
