#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace zetastrips::io {

/// 12 significant digits, '.' decimal point regardless of locale.
std::string fmt12(double value);
/// Shortest representation that parses back to the same double.
std::string fmt_exact(double value);

/// Locale-independent parse; throws Error(CacheCorrupt) on malformed input.
double parse_double(std::string_view text);
long parse_long(std::string_view text);

/// 64-bit FNV-1a, rendered as 16 hex digits.
std::string checksum(std::string_view payload);

/// Writes to a sibling temporary and renames over `path`, so readers see
/// either the old or the new file in full.
void write_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Column position by name; throws Error(CacheCorrupt) if absent.
    std::size_t column(std::string_view name) const;
};

CsvTable parse_csv(std::string_view text);

/// Builds CSV text row by row.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);

    CsvWriter& cell(std::string_view text);
    CsvWriter& cell(double value); // 12 significant digits
    CsvWriter& cell(long value);
    CsvWriter& exact(double value);
    void end_row();

    const std::string& str() const noexcept { return out_; }

private:
    std::string out_;
    bool row_open_ = false;
};

} // namespace zetastrips::io
