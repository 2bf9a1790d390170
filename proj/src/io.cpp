#include "zetastrips/io.hpp"

#include "zetastrips/error.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

namespace zetastrips::io {

std::string fmt12(double value)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 12);
    return {buf, res.ptr};
}

std::string fmt_exact(double value)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return {buf, res.ptr};
}

double parse_double(std::string_view text)
{
    double value = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw Error(ErrorKind::CacheCorrupt, "malformed number '" + std::string(text) + "'");
    }
    return value;
}

long parse_long(std::string_view text)
{
    long value = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw Error(ErrorKind::CacheCorrupt, "malformed integer '" + std::string(text) + "'");
    }
    return value;
}

std::string checksum(std::string_view payload)
{
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : payload) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[hash & 0xf];
        hash >>= 4;
    }
    return out;
}

void write_atomic(const std::filesystem::path& path, std::string_view content)
{
    namespace fs = std::filesystem;
    std::error_code ec;
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path(), ec);
    }
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            throw Error(ErrorKind::Io, "cannot write " + tmp.string());
        }
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        throw Error(ErrorKind::Io, "cannot rename " + tmp.string() + ": " + ec.message());
    }
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::Io, "cannot read " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t CsvTable::column(std::string_view name) const
{
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) {
            return i;
        }
    }
    throw Error(ErrorKind::CacheCorrupt, "missing CSV column '" + std::string(name) + "'");
}

CsvTable parse_csv(std::string_view text)
{
    CsvTable table;
    bool first = true;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) {
            eol = text.size();
        }
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> cells;
        std::size_t start = 0;
        for (;;) {
            const std::size_t comma = line.find(',', start);
            cells.emplace_back(line.substr(start, comma - start));
            if (comma == std::string_view::npos) {
                break;
            }
            start = comma + 1;
        }
        if (first) {
            table.header = std::move(cells);
            first = false;
        } else {
            if (cells.size() != table.header.size()) {
                throw Error(ErrorKind::CacheCorrupt, "CSV row width differs from header");
            }
            table.rows.push_back(std::move(cells));
        }
    }
    return table;
}

CsvWriter::CsvWriter(std::vector<std::string> header)
{
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) {
            out_ += ',';
        }
        out_ += header[i];
    }
    out_ += '\n';
}

CsvWriter& CsvWriter::cell(std::string_view text)
{
    if (row_open_) {
        out_ += ',';
    }
    out_ += text;
    row_open_ = true;
    return *this;
}

CsvWriter& CsvWriter::cell(double value)
{
    return cell(std::string_view(fmt12(value)));
}

CsvWriter& CsvWriter::cell(long value)
{
    return cell(std::string_view(std::to_string(value)));
}

CsvWriter& CsvWriter::exact(double value)
{
    return cell(std::string_view(fmt_exact(value)));
}

void CsvWriter::end_row()
{
    out_ += '\n';
    row_open_ = false;
}

} // namespace zetastrips::io
