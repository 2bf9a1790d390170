#include "zetastrips/cache.hpp"

#include "zetastrips/error.hpp"
#include "zetastrips/io.hpp"

#include <json.hpp>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

namespace zetastrips {

namespace fs = std::filesystem;

namespace {

constexpr CacheKind kAllKinds[] = {CacheKind::Gram, CacheKind::Boundaries, CacheKind::Zeros,
                                   CacheKind::Strips};

std::optional<CacheKind> kind_from_string(std::string_view name)
{
    for (CacheKind k : kAllKinds) {
        if (to_string(k) == name) {
            return k;
        }
    }
    return std::nullopt;
}

class DirLock {
public:
    explicit DirLock(const fs::path& dir)
    {
        const auto path = (dir / ".lock").string();
        fd_ = ::open(path.c_str(), O_CREAT | O_RDWR, 0644);
        if (fd_ < 0) {
            throw Error(ErrorKind::Io, "cannot open cache lock " + path);
        }
        ::flock(fd_, LOCK_EX);
    }
    ~DirLock()
    {
        ::flock(fd_, LOCK_UN);
        ::close(fd_);
    }
    DirLock(const DirLock&) = delete;
    DirLock& operator=(const DirLock&) = delete;

private:
    int fd_ = -1;
};

} // namespace

std::string_view to_string(CacheKind kind) noexcept
{
    switch (kind) {
    case CacheKind::Gram: return "gram";
    case CacheKind::Boundaries: return "boundaries";
    case CacheKind::Zeros: return "zeros";
    case CacheKind::Strips: return "strips";
    }
    return "unknown";
}

Cache::Cache(fs::path dir) : dir_(std::move(dir)) {}

fs::path Cache::payload_path(CacheKind kind) const
{
    return dir_ / (std::string(to_string(kind)) + ".csv");
}

fs::path Cache::meta_path(CacheKind kind) const
{
    return dir_ / (std::string(to_string(kind)) + ".meta.json");
}

void Cache::store(CacheKind kind, std::string_view key, std::string_view payload)
{
    std::lock_guard guard(write_mutex_);
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) {
        throw Error(ErrorKind::Io, "cannot create cache directory " + dir_.string());
    }
    DirLock lock(dir_);

    nlohmann::json meta;
    meta["schema_version"] = kCacheSchemaVersion;
    meta["kind"] = std::string(to_string(kind));
    meta["checksum"] = io::checksum(payload);
    meta["key"] = std::string(key);

    io::write_atomic(payload_path(kind), payload);
    io::write_atomic(meta_path(kind), meta.dump(2) + "\n");
}

std::optional<CacheEntry> Cache::read_meta(CacheKind kind) const
{
    if (!fs::exists(meta_path(kind))) {
        return std::nullopt;
    }
    try {
        const auto meta = nlohmann::json::parse(io::read_file(meta_path(kind)));
        CacheEntry entry;
        entry.schema_version = meta.at("schema_version").get<int>();
        const auto stored_kind = kind_from_string(meta.at("kind").get<std::string>());
        if (!stored_kind || *stored_kind != kind) {
            throw Error(ErrorKind::CacheCorrupt, "cache metadata kind mismatch");
        }
        entry.kind = *stored_kind;
        entry.checksum = meta.at("checksum").get<std::string>();
        entry.key = meta.at("key").get<std::string>();
        return entry;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::CacheCorrupt,
                    "unreadable metadata for " + std::string(to_string(kind)) + ": " + e.what());
    }
}

std::optional<std::string> Cache::load(CacheKind kind, std::string_view key) const
{
    const auto entry = read_meta(kind);
    if (!entry || entry->schema_version != kCacheSchemaVersion || entry->key != key) {
        return std::nullopt;
    }
    if (!fs::exists(payload_path(kind))) {
        return std::nullopt;
    }
    std::string payload = io::read_file(payload_path(kind));
    if (io::checksum(payload) != entry->checksum) {
        throw Error(ErrorKind::CacheCorrupt,
                    "checksum mismatch in cache entry '" + std::string(to_string(kind)) + "'");
    }
    return payload;
}

CacheStatus Cache::status(CacheKind kind, std::string_view key) const
{
    try {
        const auto entry = read_meta(kind);
        if (!entry || !fs::exists(payload_path(kind))) {
            return CacheStatus::Missing;
        }
        if (entry->schema_version != kCacheSchemaVersion || entry->key != key) {
            return CacheStatus::Stale;
        }
        return load(kind, key) ? CacheStatus::Valid : CacheStatus::Missing;
    } catch (const Error&) {
        return CacheStatus::Corrupt;
    }
}

std::vector<std::pair<CacheKind, CacheStatus>> Cache::audit() const
{
    std::vector<std::pair<CacheKind, CacheStatus>> out;
    for (CacheKind kind : kAllKinds) {
        try {
            const auto entry = read_meta(kind);
            if (!entry) {
                continue;
            }
            if (!fs::exists(payload_path(kind))) {
                out.emplace_back(kind, CacheStatus::Corrupt);
                continue;
            }
            const bool intact = io::checksum(io::read_file(payload_path(kind))) == entry->checksum;
            out.emplace_back(kind, intact ? CacheStatus::Valid : CacheStatus::Corrupt);
        } catch (const Error&) {
            out.emplace_back(kind, CacheStatus::Corrupt);
        }
    }
    return out;
}

} // namespace zetastrips
