#pragma once

#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace zetastrips {

enum class CacheKind { Gram, Boundaries, Zeros, Strips };

std::string_view to_string(CacheKind kind) noexcept;

inline constexpr int kCacheSchemaVersion = 1;

/// Sidecar metadata of a cached payload (`<kind>.meta.json`).
struct CacheEntry {
    int schema_version = kCacheSchemaVersion;
    CacheKind kind = CacheKind::Gram;
    /// FNV-1a of the payload file.
    std::string checksum;
    /// Fingerprint of the configuration that produced the payload.
    std::string key;
};

enum class CacheStatus { Missing, Stale, Corrupt, Valid };

/// Directory of CSV payloads with JSON sidecars. The payload is renamed into
/// place before its sidecar, and a payload is only served when its checksum
/// matches, so a reader never sees a torn entry. Writers are serialized by
/// an in-process mutex and an advisory lock on `<dir>/.lock`.
class Cache {
public:
    explicit Cache(std::filesystem::path dir);

    const std::filesystem::path& dir() const noexcept { return dir_; }

    void store(CacheKind kind, std::string_view key, std::string_view payload);

    /// Payload if present, current and intact; nullopt when missing or stale.
    /// Throws Error(CacheCorrupt) on a checksum or metadata failure.
    std::optional<std::string> load(CacheKind kind, std::string_view key) const;

    CacheStatus status(CacheKind kind, std::string_view key) const;

    /// Checksum audit of every entry present, independent of configuration.
    std::vector<std::pair<CacheKind, CacheStatus>> audit() const;

    std::filesystem::path payload_path(CacheKind kind) const;
    std::filesystem::path meta_path(CacheKind kind) const;

private:
    std::optional<CacheEntry> read_meta(CacheKind kind) const;

    std::filesystem::path dir_;
    mutable std::mutex write_mutex_;
};

} // namespace zetastrips
