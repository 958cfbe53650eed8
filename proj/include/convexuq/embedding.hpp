#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "convexuq/records.hpp"

namespace convexuq {

enum class ProviderMode { inline_, file, http };

std::string_view to_string(ProviderMode m);
std::optional<ProviderMode> parse_provider_mode(std::string_view s);

struct EmbeddingProviderConfig {
    ProviderMode mode = ProviderMode::inline_;
    std::optional<std::string> endpoint_url;               // http
    std::optional<std::filesystem::path> sidecar_path;     // file
    std::optional<std::filesystem::path> cache_path;       // http, optional
    std::size_t batch_size = 32;
    std::chrono::milliseconds timeout{30000};
    int max_retries = 3;
    std::chrono::milliseconds backoff_base{100};
    std::size_t max_in_flight = 4;
};

struct ResolveStats {
    std::size_t http_requests = 0;  // every POST attempt, including retries
    std::size_t retries = 0;
    std::size_t cache_hits = 0;     // records served from the on-disk cache
};

/// One embedding per input record, all of dimension `dim`.
struct ResolvedEmbeddings {
    std::vector<std::vector<double>> vectors;
    std::size_t dim = 0;
    ResolveStats stats;
};

/// 64-bit FNV-1a over the UTF-8 bytes.
std::uint64_t content_hash(std::string_view text);
std::string hash_hex(std::uint64_t h);

/// Directory of vectors keyed by content hash (16 hex chars per entry file).
/// Entries are written to a temp file and renamed into place.
class EmbeddingCache {
public:
    explicit EmbeddingCache(std::filesystem::path dir);

    std::optional<std::vector<double>> get(std::uint64_t key) const;
    void put(std::uint64_t key, const std::vector<double>& vec) const;

    std::filesystem::path entry_path(std::uint64_t key) const;

private:
    std::filesystem::path dir_;
};

/// Resolves an embedding for every record via the configured provider and
/// checks the uniform-dimension invariant.
ResolvedEmbeddings resolve_embeddings(std::span<const ResponseRecord> records, const EmbeddingProviderConfig& cfg);

}  // namespace convexuq
