#include "convexuq/embedding.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>
#include <unordered_map>

#include <httplib.h>
#include <json.hpp>

#include "convexuq/error.hpp"

namespace convexuq {

using nlohmann::json;

std::string_view to_string(ProviderMode m) {
    switch (m) {
        case ProviderMode::inline_: return "inline";
        case ProviderMode::file: return "file";
        case ProviderMode::http: return "http";
    }
    return "unknown";
}

std::optional<ProviderMode> parse_provider_mode(std::string_view s) {
    if (s == "inline") return ProviderMode::inline_;
    if (s == "file") return ProviderMode::file;
    if (s == "http") return ProviderMode::http;
    return std::nullopt;
}

std::uint64_t content_hash(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hash_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

std::vector<double> parse_vector(const json& arr) {
    if (!arr.is_array()) throw Error("embedding must be an array");
    std::vector<double> v;
    v.reserve(arr.size());
    for (const auto& x : arr) {
        if (!x.is_number()) throw Error("embedding entries must be numbers");
        const double d = x.get<double>();
        if (!std::isfinite(d)) throw Error("embedding entries must be finite");
        v.push_back(d);
    }
    return v;
}

std::string describe(const ResponseRecord& r, std::size_t index) {
    std::ostringstream os;
    os << "record " << index << " (prompt_id=" << r.prompt_id << ", model=" << r.model_name
       << ", temperature=" << r.temperature << ")";
    return os.str();
}

struct Endpoint {
    std::string scheme_host_port;
    std::string path;
};

Endpoint split_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw Error("endpoint url must include a scheme: " + url);
    if (url.compare(0, scheme_end, "http") != 0) throw Error("only http:// endpoints are supported: " + url);
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

class HttpEmbedder {
public:
    HttpEmbedder(const EmbeddingProviderConfig& cfg) : cfg_(cfg), endpoint_(split_url(*cfg.endpoint_url)) {}

    std::vector<std::vector<double>> embed_batch(const std::vector<std::string>& texts) {
        json body;
        body["texts"] = texts;
        const std::string payload = body.dump();

        std::string last_status = "no response";
        for (int attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
            if (attempt > 0) {
                ++retries_;
                std::this_thread::sleep_for(cfg_.backoff_base * (1LL << (attempt - 1)));
            }
            httplib::Client client(endpoint_.scheme_host_port);
            const auto secs = std::chrono::duration_cast<std::chrono::seconds>(cfg_.timeout);
            const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(cfg_.timeout - secs);
            client.set_connection_timeout(secs.count(), usecs.count());
            client.set_read_timeout(secs.count(), usecs.count());
            client.set_write_timeout(secs.count(), usecs.count());

            ++requests_;
            auto res = client.Post(endpoint_.path, payload, "application/json");
            if (!res) {
                last_status = "transport error: " + httplib::to_string(res.error());
                continue;
            }
            if (res->status != 200) {
                last_status = "status " + std::to_string(res->status);
                continue;
            }
            return decode(res->body, texts.size());
        }
        throw Error("embedding endpoint " + *cfg_.endpoint_url + " failed after " +
                    std::to_string(cfg_.max_retries) + " retries: " + last_status);
    }

    std::size_t requests() const { return requests_; }
    std::size_t retries() const { return retries_; }

private:
    static std::vector<std::vector<double>> decode(const std::string& body, std::size_t expected) {
        json reply;
        try {
            reply = json::parse(body);
        } catch (const json::parse_error& e) {
            throw Error(std::string("malformed embedding response: ") + e.what());
        }
        if (!reply.is_object() || !reply.contains("embeddings")) throw Error("embedding response lacks 'embeddings'");
        const json& arr = reply["embeddings"];
        if (!arr.is_array() || arr.size() != expected)
            throw Error("embedding response count does not match request");
        std::optional<std::size_t> dim;
        if (reply.contains("dim") && reply["dim"].is_number_integer()) dim = reply["dim"].get<std::size_t>();
        std::vector<std::vector<double>> out;
        out.reserve(expected);
        for (const auto& e : arr) {
            out.push_back(parse_vector(e));
            if (dim && out.back().size() != *dim) throw Error("embedding response violates declared dim");
        }
        return out;
    }

    const EmbeddingProviderConfig& cfg_;
    Endpoint endpoint_;
    std::atomic<std::size_t> requests_{0};
    std::atomic<std::size_t> retries_{0};
};

std::unordered_map<std::uint64_t, std::vector<double>> load_sidecar(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read embedding sidecar: " + path.string());
    std::unordered_map<std::uint64_t, std::vector<double>> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            const json obj = json::parse(line);
            std::uint64_t key;
            if (obj.contains("hash")) {
                key = std::stoull(obj.at("hash").get<std::string>(), nullptr, 16);
            } else {
                key = content_hash(obj.at("response").get<std::string>());
            }
            out[key] = parse_vector(obj.at("embedding"));
        } catch (const std::exception& e) {
            throw Error("sidecar line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

void resolve_http(std::span<const ResponseRecord> records, const EmbeddingProviderConfig& cfg,
                  ResolvedEmbeddings& out) {
    if (!cfg.endpoint_url || cfg.endpoint_url->empty()) throw Error("http provider requires an endpoint url");
    if (cfg.batch_size == 0) throw Error("batch_size must be positive");

    std::optional<EmbeddingCache> cache;
    if (cfg.cache_path) cache.emplace(*cfg.cache_path);

    std::unordered_map<std::uint64_t, std::vector<double>> known;
    std::vector<std::uint64_t> pending;  // unique uncached hashes, first-seen order
    std::vector<std::string> pending_text;
    for (const auto& r : records) {
        const auto key = content_hash(r.response_text);
        if (known.count(key)) continue;
        if (cache) {
            if (auto hit = cache->get(key)) {
                known.emplace(key, std::move(*hit));
                continue;
            }
        }
        known.emplace(key, std::vector<double>{});
        pending.push_back(key);
        pending_text.push_back(r.response_text);
    }
    for (const auto& r : records) {
        const auto key = content_hash(r.response_text);
        if (!known.at(key).empty()) ++out.stats.cache_hits;
    }

    const std::size_t n_batches = (pending.size() + cfg.batch_size - 1) / cfg.batch_size;
    HttpEmbedder embedder(cfg);
    std::vector<std::vector<std::vector<double>>> batch_results(n_batches);
    std::atomic<std::size_t> next{0};
    std::mutex err_mu;
    std::optional<std::string> first_error;

    auto worker = [&] {
        for (std::size_t b = next++; b < n_batches; b = next++) {
            {
                std::lock_guard lk(err_mu);
                if (first_error) return;
            }
            const std::size_t lo = b * cfg.batch_size;
            const std::size_t hi = std::min(pending.size(), lo + cfg.batch_size);
            std::vector<std::string> texts(pending_text.begin() + lo, pending_text.begin() + hi);
            try {
                batch_results[b] = embedder.embed_batch(texts);
            } catch (const std::exception& e) {
                std::lock_guard lk(err_mu);
                if (!first_error) first_error = e.what();
                return;
            }
        }
    };
    {
        const std::size_t n_workers = std::min(std::max<std::size_t>(cfg.max_in_flight, 1), n_batches);
        std::vector<std::jthread> pool;
        for (std::size_t i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    }
    out.stats.http_requests = embedder.requests();
    out.stats.retries = embedder.retries();
    if (first_error) throw Error(*first_error);

    for (std::size_t b = 0; b < n_batches; ++b) {
        for (std::size_t i = 0; i < batch_results[b].size(); ++i) {
            const auto key = pending[b * cfg.batch_size + i];
            if (cache) cache->put(key, batch_results[b][i]);
            known[key] = std::move(batch_results[b][i]);
        }
    }
    for (const auto& r : records) out.vectors.push_back(known.at(content_hash(r.response_text)));
}

}  // namespace

EmbeddingCache::EmbeddingCache(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw Error("cannot create cache directory " + dir_.string() + ": " + ec.message());
}

std::filesystem::path EmbeddingCache::entry_path(std::uint64_t key) const {
    return dir_ / (hash_hex(key) + ".json");
}

std::optional<std::vector<double>> EmbeddingCache::get(std::uint64_t key) const {
    std::ifstream in(entry_path(key));
    if (!in) return std::nullopt;
    try {
        return parse_vector(json::parse(in));
    } catch (const std::exception&) {
        return std::nullopt;  // unreadable entry is treated as a miss
    }
}

void EmbeddingCache::put(std::uint64_t key, const std::vector<double>& vec) const {
    static std::atomic<unsigned long> counter{0};
    const auto final_path = entry_path(key);
    std::ostringstream tmp_name;
    tmp_name << hash_hex(key) << ".tmp." << std::hash<std::thread::id>{}(std::this_thread::get_id()) << '.'
             << counter++;
    const auto tmp_path = dir_ / tmp_name.str();
    {
        std::ofstream out(tmp_path, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write cache entry " + tmp_path.string());
        out << json(vec).dump();
        if (!out) throw Error("cannot write cache entry " + tmp_path.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp_path, final_path, ec);
    if (ec) {
        std::filesystem::remove(tmp_path, ec);
        throw Error("cannot commit cache entry " + final_path.string());
    }
}

ResolvedEmbeddings resolve_embeddings(std::span<const ResponseRecord> records, const EmbeddingProviderConfig& cfg) {
    ResolvedEmbeddings out;
    out.vectors.reserve(records.size());

    switch (cfg.mode) {
        case ProviderMode::inline_:
            for (std::size_t i = 0; i < records.size(); ++i) {
                if (!records[i].embedding) throw Error("missing inline embedding for " + describe(records[i], i));
                out.vectors.push_back(*records[i].embedding);
            }
            break;
        case ProviderMode::file: {
            if (!cfg.sidecar_path) throw Error("file provider requires a sidecar embedding file");
            const auto sidecar = load_sidecar(*cfg.sidecar_path);
            for (std::size_t i = 0; i < records.size(); ++i) {
                auto it = sidecar.find(content_hash(records[i].response_text));
                if (it == sidecar.end()) throw Error("no sidecar embedding for " + describe(records[i], i));
                out.vectors.push_back(it->second);
            }
            break;
        }
        case ProviderMode::http:
            resolve_http(records, cfg, out);
            break;
    }

    for (std::size_t i = 0; i < out.vectors.size(); ++i) {
        const auto len = out.vectors[i].size();
        if (i == 0) {
            if (len < 2) throw Error("embedding dimension must be >= 2 for " + describe(records[i], i));
            out.dim = len;
        } else if (len != out.dim) {
            throw Error("embedding dimension mismatch for " + describe(records[i], i) + ": expected " +
                        std::to_string(out.dim) + ", got " + std::to_string(len));
        }
        for (double x : out.vectors[i])
            if (!std::isfinite(x)) throw Error("invalid embedding for " + describe(records[i], i));
    }
    return out;
}

}  // namespace convexuq
