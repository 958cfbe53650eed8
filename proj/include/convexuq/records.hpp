#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace convexuq {

enum class PromptType { easy, moderate, confusing };

std::string_view to_string(PromptType t);
std::optional<PromptType> parse_prompt_type(std::string_view s);

/// One generated response. `embedding` is present for inline-provider inputs.
struct ResponseRecord {
    std::string prompt_id;
    PromptType prompt_type = PromptType::easy;
    std::string model_name;
    double temperature = 1.0;
    std::string response_text;
    std::optional<std::vector<double>> embedding;

    bool operator==(const ResponseRecord&) const = default;
};

struct RejectedLine {
    std::size_t line_number;  // 1-based
    std::string reason;
};

struct LoadResult {
    std::vector<ResponseRecord> records;
    std::vector<RejectedLine> rejects;
};

/// Parses one JSON line into a record, throwing Error with the reason on any
/// schema or invariant violation.
ResponseRecord parse_record(std::string_view line);
std::string serialize_record(const ResponseRecord& r);

/// Reads a line-delimited record file. Malformed lines are collected in
/// `rejects`; blank lines are skipped silently.
LoadResult load_records(const std::filesystem::path& path);

void write_records(const std::filesystem::path& path, const std::vector<ResponseRecord>& records);

}  // namespace convexuq
