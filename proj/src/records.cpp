#include "convexuq/records.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "convexuq/error.hpp"

namespace convexuq {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view to_string(PromptType t) {
    switch (t) {
        case PromptType::easy: return "easy";
        case PromptType::moderate: return "moderate";
        case PromptType::confusing: return "confusing";
    }
    return "unknown";
}

std::optional<PromptType> parse_prompt_type(std::string_view s) {
    if (s == "easy") return PromptType::easy;
    if (s == "moderate") return PromptType::moderate;
    if (s == "confusing") return PromptType::confusing;
    return std::nullopt;
}

namespace {

const json& require(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) throw Error(std::string("missing field '") + key + "'");
    return *it;
}

std::string require_string(const json& obj, const char* key) {
    const json& v = require(obj, key);
    if (!v.is_string()) throw Error(std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
}

}  // namespace

ResponseRecord parse_record(std::string_view line) {
    json obj;
    try {
        obj = json::parse(line);
    } catch (const json::parse_error& e) {
        throw Error(std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object()) throw Error("record must be a JSON object");

    ResponseRecord r;
    r.prompt_id = require_string(obj, "prompt_id");
    if (r.prompt_id.empty()) throw Error("empty prompt_id");

    const std::string type = require_string(obj, "prompt_type");
    auto pt = parse_prompt_type(type);
    if (!pt) throw Error("unknown prompt_type '" + type + "'");
    r.prompt_type = *pt;

    r.model_name = require_string(obj, "model");
    if (r.model_name.empty()) throw Error("empty model");

    const json& temp = require(obj, "temperature");
    if (!temp.is_number()) throw Error("field 'temperature' must be a number");
    r.temperature = temp.get<double>();
    if (!std::isfinite(r.temperature) || r.temperature <= 0.0) throw Error("temperature must be finite and > 0");

    r.response_text = require_string(obj, "response");

    if (auto it = obj.find("embedding"); it != obj.end() && !it->is_null()) {
        if (!it->is_array()) throw Error("field 'embedding' must be an array");
        std::vector<double> v;
        v.reserve(it->size());
        for (const auto& x : *it) {
            if (!x.is_number()) throw Error("embedding entries must be numbers");
            const double d = x.get<double>();
            if (!std::isfinite(d)) throw Error("embedding entries must be finite");
            v.push_back(d);
        }
        if (v.size() < 2) throw Error("embedding length must be >= 2");
        r.embedding = std::move(v);
    }
    return r;
}

std::string serialize_record(const ResponseRecord& r) {
    ordered_json obj;
    obj["prompt_id"] = r.prompt_id;
    obj["prompt_type"] = to_string(r.prompt_type);
    obj["model"] = r.model_name;
    obj["temperature"] = r.temperature;
    obj["response"] = r.response_text;
    if (r.embedding) obj["embedding"] = *r.embedding;
    return obj.dump();
}

LoadResult load_records(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read record file: " + path.string());

    LoadResult out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        try {
            out.records.push_back(parse_record(line));
        } catch (const Error& e) {
            out.rejects.push_back({line_no, e.what()});
        }
    }
    if (out.records.empty()) throw Error("no records");
    return out;
}

void write_records(const std::filesystem::path& path, const std::vector<ResponseRecord>& records) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write record file: " + path.string());
    for (const auto& r : records) out << serialize_record(r) << '\n';
    if (!out) throw Error("write failed: " + path.string());
}

}  // namespace convexuq
