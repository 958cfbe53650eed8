#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "convexuq/error.hpp"
#include "convexuq/records.hpp"

using namespace convexuq;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name, const std::string& content) {
    const auto dir = fs::temp_directory_path() / "convexuq_test_records";
    fs::create_directories(dir);
    const auto p = dir / name;
    std::ofstream(p, std::ios::binary) << content;
    return p;
}

const char* kValid =
    R"({"prompt_id":"p1","prompt_type":"easy","model":"m","temperature":0.5,"response":"hello","embedding":[1,2,3]})";

}  // namespace

TEST_CASE("parse_record") {
    const auto r = parse_record(kValid);
    CHECK(r.prompt_id == "p1");
    CHECK(r.prompt_type == PromptType::easy);
    CHECK(r.model_name == "m");
    CHECK(r.temperature == 0.5);
    CHECK(r.response_text == "hello");
    CHECK(r.embedding == std::vector<double>{1, 2, 3});

    SUBCASE("embedding optional, unknown fields ignored") {
        const auto s = parse_record(
            R"({"prompt_id":"p","prompt_type":"confusing","model":"m","temperature":1,"response":"","extra":{"a":1}})");
        CHECK_FALSE(s.embedding.has_value());
        CHECK(s.prompt_type == PromptType::confusing);
    }
    SUBCASE("invariant violations") {
        CHECK_THROWS_AS(parse_record("{not json"), Error);
        CHECK_THROWS_AS(parse_record("[1,2]"), Error);
        CHECK_THROWS_AS(parse_record(R"({"prompt_id":"","prompt_type":"easy","model":"m","temperature":1,"response":"x"})"), Error);
        CHECK_THROWS_AS(parse_record(R"({"prompt_id":"p","prompt_type":"hard","model":"m","temperature":1,"response":"x"})"), Error);
        CHECK_THROWS_AS(parse_record(R"({"prompt_id":"p","prompt_type":"easy","model":"m","temperature":0,"response":"x"})"), Error);
        CHECK_THROWS_AS(parse_record(R"({"prompt_id":"p","prompt_type":"easy","model":"m","temperature":"1","response":"x"})"), Error);
        CHECK_THROWS_AS(parse_record(R"({"prompt_id":"p","prompt_type":"easy","model":"m","temperature":1})"), Error);
        CHECK_THROWS_AS(parse_record(R"({"prompt_id":"p","prompt_type":"easy","model":"m","temperature":1,"response":"x","embedding":[1]})"), Error);
        CHECK_THROWS_AS(parse_record(R"({"prompt_id":"p","prompt_type":"easy","model":"m","temperature":1,"response":"x","embedding":[1,"a"]})"), Error);
    }
}

TEST_CASE("load_records") {
    SUBCASE("three valid lines") {
        const auto p = temp_file("three.jsonl", std::string(kValid) + "\n" + kValid + "\n\n" + kValid + "\n");
        const auto res = load_records(p);
        CHECK(res.records.size() == 3);
        CHECK(res.rejects.empty());
    }
    SUBCASE("one malformed line is rejected with its line number") {
        const auto p = temp_file("mixed.jsonl", std::string(kValid) + "\n{\"prompt_id\":\n" + kValid + "\n");
        const auto res = load_records(p);
        CHECK(res.records.size() == 2);
        REQUIRE(res.rejects.size() == 1);
        CHECK(res.rejects[0].line_number == 2);
        // Neighbors parse exactly as they would alone.
        CHECK(res.records[0] == parse_record(kValid));
        CHECK(res.records[1] == parse_record(kValid));
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(load_records("/nonexistent/records.jsonl"), Error);
        CHECK_THROWS_WITH_AS(load_records(temp_file("bad.jsonl", "garbage\n")), "no records", Error);
    }
}

TEST_CASE("write_records then load_records round-trips exactly") {
    std::vector<ResponseRecord> recs;
    for (int i = 0; i < 5; ++i) {
        ResponseRecord r;
        r.prompt_id = "p" + std::to_string(i);
        r.prompt_type = static_cast<PromptType>(i % 3);
        r.model_name = "model, \"quoted\"";
        r.temperature = 0.1 * (i + 1);
        r.response_text = "line\nbreak and unicode \xc3\xa9 " + std::to_string(i);
        if (i % 2 == 0) r.embedding = std::vector<double>{0.1 * i, 1.0 / 3.0, -2.5e-17, 12345.678901234567};
        recs.push_back(r);
    }
    const auto p = fs::temp_directory_path() / "convexuq_test_records" / "roundtrip.jsonl";
    fs::create_directories(p.parent_path());
    write_records(p, recs);
    const auto back = load_records(p);
    CHECK(back.rejects.empty());
    CHECK(back.records == recs);
}
