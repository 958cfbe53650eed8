#include <cctype>
#include <chrono>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "convexuq/commands.hpp"
#include "convexuq/embedding.hpp"

namespace {

// Every flag can also be set through CONVEXUQ_<FLAG>, e.g. CONVEXUQ_MIN_SAMPLES.
std::string env(const std::string& flag) {
    std::string out = "CONVEXUQ_";
    for (char c : flag) out += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

void add_run_options(CLI::App& cmd, convexuq::RunConfig& cfg, std::string& provider, std::string& endpoint,
                     std::string& cache, std::string& sidecar, long& timeout_ms) {
    cmd.add_option("--input", cfg.input_path, "Record file (one JSON record per line)")->required()->envname(env("input"));
    cmd.add_option("--provider", provider, "Embedding provider: inline, file or http")
        ->check(CLI::IsMember({"inline", "file", "http"}))
        ->envname(env("provider"));
    cmd.add_option("--endpoint", endpoint, "Embedding service URL (http provider)")->envname(env("endpoint"));
    cmd.add_option("--cache", cache, "Embedding cache directory (http provider)")->envname(env("cache"));
    cmd.add_option("--embeddings", sidecar, "Sidecar embedding file (file provider)")->envname(env("embeddings"));
    cmd.add_option("--batch-size", cfg.provider.batch_size, "Texts per embedding request")->envname(env("batch-size"));
    cmd.add_option("--timeout-ms", timeout_ms, "Embedding request timeout in milliseconds")->envname(env("timeout-ms"));
    cmd.add_option("--eps-base", cfg.pipeline.eps_base, "DBSCAN eps base factor")->envname(env("eps-base"));
    cmd.add_option("--eps-scale", cfg.pipeline.eps_scale, "DBSCAN eps scale factor")->envname(env("eps-scale"));
    cmd.add_option("--min-samples", cfg.pipeline.min_samples, "DBSCAN min_samples")->envname(env("min-samples"));
    cmd.add_option("--min-points", cfg.pipeline.min_points, "Minimum responses per cell")->envname(env("min-points"));
    cmd.add_option("--round-decimals", cfg.pipeline.round_decimals, "Decimals for the unique-point guard")
        ->envname(env("round-decimals"));
}

void finish_run_config(convexuq::RunConfig& cfg, const std::string& provider, const std::string& endpoint,
                       const std::string& cache, const std::string& sidecar, long timeout_ms) {
    cfg.provider.mode = *convexuq::parse_provider_mode(provider);
    if (!endpoint.empty()) cfg.provider.endpoint_url = endpoint;
    if (!cache.empty()) cfg.provider.cache_path = cache;
    if (!sidecar.empty()) cfg.provider.sidecar_path = sidecar;
    cfg.provider.timeout = std::chrono::milliseconds(timeout_ms);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Convex-hull uncertainty analysis of generated responses"};
    app.require_subcommand(1);

    convexuq::RunConfig run;
    std::string provider = "inline", endpoint, cache, sidecar;
    long timeout_ms = 30000;

    auto* analyze = app.add_subcommand("analyze", "Compute per-cell areas and aggregate reports");
    add_run_options(*analyze, run, provider, endpoint, cache, sidecar, timeout_ms);
    analyze->add_option("--out", run.output_dir, "Output directory")->required()->envname(env("out"));
    analyze->add_flag("--dump-hulls", run.dump_hulls, "Write per-cell hull dumps")->envname(env("dump-hulls"));
    analyze->add_option("--parallelism", run.parallelism, "Cells evaluated concurrently")->envname(env("parallelism"));

    convexuq::CellSelector sel;
    std::string dump_path;
    auto* cell = app.add_subcommand("cell", "Inspect one (prompt, model, temperature) cell");
    add_run_options(*cell, run, provider, endpoint, cache, sidecar, timeout_ms);
    cell->add_option("--prompt-id", sel.prompt_id, "Prompt id")->required();
    cell->add_option("--model", sel.model_name, "Model name")->required();
    cell->add_option("--temperature", sel.temperature, "Sampling temperature")->required();
    cell->add_option("--dump-hulls", dump_path, "Write the cell's hull dump to this file");

    convexuq::SynthConfig synth;
    std::string synth_out;
    auto* syn = app.add_subcommand("synth", "Generate a synthetic record file");
    syn->add_option("--out", synth_out, "Output record file")->required()->envname(env("out"));
    syn->add_option("--seed", synth.seed, "Generator seed")->envname(env("seed"));
    syn->add_option("--prompts-per-type", synth.prompts_per_type, "Prompts per prompt type");
    syn->add_option("--responses-per-cell", synth.responses_per_cell, "Responses per cell");
    syn->add_option("--embed-dim", synth.embed_dim, "Embedding dimension");
    syn->add_option("--temperatures", synth.temperatures, "Temperature grid")->delimiter(',');
    syn->add_option("--models", synth.models, "Synthetic model names")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? convexuq::kExitOk : convexuq::kExitConfigError;
    }

    if (*analyze) {
        finish_run_config(run, provider, endpoint, cache, sidecar, timeout_ms);
        return convexuq::cmd_analyze(run, std::cout, std::cerr);
    }
    if (*cell) {
        finish_run_config(run, provider, endpoint, cache, sidecar, timeout_ms);
        if (!dump_path.empty()) sel.dump_path = dump_path;
        return convexuq::cmd_cell(run, sel, std::cout, std::cerr);
    }
    return convexuq::cmd_synth(synth, synth_out, std::cout, std::cerr);
}
