#include "convexuq/commands.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <sstream>

#include "convexuq/error.hpp"
#include "convexuq/records.hpp"
#include "convexuq/stats.hpp"

namespace convexuq {

namespace fs = std::filesystem;

void RunConfig::validate() const {
    if (!(pipeline.eps_base > 0.0)) throw Error("--eps-base must be positive");
    if (!(pipeline.eps_scale > 0.0)) throw Error("--eps-scale must be positive");
    if (pipeline.eps_override && !(*pipeline.eps_override > 0.0)) throw Error("eps override must be positive");
    if (pipeline.min_samples < 1) throw Error("--min-samples must be positive");
    if (pipeline.min_points < 1) throw Error("--min-points must be positive");
    if (pipeline.round_decimals < 0 || pipeline.round_decimals > 15) throw Error("--round-decimals must be in [0, 15]");
    if (parallelism < 1) throw Error("--parallelism must be positive");
    if (provider.batch_size < 1) throw Error("--batch-size must be positive");
    if (provider.mode == ProviderMode::http && (!provider.endpoint_url || provider.endpoint_url->empty()))
        throw Error("--provider http requires --endpoint");
    if (provider.mode == ProviderMode::file && !provider.sidecar_path)
        throw Error("--provider file requires --embeddings");
}

namespace {

std::string sanitize(const std::string& s) {
    std::string out;
    for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.') ? c : '_';
    return out;
}

std::string hull_file_name(std::size_t index, const CellKey& k) {
    char prefix[32];
    std::snprintf(prefix, sizeof prefix, "%04zu", index);
    return std::string(prefix) + "_" + sanitize(k.prompt_id) + "__" + sanitize(k.model_name) + "__t" +
           format_fixed4(k.temperature) + ".json";
}

std::string render_rejects(const std::vector<RejectedLine>& rejects) {
    std::ostringstream os;
    os << "line,reason\n";
    for (const auto& r : rejects) {
        std::string reason = r.reason;
        std::replace(reason.begin(), reason.end(), '\n', ' ');
        std::replace(reason.begin(), reason.end(), '"', '\'');
        os << r.line_number << ",\"" << reason << "\"\n";
    }
    return os.str();
}

}  // namespace

int cmd_analyze(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    LoadResult loaded;
    try {
        cfg.validate();
        loaded = load_records(cfg.input_path);
        fs::create_directories(cfg.output_dir);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfigError;
    }

    ExperimentConfig ecfg{cfg.pipeline, cfg.provider, cfg.parallelism};
    ExperimentResult result;
    try {
        result = run_experiment(loaded.records, ecfg);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitCellFailures;
    }

    std::vector<CellResult> ok;
    for (const auto& c : result.cells)
        if (c.ok()) ok.push_back(*c.result);

    try {
        const fs::path dir = cfg.output_dir;
        write_text_file(dir / report_files::kRejectsCsv, render_rejects(loaded.rejects));
        write_text_file(dir / report_files::kCellsCsv, render_cells_csv(result.cells));
        write_text_file(dir / report_files::kCellsJson, render_cells_json(result.cells));
        if (!ok.empty()) {
            const auto areas = aggregate_areas(ok);
            const auto clustering = aggregate_clustering(ok);
            write_text_file(dir / report_files::kMeanStdCsv, render_csv(areas, AreaColumns::mean_std));
            write_text_file(dir / report_files::kMedianIqrCsv, render_csv(areas, AreaColumns::median_iqr));
            write_text_file(dir / report_files::kClusteringCsv, render_csv(clustering));
            write_text_file(dir / report_files::kReportJson, render_report_json(areas, clustering));
        }
        if (cfg.dump_hulls) {
            const fs::path hull_dir = dir / report_files::kHullDir;
            fs::create_directories(hull_dir);
            for (std::size_t i = 0; i < result.cells.size(); ++i) {
                const auto& c = result.cells[i];
                if (c.ok()) write_text_file(hull_dir / hull_file_name(i, c.key), render_hull_dump(*c.result));
            }
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfigError;
    }

    const std::size_t failed = result.failed_count();
    out << "records: " << loaded.records.size() << " (rejected lines: " << loaded.rejects.size() << ")\n"
        << "cells: " << result.cells.size() << " (failed: " << failed << ")\n"
        << "embedding requests: " << result.embedding_stats.http_requests
        << ", cache hits: " << result.embedding_stats.cache_hits << '\n'
        << "reports written to " << cfg.output_dir.string() << '\n';
    if (failed > 0) {
        err << failed << " cell(s) failed:\n";
        for (const auto& c : result.cells)
            if (!c.ok())
                err << "  " << c.key.prompt_id << " / " << c.key.model_name << " / t=" << format_fixed4(c.key.temperature)
                    << ": " << c.error << '\n';
        return kExitCellFailures;
    }
    return kExitOk;
}

int cmd_cell(const RunConfig& cfg, const CellSelector& sel, std::ostream& out, std::ostream& err) {
    std::vector<ResponseRecord> matching;
    try {
        cfg.validate();
        const auto loaded = load_records(cfg.input_path);
        for (const auto& r : loaded.records)
            if (r.prompt_id == sel.prompt_id && r.model_name == sel.model_name && r.temperature == sel.temperature)
                matching.push_back(r);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfigError;
    }
    if (matching.empty()) {
        err << "cell not found\n";
        return kExitCellFailures;
    }

    CellResult result;
    try {
        const auto resolved = resolve_embeddings(matching, cfg.provider);
        AnalysisCell cell{{sel.prompt_id, sel.model_name, sel.temperature}, matching.front().prompt_type, matching};
        result = cell_uncertainty(cell, EmbeddingMatrix::from_rows(resolved.vectors), cfg.pipeline);
        if (sel.dump_path) write_text_file(*sel.dump_path, render_hull_dump(result));
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitCellFailures;
    }

    out << "prompt_id: " << result.key.prompt_id << '\n'
        << "prompt_type: " << to_string(result.prompt_type) << '\n'
        << "model: " << result.key.model_name << '\n'
        << "temperature: " << format_fixed4(result.key.temperature) << '\n'
        << "responses: " << result.n_responses << '\n'
        << "total_hull_area: " << format_fixed4(result.total_hull_area) << '\n';
    if (result.guard == CellGuard::empty) {
        out << "guard: no responses\n";
    } else if (result.guard == CellGuard::too_few_points) {
        out << "guard: fewer than " << cfg.pipeline.min_points << " points, area forced to 0\n";
    } else {
        out << "num_clusters: " << result.num_clusters << '\n' << "noise_count: " << result.noise_count << '\n';
        for (const auto& c : result.clusters)
            out << "cluster " << c.label << ": points=" << c.point_count << " area=" << format_fixed4(c.area)
                << " status=" << to_string(c.status) << '\n';
    }
    return kExitOk;
}

int cmd_synth(const SynthConfig& cfg, const fs::path& output_path, std::ostream& out, std::ostream& err) {
    try {
        const auto records = generate(cfg);
        write_records(output_path, records);
        out << "wrote " << records.size() << " records to " << output_path.string() << '\n';
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfigError;
    }
    return kExitOk;
}

}  // namespace convexuq
