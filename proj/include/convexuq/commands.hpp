#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "convexuq/embedding.hpp"
#include "convexuq/pipeline.hpp"
#include "convexuq/synth.hpp"

namespace convexuq {

// Process exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCellFailures = 1;
inline constexpr int kExitConfigError = 2;

struct RunConfig {
    std::filesystem::path input_path;
    std::filesystem::path output_dir;
    EmbeddingProviderConfig provider;
    PipelineConfig pipeline;
    std::size_t parallelism = 1;
    bool dump_hulls = false;

    /// Throws Error describing the first invalid knob.
    void validate() const;
};

/// Output files written by cmd_analyze into RunConfig::output_dir.
namespace report_files {
inline constexpr const char* kCellsCsv = "cells.csv";
inline constexpr const char* kCellsJson = "cells.json";
inline constexpr const char* kMeanStdCsv = "table_mean_std.csv";
inline constexpr const char* kMedianIqrCsv = "table_median_iqr.csv";
inline constexpr const char* kClusteringCsv = "table_clustering.csv";
inline constexpr const char* kReportJson = "report.json";
inline constexpr const char* kRejectsCsv = "rejects.csv";
inline constexpr const char* kHullDir = "hulls";
}  // namespace report_files

int cmd_analyze(const RunConfig& cfg, std::ostream& out, std::ostream& err);

struct CellSelector {
    std::string prompt_id;
    std::string model_name;
    double temperature = 0.0;
    std::optional<std::filesystem::path> dump_path;
};

int cmd_cell(const RunConfig& cfg, const CellSelector& sel, std::ostream& out, std::ostream& err);

int cmd_synth(const SynthConfig& cfg, const std::filesystem::path& output_path, std::ostream& out, std::ostream& err);

}  // namespace convexuq
