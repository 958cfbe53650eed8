#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "convexuq/pipeline.hpp"

namespace convexuq {

// Descriptive statistics. sample_std uses the n-1 divisor and is 0 for n < 2;
// quantile interpolates linearly between order statistics (q in [0,1]).
double mean(std::span<const double> xs);
double sample_std(std::span<const double> xs);
double quantile(std::vector<double> xs, double q);

/// Area statistics for one (model, prompt_type, temperature) group.
struct AggregateRow {
    std::string model_name;
    PromptType prompt_type = PromptType::easy;
    double temperature = 0.0;
    std::size_t n_cells = 0;
    double mean = 0.0;
    double std = 0.0;
    double median = 0.0;
    double q25 = 0.0;
    double q75 = 0.0;
    double iqr = 0.0;
};

/// Cluster statistics for one (model, prompt_type) group, pooled over
/// temperatures. Each *_mean / *_std pair is the mean and sample std across
/// cells of a per-cell quantity.
struct ClusteringRow {
    std::string model_name;
    PromptType prompt_type = PromptType::easy;
    std::size_t n_cells = 0;
    double num_clusters_mean = 0.0;
    double num_clusters_std = 0.0;
    double cluster_area_mean = 0.0;       // mean over cells of the per-cell mean cluster area
    double cluster_area_mean_std = 0.0;
    double cluster_area_std_mean = 0.0;   // mean over cells of the per-cell cluster-area std
    double cluster_area_std_std = 0.0;
};

/// Per-cell mean and sample std of cluster areas; both 0 without clusters,
/// std 0 with a single cluster.
struct CellClusterSummary {
    double mean_area = 0.0;
    double std_area = 0.0;
};
CellClusterSummary summarize_clusters(const CellResult& r);

std::vector<AggregateRow> aggregate_areas(std::span<const CellResult> results);
std::vector<ClusteringRow> aggregate_clustering(std::span<const CellResult> results);

/// Column selections for area tables: everything, the mean/std table, or the
/// median/IQR table.
enum class AreaColumns { all, mean_std, median_iqr };

/// Fixed-point rendering with 4 decimals ("2.5481").
std::string format_fixed4(double v);

std::string render_csv(std::span<const AggregateRow> rows, AreaColumns cols = AreaColumns::all);
std::string render_csv(std::span<const ClusteringRow> rows);
std::string render_cells_csv(std::span<const CellOutcome> cells);

/// Full-precision JSON documents.
std::string render_report_json(std::span<const AggregateRow> areas, std::span<const ClusteringRow> clustering);
std::string render_cells_json(std::span<const CellOutcome> cells);

/// Parses a CSV produced by render_csv(rows, AreaColumns::all).
std::vector<AggregateRow> parse_aggregate_csv(const std::string& text);
/// Parses the JSON produced by render_report_json.
std::vector<AggregateRow> parse_report_json_areas(const std::string& text);

/// Plot-ready dump of one cell: projected coordinates, labels, hull vertex
/// loops and areas, plus the guard flag.
std::string render_hull_dump(const CellResult& r);

/// Writes `content` to `path`, throwing Error when the path is unwritable.
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace convexuq
