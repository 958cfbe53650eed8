#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "convexuq/clustering.hpp"
#include "convexuq/embedding.hpp"
#include "convexuq/geometry.hpp"
#include "convexuq/linalg.hpp"
#include "convexuq/records.hpp"

namespace convexuq {

/// Knobs of the per-cell uncertainty computation. Defaults are the reference
/// constants: eps = 0.25 * t * 4.0, min_samples 3, size guard 10, 6 decimals.
struct PipelineConfig {
    double eps_base = 0.25;
    double eps_scale = 4.0;
    int min_samples = 3;
    std::size_t min_points = 10;
    int round_decimals = 6;
    std::optional<double> eps_override;

    DbscanParams dbscan_params(double temperature) const;
};

struct CellKey {
    std::string prompt_id;
    std::string model_name;
    double temperature = 0.0;

    auto operator<=>(const CellKey&) const = default;
};

struct AnalysisCell {
    CellKey key;
    PromptType prompt_type = PromptType::easy;
    std::vector<ResponseRecord> responses;
};

enum class CellGuard { none, empty, too_few_points };
std::string_view to_string(CellGuard g);

enum class HullStatus {
    hull,           // proper polygon
    too_few_unique, // <= 2 distinct rounded points, hull not attempted
    collinear       // hull attempted, all points collinear
};
std::string_view to_string(HullStatus s);

struct ClusterHull {
    int label = 0;
    std::size_t point_count = 0;
    HullStatus status = HullStatus::hull;
    HullPolygon hull;  // vertices empty unless status == hull or collinear
    double area = 0.0;
};

struct CellResult {
    CellKey key;
    PromptType prompt_type = PromptType::easy;
    std::size_t n_responses = 0;
    CellGuard guard = CellGuard::none;
    double total_hull_area = 0.0;
    std::size_t num_clusters = 0;
    std::size_t noise_count = 0;
    std::vector<ClusterHull> clusters;
    std::optional<ProjectedPoints> projected;  // absent when n < 2
    ClusterLabels labels;                      // empty when a guard fired
};

/// The per-cell uncertainty score: PCA to 2D, DBSCAN, and the summed convex
/// hull area of every non-noise cluster, with the empty / size / rounded-
/// uniqueness guards. Row i of `embeddings` belongs to cell.responses[i].
CellResult cell_uncertainty(const AnalysisCell& cell, const EmbeddingMatrix& embeddings, const PipelineConfig& cfg);

/// Groups records into cells sorted by key. Throws when there are no records.
std::vector<AnalysisCell> group_cells(const std::vector<ResponseRecord>& records);

struct CellOutcome {
    CellKey key;
    PromptType prompt_type = PromptType::easy;
    std::optional<CellResult> result;
    std::string error;  // set iff !result

    bool ok() const { return result.has_value(); }
};

struct ExperimentConfig {
    PipelineConfig pipeline;
    EmbeddingProviderConfig provider;
    std::size_t parallelism = 1;
};

struct ExperimentResult {
    std::vector<CellOutcome> cells;  // sorted by key
    ResolveStats embedding_stats;

    std::size_t failed_count() const;
};

/// Resolves embeddings, then evaluates every cell. A failing cell is
/// recorded in its outcome and does not stop the run.
ExperimentResult run_experiment(const std::vector<ResponseRecord>& records, const ExperimentConfig& cfg);

}  // namespace convexuq
