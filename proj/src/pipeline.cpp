#include "convexuq/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <thread>

#include "convexuq/error.hpp"

namespace convexuq {

DbscanParams PipelineConfig::dbscan_params(double temperature) const {
    const double eps = eps_override ? *eps_override : eps_from_temperature(temperature, eps_base, eps_scale);
    return {eps, min_samples};
}

std::string_view to_string(CellGuard g) {
    switch (g) {
        case CellGuard::none: return "none";
        case CellGuard::empty: return "empty";
        case CellGuard::too_few_points: return "too_few_points";
    }
    return "unknown";
}

std::string_view to_string(HullStatus s) {
    switch (s) {
        case HullStatus::hull: return "hull";
        case HullStatus::too_few_unique: return "too_few_unique";
        case HullStatus::collinear: return "collinear";
    }
    return "unknown";
}

CellResult cell_uncertainty(const AnalysisCell& cell, const EmbeddingMatrix& embeddings, const PipelineConfig& cfg) {
    if (embeddings.n() != cell.responses.size()) throw Error("embedding/response mismatch");
    for (const auto& r : cell.responses) {
        if (r.prompt_id != cell.key.prompt_id || r.model_name != cell.key.model_name ||
            r.temperature != cell.key.temperature)
            throw Error("record does not belong to cell " + cell.key.prompt_id);
        if (r.prompt_type != cell.prompt_type)
            throw Error("inconsistent prompt_type within cell " + cell.key.prompt_id);
    }

    CellResult out;
    out.key = cell.key;
    out.prompt_type = cell.prompt_type;
    out.n_responses = cell.responses.size();

    if (cell.responses.empty()) {
        out.guard = CellGuard::empty;
        return out;
    }
    if (embeddings.n() >= 2) out.projected = pca_project_2d(embeddings);
    if (embeddings.n() < cfg.min_points || !out.projected) {
        out.guard = CellGuard::too_few_points;
        return out;
    }

    const Matrix& pts = out.projected->points;
    out.labels = dbscan(pts, cfg.dbscan_params(cell.key.temperature));
    out.num_clusters = count_clusters(out.labels);
    out.noise_count = static_cast<std::size_t>(std::count(out.labels.labels.begin(), out.labels.labels.end(), kNoise));

    // Labels are contiguous 0..k-1, so iterating by label visits every cluster once.
    for (int label = 0; label < static_cast<int>(out.num_clusters); ++label) {
        std::vector<Point2> members;
        for (std::size_t i = 0; i < pts.rows(); ++i)
            if (out.labels.labels[i] == label) members.push_back({pts(i, 0), pts(i, 1)});

        ClusterHull ch;
        ch.label = label;
        ch.point_count = members.size();
        if (unique_rounded_count(members, cfg.round_decimals) > 2) {
            ch.hull = convex_hull(members);
            ch.status = ch.hull.degenerate ? HullStatus::collinear : HullStatus::hull;
            ch.area = ch.hull.area;
        } else {
            ch.status = HullStatus::too_few_unique;
        }
        out.total_hull_area += ch.area;
        out.clusters.push_back(std::move(ch));
    }
    return out;
}

namespace {

struct GroupedCell {
    AnalysisCell cell;
    std::vector<std::size_t> rows;  // indices into the source record list
};

std::vector<GroupedCell> group_with_rows(const std::vector<ResponseRecord>& records) {
    std::map<CellKey, GroupedCell> groups;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        CellKey key{r.prompt_id, r.model_name, r.temperature};
        auto [it, inserted] = groups.try_emplace(key);
        if (inserted) {
            it->second.cell.key = key;
            it->second.cell.prompt_type = r.prompt_type;
        }
        it->second.cell.responses.push_back(r);
        it->second.rows.push_back(i);
    }
    std::vector<GroupedCell> out;
    out.reserve(groups.size());
    for (auto& [_, g] : groups) out.push_back(std::move(g));
    return out;
}

}  // namespace

std::vector<AnalysisCell> group_cells(const std::vector<ResponseRecord>& records) {
    if (records.empty()) throw Error("empty experiment");
    std::vector<AnalysisCell> out;
    for (auto& g : group_with_rows(records)) out.push_back(std::move(g.cell));
    return out;
}

std::size_t ExperimentResult::failed_count() const {
    return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [](const auto& c) { return !c.ok(); }));
}

ExperimentResult run_experiment(const std::vector<ResponseRecord>& records, const ExperimentConfig& cfg) {
    if (records.empty()) throw Error("empty experiment");
    const auto grouped = group_with_rows(records);
    const ResolvedEmbeddings resolved = resolve_embeddings(records, cfg.provider);

    ExperimentResult out;
    out.embedding_stats = resolved.stats;
    out.cells.resize(grouped.size());

    auto evaluate = [&](std::size_t c) {
        const auto& g = grouped[c];
        CellOutcome& o = out.cells[c];
        o.key = g.cell.key;
        o.prompt_type = g.cell.prompt_type;
        try {
            Matrix m(g.rows.size(), resolved.dim);
            for (std::size_t r = 0; r < g.rows.size(); ++r) {
                const auto& v = resolved.vectors[g.rows[r]];
                std::copy(v.begin(), v.end(), m.row(r).begin());
            }
            o.result = cell_uncertainty(g.cell, EmbeddingMatrix(std::move(m)), cfg.pipeline);
        } catch (const std::exception& e) {
            o.error = e.what();
        }
    };

    const std::size_t workers = std::min(std::max<std::size_t>(cfg.parallelism, 1), grouped.size());
    if (workers <= 1) {
        for (std::size_t c = 0; c < grouped.size(); ++c) evaluate(c);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t c = next++; c < grouped.size(); c = next++) evaluate(c);
            });
    }
    return out;
}

}  // namespace convexuq
