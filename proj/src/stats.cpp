#include "convexuq/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "convexuq/error.hpp"

namespace convexuq {

using nlohmann::json;
using nlohmann::ordered_json;

double mean(std::span<const double> xs) {
    if (xs.empty()) throw Error("empty input");
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double sample_std(std::span<const double> xs) {
    if (xs.size() < 2) return 0.0;
    const double m = mean(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

double quantile(std::vector<double> xs, double q) {
    if (xs.empty()) throw Error("empty input");
    std::sort(xs.begin(), xs.end());
    const double pos = q * static_cast<double>(xs.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, xs.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return xs[lo] + (xs[hi] - xs[lo]) * frac;
}

CellClusterSummary summarize_clusters(const CellResult& r) {
    std::vector<double> areas;
    for (const auto& c : r.clusters) areas.push_back(c.area);
    if (areas.empty()) return {};
    return {mean(areas), sample_std(areas)};
}

std::vector<AggregateRow> aggregate_areas(std::span<const CellResult> results) {
    if (results.empty()) throw Error("empty input");
    std::map<std::tuple<std::string, PromptType, double>, std::vector<double>> groups;
    for (const auto& r : results) groups[{r.key.model_name, r.prompt_type, r.key.temperature}].push_back(r.total_hull_area);

    std::vector<AggregateRow> out;
    for (const auto& [key, areas] : groups) {
        AggregateRow row;
        std::tie(row.model_name, row.prompt_type, row.temperature) = key;
        row.n_cells = areas.size();
        row.mean = mean(areas);
        row.std = sample_std(areas);
        row.median = quantile(areas, 0.5);
        row.q25 = quantile(areas, 0.25);
        row.q75 = quantile(areas, 0.75);
        row.iqr = row.q75 - row.q25;
        out.push_back(std::move(row));
    }
    return out;
}

std::vector<ClusteringRow> aggregate_clustering(std::span<const CellResult> results) {
    if (results.empty()) throw Error("empty input");
    struct Columns {
        std::vector<double> counts, area_means, area_stds;
    };
    std::map<std::pair<std::string, PromptType>, Columns> groups;
    for (const auto& r : results) {
        auto& g = groups[{r.key.model_name, r.prompt_type}];
        const auto s = summarize_clusters(r);
        g.counts.push_back(static_cast<double>(r.num_clusters));
        g.area_means.push_back(s.mean_area);
        g.area_stds.push_back(s.std_area);
    }

    std::vector<ClusteringRow> out;
    for (const auto& [key, g] : groups) {
        ClusteringRow row;
        row.model_name = key.first;
        row.prompt_type = key.second;
        row.n_cells = g.counts.size();
        row.num_clusters_mean = mean(g.counts);
        row.num_clusters_std = sample_std(g.counts);
        row.cluster_area_mean = mean(g.area_means);
        row.cluster_area_mean_std = sample_std(g.area_means);
        row.cluster_area_std_mean = mean(g.area_stds);
        row.cluster_area_std_std = sample_std(g.area_stds);
        out.push_back(std::move(row));
    }
    return out;
}

std::string format_fixed4(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    std::string s = buf;
    if (s == "-0.0000") s = "0.0000";
    return s;
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

ordered_json key_json(const CellKey& k, PromptType t) {
    ordered_json j;
    j["prompt_id"] = k.prompt_id;
    j["prompt_type"] = to_string(t);
    j["model"] = k.model_name;
    j["temperature"] = k.temperature;
    return j;
}

ordered_json points_json(const Matrix& m) {
    ordered_json arr = ordered_json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) arr.push_back({m(r, 0), m(r, 1)});
    return arr;
}

ordered_json vertices_json(const std::vector<Point2>& v) {
    ordered_json arr = ordered_json::array();
    for (const auto& p : v) arr.push_back({p.x, p.y});
    return arr;
}

ordered_json cell_json(const CellResult& r) {
    ordered_json j = key_json(r.key, r.prompt_type);
    j["n_responses"] = r.n_responses;
    j["guard"] = to_string(r.guard);
    j["total_hull_area"] = r.total_hull_area;
    j["num_clusters"] = r.num_clusters;
    j["noise_count"] = r.noise_count;
    ordered_json clusters = ordered_json::array();
    for (const auto& c : r.clusters) {
        ordered_json cj;
        cj["label"] = c.label;
        cj["point_count"] = c.point_count;
        cj["status"] = to_string(c.status);
        cj["area"] = c.area;
        cj["vertices"] = vertices_json(c.hull.vertices);
        clusters.push_back(std::move(cj));
    }
    j["clusters"] = std::move(clusters);
    return j;
}

}  // namespace

std::string render_csv(std::span<const AggregateRow> rows, AreaColumns cols) {
    std::ostringstream os;
    os << "model,prompt_type,temperature,n_cells";
    if (cols == AreaColumns::all || cols == AreaColumns::mean_std) os << ",mean,std";
    if (cols == AreaColumns::all || cols == AreaColumns::median_iqr) os << ",median";
    if (cols == AreaColumns::all) os << ",q25,q75";
    if (cols == AreaColumns::all || cols == AreaColumns::median_iqr) os << ",iqr";
    os << '\n';
    for (const auto& r : rows) {
        os << csv_field(r.model_name) << ',' << to_string(r.prompt_type) << ',' << format_fixed4(r.temperature) << ','
           << r.n_cells;
        if (cols == AreaColumns::all || cols == AreaColumns::mean_std)
            os << ',' << format_fixed4(r.mean) << ',' << format_fixed4(r.std);
        if (cols == AreaColumns::all || cols == AreaColumns::median_iqr) os << ',' << format_fixed4(r.median);
        if (cols == AreaColumns::all) os << ',' << format_fixed4(r.q25) << ',' << format_fixed4(r.q75);
        if (cols == AreaColumns::all || cols == AreaColumns::median_iqr) os << ',' << format_fixed4(r.iqr);
        os << '\n';
    }
    return os.str();
}

std::string render_csv(std::span<const ClusteringRow> rows) {
    std::ostringstream os;
    os << "model,prompt_type,n_cells,num_clusters_mean,num_clusters_std,cluster_area_mean_mean,"
          "cluster_area_mean_std,cluster_area_std_mean,cluster_area_std_std\n";
    for (const auto& r : rows) {
        os << csv_field(r.model_name) << ',' << to_string(r.prompt_type) << ',' << r.n_cells << ','
           << format_fixed4(r.num_clusters_mean) << ',' << format_fixed4(r.num_clusters_std) << ','
           << format_fixed4(r.cluster_area_mean) << ',' << format_fixed4(r.cluster_area_mean_std) << ','
           << format_fixed4(r.cluster_area_std_mean) << ',' << format_fixed4(r.cluster_area_std_std) << '\n';
    }
    return os.str();
}

std::string render_cells_csv(std::span<const CellOutcome> cells) {
    std::ostringstream os;
    os << "prompt_id,prompt_type,model,temperature,status,guard,n_responses,num_clusters,noise_count,"
          "total_hull_area,error\n";
    for (const auto& c : cells) {
        os << csv_field(c.key.prompt_id) << ',' << to_string(c.prompt_type) << ',' << csv_field(c.key.model_name)
           << ',' << format_fixed4(c.key.temperature) << ',';
        if (c.ok()) {
            const auto& r = *c.result;
            os << "ok," << to_string(r.guard) << ',' << r.n_responses << ',' << r.num_clusters << ','
               << r.noise_count << ',' << format_fixed4(r.total_hull_area) << ",\n";
        } else {
            os << "failed,,,,,," << csv_field(c.error) << '\n';
        }
    }
    return os.str();
}

std::string render_report_json(std::span<const AggregateRow> areas, std::span<const ClusteringRow> clustering) {
    ordered_json doc;
    ordered_json a = ordered_json::array();
    for (const auto& r : areas) {
        ordered_json j;
        j["model"] = r.model_name;
        j["prompt_type"] = to_string(r.prompt_type);
        j["temperature"] = r.temperature;
        j["n_cells"] = r.n_cells;
        j["mean"] = r.mean;
        j["std"] = r.std;
        j["median"] = r.median;
        j["q25"] = r.q25;
        j["q75"] = r.q75;
        j["iqr"] = r.iqr;
        a.push_back(std::move(j));
    }
    ordered_json c = ordered_json::array();
    for (const auto& r : clustering) {
        ordered_json j;
        j["model"] = r.model_name;
        j["prompt_type"] = to_string(r.prompt_type);
        j["n_cells"] = r.n_cells;
        j["num_clusters_mean"] = r.num_clusters_mean;
        j["num_clusters_std"] = r.num_clusters_std;
        j["cluster_area_mean_mean"] = r.cluster_area_mean;
        j["cluster_area_mean_std"] = r.cluster_area_mean_std;
        j["cluster_area_std_mean"] = r.cluster_area_std_mean;
        j["cluster_area_std_std"] = r.cluster_area_std_std;
        c.push_back(std::move(j));
    }
    doc["areas"] = std::move(a);
    doc["clustering"] = std::move(c);
    return doc.dump(2) + "\n";
}

std::string render_cells_json(std::span<const CellOutcome> cells) {
    ordered_json arr = ordered_json::array();
    for (const auto& c : cells) {
        if (c.ok()) {
            ordered_json j = cell_json(*c.result);
            j["status"] = "ok";
            arr.push_back(std::move(j));
        } else {
            ordered_json j = key_json(c.key, c.prompt_type);
            j["status"] = "failed";
            j["error"] = c.error;
            arr.push_back(std::move(j));
        }
    }
    return arr.dump(2) + "\n";
}

std::vector<AggregateRow> parse_aggregate_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw Error("empty csv");
    const auto header = split_csv_line(line);
    const std::vector<std::string> expected{"model", "prompt_type", "temperature", "n_cells", "mean",
                                            "std",   "median",      "q25",         "q75",     "iqr"};
    if (header != expected) throw Error("unexpected csv header");

    std::vector<AggregateRow> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != expected.size()) throw Error("malformed csv row");
        AggregateRow r;
        r.model_name = f[0];
        auto pt = parse_prompt_type(f[1]);
        if (!pt) throw Error("unknown prompt_type in csv");
        r.prompt_type = *pt;
        r.temperature = std::stod(f[2]);
        r.n_cells = std::stoull(f[3]);
        r.mean = std::stod(f[4]);
        r.std = std::stod(f[5]);
        r.median = std::stod(f[6]);
        r.q25 = std::stod(f[7]);
        r.q75 = std::stod(f[8]);
        r.iqr = std::stod(f[9]);
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<AggregateRow> parse_report_json_areas(const std::string& text) {
    const json doc = json::parse(text);
    std::vector<AggregateRow> out;
    for (const auto& j : doc.at("areas")) {
        AggregateRow r;
        r.model_name = j.at("model").get<std::string>();
        auto pt = parse_prompt_type(j.at("prompt_type").get<std::string>());
        if (!pt) throw Error("unknown prompt_type in report");
        r.prompt_type = *pt;
        r.temperature = j.at("temperature").get<double>();
        r.n_cells = j.at("n_cells").get<std::size_t>();
        r.mean = j.at("mean").get<double>();
        r.std = j.at("std").get<double>();
        r.median = j.at("median").get<double>();
        r.q25 = j.at("q25").get<double>();
        r.q75 = j.at("q75").get<double>();
        r.iqr = j.at("iqr").get<double>();
        out.push_back(std::move(r));
    }
    return out;
}

std::string render_hull_dump(const CellResult& r) {
    ordered_json j = cell_json(r);
    j["guarded"] = r.guard != CellGuard::none;
    j["points"] = r.projected ? points_json(r.projected->points) : ordered_json::array();
    j["labels"] = r.labels.labels;
    if (r.projected) {
        j["eigenvalues"] = {r.projected->eigenvalues[0], r.projected->eigenvalues[1]};
    }
    return j.dump(2) + "\n";
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
    out.flush();
    if (!out) throw Error("write failed: " + path.string());
}

}  // namespace convexuq
