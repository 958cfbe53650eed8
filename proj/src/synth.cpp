#include "convexuq/synth.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "convexuq/error.hpp"

namespace convexuq {

double PortableRng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double PortableRng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

void SynthConfig::validate() const {
    if (prompts_per_type == 0) throw Error("prompts_per_type must be positive");
    if (responses_per_cell == 0) throw Error("responses_per_cell must be positive");
    if (embed_dim < 2) throw Error("embed_dim must be >= 2");
    if (temperatures.empty()) throw Error("temperatures must be non-empty");
    for (double t : temperatures)
        if (!std::isfinite(t) || t <= 0.0) throw Error("temperatures must be positive");
    if (!(dispersion[0] > 0.0 && dispersion[0] < dispersion[1] && dispersion[1] < dispersion[2]))
        throw Error("dispersion must be positive and strictly increasing easy < moderate < confusing");
    if (models.empty()) throw Error("models must be non-empty");
    for (const auto& m : models)
        if (m.empty()) throw Error("model names must be non-empty");
    if (!(spread_unit > 0.0) || !(center_scale >= 0.0)) throw Error("invalid spread parameters");
}

std::size_t clump_count(PromptType t) {
    switch (t) {
        case PromptType::easy: return 1;
        case PromptType::moderate: return 2;
        case PromptType::confusing: return 3;
    }
    return 1;
}

namespace {

struct Plane {
    std::vector<double> origin, u, v;
};

Plane random_plane(PortableRng& rng, std::size_t d) {
    Plane p{std::vector<double>(d), std::vector<double>(d), std::vector<double>(d)};
    for (auto& x : p.origin) x = rng.normal();
    for (;;) {
        for (auto& x : p.u) x = rng.normal();
        for (auto& x : p.v) x = rng.normal();
        double nu = 0.0;
        for (double x : p.u) nu += x * x;
        nu = std::sqrt(nu);
        if (nu < 1e-6) continue;
        for (auto& x : p.u) x /= nu;
        double proj = 0.0;
        for (std::size_t k = 0; k < d; ++k) proj += p.u[k] * p.v[k];
        double nv = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            p.v[k] -= proj * p.u[k];
            nv += p.v[k] * p.v[k];
        }
        nv = std::sqrt(nv);
        if (nv < 1e-6) continue;
        for (auto& x : p.v) x /= nv;
        return p;
    }
}

}  // namespace

std::vector<ResponseRecord> generate(const SynthConfig& cfg) {
    cfg.validate();
    PortableRng rng(cfg.seed);
    std::vector<ResponseRecord> out;

    for (PromptType type : {PromptType::easy, PromptType::moderate, PromptType::confusing}) {
        const double disp = cfg.dispersion[static_cast<std::size_t>(type)];
        const std::size_t k = clump_count(type);
        for (std::size_t p = 0; p < cfg.prompts_per_type; ++p) {
            char pid[64];
            std::snprintf(pid, sizeof pid, "%s-%03zu", std::string(to_string(type)).c_str(), p);
            for (const auto& model : cfg.models) {
                // Clump layout in unit-temperature coordinates, shared by all
                // temperatures of this (prompt, model).
                std::vector<std::array<double, 2>> centers(k, {0.0, 0.0});
                if (k > 1)
                    for (auto& c : centers) c = {rng.normal() * cfg.center_scale * disp, rng.normal() * cfg.center_scale * disp};

                for (double t : cfg.temperatures) {
                    const Plane plane = random_plane(rng, cfg.embed_dim);
                    for (std::size_t i = 0; i < cfg.responses_per_cell; ++i) {
                        const auto& c = centers[i % k];
                        const double x = t * (c[0] + cfg.spread_unit * disp * rng.normal());
                        const double y = t * (c[1] + cfg.spread_unit * disp * rng.normal());

                        ResponseRecord r;
                        r.prompt_id = pid;
                        r.prompt_type = type;
                        r.model_name = model;
                        r.temperature = t;
                        char text[160];
                        std::snprintf(text, sizeof text, "synthetic response %zu to %s from %s at t=%.4f", i, pid,
                                      model.c_str(), t);
                        r.response_text = text;
                        std::vector<double> e(cfg.embed_dim);
                        for (std::size_t j = 0; j < cfg.embed_dim; ++j)
                            e[j] = plane.origin[j] + x * plane.u[j] + y * plane.v[j];
                        r.embedding = std::move(e);
                        out.push_back(std::move(r));
                    }
                }
            }
        }
    }
    return out;
}

}  // namespace convexuq
