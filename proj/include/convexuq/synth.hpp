#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "convexuq/records.hpp"

namespace convexuq {

/// Seeded source of uniforms and normals built on std::mt19937_64, whose
/// output sequence is fixed by the standard. Uniforms take the top 53 bits;
/// normals use the Box-Muller transform, consuming two uniforms per pair.
class PortableRng {
public:
    explicit PortableRng(std::uint64_t seed) : engine_(seed) {}

    double uniform();  // [0, 1)
    double normal();   // N(0, 1)

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

struct SynthConfig {
    std::uint64_t seed = 7;
    std::size_t prompts_per_type = 5;
    std::size_t responses_per_cell = 20;
    std::vector<double> temperatures{0.25, 0.5, 0.75, 1.0};
    std::size_t embed_dim = 16;
    std::array<double, 3> dispersion{0.3, 0.6, 1.5};  // easy, moderate, confusing
    std::vector<std::string> models{"synth-alpha", "synth-beta", "synth-gamma"};
    double spread_unit = 0.5;   // clump std = spread_unit * dispersion * t
    double center_scale = 2.5;  // clump-center std = center_scale * dispersion * t

    void validate() const;
};

/// Number of Gaussian clumps per prompt type: 1, 2, 3.
std::size_t clump_count(PromptType t);

/// Records for every (prompt, model, temperature) cell with inline
/// embeddings lying on a random 2D affine plane of R^embed_dim.
std::vector<ResponseRecord> generate(const SynthConfig& cfg);

}  // namespace convexuq
