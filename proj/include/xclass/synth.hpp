#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "xclass/dataset.hpp"

namespace xclass {

struct SynthSpec {
    std::size_t blobs = 3;
    std::size_t dim = 2;
    double separation = 8.0;  // distance between neighbouring centers, in blob sigmas
    std::size_t noise_features = 0;
    std::size_t per_class = 100;
    double sigma = 1.0;
    std::uint64_t seed = 7;
    bool shuffle = true;

    void validate() const;
};

// Centers with pairwise distance `separation` (k <= dim: scaled unit axes;
// otherwise a regular polygon in the first two coordinates).
std::vector<Vec> blob_centers(std::size_t blobs, std::size_t dim, double separation);

// Labels are "c0", "c1", ...; noise columns are named n0, n1, ...
Dataset gen_synth(const SynthSpec& spec);

}  // namespace xclass
