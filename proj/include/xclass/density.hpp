#pragma once

#include <cstddef>
#include <vector>

#include "xclass/preprocess.hpp"

namespace xclass {

// 1 / (1 + ||z - c||^2 / scale_sq)
double cauchy_density(const Vec& z, const Vec& center, double scale_sq);

// Per-feature Cauchy density with a per-feature variance scale.
// Variances are floored at 1e-12.
Vec per_feature_density(const Vec& z, const Vec& mean, const Vec& var);

struct FeatureRanking {
    Vec lambda_cum;
    Vec lambda_sq;  // running mean of squared densities, for the standard error
    std::size_t sample_count = 0;
    int class_id = -1;

    Vec standard_error() const;
};

void accumulate_feature_contribution(FeatureRanking& ranking, const Vec& d);

// Recursive density of a point set summarized by its mean and mean squared norm.
double global_density(const Vec& z, const Vec& mean, double mean_sq_norm);

Vec typicality(const Vec& densities);

}  // namespace xclass
