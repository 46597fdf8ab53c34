#include "xclass/density.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace xclass {

double cauchy_density(const Vec& z, const Vec& center, double scale_sq) {
    if (!(scale_sq > 0.0)) throw std::invalid_argument("cauchy_density: scale must be positive");
    check_dim(center.size(), z.size(), "cauchy_density");
    double d2 = 0.0;
    for (std::size_t f = 0; f < z.size(); ++f) {
        const double d = z[f] - center[f];
        d2 += d * d;
    }
    return 1.0 / (1.0 + d2 / scale_sq);
}

Vec per_feature_density(const Vec& z, const Vec& mean, const Vec& var) {
    check_dim(mean.size(), z.size(), "per_feature_density");
    check_dim(var.size(), z.size(), "per_feature_density");
    Vec out(z.size());
    for (std::size_t f = 0; f < z.size(); ++f) {
        const double d = z[f] - mean[f];
        out[f] = 1.0 / (1.0 + d * d / std::max(var[f], 1e-12));
    }
    return out;
}

void accumulate_feature_contribution(FeatureRanking& r, const Vec& d) {
    if (r.sample_count == 0) {
        r.lambda_cum.assign(d.size(), 0.0);
        r.lambda_sq.assign(d.size(), 0.0);
    }
    check_dim(r.lambda_cum.size(), d.size(), "accumulate_feature_contribution");
    ++r.sample_count;
    const double n = static_cast<double>(r.sample_count);
    for (std::size_t f = 0; f < d.size(); ++f) {
        r.lambda_cum[f] += (d[f] - r.lambda_cum[f]) / n;
        r.lambda_sq[f] += (d[f] * d[f] - r.lambda_sq[f]) / n;
    }
}

Vec FeatureRanking::standard_error() const {
    Vec se(lambda_cum.size(), 0.0);
    if (sample_count < 2 || lambda_sq.size() != lambda_cum.size()) return se;
    const double n = static_cast<double>(sample_count);
    for (std::size_t f = 0; f < se.size(); ++f)
        se[f] = std::sqrt(std::max(lambda_sq[f] - lambda_cum[f] * lambda_cum[f], 0.0) / (n - 1.0));
    return se;
}

double global_density(const Vec& z, const Vec& mean, double mean_sq_norm) {
    check_dim(mean.size(), z.size(), "global_density");
    double d2 = 0.0, m2 = 0.0;
    for (std::size_t f = 0; f < z.size(); ++f) {
        const double d = z[f] - mean[f];
        d2 += d * d;
        m2 += mean[f] * mean[f];
    }
    // the spread term is nonnegative in exact arithmetic; clip rounding noise
    return 1.0 / (1.0 + d2 + std::max(mean_sq_norm - m2, 0.0));
}

Vec typicality(const Vec& densities) {
    if (densities.empty()) throw std::invalid_argument("typicality: empty set");
    double sum = 0.0;
    for (double d : densities) {
        if (!(d > 0.0)) throw std::invalid_argument("typicality: densities must be positive");
        sum += d;
    }
    Vec t(densities.size());
    for (std::size_t k = 0; k < t.size(); ++k) t[k] = densities[k] / sum;
    return t;
}

}  // namespace xclass
