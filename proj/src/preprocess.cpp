#include "xclass/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace xclass {

void check_dim(std::size_t expected, std::size_t got, const char* where) {
    if (expected != got)
        throw DimensionError(std::string(where) + ": expected dimension " + std::to_string(expected) +
                             ", got " + std::to_string(got));
}

Vec RunningStats::variance() const {
    Vec v(dim());
    for (std::size_t f = 0; f < dim(); ++f) v[f] = std::max(mean_sq[f] - mean[f] * mean[f], 0.0);
    return v;
}

Vec RunningStats::sigma() const {
    Vec s = variance();
    for (double& v : s) v = std::max(std::sqrt(v), kSigmaFloor);
    return s;
}

void update_stats(RunningStats& stats, const Vec& x) {
    if (x.empty()) throw DimensionError("update_stats: empty sample");
    if (stats.count == 0) {
        const std::size_t d = x.size();
        stats.mean.assign(d, 0.0);
        stats.mean_sq.assign(d, 0.0);
        stats.std_min.assign(d, std::numeric_limits<double>::infinity());
        stats.std_max.assign(d, -std::numeric_limits<double>::infinity());
    }
    check_dim(stats.dim(), x.size(), "update_stats");
    ++stats.count;
    const double n = static_cast<double>(stats.count);
    for (std::size_t f = 0; f < x.size(); ++f) {
        stats.mean[f] += (x[f] - stats.mean[f]) / n;
        stats.mean_sq[f] += (x[f] * x[f] - stats.mean_sq[f]) / n;
    }
    const Vec z = standardize(stats, x, false);
    for (std::size_t f = 0; f < x.size(); ++f) {
        stats.std_min[f] = std::min(stats.std_min[f], z[f]);
        stats.std_max[f] = std::max(stats.std_max[f], z[f]);
    }
}

Vec standardize(const RunningStats& stats, const Vec& x, bool strict) {
    check_dim(stats.dim(), x.size(), "standardize");
    const Vec var = stats.variance();
    Vec z(x.size());
    for (std::size_t f = 0; f < x.size(); ++f) {
        const double s = std::sqrt(var[f]);
        if (s <= kSigmaFloor) {
            if (strict)
                throw DegenerateFeature(f, "standardize: feature " + std::to_string(f) + " has zero variance");
            const double d = x[f] - stats.mean[f];
            z[f] = d == 0.0 ? 0.0 : d / kSigmaFloor;
        } else {
            z[f] = (x[f] - stats.mean[f]) / s;
        }
    }
    return z;
}

bool is_outlier(const Vec& standardized) {
    return std::any_of(standardized.begin(), standardized.end(),
                       [](double z) { return std::abs(z) >= kOutlierZ; });
}

Vec normalize(const RunningStats& stats, const Vec& s, bool strict) {
    check_dim(stats.dim(), s.size(), "normalize");
    Vec out(s.size());
    for (std::size_t f = 0; f < s.size(); ++f) {
        const double w = stats.std_max[f] - stats.std_min[f];
        if (!(w > 0.0)) {
            if (strict)
                throw DegenerateFeature(f, "normalize: feature " + std::to_string(f) + " is constant");
            out[f] = 0.0;
            continue;
        }
        out[f] = std::clamp((s[f] - stats.std_min[f]) / w, 0.0, 1.0);
    }
    return out;
}

ProcessedSample process(const RunningStats& stats, const Vec& x, bool strict) {
    ProcessedSample p;
    p.raw = x;
    p.standardized = standardize(stats, x, strict);
    p.outlier_flag = stats.count >= 2 && is_outlier(p.standardized);
    p.normalized = normalize(stats, p.standardized, strict);
    return p;
}

void Frame::extend(const Vec& x) {
    if (lo.empty()) {
        lo = x;
        hi = x;
        return;
    }
    check_dim(lo.size(), x.size(), "Frame::extend");
    for (std::size_t f = 0; f < x.size(); ++f) {
        lo[f] = std::min(lo[f], x[f]);
        hi[f] = std::max(hi[f], x[f]);
    }
}

double Frame::scale(std::size_t f) const { return 1.0 / std::max(hi[f] - lo[f], kSigmaFloor); }

Vec Frame::map(const Vec& x) const {
    check_dim(lo.size(), x.size(), "Frame::map");
    Vec out(x.size());
    for (std::size_t f = 0; f < x.size(); ++f) out[f] = (x[f] - lo[f]) * scale(f);
    return out;
}

Vec Frame::map_clamped(const Vec& x) const {
    Vec out = map(x);
    for (double& v : out) v = std::clamp(v, 0.0, 1.0);
    return out;
}

Frame Frame::identity(std::size_t dim) {
    Frame fr;
    fr.lo.assign(dim, 0.0);
    fr.hi.assign(dim, 1.0);
    return fr;
}

}  // namespace xclass
