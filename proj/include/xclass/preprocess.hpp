#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace xclass {

using Vec = std::vector<double>;

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Raised when a feature has zero spread and the caller asked for strict checks.
class DegenerateFeature : public std::runtime_error {
public:
    DegenerateFeature(std::size_t feature, const std::string& what)
        : std::runtime_error(what), feature_(feature) {}
    std::size_t feature() const { return feature_; }

private:
    std::size_t feature_;
};

inline constexpr double kOutlierZ = 3.0;
inline constexpr double kSigmaFloor = 1e-12;

// Streaming per-feature moments plus the extrema of standardized values.
struct RunningStats {
    std::size_t count = 0;
    Vec mean;
    Vec mean_sq;
    Vec std_min;
    Vec std_max;

    std::size_t dim() const { return mean.size(); }
    bool empty() const { return count == 0; }
    Vec variance() const;
    Vec sigma() const;  // floored at kSigmaFloor
};

struct ProcessedSample {
    Vec raw;
    Vec standardized;
    Vec normalized;
    bool outlier_flag = false;
};

void update_stats(RunningStats& stats, const Vec& x);

// z-scores against the current moments. strict: throw DegenerateFeature on zero spread.
Vec standardize(const RunningStats& stats, const Vec& x, bool strict = true);
bool is_outlier(const Vec& standardized);

// Unity normalization of a standardized vector over the running extrema, clamped to [0,1].
Vec normalize(const RunningStats& stats, const Vec& standardized, bool strict = true);

ProcessedSample process(const RunningStats& stats, const Vec& x, bool strict = true);

// Min-max view of raw vectors. The model keeps its state in raw units and
// looks at it through the current frame, so re-scaling never strands old state.
struct Frame {
    Vec lo;
    Vec hi;

    std::size_t dim() const { return lo.size(); }
    bool empty() const { return lo.empty(); }
    void extend(const Vec& x);
    double scale(std::size_t f) const;  // 1 / width, width floored
    Vec map(const Vec& x) const;        // no clamping
    Vec map_clamped(const Vec& x) const;
    static Frame identity(std::size_t dim);
};

void check_dim(std::size_t expected, std::size_t got, const char* where);

}  // namespace xclass
