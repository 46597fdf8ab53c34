#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "xclass/density.hpp"
#include "xclass/preprocess.hpp"

namespace xclass {

// r* from a 30 degree similarity angle: r*^2 = 2 - 2 cos(pi/6) = 2 - sqrt(3)
inline const double kRStarSq = 2.0 - std::sqrt(3.0);
inline const double kRStar = std::sqrt(kRStarSq);
inline constexpr double kRadiusFloor = 1e-6;

// Prototype and spread are kept in the units of the vectors fed in (raw units
// inside the classifier) and viewed through a Frame when densities are needed.
struct DataCloud {
    Vec prototype;
    Vec mean_sq;  // per-feature mean of squares of members
    std::size_t support = 1;
    double radius_sq = kRStarSq;
    int cloud_id = 0;
};

struct ClassModel {
    std::string label;
    int class_id = 0;
    std::vector<DataCloud> clouds;
    Vec class_mean;
    Vec class_mean_sq;  // per feature; the squared norm follows by summing in a frame
    std::size_t sample_count = 0;
    FeatureRanking feature_ranking;
    std::vector<bool> feature_mask;

    std::size_t dim() const { return class_mean.size(); }
    std::size_t support_total() const;
};

ClassModel init_class(const Vec& x, int class_id, std::string label = {});

// Folds x into the class running mean / mean of squares.
void update_class_stats(ClassModel& model, const Vec& x);

// Class mean and mean squared norm as seen in a frame.
void class_moments(const ClassModel& model, const Frame& frame, Vec& mean, double& mean_sq_norm);

std::size_t nearest_cloud(const ClassModel& model, const Vec& xn, const Frame& frame);
std::size_t nearest_cloud(const ClassModel& model, const Vec& xn);

// D(x) >= max D(p) or D(x) <= min D(p), excluding the case where both hold.
// Class statistics must already include x.
bool should_create_cloud(const ClassModel& model, const Vec& xn, const Frame& frame);
bool should_create_cloud(const ClassModel& model, const Vec& xn);

void add_cloud(ClassModel& model, const Vec& x);
void update_cloud(ClassModel& model, std::size_t n, const Vec& x, const Frame& frame);
void update_cloud(ClassModel& model, std::size_t n, const Vec& x);

enum class AbsorbMode { Supervised, Stream };

struct AbsorbResult {
    std::size_t cloud = 0;
    bool created = false;
};

// One learning step: statistics, creation test, create-or-update.
// A new cloud additionally requires x to lie outside the r* ball of the nearest
// prototype. In stream mode a low-density sample updates its nearest cloud
// instead of opening one.
AbsorbResult absorb(ClassModel& model, const Vec& x, const Frame& frame, AbsorbMode mode = AbsorbMode::Supervised);

// Pooled within-cloud scatter per feature, in frame units.
Vec pooled_scatter(const ClassModel& model, const Frame& frame);

}  // namespace xclass
