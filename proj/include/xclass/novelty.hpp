#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "xclass/clouds.hpp"

namespace xclass {

struct NoveltyConfig {
    double m = 3.0;
    std::size_t kappa_min_support = 10;
    std::size_t buffer_expiry = 1000;
    double scale_factor = 4.0;  // confidence scale, in units of pooled cloud scatter

    void validate() const;
};

struct ConfidenceTracker {
    std::size_t i = 0;
    double mean_conf = 0.0;
    double var_conf = 0.0;
    double m = 3.0;

    double sigma() const;
    double threshold() const { return mean_conf - m * sigma(); }
};

void update_tracker(ConfidenceTracker& t, double lam);

enum class Decision { Absorb, DropDetected };
Decision check_novelty(const ConfidenceTracker& t, double lam);

struct BufferEntry {
    Vec x;
    double lam = 0.0;
    std::uint64_t seq = 0;
};

struct OutlierBuffer {
    std::deque<BufferEntry> entries;
    std::size_t expiry = 1000;
    std::size_t discarded = 0;
};

// Appends and evicts the oldest entries past expiry. Returns the number evicted.
std::size_t buffer_outlier(OutlierBuffer& buf, Vec x, double lam, std::uint64_t seq);

// Snapshot of one class for scoring: prototypes mapped into a frame and
// restricted to a feature mask, plus the class confidence scale.
struct ClassView {
    std::vector<std::size_t> features;
    std::vector<Vec> prototypes;
    Vec inv_scale;  // per selected feature: 1 / (k * features * scatter)
};

ClassView make_view(const ClassModel& model, const Frame& frame, double scale_factor,
                    const std::vector<bool>* mask = nullptr);

// Same mask restriction applied to a query vector.
Vec restrict(const Vec& xn, const std::vector<std::size_t>& features);

struct Confidence {
    double lam = 0.0;
    std::size_t best_class = 0;
    std::size_t best_cloud = 0;
};

// Max cloud density over all classes, full feature space. Ties go to the
// lowest (class, cloud).
Confidence confidence(std::span<const ClassView> views, const Vec& xn);

// Density of xn against one class view (max over its clouds).
double class_confidence(const ClassView& view, const Vec& xn, std::size_t* cloud = nullptr);

struct FormedClass {
    ClassModel model;
    std::vector<Vec> members;
    std::vector<std::uint64_t> member_seqs;
};

using FormationGate = std::function<bool(const Vec& prototype, const std::vector<FormedClass>& formed)>;

// Whether a mapped sample joins a scratch cloud with mapped prototype pn.
using JoinTest = std::function<bool(const Vec& xn, const Vec& pn)>;

// Clusters buffered samples leader-style: each entry joins its nearest scratch
// cloud when `joins` says so (default: inside the r* ball), else opens one.
// Each scratch cloud with at least kappa members whose prototype passes
// `accept` founds a class, labelled "new class N" from next_label on. `accept`
// also sees the classes formed so far in this call. Founding members leave the
// buffer.
std::vector<FormedClass> try_form_new_classes(
    OutlierBuffer& buf, const NoveltyConfig& cfg, const Frame& frame, int next_class_id, int& next_label,
    const FormationGate& accept = {}, const JoinTest& joins = {});

std::string auto_label(int n);

}  // namespace xclass
