#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "xclass/clouds.hpp"
#include "xclass/novelty.hpp"
#include "xclass/preprocess.hpp"

namespace xclass {

enum class FeaturePolicy { Mean, TopK, Off };

FeaturePolicy parse_feature_policy(const std::string& s);
std::string to_string(FeaturePolicy p);

struct Config {
    NoveltyConfig novelty;
    FeaturePolicy feature_policy = FeaturePolicy::Mean;
    std::size_t top_k = 1;
    bool freeze_stats = false;  // stop updating standardization moments after priming
    bool strict = false;        // zero-variance features are errors instead of floored
    bool shared_mask = false;   // one mask for all classes, from class-averaged rankings
};

enum class EventType { OutlierSkipped, Absorbed, NoveltyBuffered, NewClassCreated };
std::string to_string(EventType t);

struct Event {
    std::uint64_t seq = 0;
    EventType type = EventType::Absorbed;
    double lam = 0.0;
    double mean_conf = 0.0;
    double threshold = 0.0;
    double density = 0.0;  // recursive density of x within the winning class
    std::string label;     // winning class
    std::size_t cloud = 0;
    bool cloud_created = false;
    std::vector<std::string> new_classes;
};

struct Prediction {
    std::string label;
    std::size_t class_index = 0;
    Vec lambdas;
    Vec typicality;
};

// Read-only scoring snapshot. Safe to share across threads.
struct Scorer {
    Frame frame;
    std::vector<ClassView> views;
    std::vector<std::string> labels;
};

Prediction score(const Scorer& scorer, const Vec& x);

class XClassModel {
public:
    explicit XClassModel(Config cfg = {}, std::vector<std::string> schema = {});

    void prime(const std::vector<Vec>& samples, const std::vector<std::string>& labels);
    Event learn(const Vec& x);
    Prediction predict(const Vec& x) const;

    // Masked views for prediction, or full-space views when masked is false.
    Scorer scorer(bool masked = true) const;

    std::vector<bool> select_features(std::size_t class_index) const;
    void refresh_masks();
    void rename_class(const std::string& from, const std::string& to);
    std::size_t class_index(const std::string& label) const;

    bool primed() const { return !classes_.empty(); }
    std::size_t dim() const { return frame_.dim(); }
    const Config& config() const { return cfg_; }
    void set_config(const Config& cfg);
    const RunningStats& stats() const { return stats_; }
    const Frame& frame() const { return frame_; }
    const std::vector<ClassModel>& classes() const { return classes_; }
    const ConfidenceTracker& tracker() const { return tracker_; }
    const OutlierBuffer& buffer() const { return buffer_; }
    const std::vector<std::string>& schema() const { return schema_; }
    std::uint64_t seq() const { return seq_; }
    int next_label() const { return next_label_; }
    std::size_t released() const { return released_; }

private:
    friend struct ModelAccess;

    bool outlier(const Vec& x) const;
    void accumulate(ClassModel& c, const Vec& x) const;
    std::vector<ClassView> full_views() const;
    void release_explained(double threshold);
    std::vector<std::string> form_new_classes();

    Config cfg_;
    std::vector<std::string> schema_;
    RunningStats stats_;
    Frame frame_;
    std::vector<ClassModel> classes_;
    ConfidenceTracker tracker_;
    OutlierBuffer buffer_;
    std::uint64_t seq_ = 0;
    int next_label_ = 1;
    std::size_t released_ = 0;
};

// Mask policy applied to one ranking vector. Under the mean policy a feature is
// kept when lambda >= mean(lambda) - kMaskTieZ * se, so features whose ranking is
// indistinguishable from the mean count as ties. Without se the test is exact.
inline constexpr double kMaskTieZ = 2.0;
std::vector<bool> mask_from_ranking(const Vec& lambda, FeaturePolicy policy, std::size_t top_k,
                                    const Vec* se = nullptr);

}  // namespace xclass
