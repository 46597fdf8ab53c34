#include "xclass/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace xclass {

FeaturePolicy parse_feature_policy(const std::string& s) {
    if (s == "mean") return FeaturePolicy::Mean;
    if (s == "top-k") return FeaturePolicy::TopK;
    if (s == "off") return FeaturePolicy::Off;
    throw std::invalid_argument("unknown feature policy '" + s + "' (expected mean, top-k or off)");
}

std::string to_string(FeaturePolicy p) {
    switch (p) {
        case FeaturePolicy::Mean: return "mean";
        case FeaturePolicy::TopK: return "top-k";
        case FeaturePolicy::Off: return "off";
    }
    return "mean";
}

std::string to_string(EventType t) {
    switch (t) {
        case EventType::OutlierSkipped: return "OUTLIER_SKIPPED";
        case EventType::Absorbed: return "ABSORBED";
        case EventType::NoveltyBuffered: return "NOVELTY_BUFFERED";
        case EventType::NewClassCreated: return "NEW_CLASS_CREATED";
    }
    return "ABSORBED";
}

std::vector<bool> mask_from_ranking(const Vec& lambda, FeaturePolicy policy, std::size_t top_k, const Vec* se) {
    std::vector<bool> mask(lambda.size(), true);
    if (lambda.empty() || policy == FeaturePolicy::Off) return mask;
    const std::size_t top = static_cast<std::size_t>(std::max_element(lambda.begin(), lambda.end()) - lambda.begin());
    if (policy == FeaturePolicy::Mean) {
        const double mean = std::accumulate(lambda.begin(), lambda.end(), 0.0) / static_cast<double>(lambda.size());
        for (std::size_t f = 0; f < lambda.size(); ++f) mask[f] = lambda[f] >= mean - (se ? kMaskTieZ * (*se)[f] : 0.0);
    } else {
        std::vector<std::size_t> order(lambda.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return lambda[a] > lambda[b]; });
        std::fill(mask.begin(), mask.end(), false);
        for (std::size_t i = 0; i < std::min(std::max<std::size_t>(top_k, 1), order.size()); ++i) mask[order[i]] = true;
    }
    mask[top] = true;
    return mask;
}

Prediction score(const Scorer& s, const Vec& x) {
    if (s.views.empty()) throw std::logic_error("predict: model has no classes");
    check_dim(s.frame.dim(), x.size(), "predict");
    const Vec xn = s.frame.map_clamped(x);
    Prediction p;
    p.lambdas.resize(s.views.size());
    double best = -1.0;
    for (std::size_t k = 0; k < s.views.size(); ++k) {
        const double l = class_confidence(s.views[k], restrict(xn, s.views[k].features));
        p.lambdas[k] = l;
        if (l > best) {
            best = l;
            p.class_index = k;
        }
    }
    p.label = s.labels[p.class_index];
    p.typicality = typicality(p.lambdas);
    return p;
}

XClassModel::XClassModel(Config cfg, std::vector<std::string> schema)
    : cfg_(cfg), schema_(std::move(schema)) {
    cfg_.novelty.validate();
    tracker_.m = cfg_.novelty.m;
    buffer_.expiry = cfg_.novelty.buffer_expiry;
}

void XClassModel::set_config(const Config& cfg) {
    cfg.novelty.validate();
    cfg_ = cfg;
    tracker_.m = cfg_.novelty.m;
    buffer_.expiry = cfg_.novelty.buffer_expiry;
    refresh_masks();
}

bool XClassModel::outlier(const Vec& x) const {
    if (stats_.count < 2) return false;
    return is_outlier(standardize(stats_, x, cfg_.strict));
}

void XClassModel::accumulate(ClassModel& c, const Vec& x) const {
    accumulate_feature_contribution(c.feature_ranking, per_feature_density(x, c.class_mean, stats_.variance()));
}

std::vector<ClassView> XClassModel::full_views() const {
    std::vector<ClassView> v;
    v.reserve(classes_.size());
    for (const auto& c : classes_) v.push_back(make_view(c, frame_, cfg_.novelty.scale_factor));
    return v;
}

Scorer XClassModel::scorer(bool masked) const {
    Scorer s;
    s.frame = frame_;
    const bool use_mask = masked && cfg_.feature_policy != FeaturePolicy::Off;
    for (const auto& c : classes_) {
        s.views.push_back(make_view(c, frame_, cfg_.novelty.scale_factor, use_mask ? &c.feature_mask : nullptr));
        s.labels.push_back(c.label);
    }
    return s;
}

void XClassModel::prime(const std::vector<Vec>& samples, const std::vector<std::string>& labels) {
    if (samples.empty()) throw std::invalid_argument("prime: no samples");
    if (samples.size() != labels.size()) throw std::invalid_argument("prime: samples and labels differ in length");
    for (const auto& x : samples) {
        if (!schema_.empty()) check_dim(schema_.size(), x.size(), "prime");
        update_stats(stats_, x);
    }
    std::vector<std::size_t> ok;
    for (std::size_t i = 0; i < samples.size(); ++i)
        if (!outlier(samples[i])) ok.push_back(i);
    for (std::size_t i : ok) frame_.extend(samples[i]);

    for (std::size_t i : ok) {
        const Vec& x = samples[i];
        auto it = std::find_if(classes_.begin(), classes_.end(), [&](const ClassModel& c) { return c.label == labels[i]; });
        if (it == classes_.end()) {
            classes_.push_back(init_class(x, static_cast<int>(classes_.size()), labels[i]));
            accumulate(classes_.back(), x);
        } else {
            absorb(*it, x, frame_);
            accumulate(*it, x);
        }
    }
    refresh_masks();

    const auto views = full_views();
    for (std::size_t i : ok) update_tracker(tracker_, confidence(views, frame_.map_clamped(samples[i])).lam);
}

Event XClassModel::learn(const Vec& x) {
    if (!primed()) throw std::logic_error("learn: model is not primed");
    check_dim(dim(), x.size(), "learn");
    Event ev;
    ev.seq = ++seq_;
    if (!cfg_.freeze_stats) update_stats(stats_, x);
    const bool out = outlier(x);
    frame_.extend(x);
    if (out) {
        ev.type = EventType::OutlierSkipped;
        ev.mean_conf = tracker_.mean_conf;
        ev.threshold = tracker_.threshold();
        return ev;
    }
    const Vec xn = frame_.map_clamped(x);
    const auto views = full_views();
    const Confidence c = confidence(views, xn);
    ev.lam = c.lam;
    ev.mean_conf = tracker_.mean_conf;
    ev.threshold = tracker_.threshold();
    ev.label = classes_[c.best_class].label;
    ev.cloud = c.best_cloud;
    {
        Vec mu;
        double X = 0.0;
        class_moments(classes_[c.best_class], frame_, mu, X);
        ev.density = global_density(xn, mu, X);
    }

    if (check_novelty(tracker_, c.lam) == Decision::DropDetected) {
        buffer_outlier(buffer_, x, c.lam, ev.seq);
        ev.new_classes = form_new_classes();
        ev.type = ev.new_classes.empty() ? EventType::NoveltyBuffered : EventType::NewClassCreated;
        return ev;
    }

    ClassModel& cls = classes_[c.best_class];
    const AbsorbResult r = absorb(cls, x, frame_, AbsorbMode::Stream);
    accumulate(cls, x);
    if (cfg_.shared_mask)
        refresh_masks();
    else
        cls.feature_mask = select_features(c.best_class);
    update_tracker(tracker_, c.lam);
    ev.type = EventType::Absorbed;
    ev.cloud = r.cloud;
    ev.cloud_created = r.created;
    return ev;
}

void XClassModel::release_explained(double thr) {
    const auto views = full_views();
    std::deque<BufferEntry> keep;
    for (auto& e : buffer_.entries) {
        const Confidence c = confidence(views, frame_.map_clamped(e.x));
        if (c.lam < thr) {
            keep.push_back(std::move(e));
            continue;
        }
        ++released_;
    }
    buffer_.entries = std::move(keep);
}

std::vector<std::string> XClassModel::form_new_classes() {
    const double thr = tracker_.threshold();
    // buffered samples the current model now explains join their class
    release_explained(thr);

    const auto views = full_views();
    auto gate = [&](const Vec& proto, const std::vector<FormedClass>& formed) {
        std::vector<ClassView> all = views;
        for (const auto& f : formed) all.push_back(make_view(f.model, frame_, cfg_.novelty.scale_factor));
        return confidence(all, frame_.map_clamped(proto)).lam < thr;
    };
    // a candidate member must sit where a class of typical shape centred on
    // the candidate would explain it
    Vec w(dim(), 0.0);
    double n = 0.0;
    for (const auto& c : classes_) {
        const Vec cw = pooled_scatter(c, frame_);
        const double s = static_cast<double>(c.support_total());
        for (std::size_t f = 0; f < dim(); ++f) w[f] += s * cw[f];
        n += s;
    }
    const double u_max = thr > 0.0 ? 1.0 / thr - 1.0 : std::numeric_limits<double>::infinity();
    const double k = cfg_.novelty.scale_factor * static_cast<double>(dim());
    auto joins = [&](const Vec& xn, const Vec& pn) {
        double u = 0.0;
        for (std::size_t f = 0; f < xn.size(); ++f) u += (xn[f] - pn[f]) * (xn[f] - pn[f]) / (k * w[f] / n);
        return u <= u_max;
    };
    auto formed = try_form_new_classes(buffer_, cfg_.novelty, frame_, static_cast<int>(classes_.size()),
                                       next_label_, gate, joins);
    std::vector<std::string> names;
    for (auto& f : formed) {
        for (const auto& x : f.members) accumulate(f.model, x);
        names.push_back(f.model.label);
        classes_.push_back(std::move(f.model));
    }
    if (!formed.empty()) {
        release_explained(thr);
        refresh_masks();
    }
    return names;
}

Prediction XClassModel::predict(const Vec& x) const {
    if (!primed()) throw std::logic_error("predict: model is not primed");
    check_dim(dim(), x.size(), "predict");
    return score(scorer(), x);
}

std::vector<bool> XClassModel::select_features(std::size_t k) const {
    if (k >= classes_.size()) throw std::out_of_range("select_features: bad class index");
    if (cfg_.shared_mask) {
        Vec avg(dim(), 0.0), se(dim(), 0.0);
        double n = 0.0;
        for (const auto& c : classes_) {
            if (c.feature_ranking.sample_count == 0) continue;
            const Vec s = c.feature_ranking.standard_error();
            for (std::size_t f = 0; f < dim(); ++f) {
                avg[f] += c.feature_ranking.lambda_cum[f];
                se[f] += s[f] * s[f];
            }
            n += 1.0;
        }
        if (n == 0.0) return std::vector<bool>(dim(), true);
        for (std::size_t f = 0; f < dim(); ++f) {
            avg[f] /= n;
            se[f] = std::sqrt(se[f]) / n;
        }
        return mask_from_ranking(avg, cfg_.feature_policy, cfg_.top_k, &se);
    }
    const auto& r = classes_[k].feature_ranking;
    if (r.sample_count == 0) return std::vector<bool>(dim(), true);
    const Vec se = r.standard_error();
    return mask_from_ranking(r.lambda_cum, cfg_.feature_policy, cfg_.top_k, &se);
}

void XClassModel::refresh_masks() {
    for (std::size_t k = 0; k < classes_.size(); ++k) classes_[k].feature_mask = select_features(k);
}

std::size_t XClassModel::class_index(const std::string& label) const {
    for (std::size_t k = 0; k < classes_.size(); ++k)
        if (classes_[k].label == label) return k;
    throw std::invalid_argument("unknown class '" + label + "'");
}

void XClassModel::rename_class(const std::string& from, const std::string& to) {
    const std::size_t k = class_index(from);
    if (to.empty()) throw std::invalid_argument("rename_class: empty label");
    if (from == to) return;
    for (const auto& c : classes_)
        if (c.label == to) throw std::invalid_argument("rename_class: label '" + to + "' already exists");
    classes_[k].label = to;
}

}  // namespace xclass
