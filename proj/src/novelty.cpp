#include "xclass/novelty.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace xclass {

void NoveltyConfig::validate() const {
    if (!(m > 0.0)) throw std::invalid_argument("novelty config: m must be positive");
    if (kappa_min_support < 2) throw std::invalid_argument("novelty config: kappa must be at least 2");
    if (buffer_expiry < 1) throw std::invalid_argument("novelty config: buffer expiry must be positive");
    if (!(scale_factor > 0.0)) throw std::invalid_argument("novelty config: scale factor must be positive");
}

double ConfidenceTracker::sigma() const { return std::sqrt(std::max(var_conf, 0.0)); }

void update_tracker(ConfidenceTracker& t, double lam) {
    if (!(lam > 0.0 && lam <= 1.0)) throw std::invalid_argument("update_tracker: confidence outside (0,1]");
    ++t.i;
    const double n = static_cast<double>(t.i);
    const double delta = lam - t.mean_conf;
    t.mean_conf += delta / n;
    t.var_conf += (delta * (lam - t.mean_conf) - t.var_conf) / n;
}

Decision check_novelty(const ConfidenceTracker& t, double lam) {
    if (t.i < 2) return Decision::Absorb;
    return lam < t.threshold() ? Decision::DropDetected : Decision::Absorb;
}

std::size_t buffer_outlier(OutlierBuffer& buf, Vec x, double lam, std::uint64_t seq) {
    buf.entries.push_back({std::move(x), lam, seq});
    std::size_t evicted = 0;
    while (buf.entries.size() > buf.expiry) {
        buf.entries.pop_front();
        ++evicted;
    }
    buf.discarded += evicted;
    return evicted;
}

ClassView make_view(const ClassModel& m, const Frame& fr, double k, const std::vector<bool>* mask) {
    ClassView v;
    for (std::size_t f = 0; f < m.dim(); ++f)
        if (!mask || (*mask)[f]) v.features.push_back(f);
    v.prototypes.reserve(m.clouds.size());
    for (const auto& c : m.clouds) v.prototypes.push_back(restrict(fr.map(c.prototype), v.features));
    const Vec w = pooled_scatter(m, fr);
    const double n = k * static_cast<double>(v.features.size());
    for (std::size_t f : v.features) v.inv_scale.push_back(1.0 / (n * w[f]));
    return v;
}

Vec restrict(const Vec& xn, const std::vector<std::size_t>& features) {
    if (features.size() == xn.size()) return xn;
    Vec out(features.size());
    for (std::size_t i = 0; i < features.size(); ++i) out[i] = xn[features[i]];
    return out;
}

double class_confidence(const ClassView& v, const Vec& xn, std::size_t* cloud) {
    double best = -1.0;
    std::size_t arg = 0;
    for (std::size_t j = 0; j < v.prototypes.size(); ++j) {
        const Vec& p = v.prototypes[j];
        double u = 0.0;
        for (std::size_t f = 0; f < p.size(); ++f) u += (xn[f] - p[f]) * (xn[f] - p[f]) * v.inv_scale[f];
        const double d = 1.0 / (1.0 + u);
        if (d > best) {
            best = d;
            arg = j;
        }
    }
    if (cloud) *cloud = arg;
    return best;
}

Confidence confidence(std::span<const ClassView> views, const Vec& xn) {
    if (views.empty()) throw std::logic_error("confidence: no trained classes");
    Confidence c;
    c.lam = -1.0;
    for (std::size_t k = 0; k < views.size(); ++k) {
        std::size_t j = 0;
        const double d = class_confidence(views[k], xn, &j);
        if (d > c.lam) {
            c = {d, k, j};
        }
    }
    return c;
}

std::string auto_label(int n) { return "new class " + std::to_string(n); }

std::vector<FormedClass> try_form_new_classes(OutlierBuffer& buf, const NoveltyConfig& cfg, const Frame& fr,
                                              int next_class_id, int& next_label,
                                              const FormationGate& accept, const JoinTest& joins) {
    std::vector<FormedClass> out;
    if (buf.entries.empty()) return out;

    // the density branch cannot split a two-point cloud, so buffer entries,
    // which mix unrelated sources, group by distance alone
    ClassModel scratch = init_class(buf.entries[0].x, -1, "scratch");
    std::vector<std::vector<std::size_t>> members{{0}};
    for (std::size_t i = 1; i < buf.entries.size(); ++i) {
        const Vec& x = buf.entries[i].x;
        const Vec xn = fr.map(x);
        const std::size_t j = nearest_cloud(scratch, xn, fr);
        const Vec pn = fr.map(scratch.clouds[j].prototype);
        bool in = false;
        if (joins) {
            in = joins(xn, pn);
        } else {
            double d2 = 0.0;
            for (std::size_t f = 0; f < xn.size(); ++f) d2 += (xn[f] - pn[f]) * (xn[f] - pn[f]);
            in = d2 <= kRStarSq;
        }
        update_class_stats(scratch, x);
        if (in) {
            update_cloud(scratch, j, x, fr);
            members[j].push_back(i);
        } else {
            add_cloud(scratch, x);
            members.push_back({i});
        }
    }

    std::vector<bool> used(buf.entries.size(), false);
    for (std::size_t j = 0; j < members.size(); ++j) {
        const auto& g = members[j];
        if (g.size() < cfg.kappa_min_support) continue;
        if (accept && !accept(scratch.clouds[j].prototype, out)) continue;
        FormedClass fc;
        fc.model = init_class(buf.entries[g[0]].x, next_class_id++, auto_label(next_label++));
        for (std::size_t n = 0; n < g.size(); ++n) {
            if (n > 0) absorb(fc.model, buf.entries[g[n]].x, fr);
            fc.members.push_back(buf.entries[g[n]].x);
            fc.member_seqs.push_back(buf.entries[g[n]].seq);
        }
        for (std::size_t i : g) used[i] = true;
        out.push_back(std::move(fc));
    }
    if (!out.empty()) {
        std::deque<BufferEntry> keep;
        for (std::size_t i = 0; i < buf.entries.size(); ++i)
            if (!used[i]) keep.push_back(std::move(buf.entries[i]));
        buf.entries = std::move(keep);
    }
    return out;
}

}  // namespace xclass
