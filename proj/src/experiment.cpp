#include "xclass/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "xclass/rules.hpp"

namespace xclass {

using nlohmann::json;

void StreamSchedule::validate() const {
    if (phases.empty()) throw std::invalid_argument("schedule: no phases");
    if (!(holdout >= 0.0 && holdout < 1.0)) throw std::invalid_argument("schedule: holdout must be in [0,1)");
    for (const auto& p : phases) {
        if (!(p.labeled_fraction >= 0.0 && p.labeled_fraction <= 1.0))
            throw std::invalid_argument("schedule: labeled fraction must be in [0,1]");
        if (!(p.share > 0.0 && p.share <= 1.0)) throw std::invalid_argument("schedule: share must be in (0,1]");
    }
}

StreamSchedule parse_schedule(const std::string& text) {
    try {
        const json j = json::parse(text);
        StreamSchedule s;
        s.holdout = j.value("holdout", 0.2);
        for (const auto& jp : j.at("phases")) {
            Phase p;
            p.classes = jp.value("classes", std::vector<std::string>{});
            p.labeled_fraction = jp.value("labeled_fraction", 0.0);
            p.count = jp.value("count", std::size_t{0});
            p.share = jp.value("share", 1.0);
            s.phases.push_back(std::move(p));
        }
        s.validate();
        return s;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("schedule: ") + e.what());
    }
}

StreamSchedule load_schedule(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open schedule '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_schedule(ss.str());
}

std::string schedule_json(const StreamSchedule& s) {
    json phases = json::array();
    for (const auto& p : s.phases)
        phases.push_back({{"classes", p.classes}, {"labeled_fraction", p.labeled_fraction}, {"count", p.count}, {"share", p.share}});
    return json({{"holdout", s.holdout}, {"phases", phases}}).dump(1) + "\n";
}

StreamSchedule default_schedule(const Dataset& data) {
    const auto labels = data.label_set();
    if (labels.empty()) throw std::invalid_argument("default schedule needs a labeled dataset");
    StreamSchedule s;
    s.phases.push_back({{labels.front()}, 1.0, 0, 0.8});
    s.phases.push_back({{}, 0.0, 0, 1.0});
    return s;
}

ExperimentResult run_experiment(const Dataset& data, const StreamSchedule& schedule, const Config& cfg,
                                std::uint64_t seed) {
    schedule.validate();
    if (!data.labeled() || data.labels.size() != data.rows.size())
        throw std::invalid_argument("run_experiment: dataset must be labeled");
    const auto truth = data.label_set();
    for (const auto& p : schedule.phases)
        for (const auto& c : p.classes)
            if (std::find(truth.begin(), truth.end(), c) == truth.end())
                throw std::invalid_argument("run_experiment: schedule names class '" + c + "' absent from the dataset");

    std::mt19937_64 rng(seed);
    std::vector<std::size_t> perm(data.size());
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng() % i]);

    std::vector<bool> test(data.size(), false);
    for (const auto& c : truth) {
        std::vector<std::size_t> idx;
        for (std::size_t i : perm)
            if (data.labels[i] == c) idx.push_back(i);
        const auto n = static_cast<std::size_t>(std::floor(schedule.holdout * static_cast<double>(idx.size())));
        for (std::size_t i = 0; i < n; ++i) test[idx[i]] = true;
    }

    ExperimentResult r;
    r.model = XClassModel(cfg, data.names);
    XClassModel& model = r.model;
    r.truth_labels = truth;
    std::vector<bool> used(data.size(), false);
    std::vector<std::size_t> stream_rows;
    std::set<std::string> primed_truth;
    std::map<std::string, long> seen_count;

    for (const auto& ph : schedule.phases) {
        std::vector<std::size_t> avail;
        for (std::size_t i : perm) {
            if (used[i] || test[i]) continue;
            if (!ph.classes.empty() && std::find(ph.classes.begin(), ph.classes.end(), data.labels[i]) == ph.classes.end())
                continue;
            avail.push_back(i);
        }
        std::size_t take = ph.count > 0 ? std::min(ph.count, avail.size())
                                        : static_cast<std::size_t>(std::llround(ph.share * static_cast<double>(avail.size())));
        take = std::min(take, avail.size());
        const auto nlab = static_cast<std::size_t>(std::llround(ph.labeled_fraction * static_cast<double>(take)));
        if (nlab > 0) {
            std::vector<Vec> X;
            std::vector<std::string> y;
            for (std::size_t k = 0; k < nlab; ++k) {
                X.push_back(data.rows[avail[k]]);
                y.push_back(data.labels[avail[k]]);
                primed_truth.insert(data.labels[avail[k]]);
            }
            model.prime(X, y);
            r.primed += nlab;
            if (r.initial_classes.empty())
                for (const auto& c : model.classes()) r.initial_classes.push_back(c.label);
        }
        for (std::size_t k = 0; k < take; ++k) used[avail[k]] = true;
        for (std::size_t k = nlab; k < take; ++k) {
            const std::size_t i = avail[k];
            if (!model.primed()) throw std::invalid_argument("run_experiment: schedule streams before any labeled sample");
            TraceRow row;
            row.truth = data.labels[i];
            row.event = model.learn(data.rows[i]);
            row.seq = row.event.seq;
            const long pos = ++seen_count[row.truth];
            if (!primed_truth.count(row.truth)) {
                auto it = r.detection_delay.try_emplace(row.truth, -1).first;
                const bool drop = row.event.type == EventType::NoveltyBuffered || row.event.type == EventType::NewClassCreated;
                if (drop && it->second < 0) it->second = pos;
            }
            r.trace.push_back(std::move(row));
            stream_rows.push_back(i);
        }
        r.streamed += take - nlab;
    }
    if (!model.primed()) throw std::invalid_argument("run_experiment: schedule primes no samples");
    for (const auto& c : model.classes()) r.final_classes.push_back(c.label);

    // discovered labels take the majority truth of the streamed samples they now claim
    const Scorer masked = model.scorer(true);
    std::map<std::string, std::map<std::string, std::size_t>> votes;
    for (std::size_t i : stream_rows) ++votes[score(masked, data.rows[i]).label][data.labels[i]];
    for (const auto& label : r.final_classes) {
        std::string target = label;
        if (std::find(truth.begin(), truth.end(), label) == truth.end()) {
            std::size_t best = 0;
            for (const auto& t : truth) {
                const std::size_t v = votes[label].count(t) ? votes[label][t] : 0;
                if (v > best) {
                    best = v;
                    target = t;
                }
            }
        }
        r.label_map[label] = target;
    }

    std::vector<std::size_t> eval_rows;
    for (std::size_t i : perm)
        if (test[i]) eval_rows.push_back(i);
    if (eval_rows.empty()) eval_rows = stream_rows;
    r.evaluated = eval_rows.size();
    r.confusion.assign(truth.size(), std::vector<std::size_t>(r.final_classes.size(), 0));
    const Scorer unmasked = model.scorer(false);
    std::size_t hit = 0, hit_unmasked = 0;
    for (std::size_t i : eval_rows) {
        const Prediction p = score(masked, data.rows[i]);
        const auto t = static_cast<std::size_t>(std::find(truth.begin(), truth.end(), data.labels[i]) - truth.begin());
        ++r.confusion[t][p.class_index];
        hit += r.label_map[p.label] == data.labels[i];
        hit_unmasked += r.label_map[score(unmasked, data.rows[i]).label] == data.labels[i];
    }
    if (r.evaluated > 0) {
        r.accuracy = static_cast<double>(hit) / static_cast<double>(r.evaluated);
        r.accuracy_unmasked = static_cast<double>(hit_unmasked) / static_cast<double>(r.evaluated);
    }
    return r;
}

namespace {

std::string join(const std::vector<std::string>& v, const char* sep) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
    return s;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + p.string() + "'");
    out << text;
}

}  // namespace

std::string report_text(const ExperimentResult& r) {
    const XClassModel& m = r.model;
    std::size_t buffered = 0, created = 0, outliers = 0;
    for (const auto& t : r.trace) {
        buffered += t.event.type == EventType::NoveltyBuffered || t.event.type == EventType::NewClassCreated;
        created += t.event.new_classes.size();
        outliers += t.event.type == EventType::OutlierSkipped;
    }
    std::ostringstream o;
    o << "samples_primed: " << r.primed << '\n';
    o << "samples_streamed: " << r.streamed << '\n';
    o << "samples_evaluated: " << r.evaluated << '\n';
    o << "initial_classes: " << r.initial_classes.size() << " [" << join(r.initial_classes, ", ") << "]\n";
    o << "final_classes: " << r.final_classes.size() << " [" << join(r.final_classes, ", ") << "]\n";
    o << "discovered_classes: " << created << '\n';
    o << "novelty_events: " << buffered << '\n';
    o << "outliers_skipped: " << outliers << '\n';
    o << "buffer_pending: " << m.buffer().entries.size() << '\n';
    o << "buffer_discarded: " << m.buffer().discarded << '\n';
    o << "buffer_released: " << m.released() << '\n';
    for (const auto& [c, d] : r.detection_delay) o << "detection_delay[" << c << "]: " << d << '\n';
    for (const auto& [l, t] : r.label_map) o << "label_map[" << l << "]: " << t << '\n';
    o << "accuracy: " << format_number(r.accuracy) << '\n';
    o << "accuracy_all_features: " << format_number(r.accuracy_unmasked) << '\n';
    o << "tracker_mean: " << format_number(m.tracker().mean_conf) << '\n';
    o << "tracker_sigma: " << format_number(m.tracker().sigma()) << '\n';
    o << "config: m=" << format_number(m.config().novelty.m) << " kappa=" << m.config().novelty.kappa_min_support
      << " feature_policy=" << to_string(m.config().feature_policy) << " freeze_stats=" << m.config().freeze_stats << '\n';
    return o.str();
}

void write_report(const ExperimentResult& r, const std::string& dir) {
    namespace fs = std::filesystem;
    const fs::path d(dir);
    fs::create_directories(d);
    const XClassModel& m = r.model;

    write_file(d / "report.txt", report_text(r));

    std::ostringstream conf;
    conf << "truth";
    for (const auto& l : r.final_classes) conf << ',' << l;
    conf << '\n';
    for (std::size_t t = 0; t < r.truth_labels.size(); ++t) {
        conf << r.truth_labels[t];
        for (std::size_t v : r.confusion[t]) conf << ',' << v;
        conf << '\n';
    }
    write_file(d / "confusion.csv", conf.str());

    std::ostringstream tr, ev;
    tr << "seq,truth,event,lambda,mean_conf,threshold,density,class\n";
    ev << "seq,event,lambda,threshold,new_classes\n";
    for (const auto& t : r.trace) {
        const Event& e = t.event;
        tr << t.seq << ',' << t.truth << ',' << to_string(e.type) << ',' << format_number(e.lam) << ','
           << format_number(e.mean_conf) << ',' << format_number(e.threshold) << ',' << format_number(e.density) << ','
           << e.label << '\n';
        if (e.type == EventType::NoveltyBuffered || e.type == EventType::NewClassCreated)
            ev << t.seq << ',' << to_string(e.type) << ',' << format_number(e.lam) << ',' << format_number(e.threshold)
               << ',' << join(e.new_classes, ";") << '\n';
    }
    write_file(d / "confidence_trace.csv", tr.str());
    write_file(d / "events.csv", ev.str());

    std::ostringstream tl;
    tl << "seq,class_count,label\n";
    std::size_t count = 0;
    for (const auto& l : r.initial_classes) tl << 0 << ',' << ++count << ',' << l << '\n';
    for (const auto& t : r.trace)
        for (const auto& l : t.event.new_classes) tl << t.seq << ',' << ++count << ',' << l << '\n';
    write_file(d / "discovery_timeline.csv", tl.str());

    const RuleDocument doc = export_rules(m);
    write_file(d / "rules.txt", rules_text(doc));
    write_file(d / "rules.json", rules_json(doc));

    std::ostringstream fe;
    fe << "class,feature,lambda,rank,selected\n";
    for (const auto& c : m.classes()) {
        const Vec& lam = c.feature_ranking.lambda_cum;
        std::vector<std::size_t> order(lam.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return lam[a] > lam[b]; });
        std::vector<std::size_t> rank(lam.size());
        for (std::size_t k = 0; k < order.size(); ++k) rank[order[k]] = k + 1;
        for (std::size_t f = 0; f < lam.size(); ++f)
            fe << c.label << ',' << doc.schema[f] << ',' << format_number(lam[f]) << ',' << rank[f] << ','
               << (c.feature_mask[f] ? 1 : 0) << '\n';
    }
    write_file(d / "features.csv", fe.str());
}

}  // namespace xclass
