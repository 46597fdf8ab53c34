// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "xclass/classifier.hpp"
#include "xclass/experiment.hpp"
#include "xclass/persist.hpp"
#include "xclass/rules.hpp"
#include "xclass/synth.hpp"

using namespace xclass;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

Vec random_vec(std::mt19937_64& rng, std::size_t d, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    Vec v(d);
    for (double& x : v) x = u(rng);
    return v;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

// 1. running moments and the confidence tracker against two-pass batch values
Outcome recursion_exactness() {
    std::mt19937_64 rng(101);
    std::normal_distribution<double> n(0.0, 1.0);
    const std::size_t N = 10000, d = 4;
    RunningStats s;
    std::vector<Vec> xs;
    for (std::size_t i = 0; i < N; ++i) {
        Vec x(d);
        for (std::size_t f = 0; f < d; ++f) x[f] = 5.0 * f + (1.0 + f) * n(rng);
        update_stats(s, x);
        xs.push_back(x);
    }
    double err = 0.0;
    const Vec var = s.variance();
    for (std::size_t f = 0; f < d; ++f) {
        double m = 0.0;
        for (const auto& x : xs) m += x[f];
        m /= N;
        double v = 0.0;
        for (const auto& x : xs) v += (x[f] - m) * (x[f] - m);
        v /= N;
        err = std::max({err, std::abs(m - s.mean[f]), std::abs(v - var[f])});
    }
    ConfidenceTracker t;
    std::uniform_real_distribution<double> u(1e-6, 1.0);
    std::vector<double> ls;
    for (std::size_t i = 0; i < N; ++i) {
        ls.push_back(u(rng));
        update_tracker(t, ls.back());
    }
    double m = 0.0;
    for (double l : ls) m += l;
    m /= N;
    double v = 0.0;
    for (double l : ls) v += (l - m) * (l - m);
    v /= N;
    err = std::max({err, std::abs(m - t.mean_conf), std::abs(v - t.var_conf)});
    return {err <= 1e-9, fmt("max abs error %.3g", err)};
}

// 2. every prototype equals the mean of the samples routed to it
Outcome prototype_mean() {
    std::mt19937_64 rng(202);
    double err = 0.0;
    std::size_t clouds = 0;
    for (int run = 0; run < 100; ++run) {
        const std::size_t d = 1 + run % 5;
        Frame fr;
        fr.lo = random_vec(rng, d, -3.0, 0.0);
        fr.hi = random_vec(rng, d, 1.0, 4.0);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        auto sample = [&] {
            Vec x(d);
            for (std::size_t f = 0; f < d; ++f) x[f] = fr.lo[f] + (fr.hi[f] - fr.lo[f]) * u(rng);
            return x;
        };
        std::vector<std::vector<Vec>> members;
        Vec x0 = sample();
        ClassModel c = init_class(x0, 0);
        members.push_back({x0});
        const int steps = 50 + run * 3;
        for (int i = 0; i < steps; ++i) {
            const Vec x = sample();
            const auto r = absorb(c, x, fr, i % 2 ? AbsorbMode::Stream : AbsorbMode::Supervised);
            if (r.created) members.push_back({});
            members[r.cloud].push_back(x);
        }
        for (std::size_t j = 0; j < c.clouds.size(); ++j) {
            for (std::size_t f = 0; f < d; ++f) {
                double m = 0.0;
                for (const auto& x : members[j]) m += x[f];
                m /= static_cast<double>(members[j].size());
                err = std::max(err, std::abs(m - c.clouds[j].prototype[f]));
            }
            if (c.clouds[j].support != members[j].size()) err = 1.0;
        }
        clouds += c.clouds.size();
    }
    return {err <= 1e-9, fmt("max abs error %.3g over %.0f clouds", err, static_cast<double>(clouds))};
}

// 3. creation predicate against densities computed from the member list directly
Outcome cloud_creation() {
    std::mt19937_64 rng(303);
    std::uniform_int_distribution<int> ud(1, 6), up(1, 8), un(1, 40);
    std::size_t agree = 0, trues = 0;
    const std::size_t total = 1000;
    for (std::size_t run = 0; run < total; ++run) {
        const std::size_t d = static_cast<std::size_t>(ud(rng));
        Frame fr = Frame::identity(d);
        if (run % 2) {
            fr.lo = random_vec(rng, d, -2.0, 0.0);
            fr.hi = random_vec(rng, d, 1.0, 3.0);
        }
        auto pick = [&] {
            Vec x = random_vec(rng, d, 0.0, 1.0);
            for (std::size_t f = 0; f < d; ++f) x[f] = fr.lo[f] + x[f] * (fr.hi[f] - fr.lo[f]);
            return x;
        };
        std::vector<Vec> members{pick()};
        ClassModel c = init_class(members[0], 0);
        const int nm = un(rng);
        for (int i = 1; i < nm; ++i) {
            members.push_back(pick());
            update_class_stats(c, members.back());
        }
        const int np = up(rng);
        for (int j = 1; j < np; ++j) add_cloud(c, pick());
        Vec x = pick();
        if (run % 7 == 0) x = c.clouds[0].prototype;  // coincident with a prototype
        members.push_back(x);
        update_class_stats(c, x);

        auto dens = [&](const Vec& raw) {
            const Vec z = fr.map(raw);
            double s = 0.0;
            for (const auto& y : members) {
                const Vec yn = fr.map(y);
                for (std::size_t f = 0; f < d; ++f) s += (z[f] - yn[f]) * (z[f] - yn[f]);
            }
            return 1.0 / (1.0 + s / static_cast<double>(members.size()));
        };
        const double dx = dens(x);
        bool ge = true, le = true;
        for (const auto& cl : c.clouds) {
            const double dp = dens(cl.prototype);
            ge = ge && dx >= dp;
            le = le && dx <= dp;
        }
        const bool oracle = (ge || le) && !(ge && le);
        const bool got = should_create_cloud(c, fr.map_clamped(x), fr);
        agree += oracle == got;
        trues += oracle;
    }
    return {agree == total, fmt("%.0f/%.0f agree (%.0f create)", static_cast<double>(agree), static_cast<double>(total),
                                static_cast<double>(trues))};
}

Dataset take(const Dataset& d, const std::string& label, std::size_t from, std::size_t n) {
    Dataset out;
    out.names = d.names;
    std::size_t seen = 0;
    for (std::size_t i = 0; i < d.size() && out.size() < n; ++i) {
        if (d.labels[i] != label) continue;
        if (seen++ < from) continue;
        out.rows.push_back(d.rows[i]);
        out.labels.push_back(d.labels[i]);
    }
    return out;
}

// 4. prime on blob A, stream blob B
Outcome novelty_detection() {
    std::size_t ok = 0, early = 0, one = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        SynthSpec s;
        s.blobs = 2;
        s.dim = 3;
        s.separation = 10.0;
        s.per_class = 120;
        s.seed = 4000 + seed;
        const Dataset d = gen_synth(s);
        const Dataset a = take(d, "c0", 0, 96);
        const Dataset b = take(d, "c1", 0, 100);
        XClassModel m({}, d.names);
        m.prime(a.rows, a.labels);
        bool drop = false;
        for (std::size_t i = 0; i < b.size(); ++i) {
            const Event e = m.learn(b.rows[i]);
            if (i < 20 && (e.type == EventType::NoveltyBuffered || e.type == EventType::NewClassCreated)) drop = true;
        }
        const bool exactly_one = m.classes().size() == 2;
        early += drop;
        one += exactly_one;
        ok += drop && exactly_one;
    }
    return {ok >= 99, fmt("%.0f/100 runs (drop within 20: %.0f, exactly one new class: %.0f)", static_cast<double>(ok),
                          static_cast<double>(early), static_cast<double>(one))};
}

// 5. stationary streams from primed classes only
Outcome no_false_alarm() {
    std::size_t created = 0, runs_with = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        SynthSpec s;
        s.blobs = 3;
        s.dim = 3;
        s.separation = 10.0;
        s.per_class = 300;
        s.seed = 5000 + seed;
        const Dataset d = gen_synth(s);
        const std::size_t np = 240;
        XClassModel m({}, d.names);
        m.prime({d.rows.begin(), d.rows.begin() + np}, {d.labels.begin(), d.labels.begin() + np});
        const std::size_t before = m.classes().size();
        for (std::size_t i = np; i < d.size(); ++i) m.learn(d.rows[i]);
        const std::size_t n = m.classes().size() - before;
        created += n;
        runs_with += n > 0;
    }
    return {created == 0, fmt("%.0f new classes over 100 streams (%.0f runs affected)", static_cast<double>(created),
                              static_cast<double>(runs_with))};
}

// 6. prime one class at 80%, discover the other two
Outcome weak_supervision() {
    std::size_t ok = 0;
    double sum = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        SynthSpec s;
        s.blobs = 3;
        s.dim = 3;
        s.separation = 10.0;
        s.per_class = 150;
        s.seed = 6000 + seed;
        const Dataset d = gen_synth(s);
        const ExperimentResult r = run_experiment(d, default_schedule(d), {}, seed);
        ok += r.accuracy >= 0.9;
        sum += r.accuracy;
    }
    return {ok >= 95, fmt("%.0f/100 seeds at >= 90%% (mean accuracy %.4f)", static_cast<double>(ok), sum / 100.0)};
}

// 7. noise features excluded from every mask; masking costs at most 2 points
Outcome feature_selection() {
    std::size_t excluded = 0;
    double masked = 0.0, unmasked = 0.0;
    std::size_t worse = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        SynthSpec s;
        s.blobs = 3;
        s.dim = 3;
        s.noise_features = 2;
        s.separation = 10.0;
        s.per_class = 150;
        s.seed = 7000 + seed;
        const Dataset d = gen_synth(s);
        StreamSchedule sched;
        sched.phases.push_back({{}, 1.0, 0, 0.5});
        sched.phases.push_back({{}, 0.0, 0, 1.0});
        const ExperimentResult r = run_experiment(d, sched, {}, seed);
        bool all = true;
        for (const auto& c : r.model.classes()) all = all && !c.feature_mask[3] && !c.feature_mask[4];
        excluded += all;
        masked += r.accuracy;
        unmasked += r.accuracy_unmasked;
        worse += r.accuracy < r.accuracy_unmasked - 0.02;
    }
    masked /= 100.0;
    unmasked /= 100.0;
    const bool pass = excluded >= 95 && masked >= unmasked - 0.02;
    return {pass, fmt("noise excluded in %.0f/100; accuracy masked %.4f vs all features %.4f", static_cast<double>(excluded),
                      masked, unmasked) +
                      fmt(" (%.0f seeds lose > 2 points)", static_cast<double>(worse))};
}

// 8. discrete typicality sums to one
Outcome typicality_norm() {
    std::mt19937_64 rng(808);
    std::uniform_int_distribution<int> un(1, 64);
    std::uniform_real_distribution<double> u(1e-9, 1.0);
    double err = 0.0;
    for (int i = 0; i < 1000; ++i) {
        Vec d(static_cast<std::size_t>(un(rng)));
        for (double& v : d) v = u(rng);
        double s = 0.0;
        for (double t : typicality(d)) s += t;
        err = std::max(err, std::abs(s - 1.0));
    }
    return {err <= 1e-12, fmt("max |sum - 1| = %.3g", err)};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<Vec> probes(std::size_t n, std::size_t d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Vec> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(random_vec(rng, d, -4.0, 12.0));
    return out;
}

bool same_prediction(const Prediction& a, const Prediction& b) {
    return a.label == b.label && a.lambdas == b.lambdas && a.typicality == b.typicality;
}

// 9. byte-identical reports, save/load prediction parity
Outcome determinism() {
    SynthSpec s;
    s.blobs = 3;
    s.dim = 3;
    s.separation = 10.0;
    s.per_class = 150;
    s.seed = 9;
    const Dataset d = gen_synth(s);
    const fs::path root = fs::temp_directory_path() / "xclass_acceptance_c9";
    fs::remove_all(root);
    const ExperimentResult r1 = run_experiment(d, default_schedule(d), {}, 9);
    const ExperimentResult r2 = run_experiment(d, default_schedule(d), {}, 9);
    write_report(r1, (root / "a").string());
    write_report(r2, (root / "b").string());
    std::size_t files = 0, identical = 0;
    for (const auto& e : fs::directory_iterator(root / "a")) {
        ++files;
        identical += slurp(e.path()) == slurp(root / "b" / e.path().filename());
    }
    const fs::path model = root / "model.xcm";
    save_model(r1.model, model.string());
    const XClassModel loaded = load_model(model.string());
    std::size_t parity = 0;
    const auto xs = probes(1000, 3, 99);
    for (const auto& x : xs) parity += same_prediction(r1.model.predict(x), loaded.predict(x));
    const bool stable = serialize_model(loaded) == serialize_model(r1.model);
    fs::remove_all(root);
    const bool pass = files >= 7 && identical == files && parity == xs.size() && stable;
    return {pass, fmt("%.0f/%.0f report files identical; ", static_cast<double>(identical), static_cast<double>(files)) +
                      fmt("%.0f/1000 predictions match after reload", static_cast<double>(parity)) +
                      (stable ? "; re-save identical" : "; re-save differs")};
}

// 10. rule structure and structured round trip
Outcome rule_export() {
    SynthSpec s;
    s.blobs = 3;
    s.dim = 3;
    s.noise_features = 1;
    s.separation = 10.0;
    s.per_class = 150;
    s.seed = 10;
    const Dataset d = gen_synth(s);
    const ExperimentResult r = run_experiment(d, default_schedule(d), {}, 10);
    const XClassModel& m = r.model;
    const RuleDocument doc = export_rules(m);
    bool shape = doc.rules.size() == m.classes().size();
    for (std::size_t k = 0; shape && k < doc.rules.size(); ++k)
        shape = doc.rules[k].clauses.size() == m.classes()[k].clouds.size();
    const std::string text = rules_text(doc);
    std::size_t rule_lines = 0;
    for (std::size_t p = text.find(" THEN '"); p != std::string::npos; p = text.find(" THEN '", p + 1)) ++rule_lines;
    shape = shape && rule_lines == m.classes().size() && text.find("IF (x ~ p1)") != std::string::npos;
    const XClassModel back = model_from_rules(parse_rules_json(rules_json(doc)));
    std::size_t parity = 0;
    const auto xs = probes(1000, 4, 1010);
    for (const auto& x : xs) parity += same_prediction(m.predict(x), back.predict(x));
    return {shape && parity == xs.size(),
            fmt("%.0f rules for %.0f classes; ", static_cast<double>(doc.rules.size()), static_cast<double>(m.classes().size())) +
                fmt("%.0f/1000 predictions match after round trip", static_cast<double>(parity))};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double limit_s;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> all = {
        {1, "recursion exactness", 1.0, recursion_exactness},
        {2, "prototype-mean oracle", 5.0, prototype_mean},
        {3, "cloud-creation oracle", 5.0, cloud_creation},
        {4, "novelty detection", 30.0, novelty_detection},
        {5, "no false alarm", 30.0, no_false_alarm},
        {6, "weak supervision", 60.0, weak_supervision},
        {7, "feature selection", 60.0, feature_selection},
        {8, "typicality normalization", 1.0, typicality_norm},
        {9, "determinism and persistence", 10.0, determinism},
        {10, "rule export fidelity", 5.0, rule_export},
    };
    int failed = 0;
    for (const auto& c : all) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool pass = o.pass && secs <= c.limit_s;
        failed += !pass;
        std::printf("criterion %2d %-28s %s  %s  [%.2fs, limit %.0fs]\n", c.id, c.name, pass ? "PASS" : "FAIL",
                    o.detail.c_str(), secs, c.limit_s);
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
    return failed == 0 ? 0 : 1;
}
