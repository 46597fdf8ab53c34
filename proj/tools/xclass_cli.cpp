#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "xclass/batch.hpp"
#include "xclass/classifier.hpp"
#include "xclass/dataset.hpp"
#include "xclass/experiment.hpp"
#include "xclass/persist.hpp"
#include "xclass/rules.hpp"
#include "xclass/synth.hpp"

using namespace xclass;

namespace {

struct Globals {
    double m = 3.0;
    std::size_t kappa = 10;
    std::string policy = "mean";
    std::size_t top_k = 1;
    bool freeze = false;
    bool strict = false;
    bool shared_mask = false;
    double scale = 4.0;
    std::uint64_t seed = 7;
};

// Flags given on the command line override what a loaded model carries.
Config apply(Config c, const Globals& g, const CLI::App& app) {
    if (app.count("--m-sigma")) c.novelty.m = g.m;
    if (app.count("--kappa")) c.novelty.kappa_min_support = g.kappa;
    if (app.count("--feature-policy")) c.feature_policy = parse_feature_policy(g.policy);
    if (app.count("--top-k")) c.top_k = g.top_k;
    if (app.count("--freeze-stats")) c.freeze_stats = g.freeze;
    if (app.count("--strict")) c.strict = g.strict;
    if (app.count("--shared-mask")) c.shared_mask = g.shared_mask;
    if (app.count("--confidence-scale")) c.novelty.scale_factor = g.scale;
    return c;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
}

std::string features_csv(const XClassModel& m) {
    std::ostringstream o;
    o << "class,feature,lambda,selected\n";
    for (const auto& c : m.classes())
        for (std::size_t f = 0; f < c.feature_ranking.lambda_cum.size(); ++f)
            o << c.label << ',' << (f < m.schema().size() ? m.schema()[f] : "f" + std::to_string(f)) << ','
              << format_number(c.feature_ranking.lambda_cum[f]) << ',' << (c.feature_mask[f] ? 1 : 0) << '\n';
    return o.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"xclass: streaming prototype classifier with new-class discovery"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--m-sigma", g.m, "Sigma multiplier of the confidence-drop rule")->capture_default_str();
    app.add_option("--kappa", g.kappa, "Minimum buffered support to found a new class")->capture_default_str();
    app.add_option("--feature-policy", g.policy, "Feature mask policy")
        ->check(CLI::IsMember({"mean", "top-k", "off"}))
        ->capture_default_str();
    app.add_option("--top-k", g.top_k, "Feature count for --feature-policy top-k")->capture_default_str();
    app.add_flag("--freeze-stats", g.freeze, "Stop updating standardization statistics after priming");
    app.add_flag("--strict", g.strict, "Treat zero-variance features as errors");
    app.add_flag("--shared-mask", g.shared_mask, "Use one feature mask for all classes");
    app.add_option("--confidence-scale", g.scale, "Confidence scale in units of pooled cloud scatter")
        ->capture_default_str();
    app.add_option("--seed", g.seed, "Seed for all randomness")->capture_default_str();

    std::string data, model_path, out, trace, text_out, json_out, from, to, schedule;
    int threads = 0;

    SynthSpec synth;
    bool no_shuffle = false;
    auto* gen = app.add_subcommand("gen-synth", "Write a Gaussian-blob CSV dataset");
    gen->add_option("--blobs", synth.blobs)->capture_default_str();
    gen->add_option("--dim", synth.dim)->capture_default_str();
    gen->add_option("--sep", synth.separation, "Center separation in blob sigmas")->capture_default_str();
    gen->add_option("--noise", synth.noise_features, "Extra pure-noise features")->capture_default_str();
    gen->add_option("--per-class", synth.per_class)->capture_default_str();
    gen->add_flag("--no-shuffle", no_shuffle);
    gen->add_option("--out", out)->required();

    auto* prime = app.add_subcommand("prime", "Build a model from labeled samples");
    prime->add_option("--data", data, "Labeled CSV")->required()->check(CLI::ExistingFile);
    prime->add_option("--model", model_path, "Model file to write")->required();

    auto* stream = app.add_subcommand("stream", "Learn from unlabeled samples in order");
    stream->add_option("--model", model_path)->required()->check(CLI::ExistingFile);
    stream->add_option("--data", data)->required()->check(CLI::ExistingFile);
    stream->add_option("--out", out, "Model file to write (default: overwrite --model)");
    stream->add_option("--trace", trace, "Per-sample event CSV");

    auto* predict = app.add_subcommand("predict", "Label samples");
    predict->add_option("--model", model_path)->required()->check(CLI::ExistingFile);
    predict->add_option("--data", data)->required()->check(CLI::ExistingFile);
    predict->add_option("--out", out, "Prediction CSV (default: stdout)");
    predict->add_option("--threads", threads, "Scoring threads (0: OpenMP default, 1: serial)");

    auto* eval = app.add_subcommand("eval", "Accuracy and confusion on a labeled CSV");
    eval->add_option("--model", model_path)->required()->check(CLI::ExistingFile);
    eval->add_option("--data", data)->required()->check(CLI::ExistingFile);
    eval->add_option("--out", out, "Confusion CSV");
    eval->add_option("--threads", threads);

    auto* rules = app.add_subcommand("rules", "Export IF-THEN rules");
    rules->add_option("--model", model_path)->required()->check(CLI::ExistingFile);
    rules->add_option("--text", text_out, "Text rules (default: stdout)");
    rules->add_option("--json", json_out, "Structured rules");

    auto* features = app.add_subcommand("features", "Per-class feature contributions and masks");
    features->add_option("--model", model_path)->required()->check(CLI::ExistingFile);
    features->add_option("--out", out);

    auto* rename = app.add_subcommand("rename-class", "Relabel a class");
    rename->add_option("--model", model_path)->required()->check(CLI::ExistingFile);
    rename->add_option("--from", from)->required();
    rename->add_option("--to", to)->required();
    rename->add_option("--out", out, "Model file to write (default: overwrite --model)");

    auto* exp = app.add_subcommand("run-experiment", "Prime, stream and evaluate under a schedule");
    exp->add_option("--data", data)->required()->check(CLI::ExistingFile);
    exp->add_option("--schedule", schedule, "Schedule JSON (default: prime first class at 80%, stream the rest)");
    exp->add_option("--out", out, "Report directory")->required();
    exp->add_option("--save-model", model_path, "Also write the final model");

    CLI11_PARSE(app, argc, argv);

    try {
        Config base;
        base = apply(base, g, app);

        if (*gen) {
            synth.seed = g.seed;
            synth.shuffle = !no_shuffle;
            write_csv(gen_synth(synth), out);
        } else if (*prime) {
            const Dataset d = read_csv(data);
            if (!d.labeled()) throw std::invalid_argument("prime: '" + data + "' has no label column");
            XClassModel m(base, d.names);
            m.prime(d.rows, d.labels);
            save_model(m, model_path);
            std::cout << "primed " << d.size() << " samples into " << m.classes().size() << " classes\n";
        } else if (*stream) {
            XClassModel m = load_model(model_path);
            m.set_config(apply(m.config(), g, app));
            const Dataset d = read_csv(data);
            std::ostringstream tr;
            tr << "seq,event,lambda,mean_conf,threshold,class,new_classes\n";
            std::size_t created = 0;
            for (const auto& x : d.rows) {
                const Event e = m.learn(x);
                created += e.new_classes.size();
                tr << e.seq << ',' << to_string(e.type) << ',' << format_number(e.lam) << ','
                   << format_number(e.mean_conf) << ',' << format_number(e.threshold) << ',' << e.label << ',';
                for (std::size_t k = 0; k < e.new_classes.size(); ++k) tr << (k ? ";" : "") << e.new_classes[k];
                tr << '\n';
            }
            if (!trace.empty()) write_text(trace, tr.str());
            save_model(m, out.empty() ? model_path : out);
            std::cout << "streamed " << d.size() << " samples; new classes: " << created
                      << "; classes: " << m.classes().size() << '\n';
        } else if (*predict || *eval) {
            XClassModel m = load_model(model_path);
            m.set_config(apply(m.config(), g, app));
            const Dataset d = read_csv(data);
            const Scorer s = m.scorer();
            const auto preds = threads == 1 ? predict_batch_serial(s, d.rows) : predict_batch_parallel(s, d.rows, threads);
            if (*predict) {
                std::ostringstream o;
                o << "label";
                for (const auto& l : s.labels) o << ",lambda[" << l << "]";
                o << '\n';
                for (const auto& p : preds) {
                    o << p.label;
                    for (double l : p.lambdas) o << ',' << format_number(l);
                    o << '\n';
                }
                write_text(out, o.str());
            } else {
                if (!d.labeled()) throw std::invalid_argument("eval: '" + data + "' has no label column");
                auto truth = d.label_set();
                std::vector<std::vector<std::size_t>> cm(truth.size(), std::vector<std::size_t>(s.labels.size(), 0));
                std::size_t hit = 0;
                for (std::size_t i = 0; i < preds.size(); ++i) {
                    const auto t = static_cast<std::size_t>(std::find(truth.begin(), truth.end(), d.labels[i]) - truth.begin());
                    ++cm[t][preds[i].class_index];
                    hit += preds[i].label == d.labels[i];
                }
                std::ostringstream o;
                o << "truth";
                for (const auto& l : s.labels) o << ',' << l;
                o << '\n';
                for (std::size_t t = 0; t < truth.size(); ++t) {
                    o << truth[t];
                    for (std::size_t v : cm[t]) o << ',' << v;
                    o << '\n';
                }
                if (!out.empty()) write_text(out, o.str());
                std::cout << "accuracy: " << format_number(d.size() ? static_cast<double>(hit) / d.size() : 0.0)
                          << " (" << hit << "/" << d.size() << ")\n";
                // discovered classes carry auto labels; score them by their majority truth
                std::size_t mapped = 0;
                for (std::size_t k = 0; k < s.labels.size(); ++k) {
                    std::size_t best = 0;
                    for (std::size_t t = 0; t < truth.size(); ++t) best = std::max(best, cm[t][k]);
                    mapped += best;
                }
                std::cout << "accuracy_mapped: " << format_number(d.size() ? static_cast<double>(mapped) / d.size() : 0.0)
                          << " (" << mapped << "/" << d.size() << ")\n";
                if (out.empty()) std::cout << o.str();
            }
        } else if (*rules) {
            const XClassModel m = load_model(model_path);
            const RuleDocument doc = export_rules(m);
            if (!json_out.empty()) write_text(json_out, rules_json(doc));
            if (!text_out.empty() || json_out.empty()) write_text(text_out, rules_text(doc));
        } else if (*features) {
            XClassModel m = load_model(model_path);
            m.set_config(apply(m.config(), g, app));
            write_text(out, features_csv(m));
        } else if (*rename) {
            XClassModel m = load_model(model_path);
            m.rename_class(from, to);
            save_model(m, out.empty() ? model_path : out);
        } else if (*exp) {
            const Dataset d = read_csv(data);
            const StreamSchedule sched = schedule.empty() ? default_schedule(d) : load_schedule(schedule);
            const ExperimentResult r = run_experiment(d, sched, base, g.seed);
            write_report(r, out);
            if (!model_path.empty()) save_model(r.model, model_path);
            std::cout << report_text(r);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
