#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "xclass/classifier.hpp"
#include "xclass/dataset.hpp"

namespace xclass {

// One phase draws samples of the listed classes (all classes when empty) from
// the shuffled pool; the first labeled_fraction of them prime the model, the
// rest are streamed unlabeled. count == 0 takes `share` of what is available.
struct Phase {
    std::vector<std::string> classes;
    double labeled_fraction = 0.0;
    std::size_t count = 0;
    double share = 1.0;
};

struct StreamSchedule {
    std::vector<Phase> phases;
    double holdout = 0.2;  // per-class fraction kept out for evaluation

    void validate() const;
};

StreamSchedule parse_schedule(const std::string& json_text);
StreamSchedule load_schedule(const std::string& path);
std::string schedule_json(const StreamSchedule& s);

// Prime the first class in the data with 80% of its pool, stream everything else.
StreamSchedule default_schedule(const Dataset& data);

struct TraceRow {
    std::uint64_t seq = 0;
    std::string truth;
    Event event;
};

struct ExperimentResult {
    std::size_t primed = 0;
    std::size_t streamed = 0;
    std::size_t evaluated = 0;
    std::vector<std::string> initial_classes;
    std::vector<std::string> final_classes;
    std::vector<TraceRow> trace;
    std::map<std::string, std::string> label_map;  // model label -> majority true label
    std::vector<std::string> truth_labels;         // first-seen order
    std::vector<std::vector<std::size_t>> confusion;  // truth x model class
    double accuracy = 0.0;         // after mapping discovered labels
    double accuracy_unmasked = 0.0;
    std::map<std::string, long> detection_delay;  // unseen true class -> index of first drop among its samples, -1 if none
    XClassModel model;
};

ExperimentResult run_experiment(const Dataset& data, const StreamSchedule& schedule, const Config& cfg,
                                std::uint64_t seed);

// report.txt, confusion.csv, confidence_trace.csv, discovery_timeline.csv,
// events.csv, rules.txt, rules.json, features.csv
void write_report(const ExperimentResult& r, const std::string& dir);
std::string report_text(const ExperimentResult& r);

}  // namespace xclass
