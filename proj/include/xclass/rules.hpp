#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "xclass/classifier.hpp"

namespace xclass {

struct RuleClause {
    Vec prototype;  // raw units
    Vec mean_sq;    // raw units; spread of the cloud
    std::size_t support = 0;
    double radius_sq = 0.0;
};

struct Rule {
    std::string label;
    int class_id = 0;
    std::vector<RuleClause> clauses;
    std::vector<bool> mask;
};

struct RuleDocument {
    std::vector<std::string> schema;
    Frame frame;
    double scale_factor = 4.0;
    FeaturePolicy feature_policy = FeaturePolicy::Mean;
    std::vector<Rule> rules;
};

RuleDocument export_rules(const XClassModel& model);

// "IF (x ~ p1) OR (x ~ p2) THEN 'label'" per class, followed by clause details.
std::string rules_text(const RuleDocument& doc);

std::string rules_json(const RuleDocument& doc);
RuleDocument parse_rules_json(const std::string& text);

// Prediction-only model rebuilt from a rule document.
XClassModel model_from_rules(const RuleDocument& doc);

}  // namespace xclass
