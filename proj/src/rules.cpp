#include "xclass/rules.hpp"

#include <sstream>
#include <stdexcept>

#include "access.hpp"
#include "json.hpp"
#include "xclass/dataset.hpp"

namespace xclass {

using nlohmann::json;

RuleDocument export_rules(const XClassModel& model) {
    RuleDocument doc;
    doc.schema = model.schema();
    if (doc.schema.empty())
        for (std::size_t f = 0; f < model.dim(); ++f) doc.schema.push_back("f" + std::to_string(f));
    doc.frame = model.frame();
    doc.scale_factor = model.config().novelty.scale_factor;
    doc.feature_policy = model.config().feature_policy;
    for (const auto& c : model.classes()) {
        Rule r;
        r.label = c.label;
        r.class_id = c.class_id;
        r.mask = c.feature_mask;
        for (const auto& d : c.clouds) r.clauses.push_back({d.prototype, d.mean_sq, d.support, d.radius_sq});
        doc.rules.push_back(std::move(r));
    }
    return doc;
}

std::string rules_text(const RuleDocument& doc) {
    std::ostringstream out;
    for (std::size_t k = 0; k < doc.rules.size(); ++k) {
        const Rule& r = doc.rules[k];
        out << "R" << (k + 1) << ": IF ";
        for (std::size_t j = 0; j < r.clauses.size(); ++j) out << (j ? " OR " : "") << "(x ~ p" << (j + 1) << ")";
        out << " THEN '" << r.label << "'\n";
        out << "  features:";
        for (std::size_t f = 0; f < r.mask.size(); ++f)
            if (r.mask[f]) out << ' ' << doc.schema[f];
        out << '\n';
        for (std::size_t j = 0; j < r.clauses.size(); ++j) {
            const RuleClause& c = r.clauses[j];
            out << "  p" << (j + 1) << " = (";
            for (std::size_t f = 0; f < c.prototype.size(); ++f)
                out << (f ? ", " : "") << doc.schema[f] << '=' << format_number(c.prototype[f]);
            out << ") support=" << c.support << " radius_sq=" << format_number(c.radius_sq) << '\n';
        }
    }
    return out.str();
}

std::string rules_json(const RuleDocument& doc) {
    json rules = json::array();
    for (const auto& r : doc.rules) {
        json clauses = json::array();
        for (const auto& c : r.clauses)
            clauses.push_back({{"prototype", c.prototype}, {"mean_sq", c.mean_sq}, {"support", c.support}, {"radius_sq", c.radius_sq}});
        json features = json::array();
        for (std::size_t f = 0; f < r.mask.size(); ++f)
            if (r.mask[f]) features.push_back(doc.schema[f]);
        rules.push_back({{"label", r.label}, {"class_id", r.class_id}, {"features", features}, {"antecedents", clauses}});
    }
    json j = {{"schema", doc.schema},
              {"frame", {{"lo", doc.frame.lo}, {"hi", doc.frame.hi}}},
              {"scale_factor", doc.scale_factor},
              {"feature_policy", to_string(doc.feature_policy)},
              {"rules", rules}};
    return j.dump(1) + "\n";
}

RuleDocument parse_rules_json(const std::string& text) {
    try {
        const json j = json::parse(text);
        RuleDocument doc;
        doc.schema = j.at("schema").get<std::vector<std::string>>();
        doc.frame.lo = j.at("frame").at("lo").get<Vec>();
        doc.frame.hi = j.at("frame").at("hi").get<Vec>();
        doc.scale_factor = j.at("scale_factor").get<double>();
        doc.feature_policy = parse_feature_policy(j.at("feature_policy").get<std::string>());
        for (const auto& jr : j.at("rules")) {
            Rule r;
            r.label = jr.at("label").get<std::string>();
            r.class_id = jr.at("class_id").get<int>();
            r.mask.assign(doc.schema.size(), false);
            for (const auto& name : jr.at("features")) {
                bool found = false;
                for (std::size_t f = 0; f < doc.schema.size(); ++f)
                    if (doc.schema[f] == name.get<std::string>()) r.mask[f] = found = true;
                if (!found) throw std::invalid_argument("rules: unknown feature '" + name.get<std::string>() + "'");
            }
            for (const auto& c : jr.at("antecedents"))
                r.clauses.push_back({c.at("prototype").get<Vec>(), c.at("mean_sq").get<Vec>(),
                                     c.at("support").get<std::size_t>(), c.at("radius_sq").get<double>()});
            doc.rules.push_back(std::move(r));
        }
        return doc;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("rules: ") + e.what());
    }
}

XClassModel model_from_rules(const RuleDocument& doc) {
    Config cfg;
    cfg.novelty.scale_factor = doc.scale_factor;
    cfg.feature_policy = doc.feature_policy;
    XClassModel m(cfg, doc.schema);
    ModelAccess::frame(m) = doc.frame;
    auto& classes = ModelAccess::classes(m);
    const std::size_t d = doc.schema.size();
    for (const auto& r : doc.rules) {
        if (r.clauses.empty()) throw std::invalid_argument("rules: rule '" + r.label + "' has no antecedents");
        ClassModel c;
        c.label = r.label;
        c.class_id = r.class_id;
        c.feature_mask = r.mask;
        c.class_mean.assign(d, 0.0);
        c.class_mean_sq.assign(d, 0.0);
        for (std::size_t j = 0; j < r.clauses.size(); ++j) {
            const RuleClause& rc = r.clauses[j];
            check_dim(d, rc.prototype.size(), "rules");
            check_dim(d, rc.mean_sq.size(), "rules");
            DataCloud cl;
            cl.prototype = rc.prototype;
            cl.mean_sq = rc.mean_sq;
            cl.support = rc.support;
            cl.radius_sq = rc.radius_sq;
            cl.cloud_id = static_cast<int>(j);
            c.sample_count += rc.support;
            c.clouds.push_back(std::move(cl));
        }
        // class moments are the support-weighted cloud moments
        for (const auto& cl : c.clouds) {
            const double w = static_cast<double>(cl.support) / static_cast<double>(c.sample_count);
            for (std::size_t f = 0; f < d; ++f) {
                c.class_mean[f] += w * cl.prototype[f];
                c.class_mean_sq[f] += w * cl.mean_sq[f];
            }
        }
        classes.push_back(std::move(c));
    }
    return m;
}

}  // namespace xclass
