#include "xclass/persist.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "access.hpp"
#include "json.hpp"

namespace xclass {

using nlohmann::json;

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

namespace {

json mask_json(const std::vector<bool>& m) {
    json a = json::array();
    for (bool b : m) a.push_back(b ? 1 : 0);
    return a;
}

std::vector<bool> mask_from(const json& a) {
    std::vector<bool> m;
    for (const auto& v : a) m.push_back(v.get<int>() != 0);
    return m;
}

json config_json(const Config& c) {
    return {{"m", c.novelty.m},
            {"kappa", c.novelty.kappa_min_support},
            {"buffer_expiry", c.novelty.buffer_expiry},
            {"scale_factor", c.novelty.scale_factor},
            {"feature_policy", to_string(c.feature_policy)},
            {"top_k", c.top_k},
            {"freeze_stats", c.freeze_stats},
            {"strict", c.strict},
            {"shared_mask", c.shared_mask}};
}

Config config_from(const json& j) {
    Config c;
    c.novelty.m = j.at("m").get<double>();
    c.novelty.kappa_min_support = j.at("kappa").get<std::size_t>();
    c.novelty.buffer_expiry = j.at("buffer_expiry").get<std::size_t>();
    c.novelty.scale_factor = j.at("scale_factor").get<double>();
    c.feature_policy = parse_feature_policy(j.at("feature_policy").get<std::string>());
    c.top_k = j.at("top_k").get<std::size_t>();
    c.freeze_stats = j.at("freeze_stats").get<bool>();
    c.strict = j.at("strict").get<bool>();
    c.shared_mask = j.at("shared_mask").get<bool>();
    return c;
}

json class_json(const ClassModel& c) {
    json clouds = json::array();
    for (const auto& d : c.clouds)
        clouds.push_back({{"id", d.cloud_id},
                          {"prototype", d.prototype},
                          {"mean_sq", d.mean_sq},
                          {"support", d.support},
                          {"radius_sq", d.radius_sq}});
    return {{"label", c.label},
            {"id", c.class_id},
            {"count", c.sample_count},
            {"mean", c.class_mean},
            {"mean_sq", c.class_mean_sq},
            {"lambda", c.feature_ranking.lambda_cum},
            {"lambda_sq", c.feature_ranking.lambda_sq},
            {"lambda_n", c.feature_ranking.sample_count},
            {"mask", mask_json(c.feature_mask)},
            {"clouds", clouds}};
}

ClassModel class_from(const json& j) {
    ClassModel c;
    c.label = j.at("label").get<std::string>();
    c.class_id = j.at("id").get<int>();
    c.sample_count = j.at("count").get<std::size_t>();
    c.class_mean = j.at("mean").get<Vec>();
    c.class_mean_sq = j.at("mean_sq").get<Vec>();
    c.feature_ranking.lambda_cum = j.at("lambda").get<Vec>();
    c.feature_ranking.lambda_sq = j.at("lambda_sq").get<Vec>();
    c.feature_ranking.sample_count = j.at("lambda_n").get<std::size_t>();
    c.feature_ranking.class_id = c.class_id;
    c.feature_mask = mask_from(j.at("mask"));
    for (const auto& d : j.at("clouds")) {
        DataCloud cl;
        cl.cloud_id = d.at("id").get<int>();
        cl.prototype = d.at("prototype").get<Vec>();
        cl.mean_sq = d.at("mean_sq").get<Vec>();
        cl.support = d.at("support").get<std::size_t>();
        cl.radius_sq = d.at("radius_sq").get<double>();
        c.clouds.push_back(std::move(cl));
    }
    return c;
}

}  // namespace

std::string serialize_model(const XClassModel& model) {
    const XClassModel& m = model;
    const RunningStats& s = ModelAccess::stats(m);
    json classes = json::array();
    for (const auto& c : ModelAccess::classes(m)) classes.push_back(class_json(c));
    json buffer = json::array();
    for (const auto& e : ModelAccess::buffer(m).entries) buffer.push_back({{"x", e.x}, {"lam", e.lam}, {"seq", e.seq}});
    const auto& t = ModelAccess::tracker(m);
    json body = {
        {"config", config_json(model.config())},
        {"schema", model.schema()},
        {"stats", {{"count", s.count}, {"mean", s.mean}, {"mean_sq", s.mean_sq}, {"std_min", s.std_min}, {"std_max", s.std_max}}},
        {"frame", {{"lo", model.frame().lo}, {"hi", model.frame().hi}}},
        {"classes", classes},
        {"tracker", {{"i", t.i}, {"mean", t.mean_conf}, {"var", t.var_conf}, {"m", t.m}}},
        {"buffer", {{"entries", buffer}, {"discarded", ModelAccess::buffer(m).discarded}}},
        {"seq", model.seq()},
        {"next_label", model.next_label()},
        {"released", model.released()}};
    const std::string text = body.dump(1) + "\n";
    char head[64];
    std::snprintf(head, sizeof head, "xclass-model %d %016llx\n", kModelVersion,
                  static_cast<unsigned long long>(fnv1a64(text)));
    return head + text;
}

XClassModel deserialize_model(const std::string& text) {
    const auto nl = text.find('\n');
    if (nl == std::string::npos) throw ModelFormatError("model file: missing header");
    std::istringstream head(text.substr(0, nl));
    std::string magic, sum;
    int version = 0;
    if (!(head >> magic >> version >> sum) || magic != "xclass-model") throw ModelFormatError("model file: bad header");
    if (version != kModelVersion)
        throw VersionError("model file: version " + std::to_string(version) + " not supported (expected " +
                           std::to_string(kModelVersion) + ")");
    const std::string body_text = text.substr(nl + 1);
    char want[32];
    std::snprintf(want, sizeof want, "%016llx", static_cast<unsigned long long>(fnv1a64(body_text)));
    if (sum != want) throw ChecksumError("model file: checksum mismatch (truncated or modified)");

    json j;
    try {
        j = json::parse(body_text);
    } catch (const json::exception& e) {
        throw ModelFormatError(std::string("model file: ") + e.what());
    }
    try {
        XClassModel m(config_from(j.at("config")), j.at("schema").get<std::vector<std::string>>());
        auto& s = ModelAccess::stats(m);
        const auto& js = j.at("stats");
        s.count = js.at("count").get<std::size_t>();
        s.mean = js.at("mean").get<Vec>();
        s.mean_sq = js.at("mean_sq").get<Vec>();
        s.std_min = js.at("std_min").get<Vec>();
        s.std_max = js.at("std_max").get<Vec>();
        auto& fr = ModelAccess::frame(m);
        fr.lo = j.at("frame").at("lo").get<Vec>();
        fr.hi = j.at("frame").at("hi").get<Vec>();
        for (const auto& c : j.at("classes")) ModelAccess::classes(m).push_back(class_from(c));
        auto& t = ModelAccess::tracker(m);
        const auto& jt = j.at("tracker");
        t.i = jt.at("i").get<std::size_t>();
        t.mean_conf = jt.at("mean").get<double>();
        t.var_conf = jt.at("var").get<double>();
        t.m = jt.at("m").get<double>();
        auto& b = ModelAccess::buffer(m);
        for (const auto& e : j.at("buffer").at("entries"))
            b.entries.push_back({e.at("x").get<Vec>(), e.at("lam").get<double>(), e.at("seq").get<std::uint64_t>()});
        b.discarded = j.at("buffer").at("discarded").get<std::size_t>();
        ModelAccess::seq(m) = j.at("seq").get<std::uint64_t>();
        ModelAccess::next_label(m) = j.at("next_label").get<int>();
        ModelAccess::released(m) = j.at("released").get<std::size_t>();
        return m;
    } catch (const json::exception& e) {
        throw ModelFormatError(std::string("model file: ") + e.what());
    }
}

void save_model(const XClassModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write model '" + path + "'");
    out << serialize_model(model);
    if (!out) throw std::runtime_error("failed writing model '" + path + "'");
}

XClassModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open model '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return deserialize_model(ss.str());
}

}  // namespace xclass
