#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "swards/error.hpp"
#include "swards/geometry.hpp"

namespace swards {

// Geometric scene inducing a non-Euclidean metric: line-segment barriers
// and/or a two-speed region split at a vertical border.
struct Environment {
    std::vector<Segment> barriers;
    std::optional<double> border_x;
    double slow_factor = 5.0;
    Rect bbox;

    void validate() const {
        if (!bbox.valid())
            throw input_error("environment: bbox must have positive extent");
        if (slow_factor < 1.0)
            throw input_error("environment: slow_factor must be >= 1");
        for (const auto& s : barriers)
            if (s.a == s.b)
                throw input_error("environment: zero-length barrier segment");
    }
};

inline void to_json(nlohmann::json& j, const Environment& env) {
    j = nlohmann::json::object();
    auto barriers = nlohmann::json::array();
    for (const auto& s : env.barriers)
        barriers.push_back({s.a.x, s.a.y, s.b.x, s.b.y});
    j["barriers"] = barriers;
    if (env.border_x)
        j["border_x"] = *env.border_x;
    j["slow_factor"] = env.slow_factor;
    j["bbox"] = {env.bbox.xmin, env.bbox.ymin, env.bbox.xmax, env.bbox.ymax};
}

inline void from_json(const nlohmann::json& j, Environment& env) {
    env = Environment{};
    if (j.contains("barriers")) {
        for (const auto& b : j.at("barriers")) {
            if (!b.is_array() || b.size() != 4)
                throw input_error("environment: each barrier needs [x1,y1,x2,y2]");
            env.barriers.push_back(
                {{b[0].get<double>(), b[1].get<double>()},
                 {b[2].get<double>(), b[3].get<double>()}});
        }
    }
    if (j.contains("border_x"))
        env.border_x = j.at("border_x").get<double>();
    if (j.contains("slow_factor"))
        env.slow_factor = j.at("slow_factor").get<double>();
    if (!j.contains("bbox") || !j.at("bbox").is_array() || j.at("bbox").size() != 4)
        throw input_error("environment: bbox [xmin,ymin,xmax,ymax] is required");
    const auto& bb = j.at("bbox");
    env.bbox = {bb[0].get<double>(), bb[1].get<double>(),
                bb[2].get<double>(), bb[3].get<double>()};
    env.validate();
}

inline Environment load_environment(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw input_error("cannot open environment file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw input_error("bad environment JSON in " + path + ": " + e.what());
    }
    return j.get<Environment>();
}

inline void save_environment(const std::string& path, const Environment& env) {
    std::ofstream out(path);
    if (!out)
        throw input_error("cannot write environment file: " + path);
    nlohmann::json j = env;
    out << j.dump(2) << '\n';
}

} // namespace swards
