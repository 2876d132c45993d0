#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "swards/dissimilarity.hpp"
#include "swards/error.hpp"

namespace swards {

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
        ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
        --e;
    return s.substr(b, e - b);
}

inline bool parse_double(const std::string& cell, double& out) {
    std::string t = trim(cell);
    if (t.empty())
        return false;
    try {
        std::size_t pos = 0;
        out = std::stod(t, &pos);
        return pos == t.size();
    } catch (const std::exception&) {
        return false;
    }
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ','))
        cells.push_back(cell);
    if (!line.empty() && line.back() == ',')
        cells.push_back("");
    return cells;
}

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

} // namespace detail

// ---------------------------------------------------------------------------
// points CSV
//
// Optional header (detected by any non-numeric cell in the first row). A
// column named "label" carries ground truth and is excluded from features.

struct PointsFile {
    std::vector<Point> points;
    std::optional<std::vector<int>> labels;
};

inline PointsFile read_points_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw input_error("cannot open points file: " + path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (detail::trim(line).empty())
            continue;
        rows.push_back(detail::split_csv_line(line));
    }
    if (rows.empty())
        throw input_error("points " + path + ": empty file");

    std::size_t cols = rows[0].size();
    bool header = false;
    for (const auto& cell : rows[0]) {
        double v;
        if (!detail::parse_double(cell, v)) {
            header = true;
            break;
        }
    }
    std::ptrdiff_t label_col = -1;
    if (header) {
        for (std::size_t c = 0; c < cols; ++c)
            if (detail::lower(detail::trim(rows[0][c])) == "label")
                label_col = static_cast<std::ptrdiff_t>(c);
    }

    PointsFile out;
    if (label_col >= 0)
        out.labels.emplace();
    std::size_t first = header ? 1 : 0;
    if (rows.size() == first)
        throw input_error("points " + path + ": no data rows");
    for (std::size_t r = first; r < rows.size(); ++r) {
        if (rows[r].size() != cols)
            throw input_error("points " + path + ": row " + std::to_string(r + 1) + " has " +
                              std::to_string(rows[r].size()) + " columns, expected " +
                              std::to_string(cols));
        Point p;
        for (std::size_t c = 0; c < cols; ++c) {
            double v;
            if (!detail::parse_double(rows[r][c], v))
                throw input_error("points " + path + ": bad number '" + rows[r][c] +
                                  "' at row " + std::to_string(r + 1));
            if (static_cast<std::ptrdiff_t>(c) == label_col)
                out.labels->push_back(static_cast<int>(v));
            else
                p.push_back(v);
        }
        if (p.empty())
            throw input_error("points " + path + ": no feature columns");
        out.points.push_back(std::move(p));
    }
    return out;
}

inline void write_points_csv(const std::string& path, const std::vector<Point>& points,
                             const std::vector<int>* labels = nullptr) {
    std::ofstream out(path);
    if (!out)
        throw input_error("cannot write points file: " + path);
    if (points.empty())
        throw input_error("write_points_csv: no points");
    std::size_t dim = points[0].size();
    if (dim == 2)
        out << "x,y";
    else
        for (std::size_t d = 0; d < dim; ++d)
            out << (d ? "," : "") << "f" << d;
    if (labels)
        out << ",label";
    out << '\n';
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t d = 0; d < dim; ++d)
            out << (d ? "," : "") << detail::fmt17(points[i][d]);
        if (labels)
            out << ',' << (*labels)[i];
        out << '\n';
    }
}

// ---------------------------------------------------------------------------
// label CSV: "index,label" rows (the written form) or a bare label column

inline std::vector<int> read_labels_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw input_error("cannot open labels file: " + path);
    std::vector<int> labels;
    std::string line;
    std::size_t lineno = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = detail::trim(line);
        if (t.empty())
            continue;
        auto cells = detail::split_csv_line(t);
        if (cells.size() > 2)
            throw input_error("labels " + path + ": line " + std::to_string(lineno) +
                              " has more than two columns");
        double v;
        if (first && !detail::parse_double(cells.back(), v)) {
            first = false; // header row
            continue;
        }
        first = false;
        if (!detail::parse_double(cells.back(), v))
            throw input_error("labels " + path + ": bad label at line " +
                              std::to_string(lineno));
        labels.push_back(static_cast<int>(v));
    }
    if (labels.empty())
        throw input_error("labels " + path + ": no labels");
    return labels;
}

inline void write_labels_csv(const std::string& path, const std::vector<int>& labels) {
    std::ofstream out(path);
    if (!out)
        throw input_error("cannot write labels file: " + path);
    out << "index,label\n";
    for (std::size_t i = 0; i < labels.size(); ++i)
        out << i << ',' << labels[i] << '\n';
}

// ---------------------------------------------------------------------------
// run report

struct RunReport {
    nlohmann::json config = nlohmann::json::object();
    double energy = 0.0;
    std::size_t n_clusters = 0;
    std::vector<std::size_t> cluster_sizes;
    std::optional<double> dimension_N; // given or estimated; absent for Wards
    std::size_t restarts_used = 0;
    std::vector<std::size_t> sweeps_per_restart;
    double wall_time_ms = 0.0;
    std::uint64_t seed = 0;

    bool operator==(const RunReport&) const = default;
};

inline void to_json(nlohmann::json& j, const RunReport& r) {
    j = nlohmann::json{{"config", r.config},
                       {"energy", r.energy},
                       {"n_clusters", r.n_clusters},
                       {"cluster_sizes", r.cluster_sizes},
                       {"restarts_used", r.restarts_used},
                       {"sweeps_per_restart", r.sweeps_per_restart},
                       {"wall_time_ms", r.wall_time_ms},
                       {"seed", r.seed}};
    if (r.dimension_N)
        j["dimension_N"] = *r.dimension_N;
    else
        j["dimension_N"] = nullptr;
}

inline void from_json(const nlohmann::json& j, RunReport& r) {
    r.config = j.at("config");
    j.at("energy").get_to(r.energy);
    j.at("n_clusters").get_to(r.n_clusters);
    j.at("cluster_sizes").get_to(r.cluster_sizes);
    j.at("restarts_used").get_to(r.restarts_used);
    j.at("sweeps_per_restart").get_to(r.sweeps_per_restart);
    j.at("wall_time_ms").get_to(r.wall_time_ms);
    j.at("seed").get_to(r.seed);
    if (j.contains("dimension_N") && !j.at("dimension_N").is_null())
        r.dimension_N = j.at("dimension_N").get<double>();
    else
        r.dimension_N.reset();
}

inline void save_report(const std::string& path, const RunReport& r) {
    std::ofstream out(path);
    if (!out)
        throw input_error("cannot write report file: " + path);
    nlohmann::json j = r;
    out << j.dump(2) << '\n';
}

inline RunReport load_report(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw input_error("cannot open report file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw input_error("bad report JSON in " + path + ": " + e.what());
    }
    return j.get<RunReport>();
}

} // namespace swards
