#pragma once

#include <cstddef>
#include <unordered_map>
#include <vector>

#include "swards/error.hpp"

namespace swards {

// Rand index: fraction of point pairs on which two partitions agree (either
// co-clustered in both or separated in both). Contingency-table counting,
// O(n + classes^2); the test suite validates it against pair enumeration.
inline double rand_index(const std::vector<int>& a, const std::vector<int>& b) {
    std::size_t n = a.size();
    if (n != b.size())
        throw input_error("rand_index: partitions have different lengths");
    if (n < 2)
        throw input_error("rand_index: need at least 2 points");

    auto densify = [](const std::vector<int>& v, std::vector<std::size_t>& out) {
        std::unordered_map<int, std::size_t> ids;
        out.resize(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            auto [it, fresh] = ids.emplace(v[i], ids.size());
            out[i] = it->second;
        }
        return ids.size();
    };
    std::vector<std::size_t> da, db;
    std::size_t ka = densify(a, da);
    std::size_t kb = densify(b, db);

    std::vector<double> table(ka * kb, 0.0), ra(ka, 0.0), rb(kb, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        table[da[i] * kb + db[i]] += 1.0;
        ra[da[i]] += 1.0;
        rb[db[i]] += 1.0;
    }
    double sum_nij2 = 0.0, sum_ai2 = 0.0, sum_bj2 = 0.0;
    for (double v : table)
        sum_nij2 += v * v;
    for (double v : ra)
        sum_ai2 += v * v;
    for (double v : rb)
        sum_bj2 += v * v;

    double nn = static_cast<double>(n);
    double pairs = nn * (nn - 1.0) / 2.0;
    double same_both = (sum_nij2 - nn) / 2.0;
    double same_a = (sum_ai2 - nn) / 2.0;
    double same_b = (sum_bj2 - nn) / 2.0;
    double agree = pairs + 2.0 * same_both - same_a - same_b;
    return agree / pairs;
}

} // namespace swards
