#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "cte/knn.hpp"

namespace testutil {

inline std::vector<std::vector<double>> rows(const cte::PointSet& ps)
{
    std::vector<std::vector<double>> out;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        out.emplace_back(ps[i].begin(), ps[i].end());
    }
    return out;
}

inline cte::PointSet random_points(std::size_t n, std::size_t dim, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    cte::PointSet ps(dim);
    std::vector<double> row(dim);
    for (std::size_t i = 0; i < n; ++i) {
        for (double& v : row) {
            v = u(rng);
        }
        ps.push_back(row);
    }
    return ps;
}

} // namespace testutil
