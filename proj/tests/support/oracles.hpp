#pragma once

// Independent reference implementations used to check the production code.
// Deliberately naive: exhaustive enumeration and plain recursion.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "genem/domain/types.hpp"

namespace oracle {

// Minimum over every alignment path from (0,0) to (n-1,m-1) using steps
// (1,0), (0,1), (1,1) of the summed pairwise cost. Paths are enumerated
// one by one, so keep n, m small.
inline double dtw_by_enumeration(std::size_t n, std::size_t m, const std::function<double(std::size_t, std::size_t)>& cost) {
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::pair<std::size_t, std::size_t>> path{{0, 0}};
    std::function<void()> walk = [&] {
        const auto [i, j] = path.back();
        if (i == n - 1 && j == m - 1) {
            double sum = 0.0;
            for (const auto& [pi, pj] : path) sum += cost(pi, pj);
            best = std::min(best, sum);
            return;
        }
        const std::pair<std::size_t, std::size_t> steps[] = {{1, 0}, {0, 1}, {1, 1}};
        for (const auto& [di, dj] : steps) {
            if (i + di >= n || j + dj >= m) continue;
            path.emplace_back(i + di, j + dj);
            walk();
            path.pop_back();
        }
    };
    walk();
    return best;
}

// Frame cost written out from the definition: normalize each channel by its
// span (angles: wrapped difference over 360), weight, Euclidean norm.
inline double frame_cost(const std::vector<double>& a, const std::vector<double>& b, const std::vector<double>& weight,
                         const std::vector<double>& span, const std::vector<bool>& angular) {
    double s = 0.0;
    for (std::size_t c = 0; c < a.size(); ++c) {
        double d = a[c] - b[c];
        if (angular[c]) {
            while (d >= 180.0) d -= 360.0;
            while (d < -180.0) d += 360.0;
            d /= 360.0;
        } else {
            d /= span[c];
        }
        s += weight[c] * d * d;
    }
    return std::sqrt(s);
}

template <typename T>
std::size_t levenshtein_recursive(const std::vector<T>& a, std::size_t i, const std::vector<T>& b, std::size_t j) {
    if (i == a.size()) return b.size() - j;
    if (j == b.size()) return a.size() - i;
    if (a[i] == b[j]) return levenshtein_recursive(a, i + 1, b, j + 1);
    return 1 + std::min({levenshtein_recursive(a, i + 1, b, j), levenshtein_recursive(a, i, b, j + 1),
                         levenshtein_recursive(a, i + 1, b, j + 1)});
}

inline std::size_t event_edit_recursive(const std::vector<genem::TrajectoryEvent>& a,
                                        const std::vector<genem::TrajectoryEvent>& b) {
    std::vector<std::pair<int, std::string>> x, y;
    for (const auto& e : a) x.emplace_back(static_cast<int>(e.kind), e.payload);
    for (const auto& e : b) y.emplace_back(static_cast<int>(e.kind), e.payload);
    return levenshtein_recursive(x, 0, y, 0);
}

// Random trajectory with `frames` frames over the given channels; values
// are drawn inside [lo, hi] per channel.
inline genem::Trajectory random_trajectory(std::mt19937& rng, std::size_t frames, const std::vector<std::string>& channels,
                                           const std::vector<std::pair<double, double>>& bounds) {
    genem::Trajectory t;
    t.embodiment = "test";
    t.channels = channels;
    for (std::size_t i = 0; i < frames; ++i) {
        genem::StateFrame f{static_cast<double>(i) * t.step_s, {}};
        for (const auto& [lo, hi] : bounds) f.values.push_back(std::uniform_real_distribution<double>(lo, hi)(rng));
        t.frames.push_back(std::move(f));
    }
    return t;
}

}  // namespace oracle
