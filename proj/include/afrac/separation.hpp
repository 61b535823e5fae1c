#pragma once

// Separation sweeps over a family of same-depth cells.
//
// pairwise:      min over unordered pairs {a, b} of d(a, b)
// forall_exists: min over cells a of max over cells b != a of d(a, b)

#include <algorithm>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "config.hpp"
#include "errors.hpp"
#include "geometry.hpp"

namespace afrac {

enum class SeparationMode { pairwise, forall_exists };

inline std::string to_string(SeparationMode mode) {
    return mode == SeparationMode::pairwise ? "pairwise" : "forall_exists";
}

struct SeparationValue {
    double value = std::numeric_limits<double>::infinity();
    std::size_t first = 0;   ///< pairwise: one cell of the closest pair; forall_exists: bottleneck cell
    std::size_t second = 0;  ///< the other cell of the pair / the bottleneck cell's farthest partner
};

/// Closest pair by sweep-and-prune on x, skipping pairs whose boxes are already
/// farther apart than the best distance found.
inline SeparationValue closest_pair(std::span<const ConvexPolygon> cells, const Limits& limits = {}) {
    SeparationValue best;
    if (cells.size() < 2) {
        return best;
    }
    std::vector<Box> boxes;
    boxes.reserve(cells.size());
    for (const auto& c : cells) {
        boxes.push_back(c.bounds());
    }
    std::vector<std::size_t> order(cells.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return boxes[a].lo.x < boxes[b].lo.x; });
    std::size_t examined = 0;
    for (std::size_t oi = 0; oi < order.size(); ++oi) {
        const std::size_t i = order[oi];
        for (std::size_t oj = oi + 1; oj < order.size(); ++oj) {
            const std::size_t j = order[oj];
            if (boxes[j].lo.x - boxes[i].hi.x > best.value) {
                break;
            }
            require_within_cap(++examined, limits.pairs, "pairwise separation sweep");
            if (box_distance(boxes[i], boxes[j]) >= best.value) {
                continue;
            }
            const double d = min_distance(cells[i], cells[j]);
            if (d < best.value) {
                best = {d, std::min(i, j), std::max(i, j)};
            }
        }
    }
    return best;
}

/// Distance from cell i to the farthest other cell, and that cell's index.
inline SeparationValue farthest_partner(std::span<const ConvexPolygon> cells, std::size_t i) {
    SeparationValue out{-std::numeric_limits<double>::infinity(), i, i};
    for (std::size_t j = 0; j < cells.size(); ++j) {
        if (j == i) {
            continue;
        }
        const double d = min_distance(cells[i], cells[j]);
        if (d > out.value) {
            out = {d, i, j};
        }
    }
    return out;
}

/// min_a max_{b != a} d(a, b). Box distances bound d from below and centroid
/// distances bound it from above, so most exact evaluations are skipped.
inline SeparationValue bottleneck_farthest(std::span<const ConvexPolygon> cells, const Limits& limits = {}) {
    SeparationValue result;
    const std::size_t k = cells.size();
    if (k < 2) {
        return result;
    }
    require_within_cap(saturating_pow(k, 2), limits.pairs, "forall-exists separation sweep");
    std::vector<Box> boxes;
    std::vector<Point2> centers;
    boxes.reserve(k);
    centers.reserve(k);
    for (const auto& c : cells) {
        boxes.push_back(c.bounds());
        centers.push_back(centroid(c));
    }
    for (std::size_t i = 0; i < k; ++i) {
        // Seed with the partner whose box is farthest; its exact distance is a valid lower bound.
        std::size_t seed = i == 0 ? 1 : 0;
        double seed_lb = -1.0;
        for (std::size_t j = 0; j < k; ++j) {
            if (j == i) {
                continue;
            }
            const double lb = box_distance(boxes[i], boxes[j]);
            if (lb > seed_lb) {
                seed_lb = lb;
                seed = j;
            }
        }
        SeparationValue best{min_distance(cells[i], cells[seed]), i, seed};
        bool dominated = best.value >= result.value;
        for (std::size_t j = 0; j < k && !dominated; ++j) {
            if (j == i || j == seed) {
                continue;
            }
            if (distance(centers[i], centers[j]) <= best.value) {
                continue;
            }
            const double d = min_distance(cells[i], cells[j]);
            if (d > best.value || (d == best.value && j < best.second)) {
                best = {d, i, j};
            }
            dominated = best.value >= result.value;
        }
        if (!dominated && best.value < result.value) {
            // Ties between partners are resolved toward the smallest index.
            result = farthest_partner(cells, i);
        }
    }
    return result;
}

inline SeparationValue separation(std::span<const ConvexPolygon> cells, SeparationMode mode,
                                  const Limits& limits = {}) {
    return mode == SeparationMode::pairwise ? closest_pair(cells, limits) : bottleneck_farthest(cells, limits);
}

}  // namespace afrac
