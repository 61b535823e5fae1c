#pragma once

// Finite-depth checks of the ratio, adjacency, accumulation, diameter and
// separation conditions on a built cell tree. A passing report only says the
// condition held on every level up to the tree depth.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "config.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "scheme.hpp"
#include "separation.hpp"

namespace afrac {

enum class Condition { ratio, adjacency, accumulation, diameter, separation };

inline std::string to_string(Condition c) {
    switch (c) {
        case Condition::ratio: return "ratio";
        case Condition::adjacency: return "adjacency";
        case Condition::accumulation: return "accumulation";
        case Condition::diameter: return "diameter";
        case Condition::separation: return "separation";
    }
    return "unknown";
}

/// An address (or address pair) and the quantity measured on it.
struct Witness {
    std::vector<Address> cells;
    double value = 0.0;
};

struct ConditionResult {
    Condition condition = Condition::ratio;
    bool pass = false;
    nlohmann::json extremal = nlohmann::json::object();
    std::vector<Witness> witnesses;
};

struct VerifyOptions {
    Tolerances tol;
    Limits limits;
    SeparationMode mode = SeparationMode::forall_exists;
    std::optional<double> expected_ratio;
    std::size_t max_witnesses = 16;
};

struct VerificationReport {
    std::string scheme;
    std::size_t depth = 0;
    Tolerances tol;
    SeparationMode mode = SeparationMode::forall_exists;
    std::vector<ConditionResult> conditions;
    /// Separation in the mode not used for the overall status; informational.
    std::optional<ConditionResult> separation_alternate;
    bool overall = false;
};

namespace detail {

inline void require_levels(const CellTree& tree, std::size_t minimum) {
    if (tree.depth() < minimum) {
        throw EmptyTree("check needs a tree of depth >= " + std::to_string(minimum));
    }
}

inline double kept_complement_ratio(const CellTree& tree, const Cell& parent) {
    const auto& s = tree.scheme();
    double kept = 0.0;
    double complement = 0.0;
    for (const auto& child : tree.children(parent)) {
        (child.kind == CellKind::kept ? kept : complement) += s.measure_of(child.polygon);
    }
    return complement > 0.0 ? kept / complement : std::numeric_limits<double>::infinity();
}

inline bool ratio_violates(double ratio, const VerifyOptions& opts) {
    if (!std::isfinite(ratio) || ratio <= opts.tol.ratio) {
        return true;
    }
    return opts.expected_ratio && std::abs(ratio - *opts.expected_ratio) > opts.tol.ratio;
}

/// Smallest distance from a kept cell to a complement sibling, and that sibling.
inline std::pair<double, const Cell*> complement_gap(const CellTree& tree, const Cell& cell) {
    const Cell& parent = *tree.find(cell.address.parent());
    double gap = std::numeric_limits<double>::infinity();
    const Cell* nearest = nullptr;
    for (const auto& sibling : tree.children(parent)) {
        if (sibling.kind != CellKind::complement) {
            continue;
        }
        const double d = min_distance(cell.polygon, sibling.polygon);
        if (d < gap) {
            gap = d;
            nearest = &sibling;
        }
    }
    return {gap, nearest};
}

inline std::pair<double, const Cell*> level_max_diameter(const CellTree& tree, std::size_t n) {
    double best = -1.0;
    const Cell* arg = nullptr;
    for (const auto& c : tree.level(n)) {
        const double d = diameter(c.polygon);
        if (d > best) {
            best = d;
            arg = &c;
        }
    }
    return {best, arg};
}

inline std::vector<ConvexPolygon> kept_level_polygons(const CellTree& tree, std::size_t n,
                                                      std::vector<const Cell*>* cells = nullptr) {
    std::vector<ConvexPolygon> out;
    for (const Cell* c : tree.kept_cells(n)) {
        out.push_back(c->polygon);
        if (cells) {
            cells->push_back(c);
        }
    }
    return out;
}

}  // namespace detail

inline ConditionResult check_ratio(const CellTree& tree, const VerifyOptions& opts = {}) {
    detail::require_levels(tree, 1);
    ConditionResult out;
    out.condition = Condition::ratio;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    const Cell* arg_lo = nullptr;
    const Cell* arg_hi = nullptr;
    nlohmann::json per_depth = nlohmann::json::array();
    std::vector<Witness> violations;
    for (std::size_t n = 0; n < tree.depth(); ++n) {
        double level_lo = std::numeric_limits<double>::infinity();
        double level_hi = -std::numeric_limits<double>::infinity();
        for (const Cell* parent : tree.kept_cells(n)) {
            const double ratio = detail::kept_complement_ratio(tree, *parent);
            level_lo = std::min(level_lo, ratio);
            level_hi = std::max(level_hi, ratio);
            if (ratio < lo) {
                lo = ratio;
                arg_lo = parent;
            }
            if (ratio > hi) {
                hi = ratio;
                arg_hi = parent;
            }
            if (detail::ratio_violates(ratio, opts) && violations.size() < opts.max_witnesses) {
                violations.push_back({{parent->address}, ratio});
            }
        }
        per_depth.push_back({{"parent_depth", n}, {"r", level_lo}, {"R", level_hi}});
    }
    out.pass = violations.empty();
    out.extremal = {{"r", lo}, {"R", hi}, {"per_depth", std::move(per_depth)}};
    if (opts.expected_ratio) {
        out.extremal["expected"] = *opts.expected_ratio;
    }
    out.witnesses = out.pass ? std::vector<Witness>{{{arg_lo->address}, lo}, {{arg_hi->address}, hi}}
                             : std::move(violations);
    return out;
}

inline ConditionResult check_adjacency(const CellTree& tree, const VerifyOptions& opts = {}) {
    detail::require_levels(tree, 1);
    ConditionResult out;
    out.condition = Condition::adjacency;
    double worst = -1.0;
    Witness worst_witness;
    std::vector<Witness> violations;
    for (std::size_t n = 1; n <= tree.depth(); ++n) {
        for (const Cell* cell : tree.kept_cells(n)) {
            const auto [gap, nearest] = detail::complement_gap(tree, *cell);
            Witness w{{cell->address}, gap};
            if (nearest) {
                w.cells.push_back(nearest->address);
            }
            if (gap > worst) {
                worst = gap;
                worst_witness = w;
            }
            if (!(gap <= opts.tol.geom) && violations.size() < opts.max_witnesses) {
                violations.push_back(std::move(w));
            }
        }
    }
    out.pass = violations.empty();
    out.extremal = {{"max_gap", worst}};
    out.witnesses = out.pass ? std::vector<Witness>{worst_witness} : std::move(violations);
    return out;
}

inline ConditionResult check_accumulation(const CellTree& tree, const VerifyOptions& opts = {}) {
    detail::require_levels(tree, 1);
    ConditionResult out;
    out.condition = Condition::accumulation;
    const auto& s = tree.scheme();
    const double bound = opts.tol.area * s.measure_of(s.base());
    auto cells = tree.complement_cells();
    std::vector<Box> boxes;
    boxes.reserve(cells.size());
    for (const Cell* c : cells) {
        boxes.push_back(c->polygon.bounds());
    }
    std::vector<std::size_t> order(cells.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return boxes[a].lo.x < boxes[b].lo.x; });

    double worst = 0.0;
    std::optional<Witness> worst_witness;
    std::vector<Witness> violations;
    std::size_t candidates = 0;
    for (std::size_t oi = 0; oi < order.size(); ++oi) {
        const std::size_t i = order[oi];
        for (std::size_t oj = oi + 1; oj < order.size(); ++oj) {
            const std::size_t j = order[oj];
            if (boxes[j].lo.x - boxes[i].hi.x > opts.tol.geom) {
                break;
            }
            if (box_distance(boxes[i], boxes[j]) > opts.tol.geom) {
                continue;
            }
            require_within_cap(++candidates, opts.limits.pairs, "complement pair sweep");
            const double overlap =
                intersection_measure(cells[i]->polygon, cells[j]->polygon, s.measure_kind(), opts.tol.geom);
            auto pair = std::minmax(cells[i]->address, cells[j]->address);
            Witness w{{pair.first, pair.second}, overlap};
            if (!worst_witness || overlap > worst) {
                worst = overlap;
                worst_witness = w;
            }
            if (overlap > bound && violations.size() < opts.max_witnesses) {
                violations.push_back(std::move(w));
            }
        }
    }
    out.pass = violations.empty();
    out.extremal = {{"max_overlap", worst},
                    {"bound", bound},
                    {"complement_cells", cells.size()},
                    {"candidate_pairs", candidates}};
    if (out.pass) {
        if (worst_witness) {
            out.witnesses.push_back(*worst_witness);
        }
    } else {
        std::sort(violations.begin(), violations.end(),
                  [](const Witness& a, const Witness& b) { return a.cells < b.cells; });
        out.witnesses = std::move(violations);
    }
    return out;
}

inline ConditionResult check_diameter(const CellTree& tree, const VerifyOptions& opts = {}) {
    detail::require_levels(tree, 2);
    ConditionResult out;
    out.condition = Condition::diameter;
    nlohmann::json diameters = nlohmann::json::array();
    nlohmann::json decay = nlohmann::json::array();
    std::vector<std::pair<double, const Cell*>> maxima;
    for (std::size_t n = 1; n <= tree.depth(); ++n) {
        maxima.push_back(detail::level_max_diameter(tree, n));
        diameters.push_back(maxima.back().first);
    }
    std::vector<Witness> violations;
    double worst = -1.0;
    Witness worst_witness;
    for (std::size_t k = 0; k + 1 < maxima.size(); ++k) {
        const double factor = maxima[k + 1].first / maxima[k].first;
        decay.push_back(factor);
        Witness w{{maxima[k].second->address, maxima[k + 1].second->address}, factor};
        if (factor > worst) {
            worst = factor;
            worst_witness = w;
        }
        if (!(factor <= opts.tol.lambda_max) && violations.size() < opts.max_witnesses) {
            violations.push_back(std::move(w));
        }
    }
    out.pass = violations.empty();
    out.extremal = {{"diameters", std::move(diameters)}, {"decay", std::move(decay)}, {"max_decay", worst}};
    out.witnesses = out.pass ? std::vector<Witness>{worst_witness} : std::move(violations);
    return out;
}

/// Per-depth separation values for depths 1..tree depth.
inline std::vector<SeparationValue> separation_profile(const CellTree& tree, SeparationMode mode,
                                                       const Limits& limits = {}) {
    std::vector<SeparationValue> out;
    for (std::size_t n = 1; n <= tree.depth(); ++n) {
        const auto polys = detail::kept_level_polygons(tree, n);
        out.push_back(separation(polys, mode, limits));
    }
    return out;
}

/// pairwise reports the minimum over depths; forall_exists the maximum.
inline ConditionResult check_separation(const CellTree& tree, SeparationMode mode, const VerifyOptions& opts = {}) {
    detail::require_levels(tree, 1);
    ConditionResult out;
    out.condition = Condition::separation;
    const auto profile = separation_profile(tree, mode, opts.limits);
    nlohmann::json per_depth = nlohmann::json::array();
    std::size_t chosen = 0;
    for (std::size_t k = 0; k < profile.size(); ++k) {
        per_depth.push_back(profile[k].value);
        const bool better = mode == SeparationMode::pairwise ? profile[k].value < profile[chosen].value
                                                             : profile[k].value > profile[chosen].value;
        if (better) {
            chosen = k;
        }
    }
    const double eps0 = profile[chosen].value;
    out.pass = eps0 >= opts.tol.sep;
    out.extremal = {{"mode", to_string(mode)},
                    {"epsilon0", eps0},
                    {"depth", chosen + 1},
                    {"per_depth", std::move(per_depth)}};

    const auto witness_at = [&](std::size_t k) {
        const auto cells = tree.kept_cells(k + 1);
        return Witness{{cells[profile[k].first]->address, cells[profile[k].second]->address}, profile[k].value};
    };
    if (out.pass || mode == SeparationMode::pairwise) {
        out.witnesses.push_back(witness_at(chosen));
    } else {
        // Every depth falls short; each bottleneck cell has no partner far enough away.
        for (std::size_t k = 0; k < profile.size() && out.witnesses.size() < opts.max_witnesses; ++k) {
            out.witnesses.push_back(witness_at(k));
        }
    }
    return out;
}

inline VerificationReport full_verify(const CellTree& tree, const VerifyOptions& opts = {}) {
    if (tree.depth() < 2) {
        throw EmptyTree("full verification needs a tree of depth >= 2");
    }
    VerificationReport report;
    report.scheme = tree.scheme().name();
    report.depth = tree.depth();
    report.tol = opts.tol;
    report.mode = opts.mode;
    report.conditions.push_back(check_ratio(tree, opts));
    report.conditions.push_back(check_adjacency(tree, opts));
    report.conditions.push_back(check_accumulation(tree, opts));
    report.conditions.push_back(check_diameter(tree, opts));
    report.conditions.push_back(check_separation(tree, opts.mode, opts));
    const auto other = opts.mode == SeparationMode::pairwise ? SeparationMode::forall_exists : SeparationMode::pairwise;
    report.separation_alternate = check_separation(tree, other, opts);
    report.overall = std::all_of(report.conditions.begin(), report.conditions.end(),
                                 [](const ConditionResult& c) { return c.pass; });
    return report;
}

/// Re-evaluates a failing condition on one of its witnesses. True when the
/// recomputed value matches the stored one and still violates the condition.
inline bool replay_violation(const CellTree& tree, const ConditionResult& result, const Witness& w,
                             const VerifyOptions& opts = {}) {
    const auto same = [&](double v) {
        return v == w.value || std::abs(v - w.value) <= 1e-12 * std::max(1.0, std::abs(w.value));
    };
    const auto cell = [&](std::size_t i) -> const Cell& {
        const Cell* c = tree.find(w.cells.at(i));
        if (!c) {
            throw UnknownAddress("witness address " + w.cells.at(i).to_string() + " not in tree");
        }
        return *c;
    };
    switch (result.condition) {
        case Condition::ratio: {
            const double ratio = detail::kept_complement_ratio(tree, cell(0));
            return (same(ratio) || (std::isinf(ratio) && std::isinf(w.value))) && detail::ratio_violates(ratio, opts);
        }
        case Condition::adjacency: {
            const double gap = detail::complement_gap(tree, cell(0)).first;
            return same(gap) && !(gap <= opts.tol.geom);
        }
        case Condition::accumulation: {
            const auto& s = tree.scheme();
            const double overlap =
                intersection_measure(cell(0).polygon, cell(1).polygon, s.measure_kind(), opts.tol.geom);
            return same(overlap) && overlap > opts.tol.area * s.measure_of(s.base());
        }
        case Condition::diameter: {
            const std::size_t n = w.cells.at(0).size();
            const double factor =
                detail::level_max_diameter(tree, n + 1).first / detail::level_max_diameter(tree, n).first;
            return same(factor) && !(factor <= opts.tol.lambda_max);
        }
        case Condition::separation: {
            const std::size_t n = w.cells.at(0).size();
            std::vector<const Cell*> cells;
            const auto polys = detail::kept_level_polygons(tree, n, &cells);
            if (result.extremal.at("mode") == "pairwise") {
                const double d = min_distance(cell(0).polygon, cell(1).polygon);
                return same(d) && d < opts.tol.sep;
            }
            const auto it = std::find(cells.begin(), cells.end(), &cell(0));
            const auto far = farthest_partner(polys, static_cast<std::size_t>(it - cells.begin()));
            return same(far.value) && far.value < opts.tol.sep;
        }
    }
    return false;
}

inline nlohmann::json to_json(const Tolerances& t) {
    return {{"geom", t.geom},   {"measure_rel", t.measure_rel}, {"area", t.area},
            {"ratio", t.ratio}, {"sep", t.sep},                 {"lambda_max", t.lambda_max}};
}

inline nlohmann::json to_json(const ConditionResult& r) {
    nlohmann::json witnesses = nlohmann::json::array();
    for (const auto& w : r.witnesses) {
        nlohmann::json cells = nlohmann::json::array();
        for (const auto& a : w.cells) {
            cells.push_back(a.to_string());
        }
        witnesses.push_back({{"cells", std::move(cells)}, {"value", w.value}});
    }
    return {{"condition", to_string(r.condition)},
            {"status", r.pass ? "pass" : "fail"},
            {"extremal", r.extremal},
            {"witnesses", std::move(witnesses)}};
}

inline nlohmann::json to_json(const VerificationReport& report) {
    nlohmann::json conditions = nlohmann::json::array();
    for (const auto& c : report.conditions) {
        conditions.push_back(to_json(c));
    }
    nlohmann::json out = {{"scheme", report.scheme},
                          {"depth", report.depth},
                          {"checked_to_depth", report.depth},
                          {"tolerances", to_json(report.tol)},
                          {"separation_mode", to_string(report.mode)},
                          {"conditions", std::move(conditions)},
                          {"overall", report.overall ? "pass" : "fail"}};
    if (report.separation_alternate) {
        out["separation_alternate"] = to_json(*report.separation_alternate);
    }
    return out;
}

}  // namespace afrac
