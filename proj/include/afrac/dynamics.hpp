#pragma once

// Finite-resolution witnesses for the chaotic behaviour of the shift on codes:
// dense periodic points, a transitive orbit, sensitivity, and a Li-Yorke pair.
// Geometric distances are taken between centroid realizations, so every
// inequality carries a 2 * D(realization depth) margin.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "codespace.hpp"
#include "config.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "scheme.hpp"
#include "separation.hpp"

namespace afrac {

struct DynamicsOptions {
    Tolerances tol;
    Limits limits;
    SeparationMode mode = SeparationMode::forall_exists;
    std::size_t realization_depth = 12;
    std::size_t block_depth = 4;
};

/// Separation constant at the shallowest depth n0 where it reaches tol.sep,
/// plus the first lexicographic pair of depth-n0 kept words at least that far apart.
struct SeparationChoice {
    SeparationMode mode = SeparationMode::forall_exists;
    std::size_t depth = 0;
    double epsilon0 = 0.0;
    Address a{Alphabet{}};
    Address b{Alphabet{}};
    double pair_distance = 0.0;
};

inline SeparationChoice choose_separation(const Scheme& s, std::size_t max_depth, const DynamicsOptions& opts = {}) {
    const Alphabet kept_only{s.kept(), s.kept()};
    for (std::size_t n0 = 1; n0 <= max_depth; ++n0) {
        const auto polys = kept_polygons(s, n0, opts.limits, opts.tol);
        const auto value = separation(polys, opts.mode, opts.limits);
        if (!(value.value >= opts.tol.sep)) {
            continue;
        }
        const auto words = enumerate_words(kept_only, n0, opts.limits);
        for (std::size_t i = 0; i < polys.size(); ++i) {
            for (std::size_t j = i + 1; j < polys.size(); ++j) {
                const double d = min_distance(polys[i], polys[j]);
                if (d >= value.value - opts.tol.geom) {
                    return {opts.mode, n0, value.value, words[i], words[j], d};
                }
            }
        }
    }
    throw NoSeparation("no depth <= " + std::to_string(max_depth) + " reaches separation " +
                       std::to_string(opts.tol.sep) + " in " + to_string(opts.mode) + " mode");
}

struct PeriodicWitness {
    Address cylinder;
    Code code;
    bool member = false;     ///< symbolic cylinder membership
    Point2 point;            ///< realization of the code
    double distance = 0.0;   ///< from the point to the cylinder's cell
    bool pass = false;
};

struct TransitivityWitness {
    Address prefix{Alphabet{}};
    Code code{1, {}, {1}};
    std::vector<std::pair<Address, std::size_t>> visits;  ///< cylinder, first shift count entering it
    bool pass = false;
};

struct SensitivityWitness {
    Address cylinder;
    Code u;
    Code v;
    std::size_t k = 0;
    double initial_distance = 0.0;
    double distance = 0.0;
    bool pass = false;
};

struct LiYorkeSample {
    std::size_t k = 0;
    bool agreement_block = false;
    std::size_t agree = 0;  ///< common prefix length of the two shifted codes
    double distance = 0.0;
};

struct LiYorkeWitness {
    Code u{1, {}, {1}};
    std::vector<int> v;  ///< finite prefix, long enough for the horizon plus realization depth
    std::vector<LiYorkeSample> samples;
    double min_distance = 0.0;
    double max_distance = 0.0;
    double proximal_bound = 0.0;  ///< D(block depth)
    double separated_bound = 0.0; ///< epsilon0 - 2 D(realization depth)
    bool pass = false;
};

namespace detail {

inline std::size_t effective_realization(std::size_t n, const DynamicsOptions& opts) {
    return std::max(opts.realization_depth, n);
}

inline std::vector<int> concat(std::span<const int> a, std::span<const int> b) {
    std::vector<int> out(a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

}  // namespace detail

inline std::vector<PeriodicWitness> periodic_density_witnesses(const Scheme& s, std::size_t n,
                                                               const DynamicsOptions& opts = {}) {
    const std::size_t depth = detail::effective_realization(n, opts);
    std::vector<PeriodicWitness> out;
    for (const auto& w : enumerate_words(s.alphabet(), n, opts.limits)) {
        const auto code = periodic_code(w);
        const bool member = in_cylinder(code, Cylinder(w));
        const auto point = realize_point(s, code, depth, opts.limits, opts.tol).point;
        const double d = distance(point, word_cell(s, w.symbols(), opts.tol));
        out.push_back({w, code, member, point, d, member && d <= opts.tol.geom});
    }
    return out;
}

inline TransitivityWitness transitivity_witness(const Scheme& s, std::size_t n, const DynamicsOptions& opts = {}) {
    TransitivityWitness out;
    out.prefix = transitive_prefix(s.alphabet(), n, opts.limits);
    out.code = periodic_code(out.prefix);
    const auto m = static_cast<std::size_t>(s.kept());
    const std::size_t count = saturating_pow(m, n);
    constexpr auto unseen = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> first(count, unseen);
    const auto symbols = out.prefix.symbols();
    for (std::size_t k = 0; k + n <= symbols.size(); ++k) {
        std::size_t index = 0;
        for (std::size_t i = 0; i < n; ++i) {
            index = index * m + static_cast<std::size_t>(symbols[k + i] - 1);
        }
        if (first[index] == unseen) {
            first[index] = k;
        }
    }
    const auto words = enumerate_words(s.alphabet(), n, opts.limits);
    out.pass = true;
    for (std::size_t idx = 0; idx < count; ++idx) {
        out.visits.emplace_back(words[idx], first[idx]);
        out.pass = out.pass && first[idx] != unseen &&
                   in_cylinder(out.code.shift(first[idx]), Cylinder(words[idx]));
    }
    return out;
}

inline std::vector<SensitivityWitness> sensitivity_witnesses(const Scheme& s, std::size_t n,
                                                             const SeparationChoice& sep,
                                                             const DynamicsOptions& opts = {}) {
    if (!(sep.epsilon0 > 0.0)) {
        throw NoSeparation("sensitivity needs a positive separation constant");
    }
    const std::size_t depth = detail::effective_realization(n, opts);
    const double margin = 2.0 * kept_diameter(s, depth, opts.limits, opts.tol);
    std::vector<SensitivityWitness> out;
    for (const auto& w : enumerate_words(s.alphabet(), n, opts.limits)) {
        const auto prefix = std::vector<int>(w.symbols().begin(), w.symbols().end());
        Code u(s.kept(), prefix, {sep.a.symbols().begin(), sep.a.symbols().end()});
        Code v(s.kept(), prefix, {sep.b.symbols().begin(), sep.b.symbols().end()});
        const double start = distance(realize_point(s, u, depth, opts.limits, opts.tol).point,
                                      realize_point(s, v, depth, opts.limits, opts.tol).point);
        const auto pu = realize_point(s, u.shift(n), depth, opts.limits, opts.tol).point;
        const auto pv = realize_point(s, v.shift(n), depth, opts.limits, opts.tol).point;
        const double d = distance(pu, pv);
        const bool pass = in_cylinder(u, Cylinder(w)) && in_cylinder(v, Cylinder(w)) &&
                          d >= sep.epsilon0 - margin;
        out.push_back({w, std::move(u), std::move(v), n, start, d, pass});
    }
    return out;
}

/// u = a a a ..., v = a b aa bb aaaa bbbb ... (blocks of doubling length).
inline LiYorkeWitness li_yorke_witness(const Scheme& s, std::size_t horizon, const SeparationChoice& sep,
                                       const DynamicsOptions& opts = {}) {
    if (horizon < 4) {
        throw DepthOutOfRange("Li-Yorke horizon must be at least 4");
    }
    if (!(sep.epsilon0 > 0.0)) {
        throw NoSeparation("Li-Yorke witness needs a positive separation constant");
    }
    const std::size_t depth = opts.realization_depth;
    const auto a = sep.a.symbols();
    const auto b = sep.b.symbols();
    const std::size_t needed = horizon + depth;
    require_within_cap(needed, opts.limits.words, "Li-Yorke horizon");

    LiYorkeWitness out;
    out.u = Code(s.kept(), {}, {a.begin(), a.end()});
    std::vector<bool> in_agreement;
    for (std::size_t reps = 1; out.v.size() < needed; reps *= 2) {
        for (int part = 0; part < 2; ++part) {
            const auto block = part == 0 ? a : b;
            for (std::size_t r = 0; r < reps; ++r) {
                out.v.insert(out.v.end(), block.begin(), block.end());
                in_agreement.insert(in_agreement.end(), block.size(), part == 0);
            }
        }
    }
    out.proximal_bound = kept_diameter(s, opts.block_depth, opts.limits, opts.tol);
    out.separated_bound = sep.epsilon0 - 2.0 * kept_diameter(s, depth, opts.limits, opts.tol);
    out.min_distance = std::numeric_limits<double>::infinity();
    out.max_distance = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < horizon; ++k) {
        const auto shifted = out.u.shift(k);
        std::size_t agree = 0;
        while (k + agree < out.v.size() && shifted.symbol(agree) == out.v[k + agree]) {
            ++agree;
        }
        const auto window = std::span<const int>(out.v).subspan(k, depth);
        const double d = distance(realize_point(s, shifted, depth, opts.limits, opts.tol).point,
                                  realize_word(s, window, depth, opts.tol).point);
        out.samples.push_back({k, in_agreement[k], agree, d});
        out.min_distance = std::min(out.min_distance, d);
        out.max_distance = std::max(out.max_distance, d);
    }
    out.pass = out.min_distance <= out.proximal_bound && out.max_distance >= out.separated_bound;
    return out;
}

struct ChaosWitnessReport {
    std::string scheme;
    std::size_t n = 0;
    std::size_t horizon = 0;
    std::size_t realization_depth = 0;
    SeparationChoice separation;
    std::vector<PeriodicWitness> periodic;
    TransitivityWitness transitivity;
    std::vector<SensitivityWitness> sensitivity;
    LiYorkeWitness li_yorke;

    bool periodic_pass() const {
        return std::all_of(periodic.begin(), periodic.end(), [](const auto& w) { return w.pass; });
    }
    bool sensitivity_pass() const {
        return std::all_of(sensitivity.begin(), sensitivity.end(), [](const auto& w) { return w.pass; });
    }
    bool pass() const { return periodic_pass() && transitivity.pass && sensitivity_pass() && li_yorke.pass; }
};

/// Runs all four witness families. Throws NoSeparation when no depth <= n
/// reaches the separation threshold in the chosen mode.
inline ChaosWitnessReport chaos_witnesses(const Scheme& s, std::size_t n, std::size_t horizon,
                                          const DynamicsOptions& opts = {}) {
    ChaosWitnessReport report;
    report.scheme = s.name();
    report.n = n;
    report.horizon = horizon;
    report.realization_depth = detail::effective_realization(n, opts);
    report.separation = choose_separation(s, n, opts);
    report.periodic = periodic_density_witnesses(s, n, opts);
    report.transitivity = transitivity_witness(s, n, opts);
    report.sensitivity = sensitivity_witnesses(s, n, report.separation, opts);
    report.li_yorke = li_yorke_witness(s, horizon, report.separation, opts);
    return report;
}

/// Recomputes every stored distance and membership; true when all reproduce
/// within 1e-12.
inline bool replay(const Scheme& s, const ChaosWitnessReport& r, const DynamicsOptions& opts = {}) {
    const auto close = [](double x, double y) { return std::abs(x - y) <= 1e-12; };
    const std::size_t depth = r.realization_depth;
    for (const auto& w : r.periodic) {
        const auto p = realize_point(s, w.code, depth, opts.limits, opts.tol).point;
        if (in_cylinder(w.code, Cylinder(w.cylinder)) != w.member || !close(distance(p, w.point), 0.0) ||
            !close(distance(p, word_cell(s, w.cylinder.symbols(), opts.tol)), w.distance)) {
            return false;
        }
    }
    for (const auto& [cyl, k] : r.transitivity.visits) {
        if (!in_cylinder(r.transitivity.code.shift(k), Cylinder(cyl))) {
            return false;
        }
    }
    for (const auto& w : r.sensitivity) {
        const double d = distance(realize_point(s, w.u.shift(w.k), depth, opts.limits, opts.tol).point,
                                  realize_point(s, w.v.shift(w.k), depth, opts.limits, opts.tol).point);
        if (!close(d, w.distance)) {
            return false;
        }
    }
    const std::size_t ly_depth = opts.realization_depth;
    for (const auto& sample : r.li_yorke.samples) {
        const auto window = std::span<const int>(r.li_yorke.v).subspan(sample.k, ly_depth);
        const double d = distance(realize_point(s, r.li_yorke.u.shift(sample.k), ly_depth, opts.limits, opts.tol).point,
                                  realize_word(s, window, ly_depth, opts.tol).point);
        if (!close(d, sample.distance)) {
            return false;
        }
    }
    return true;
}

inline nlohmann::json to_json(const ChaosWitnessReport& r) {
    const auto point = [](Point2 p) { return nlohmann::json::array({p.x, p.y}); };
    nlohmann::json periodic = nlohmann::json::array();
    for (const auto& w : r.periodic) {
        periodic.push_back({{"cylinder", w.cylinder.to_string()},
                            {"code", w.code.to_string()},
                            {"member", w.member},
                            {"point", point(w.point)},
                            {"distance_to_cell", w.distance},
                            {"pass", w.pass}});
    }
    nlohmann::json visits = nlohmann::json::array();
    for (const auto& [cyl, k] : r.transitivity.visits) {
        visits.push_back({{"cylinder", cyl.to_string()}, {"shift", k}});
    }
    nlohmann::json sensitivity = nlohmann::json::array();
    for (const auto& w : r.sensitivity) {
        sensitivity.push_back({{"cylinder", w.cylinder.to_string()},
                               {"u", w.u.to_string()},
                               {"v", w.v.to_string()},
                               {"k", w.k},
                               {"initial_distance", w.initial_distance},
                               {"distance", w.distance},
                               {"pass", w.pass}});
    }
    nlohmann::json samples = nlohmann::json::array();
    for (const auto& smp : r.li_yorke.samples) {
        samples.push_back({{"k", smp.k},
                           {"block", smp.agreement_block ? "agreement" : "disagreement"},
                           {"agree", smp.agree},
                           {"distance", smp.distance}});
    }
    const Alphabet kept_only{static_cast<int>(r.li_yorke.u.kept()), static_cast<int>(r.li_yorke.u.kept())};
    return {{"scheme", r.scheme},
            {"n", r.n},
            {"horizon", r.horizon},
            {"epsilon0", r.separation.epsilon0},
            {"separation",
             {{"mode", to_string(r.separation.mode)},
              {"depth", r.separation.depth},
              {"a", r.separation.a.to_string()},
              {"b", r.separation.b.to_string()},
              {"pair_distance", r.separation.pair_distance}}},
            {"realization_depth", r.realization_depth},
            {"periodic", std::move(periodic)},
            {"transitivity",
             {{"prefix_length", r.transitivity.prefix.size()},
              {"code", r.transitivity.code.to_string()},
              {"visits", std::move(visits)},
              {"pass", r.transitivity.pass}}},
            {"sensitivity", std::move(sensitivity)},
            {"li_yorke",
             {{"u", r.li_yorke.u.to_string()},
              {"v_prefix", Address(kept_only, r.li_yorke.v).to_string()},
              {"samples", std::move(samples)},
              {"min_distance", r.li_yorke.min_distance},
              {"max_distance", r.li_yorke.max_distance},
              {"proximal_bound", r.li_yorke.proximal_bound},
              {"separated_bound", r.li_yorke.separated_bound},
              {"pass", r.li_yorke.pass}}},
            {"overall", r.pass() ? "pass" : "fail"}};
}

}  // namespace afrac
