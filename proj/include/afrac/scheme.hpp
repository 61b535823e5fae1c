#pragma once

// A subdivision scheme: base polygon, M affine child maps, the first m of which
// are kept. Built into a finite-depth tree of cells.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "codespace.hpp"
#include "config.hpp"
#include "errors.hpp"
#include "geometry.hpp"

namespace afrac {

/// How much of the scheme invariant set a constructor enforces.
///
/// `full` checks everything. `structural` skips containment, overlap and
/// partition of the children so that a defective scheme can still be built
/// into a tree and have its defects reported by the verifier.
enum class SchemeCheck { full, structural };

class Scheme {
public:
    Scheme(std::string name, int kept, int total, ConvexPolygon base, std::vector<AffineMap2> maps,
           MeasureKind measure, SchemeCheck check = SchemeCheck::full, const Tolerances& tol = {})
        : name_(std::move(name)),
          kept_(kept),
          total_(total),
          base_(std::move(base)),
          maps_(std::move(maps)),
          measure_(measure) {
        auto violations = structural_violations(tol);
        if (violations.empty() && check == SchemeCheck::full) {
            violations = partition_violations(tol);
        }
        if (!violations.empty()) {
            throw ValidationError(std::move(violations));
        }
    }

    const std::string& name() const { return name_; }
    int kept() const { return kept_; }
    int total() const { return total_; }
    Alphabet alphabet() const { return {kept_, total_}; }
    const ConvexPolygon& base() const { return base_; }
    MeasureKind measure_kind() const { return measure_; }
    const std::vector<AffineMap2>& maps() const { return maps_; }

    /// One-based child map.
    const AffineMap2& child_map(int j) const { return maps_.at(static_cast<std::size_t>(j - 1)); }

    std::vector<AffineMap2> kept_maps() const {
        return {maps_.begin(), maps_.begin() + kept_};
    }

    double measure_of(const ConvexPolygon& p) const { return measure(p, measure_); }

    /// Bounds, map count, nonsingularity, contractivity of kept maps, and
    /// consistency of the measure with the base.
    std::vector<std::string> structural_violations(const Tolerances& tol = {}) const {
        std::vector<std::string> out;
        if (!(1 < kept_ && kept_ < total_)) {
            if (kept_ <= 1) {
                out.push_back("1 < m violated (m = " + std::to_string(kept_) + ")");
            }
            if (kept_ >= total_) {
                out.push_back("m < M violated (m = " + std::to_string(kept_) + ", M = " + std::to_string(total_) + ")");
            }
        }
        if (maps_.size() != static_cast<std::size_t>(std::max(total_, 0))) {
            out.push_back("expected " + std::to_string(total_) + " child maps, got " + std::to_string(maps_.size()));
        }
        if (measure_ == MeasureKind::length && !base_.is_segment()) {
            out.push_back("length measure requires a segment base");
        }
        if (measure_ == MeasureKind::area && !base_.has_interior()) {
            out.push_back("area measure requires a base with interior");
        }
        for (std::size_t j = 0; j < maps_.size(); ++j) {
            const auto label = "child map " + std::to_string(j + 1);
            if (maps_[j].is_singular(tol.geom)) {
                out.push_back(label + " is singular");
            } else if (static_cast<int>(j) < kept_ && !maps_[j].is_contractive(tol.geom)) {
                out.push_back(label + " is not contractive (operator norm " +
                              std::to_string(maps_[j].operator_norm()) + ")");
            }
        }
        return out;
    }

    /// Containment in the base, pairwise interior-disjointness and full coverage.
    /// Assumes the structural checks passed.
    std::vector<std::string> partition_violations(const Tolerances& tol = {}) const {
        std::vector<std::string> out;
        std::vector<ConvexPolygon> children;
        children.reserve(maps_.size());
        for (const auto& map : maps_) {
            children.push_back(apply(map, base_, tol.geom));
        }
        const double base_measure = measure_of(base_);
        double covered = 0.0;
        for (std::size_t j = 0; j < children.size(); ++j) {
            const double own = measure_of(children[j]);
            const double inside = intersection_measure(children[j], base_, measure_, tol.geom);
            covered += inside;
            if (std::abs(inside - own) > tol.measure_rel * std::max(own, base_measure)) {
                out.push_back("partition: child " + std::to_string(j + 1) + " is not contained in the base");
            }
        }
        for (std::size_t i = 0; i < children.size(); ++i) {
            for (std::size_t j = i + 1; j < children.size(); ++j) {
                const double overlap = intersection_measure(children[i], children[j], measure_, tol.geom);
                covered -= overlap;
                if (overlap > tol.measure_rel * base_measure) {
                    out.push_back("overlap: children " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                                  " share interior of measure " + std::to_string(overlap));
                }
            }
        }
        if (std::abs(covered - base_measure) > tol.measure_rel * base_measure) {
            out.push_back("partition: children cover measure " + std::to_string(covered) + " of base measure " +
                          std::to_string(base_measure));
        }
        return out;
    }

private:
    std::string name_;
    int kept_;
    int total_;
    ConvexPolygon base_;
    std::vector<AffineMap2> maps_;
    MeasureKind measure_;
};

enum class CellKind { kept, complement };

struct Cell {
    Address address;
    ConvexPolygon polygon;
    CellKind kind;
    AffineMap2 acc_map;
};

/// Levels 0..depth; level 0 holds the base cell. Level n >= 1 lists the M
/// children of every kept cell of level n-1, in lexicographic address order.
class CellTree {
public:
    CellTree(Scheme scheme, std::size_t depth, std::vector<std::vector<Cell>> levels)
        : scheme_(std::move(scheme)), depth_(depth), levels_(std::move(levels)) {}

    const Scheme& scheme() const { return scheme_; }
    std::size_t depth() const { return depth_; }
    const std::vector<Cell>& level(std::size_t n) const { return levels_.at(n); }

    std::vector<const Cell*> kept_cells(std::size_t n) const {
        std::vector<const Cell*> out;
        for (const auto& c : levels_.at(n)) {
            if (c.kind == CellKind::kept) {
                out.push_back(&c);
            }
        }
        return out;
    }

    std::vector<const Cell*> complement_cells() const {
        std::vector<const Cell*> out;
        for (std::size_t n = 1; n <= depth_; ++n) {
            for (const auto& c : levels_[n]) {
                if (c.kind == CellKind::complement) {
                    out.push_back(&c);
                }
            }
        }
        return out;
    }

    /// Cell lookup by address; nullptr when the address is deeper than the tree.
    const Cell* find(const Address& address) const {
        const std::size_t n = address.size();
        if (n > depth_) {
            return nullptr;
        }
        if (n == 0) {
            return &levels_[0][0];
        }
        const auto m = static_cast<std::size_t>(scheme_.kept());
        const auto total = static_cast<std::size_t>(scheme_.total());
        std::size_t parent_index = 0;
        for (std::size_t k = 0; k + 1 < n; ++k) {
            parent_index = parent_index * m + static_cast<std::size_t>(address[k] - 1);
        }
        return &levels_[n][parent_index * total + static_cast<std::size_t>(address.back() - 1)];
    }

    /// The M children of a kept cell at level < depth.
    std::span<const Cell> children(const Cell& parent) const {
        const std::size_t n = parent.address.size();
        const auto m = static_cast<std::size_t>(scheme_.kept());
        const auto total = static_cast<std::size_t>(scheme_.total());
        std::size_t index = 0;
        for (int s : parent.address.symbols()) {
            index = index * m + static_cast<std::size_t>(s - 1);
        }
        return std::span<const Cell>(levels_.at(n + 1)).subspan(index * total, total);
    }

private:
    Scheme scheme_;
    std::size_t depth_;
    std::vector<std::vector<Cell>> levels_;
};

/// cell(i1...in) = child_map(i1) o ... o child_map(in) applied to the base, so
/// that every child is nested in its parent.
inline CellTree build_tree(const Scheme& scheme, std::size_t depth, const Limits& limits = {},
                           const Tolerances& tol = {}) {
    if (depth < 1) {
        throw DepthOutOfRange("tree depth must be at least 1");
    }
    const auto m = static_cast<std::size_t>(scheme.kept());
    const auto total = static_cast<std::size_t>(scheme.total());
    require_within_cap(saturating_pow(m, depth), limits.cells, "cell tree");

    std::vector<std::vector<Cell>> levels(depth + 1);
    levels[0].push_back({Address(scheme.alphabet()), scheme.base(), CellKind::kept, AffineMap2::identity()});
    for (std::size_t n = 1; n <= depth; ++n) {
        auto& level = levels[n];
        level.reserve(saturating_pow(m, n - 1) * total);
        for (const auto& parent : levels[n - 1]) {
            if (parent.kind != CellKind::kept) {
                continue;
            }
            for (int j = 1; j <= scheme.total(); ++j) {
                auto acc = compose(parent.acc_map, scheme.child_map(j));
                auto polygon = apply(acc, scheme.base(), tol.geom);
                level.push_back({parent.address.child(j), std::move(polygon),
                                 j <= scheme.kept() ? CellKind::kept : CellKind::complement, acc});
            }
        }
    }
    return CellTree(scheme, depth, std::move(levels));
}

/// Accumulated map of a word: child_map(w1) o ... o child_map(wn).
inline AffineMap2 word_map(const Scheme& scheme, std::span<const int> word) {
    AffineMap2 acc = AffineMap2::identity();
    for (int s : word) {
        acc = compose(acc, scheme.child_map(s));
    }
    return acc;
}

inline ConvexPolygon word_cell(const Scheme& scheme, std::span<const int> word, const Tolerances& tol = {}) {
    return apply(word_map(scheme, word), scheme.base(), tol.geom);
}

/// Polygons of every kept cell of depth n, in lexicographic order.
inline std::vector<ConvexPolygon> kept_polygons(const Scheme& scheme, std::size_t n, const Limits& limits = {},
                                                const Tolerances& tol = {}) {
    std::vector<ConvexPolygon> out;
    const Alphabet kept_only{scheme.kept(), scheme.kept()};
    for (const auto& w : enumerate_words(kept_only, n, limits)) {
        out.push_back(word_cell(scheme, w.symbols(), tol));
    }
    return out;
}

struct Realization {
    Point2 point;
    double error_bound;  ///< diameter of the cell the point was taken from
};

/// Centroid of the depth-N cell addressed by the code's first N symbols. The
/// limit point of the code lies within `error_bound` of it.
inline Realization realize_point(const Scheme& scheme, const Code& code, std::size_t depth,
                                 const Limits& limits = {}, const Tolerances& tol = {}) {
    if (depth < 1) {
        throw DepthOutOfRange("realization depth must be at least 1");
    }
    if (code.kept() != scheme.kept()) {
        throw InvalidAddress("code alphabet does not match the scheme");
    }
    require_within_cap(depth, limits.words, "realization depth");
    const auto cell = word_cell(scheme, code.word(depth), tol);
    return {centroid(cell), diameter(cell)};
}

/// Realization of a finite word (at least `depth` symbols long).
inline Realization realize_word(const Scheme& scheme, std::span<const int> word, std::size_t depth,
                                const Tolerances& tol = {}) {
    const auto cell = word_cell(scheme, word.first(std::min(depth, word.size())), tol);
    return {centroid(cell), diameter(cell)};
}

// ---------------------------------------------------------------------------
// Built-in schemes

namespace detail {

inline AffineMap2 similarity(double s, Point2 t) { return AffineMap2::scaling(s, t); }

inline Scheme carpet_scheme() {
    const double third = 1.0 / 3.0;
    std::vector<AffineMap2> maps;
    // Kept squares row by row, skipping the center; the center square is child 9.
    for (int row = 0; row < 3; ++row) {
        for (int col = 0; col < 3; ++col) {
            if (row == 1 && col == 1) {
                continue;
            }
            maps.push_back(similarity(third, {col * third, row * third}));
        }
    }
    maps.push_back(similarity(third, {third, third}));
    ConvexPolygon base({{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}});
    return Scheme("carpet", 8, 9, std::move(base), std::move(maps), MeasureKind::area);
}

inline Scheme pascal3_scheme() {
    const double third = 1.0 / 3.0;
    const double h = std::numbers::sqrt3 / 6.0;  // height of a third-size triangle
    std::vector<AffineMap2> maps{
        similarity(third, {0.0, 0.0}),       similarity(third, {third, 0.0}),
        similarity(third, {2.0 * third, 0.0}), similarity(third, {1.0 / 6.0, h}),
        similarity(third, {0.5, h}),         similarity(third, {third, 2.0 * h}),
    };
    // Inverted third-size triangles: rotation by 180 degrees.
    for (Point2 t : {Point2{0.5, h}, Point2{5.0 / 6.0, h}, Point2{2.0 * third, 2.0 * h}}) {
        maps.push_back(similarity(-third, t));
    }
    ConvexPolygon base({{0.0, 0.0}, {1.0, 0.0}, {0.5, std::numbers::sqrt3 / 2.0}});
    return Scheme("pascal3", 6, 9, std::move(base), std::move(maps), MeasureKind::area);
}

inline Scheme koch_scheme() {
    // a = (1/2, sqrt3/6) = exp(i pi/6) / sqrt3 as a complex number.
    const double ar = 0.5;
    const double ai = std::numbers::sqrt3 / 6.0;
    std::vector<AffineMap2> maps{
        // z -> a conj(z): reflection, rotation by 30 degrees, ratio 1/sqrt3.
        AffineMap2({ar, ai, ai, -ar}, {0.0, 0.0}),
        // z -> 1 - conj(a) z: rotation by 150 degrees, ratio 1/sqrt3.
        AffineMap2({-ar, -ai, ai, -ar}, {1.0, 0.0}),
        // Onto the central equilateral triangle; affine, not a similarity.
        AffineMap2({1.0 / 3.0, 0.0, 0.0, 1.0}, {1.0 / 3.0, 0.0}),
    };
    ConvexPolygon base({{0.0, 0.0}, {1.0, 0.0}, {0.5, ai}});
    return Scheme("koch", 2, 3, std::move(base), std::move(maps), MeasureKind::area);
}

inline Scheme cantor_scheme() {
    const double third = 1.0 / 3.0;
    std::vector<AffineMap2> maps{
        similarity(third, {0.0, 0.0}),
        similarity(third, {2.0 * third, 0.0}),
        similarity(third, {third, 0.0}),
    };
    ConvexPolygon base({{0.0, 0.0}, {1.0, 0.0}});
    return Scheme("cantor", 2, 3, std::move(base), std::move(maps), MeasureKind::length);
}

}  // namespace detail

inline std::vector<std::string> builtin_names() { return {"carpet", "pascal3", "koch", "cantor"}; }

inline Scheme builtin(std::string_view name) {
    if (name == "carpet") {
        return detail::carpet_scheme();
    }
    if (name == "pascal3") {
        return detail::pascal3_scheme();
    }
    if (name == "koch") {
        return detail::koch_scheme();
    }
    if (name == "cantor") {
        return detail::cantor_scheme();
    }
    throw UnknownScheme("unknown built-in scheme '" + std::string(name) + "'");
}

/// Upper bound on the diameter of any depth-n kept cell: exact maximum when the
/// kept words fit in the word cap, otherwise diam(base) * (max kept operator norm)^n.
inline double kept_diameter(const Scheme& scheme, std::size_t n, const Limits& limits = {},
                            const Tolerances& tol = {}) {
    const auto m = static_cast<std::size_t>(scheme.kept());
    if (saturating_pow(m, n) <= limits.words) {
        double best = 0.0;
        for (const auto& p : kept_polygons(scheme, n, limits, tol)) {
            best = std::max(best, diameter(p));
        }
        return best;
    }
    double rho = 0.0;
    for (const auto& map : scheme.kept_maps()) {
        rho = std::max(rho, map.operator_norm());
    }
    return diameter(scheme.base()) * std::pow(rho, static_cast<double>(n));
}

}  // namespace afrac
