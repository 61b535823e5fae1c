#pragma once

// Iterated function system view of a scheme: the kept child maps acting on the
// base polygon.

#include <algorithm>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "codespace.hpp"
#include "config.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "scheme.hpp"
#include "separation.hpp"

namespace afrac {

class IteratedSystem {
public:
    IteratedSystem(std::vector<AffineMap2> maps, ConvexPolygon base, MeasureKind measure = MeasureKind::area,
                   const Tolerances& tol = {})
        : maps_(std::move(maps)), base_(std::move(base)), measure_(measure) {
        if (maps_.size() < 2) {
            throw ValidationError({"an iterated system needs at least two maps"});
        }
        std::vector<std::string> violations;
        for (std::size_t j = 0; j < maps_.size(); ++j) {
            if (!maps_[j].is_contractive(tol.geom)) {
                violations.push_back("map " + std::to_string(j + 1) + " is not contractive");
            }
        }
        if (!violations.empty()) {
            throw ValidationError(std::move(violations));
        }
    }

    const std::vector<AffineMap2>& maps() const { return maps_; }
    const ConvexPolygon& base() const { return base_; }
    MeasureKind measure_kind() const { return measure_; }
    std::size_t size() const { return maps_.size(); }

private:
    std::vector<AffineMap2> maps_;
    ConvexPolygon base_;
    MeasureKind measure_;
};

inline IteratedSystem from_scheme(const Scheme& s) {
    return IteratedSystem(s.kept_maps(), s.base(), s.measure_kind());
}

struct SetApproximation {
    std::vector<ConvexPolygon> cells;
    std::size_t generation = 0;
};

inline SetApproximation seed_of(const IteratedSystem& sys) { return {{sys.base()}, 0}; }

/// A_{k+1} = union over maps w of w(A_k), applied k times. Cells are ordered
/// map-major: all images under map 1, then map 2, and so on.
inline SetApproximation iterate_attractor(const IteratedSystem& sys, SetApproximation seed, std::size_t k,
                                          const Limits& limits = {}, const Tolerances& tol = {}) {
    if (seed.cells.empty()) {
        throw InvalidGeometry("attractor seed must be nonempty");
    }
    const std::size_t growth = saturating_pow(sys.size(), k);
    if (growth > limits.cells / seed.cells.size()) {
        throw CapExceeded("attractor iteration: " + std::to_string(seed.cells.size()) + " * " +
                          std::to_string(sys.size()) + "^" + std::to_string(k) + " cells exceeds cap " +
                          std::to_string(limits.cells));
    }
    for (std::size_t g = 0; g < k; ++g) {
        std::vector<ConvexPolygon> next;
        next.reserve(seed.cells.size() * sys.size());
        for (const auto& map : sys.maps()) {
            for (const auto& cell : seed.cells) {
                next.push_back(apply(map, cell, tol.geom));
            }
        }
        seed.cells = std::move(next);
        ++seed.generation;
    }
    return seed;
}

inline double total_measure(const SetApproximation& a, MeasureKind kind) {
    double sum = 0.0;
    for (const auto& c : a.cells) {
        sum += measure(c, kind);
    }
    return sum;
}

/// maps[w1] o ... o maps[wn] applied to the base; coincides with the scheme cell of w.
inline ConvexPolygon compose_word(const IteratedSystem& sys, const Address& w, const Tolerances& tol = {}) {
    if (w.empty()) {
        throw InvalidAddress("compose_word needs a nonempty word");
    }
    AffineMap2 acc = AffineMap2::identity();
    for (int s : w.symbols()) {
        if (s < 1 || static_cast<std::size_t>(s) > sys.size()) {
            throw InvalidAddress("symbol " + std::to_string(s) + " has no map");
        }
        acc = compose(acc, sys.maps()[static_cast<std::size_t>(s - 1)]);
    }
    return apply(acc, sys.base(), tol.geom);
}

struct ShiftResult {
    Point2 point;
    int branch;  ///< one-based index of the map whose image contains the input
};

/// S(p) = w_n^{-1}(p) for the unique first-level image w_n(base) containing p.
inline ShiftResult inverse_shift(const IteratedSystem& sys, Point2 p, const Tolerances& tol = {}) {
    int branch = 0;
    for (std::size_t j = 0; j < sys.size(); ++j) {
        if (distance(p, apply(sys.maps()[j], sys.base(), tol.geom)) <= tol.geom) {
            if (branch != 0) {
                throw AmbiguousBranch("point lies in images " + std::to_string(branch) + " and " +
                                      std::to_string(j + 1));
            }
            branch = static_cast<int>(j + 1);
        }
    }
    if (branch == 0) {
        throw OutsideAttractor("point lies in no first-level image");
    }
    return {sys.maps()[static_cast<std::size_t>(branch - 1)].inverse(tol.geom)(p), branch};
}

/// Same semantics as check_separation, computed from composed images.
inline double separation_from_maps(const IteratedSystem& sys, std::size_t depth, SeparationMode mode,
                                   const Limits& limits = {}, const Tolerances& tol = {}) {
    if (depth < 1) {
        throw DepthOutOfRange("separation depth must be at least 1");
    }
    const auto m = static_cast<int>(sys.size());
    const Alphabet kept_only{m, m};
    bool first = true;
    double out = 0.0;
    for (std::size_t n = 1; n <= depth; ++n) {
        std::vector<ConvexPolygon> cells;
        for (const auto& w : enumerate_words(kept_only, n, limits)) {
            cells.push_back(compose_word(sys, w, tol));
        }
        const double value = separation(cells, mode, limits).value;
        if (first) {
            out = value;
            first = false;
        } else {
            out = mode == SeparationMode::pairwise ? std::min(out, value) : std::max(out, value);
        }
    }
    return out;
}

}  // namespace afrac
