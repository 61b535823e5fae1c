#pragma once

// Deterministic SVG 1.1 output of construction stages. Coordinates are fixed to
// six decimals and elements follow lexicographic address order, so identical
// inputs give byte-identical documents.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "codespace.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "scheme.hpp"

namespace afrac {

struct RenderStyle {
    std::string kept = "#1b3a5c";
    std::string complement = "#f2f2f2";
    std::string highlight = "#d1495b";
    double stroke_width = 0.5;  ///< in canvas pixels
    int canvas = 512;           ///< width in pixels

    void validate() const {
        for (const auto* color : {&kept, &complement, &highlight}) {
            const bool ok = color->size() == 7 && (*color)[0] == '#' &&
                            std::all_of(color->begin() + 1, color->end(),
                                        [](unsigned char ch) { return std::isxdigit(ch) != 0; });
            if (!ok) {
                throw Error("render style color '" + *color + "' is not #RRGGBB");
            }
        }
        if (canvas < 64) {
            throw Error("render canvas must be at least 64 px");
        }
        if (!(stroke_width >= 0.0) || !std::isfinite(stroke_width)) {
            throw Error("render stroke width must be a nonnegative number");
        }
    }
};

namespace detail {

/// %.6f (round-half-even on exact binary ties), with negative zero printed as zero.
inline std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    std::string out(buf);
    if (out == "-0.000000") {
        out = "0.000000";
    }
    return out;
}

inline std::string render_cells(const CellTree& tree, std::size_t depth, const RenderStyle& style,
                                 const std::optional<Address>& highlight) {
    style.validate();
    if (depth < 1 || depth > tree.depth()) {
        throw DepthOutOfRange("render depth " + std::to_string(depth) + " outside 1.." +
                              std::to_string(tree.depth()));
    }
    const auto& scheme = tree.scheme();

    std::vector<const Cell*> cells;
    for (std::size_t n = 1; n <= depth; ++n) {
        for (const auto& c : tree.level(n)) {
            if (c.kind == CellKind::complement || n == depth) {
                cells.push_back(&c);
            }
        }
    }
    std::sort(cells.begin(), cells.end(), [](const Cell* a, const Cell* b) { return a->address < b->address; });

    Box box = scheme.base().bounds();
    const double min_extent = 0.05 * std::max(box.width(), box.height());
    if (box.height() < min_extent) {
        const double pad = 0.5 * (min_extent - box.height());
        box.lo.y -= pad;
        box.hi.y += pad;
    }
    if (box.width() < min_extent) {
        const double pad = 0.5 * (min_extent - box.width());
        box.lo.x -= pad;
        box.hi.x += pad;
    }
    const long height_px = std::max(1L, std::lround(style.canvas * box.height() / box.width()));
    const double unit = box.width() / style.canvas;
    const bool segments = scheme.measure_kind() == MeasureKind::length;
    const double stroke = segments ? std::max(style.stroke_width, 2.0) * unit : style.stroke_width * unit;

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + std::to_string(style.canvas) +
           "\" height=\"" + std::to_string(height_px) + "\" viewBox=\"" + fixed6(box.lo.x) + " " + fixed6(box.lo.y) +
           " " + fixed6(box.width()) + " " + fixed6(box.height()) + "\">\n";
    out += "<title>" + scheme.name() + " depth " + std::to_string(depth) +
           (highlight ? " subfractal " + highlight->to_string() : std::string()) + "</title>\n";
    out += "<style type=\"text/css\">\n";
    out += "polygon { stroke: #202020; stroke-width: " + fixed6(stroke) + "; stroke-linejoin: round; }\n";
    for (const auto& [cls, color] : {std::pair{"kept", style.kept}, std::pair{"complement", style.complement},
                                     std::pair{"highlight", style.highlight}}) {
        out += std::string("polygon.") + cls + " { fill: " + color + (segments ? "; stroke: " + color : "") + "; }\n";
    }
    out += "</style>\n";
    for (const Cell* c : cells) {
        std::string cls = c->kind == CellKind::kept ? "kept" : "complement";
        if (highlight && c->kind == CellKind::kept && c->address.starts_with(*highlight)) {
            cls = "highlight";
        }
        out += "<polygon class=\"" + cls + "\" points=\"";
        bool first = true;
        for (const auto& v : c->polygon.vertices()) {
            if (!first) {
                out += ' ';
            }
            first = false;
            // Flip y so that the base appears upright.
            out += fixed6(v.x) + "," + fixed6(box.lo.y + box.hi.y - v.y);
        }
        out += "\"/>\n";
    }
    out += "</svg>\n";
    return out;
}

}  // namespace detail

/// Complement cells of every order <= depth plus the kept cells of that depth.
inline std::string render_construction(const CellTree& tree, std::size_t depth, const RenderStyle& style = {}) {
    return detail::render_cells(tree, depth, style, std::nullopt);
}

/// As render_construction, with the kept cells under `prefix` in the highlight class.
inline std::string render_subfractal(const CellTree& tree, const Address& prefix, std::size_t depth,
                                     const RenderStyle& style = {}) {
    for (int s : prefix.symbols()) {
        if (s > tree.scheme().kept()) {
            throw UnknownAddress("subfractal prefix " + prefix.to_string() + " is not a kept address");
        }
    }
    if (prefix.alphabet() != tree.scheme().alphabet()) {
        throw UnknownAddress("subfractal prefix alphabet does not match the scheme");
    }
    if (prefix.size() > depth) {
        throw DepthOutOfRange("subfractal prefix is deeper than the render depth");
    }
    return detail::render_cells(tree, depth, style, prefix);
}

}  // namespace afrac
