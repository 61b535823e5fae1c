#pragma once

// Scheme file format (JSON):
//   { "name": str, "m": int, "M": int, "measure": "area" | "length",
//     "base": [[x, y], ...],
//     "maps": [ { "linear": [[a, b], [c, d]], "translation": [tx, ty] }, ... ] }
// Maps are listed in child order 1..M, kept children first.

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "errors.hpp"
#include "geometry.hpp"
#include "scheme.hpp"

namespace afrac {

inline nlohmann::json to_json(const Scheme& scheme) {
    nlohmann::json base = nlohmann::json::array();
    for (const auto& v : scheme.base().vertices()) {
        base.push_back({v.x, v.y});
    }
    nlohmann::json maps = nlohmann::json::array();
    for (const auto& map : scheme.maps()) {
        const auto& l = map.linear();
        maps.push_back({{"linear", {{l.a, l.b}, {l.c, l.d}}},
                        {"translation", {map.offset().x, map.offset().y}}});
    }
    return {{"name", scheme.name()},
            {"m", scheme.kept()},
            {"M", scheme.total()},
            {"measure", to_string(scheme.measure_kind())},
            {"base", std::move(base)},
            {"maps", std::move(maps)}};
}

inline std::string dump(const Scheme& scheme) { return to_json(scheme).dump(2) + "\n"; }

namespace detail {

inline double number_at(const nlohmann::json& j, const std::string& where) {
    if (!j.is_number()) {
        throw ParseError(where + ": expected a number");
    }
    return j.get<double>();
}

inline Point2 pair_at(const nlohmann::json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2) {
        throw ParseError(where + ": expected a two-element array");
    }
    return {number_at(j[0], where + "[0]"), number_at(j[1], where + "[1]")};
}

inline const nlohmann::json& field(const nlohmann::json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) {
        throw ParseError(std::string("missing field \"") + key + "\"");
    }
    return *it;
}

}  // namespace detail

/// Parses and validates a scheme document. Malformed JSON or a wrong shape is a
/// ParseError; well-formed input that breaks a scheme invariant is a ValidationError.
inline Scheme scheme_from_json(const nlohmann::json& doc, SchemeCheck check = SchemeCheck::full,
                               const Tolerances& tol = {}) {
    if (!doc.is_object()) {
        throw ParseError("scheme document must be a JSON object");
    }
    const auto& name = detail::field(doc, "name");
    const auto& m = detail::field(doc, "m");
    const auto& total = detail::field(doc, "M");
    const auto& measure = detail::field(doc, "measure");
    const auto& base = detail::field(doc, "base");
    const auto& maps = detail::field(doc, "maps");
    if (!name.is_string()) {
        throw ParseError("\"name\" must be a string");
    }
    if (!m.is_number_integer() || !total.is_number_integer()) {
        throw ParseError("\"m\" and \"M\" must be integers");
    }
    if (!measure.is_string() || (measure != "area" && measure != "length")) {
        throw ParseError("\"measure\" must be \"area\" or \"length\"");
    }
    if (!base.is_array() || base.empty()) {
        throw ParseError("\"base\" must be a nonempty array of points");
    }
    if (!maps.is_array()) {
        throw ParseError("\"maps\" must be an array");
    }

    std::vector<Point2> vertices;
    for (std::size_t i = 0; i < base.size(); ++i) {
        vertices.push_back(detail::pair_at(base[i], "base[" + std::to_string(i) + "]"));
    }
    std::vector<AffineMap2> affine;
    for (std::size_t i = 0; i < maps.size(); ++i) {
        const std::string where = "maps[" + std::to_string(i) + "]";
        if (!maps[i].is_object()) {
            throw ParseError(where + ": expected an object");
        }
        const auto& lin = detail::field(maps[i], "linear");
        if (!lin.is_array() || lin.size() != 2) {
            throw ParseError(where + ".linear: expected a 2x2 array");
        }
        const Point2 row0 = detail::pair_at(lin[0], where + ".linear[0]");
        const Point2 row1 = detail::pair_at(lin[1], where + ".linear[1]");
        const Point2 t = detail::pair_at(detail::field(maps[i], "translation"), where + ".translation");
        affine.emplace_back(Matrix2{row0.x, row0.y, row1.x, row1.y}, t);
    }

    try {
        ConvexPolygon polygon(std::move(vertices), tol.geom);
        return Scheme(name.get<std::string>(), m.get<int>(), total.get<int>(), std::move(polygon),
                      std::move(affine), measure == "area" ? MeasureKind::area : MeasureKind::length, check,
                      tol);
    } catch (const InvalidGeometry& e) {
        throw ValidationError({std::string("base: ") + e.what()});
    }
}

inline Scheme load(std::string_view document, SchemeCheck check = SchemeCheck::full, const Tolerances& tol = {}) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(document);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    return scheme_from_json(doc, check, tol);
}

}  // namespace afrac
