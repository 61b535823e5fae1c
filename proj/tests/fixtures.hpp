#pragma once

// Hand-built counterexample schemes shared by several test binaries.

#include <fstream>
#include <sstream>
#include <string>

#include <afrac/scheme.hpp>
#include <afrac/scheme_io.hpp>

namespace fixture {

inline std::string data_path(const std::string& name) { return std::string(AFRAC_TEST_DATA) + "/" + name; }

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

/// Carpet whose center square is shrunk by 0.9 about its center, leaving a
/// 1/60 gap to the edge squares and sqrt2/60 to the corner squares.
inline afrac::Scheme shrunk_carpet() {
    const auto carpet = afrac::builtin("carpet");
    auto maps = carpet.maps();
    maps[8] = afrac::AffineMap2::scaling(0.3, {0.35, 0.35});
    return afrac::Scheme("shrunk_carpet", 8, 9, carpet.base(), maps, afrac::MeasureKind::area,
                         afrac::SchemeCheck::structural);
}

/// Unit square with two kept bottom quadrants and two complement squares that
/// overlap in a region of area 1/8.
inline afrac::Scheme broken_overlap() {
    return afrac::load(read_file(data_path("data/broken_overlap.json")), afrac::SchemeCheck::structural);
}

}  // namespace fixture
