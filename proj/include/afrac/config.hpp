#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>

#include "errors.hpp"

namespace afrac {

/// Numeric tolerances consumed by geometry predicates and condition checks.
struct Tolerances {
    double geom = 1e-9;         ///< absolute distance tolerance for geometric predicates
    double measure_rel = 1e-12; ///< relative tolerance for measure identities
    double area = 1e-12;        ///< complement overlap bound, relative to the base measure
    double ratio = 1e-9;        ///< smallest admissible kept/complement ratio; also expected-ratio tolerance
    double sep = 1e-6;          ///< smallest admissible separation constant
    double lambda_max = 0.999;  ///< largest admissible per-step diameter decay factor
};

/// Guards against exponential blowups in enumeration and pair sweeps.
struct Limits {
    std::size_t cells = 1'000'000;
    std::size_t words = 1'000'000;
    std::size_t pairs = 100'000'000;

    static Limits unlimited() {
        constexpr auto big = std::numeric_limits<std::size_t>::max();
        return {big, big, big};
    }
};

/// base^exp, saturating at SIZE_MAX.
inline std::size_t saturating_pow(std::size_t base, std::size_t exp) {
    std::size_t out = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        if (base != 0 && out > std::numeric_limits<std::size_t>::max() / base) {
            return std::numeric_limits<std::size_t>::max();
        }
        out *= base;
    }
    return out;
}

inline void require_within_cap(std::size_t count, std::size_t cap, const char* what) {
    if (count > cap) {
        throw CapExceeded(std::string(what) + ": " + std::to_string(count) + " exceeds cap " +
                          std::to_string(cap));
    }
}

}  // namespace afrac
