#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include <afrac/geometry.hpp>

#include "oracles.hpp"

using namespace afrac;
using Catch::Approx;

namespace {

ConvexPolygon unit_square() { return ConvexPolygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }
ConvexPolygon koch_base() { return ConvexPolygon({{0, 0}, {1, 0}, {0.5, std::numbers::sqrt3 / 6.0}}); }

}  // namespace

TEST_CASE("area of unit square, triangle and segment", "[geometry]") {
    CHECK(area(unit_square()) == 1.0);
    CHECK(area(koch_base()) == Approx(std::numbers::sqrt3 / 12.0).epsilon(1e-15));
    CHECK(area(koch_base()) == Approx(0.1443375673).margin(1e-10));
    CHECK(area(ConvexPolygon({{0, 0}, {1, 0}})) == 0.0);
    CHECK(area(ConvexPolygon({{0.3, 0.4}})) == 0.0);
}

TEST_CASE("diameter", "[geometry]") {
    CHECK(diameter(unit_square()) == Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(diameter(ConvexPolygon({{2, 3}})) == 0.0);
    // Slanted sides are 1/sqrt3 long, so the base realizes the diameter.
    const auto k = koch_base();
    CHECK(distance(k[0], k[2]) == Approx(1.0 / std::sqrt(3.0)));
    CHECK(diameter(k) == Approx(1.0).epsilon(1e-15));
}

TEST_CASE("min_distance examples", "[geometry]") {
    const ConvexPolygon left({{0, 0}, {1.0 / 3.0, 0}});
    const ConvexPolygon right({{2.0 / 3.0, 0}, {1, 0}});
    CHECK(min_distance(left, right) == Approx(1.0 / 3.0).epsilon(1e-15));

    const ConvexPolygon next({{1, 0}, {2, 0}, {2, 1}, {1, 1}});
    CHECK(min_distance(unit_square(), next) == 0.0);
    CHECK(min_distance(unit_square(), unit_square()) == 0.0);

    // Point strictly inside: containment, not boundary contact.
    CHECK(min_distance(unit_square(), ConvexPolygon({{0.5, 0.5}})) == 0.0);
    CHECK(min_distance(ConvexPolygon({{3, 4}}), ConvexPolygon({{0, 0}})) == Approx(5.0));
}

TEST_CASE("intersection_area examples", "[geometry]") {
    CHECK(intersection_area(unit_square(), unit_square()) == Approx(1.0));
    const ConvexPolygon next({{1, 0}, {2, 0}, {2, 1}, {1, 1}});
    CHECK(intersection_area(unit_square(), next) == 0.0);
    const ConvexPolygon half({{0.5, 0}, {1.5, 0}, {1.5, 1}, {0.5, 1}});
    CHECK(intersection_area(unit_square(), half) == Approx(0.5).epsilon(1e-15));
    CHECK(oracle::grid_intersection_area(unit_square(), half, 400) == Approx(0.5).margin(1e-2));
}

TEST_CASE("intersection_length of collinear segments", "[geometry]") {
    const ConvexPolygon a({{0, 0}, {1, 0}});
    CHECK(intersection_length(a, ConvexPolygon({{0.5, 0}, {2, 0}})) == Approx(0.5));
    CHECK(intersection_length(a, ConvexPolygon({{1, 0}, {2, 0}})) == 0.0);
    CHECK(intersection_length(a, ConvexPolygon({{0.5, 0}, {0.5, 1}})) == 0.0);
}

TEST_CASE("apply and compose examples", "[geometry]") {
    const auto sq = unit_square();
    CHECK(apply(AffineMap2::identity(), sq) == sq);

    const auto small = apply(AffineMap2::scaling(1.0 / 3.0), sq);
    const ConvexPolygon expected({{0, 0}, {1.0 / 3.0, 0}, {1.0 / 3.0, 1.0 / 3.0}, {0, 1.0 / 3.0}});
    CHECK(small == expected);

    const AffineMap2 reflect({-1, 0, 0, 1}, {0, 0});
    const auto mirrored = apply(reflect, koch_base());
    CHECK(mirrored.signed_area() > 0.0);
    CHECK(area(mirrored) == Approx(area(koch_base())));

    const AffineMap2 m({0.3, 0.1, -0.2, 0.5}, {1, 2});
    CHECK(compose(AffineMap2::identity(), m) == m);
    CHECK(compose(m, AffineMap2::identity()) == m);
    const auto ninth = compose(AffineMap2::scaling(1.0 / 3.0), AffineMap2::scaling(1.0 / 3.0));
    CHECK(ninth.linear().a == Approx(1.0 / 9.0));
    CHECK(ninth.linear().d == Approx(1.0 / 9.0));

    const auto w1 = AffineMap2::scaling(1.0 / 3.0);
    const auto w2 = AffineMap2::scaling(1.0 / 3.0, {2.0 / 3.0, 0});
    CHECK(compose(w2, w1)({0, 0}).x == Approx(2.0 / 3.0));
}

TEST_CASE("singular and invalid inputs are rejected", "[geometry]") {
    CHECK_THROWS_AS(apply(AffineMap2({1, 2, 2, 4}, {0, 0}), unit_square()), SingularMap);
    CHECK_THROWS_AS(ConvexPolygon({}), InvalidGeometry);
    CHECK_THROWS_AS(ConvexPolygon({{0, 0}, {0, 0}}), InvalidGeometry);
    CHECK_THROWS_AS(ConvexPolygon({{0, 0}, {2, 0}, {1, 0.2}, {2, 2}, {0, 2}}), InvalidGeometry);
    CHECK_THROWS_AS(ConvexPolygon({{0, 0}, {1, 0}, {2, 0}}), InvalidGeometry);
    CHECK_THROWS_AS(ConvexPolygon({{0, NAN}}), InvalidGeometry);
    CHECK_THROWS_AS(AffineMap2({INFINITY, 0, 0, 1}, {0, 0}), InvalidGeometry);
    // Clockwise input is reordered rather than rejected.
    CHECK(ConvexPolygon({{0, 0}, {0, 1}, {1, 1}, {1, 0}}).signed_area() == Approx(1.0));
}

TEST_CASE("tiny contractive images stay valid", "[geometry]") {
    auto acc = AffineMap2::identity();
    for (int k = 0; k < 25; ++k) {
        acc = compose(acc, AffineMap2::scaling(1.0 / 3.0));
    }
    const auto cell = apply(acc, ConvexPolygon({{0, 0}, {1, 0}}));
    CHECK(diameter(cell) == Approx(std::pow(3.0, -25.0)).epsilon(1e-12));
}

TEST_CASE("property: area scales by |det|, similarity scales diameter", "[geometry][property]") {
    std::mt19937_64 rng(20240611);
    for (int trial = 0; trial < 200; ++trial) {
        const auto p = oracle::random_convex(rng);
        const auto m = oracle::random_map(rng);
        const double expected = std::abs(m.det()) * area(p);
        CHECK(std::abs(area(apply(m, p)) - expected) <= 1e-12 * expected);

        std::uniform_real_distribution<double> u(0.05, 0.95);
        const double rho = u(rng);
        const double theta = 6.0 * u(rng);
        const AffineMap2 sim({rho * std::cos(theta), -rho * std::sin(theta), rho * std::sin(theta),
                              rho * std::cos(theta)},
                             {u(rng), u(rng)});
        CHECK(std::abs(diameter(apply(sim, p)) - rho * diameter(p)) <= 1e-12 * rho * diameter(p));
    }
}

TEST_CASE("property: compose is associative", "[geometry][property]") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const auto a = oracle::random_map(rng);
        const auto b = oracle::random_map(rng);
        const auto c = oracle::random_map(rng);
        const auto l = compose(compose(a, b), c);
        const auto r = compose(a, compose(b, c));
        const double scale = 1.0 + std::abs(l.linear().a) + std::abs(l.linear().d) + norm(l.offset());
        CHECK(std::abs(l.linear().a - r.linear().a) <= 1e-12 * scale);
        CHECK(std::abs(l.linear().b - r.linear().b) <= 1e-12 * scale);
        CHECK(std::abs(l.linear().c - r.linear().c) <= 1e-12 * scale);
        CHECK(std::abs(l.linear().d - r.linear().d) <= 1e-12 * scale);
        CHECK(std::abs(l.offset().x - r.offset().x) <= 1e-12 * scale);
        CHECK(std::abs(l.offset().y - r.offset().y) <= 1e-12 * scale);
    }
}

TEST_CASE("property: min_distance against separating axes and sampling", "[geometry][property]") {
    std::mt19937_64 rng(99);
    constexpr int per_edge = 400;
    for (int trial = 0; trial < 100; ++trial) {
        const auto a = oracle::random_convex(rng, 1.5);
        const auto b = oracle::random_convex(rng, 1.5);
        const double d = min_distance(a, b);
        CHECK(d == min_distance(b, a));
        CHECK(min_distance(a, a) == 0.0);
        CHECK((d <= 1e-9) == oracle::intersects(a, b, 1e-9));
        if (d > 1e-9) {
            const double sampled = oracle::sampled_distance(a, b, per_edge);
            const double spacing = std::max(diameter(a), diameter(b)) * 2.0 / per_edge;
            CHECK(sampled >= d - 1e-12);
            CHECK(sampled <= d + spacing);
        }
        const double ia = intersection_area(a, b);
        CHECK(ia <= std::min(area(a), area(b)) + 1e-15);
        CHECK(ia == Approx(oracle::grid_intersection_area(a, b, 300)).margin(2e-2 * area(a) + 1e-3));
    }
}
