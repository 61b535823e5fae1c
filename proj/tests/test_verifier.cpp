#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include <afrac/verifier.hpp>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace afrac;
using Catch::Approx;

namespace {

/// Distance between axis-aligned boxes, used as an independent oracle for carpet cells.
double box_gap(const ConvexPolygon& a, const ConvexPolygon& b) {
    const auto ba = a.bounds();
    const auto bb = b.bounds();
    const double dx = std::max({0.0, bb.lo.x - ba.hi.x, ba.lo.x - bb.hi.x});
    const double dy = std::max({0.0, bb.lo.y - ba.hi.y, ba.lo.y - bb.hi.y});
    return std::hypot(dx, dy);
}

struct BruteSeparation {
    double pairwise;
    double forall_exists;
};

BruteSeparation brute_separation(const std::vector<ConvexPolygon>& cells) {
    double pairwise = std::numeric_limits<double>::infinity();
    double forall = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < cells.size(); ++i) {
        double far = 0.0;
        for (std::size_t j = 0; j < cells.size(); ++j) {
            if (i != j) {
                const double d = box_gap(cells[i], cells[j]);
                far = std::max(far, d);
                pairwise = std::min(pairwise, d);
            }
        }
        forall = std::min(forall, far);
    }
    return {pairwise, forall};
}

double sep(const CellTree& tree, SeparationMode mode) {
    return check_separation(tree, mode).extremal.at("epsilon0").get<double>();
}

}  // namespace

TEST_CASE("ratio is constant across depths for built-ins", "[verifier]") {
    const std::pair<const char*, double> cases[] = {{"carpet", 8.0}, {"pascal3", 2.0}, {"koch", 2.0}, {"cantor", 2.0}};
    for (const auto& [name, ratio] : cases) {
        INFO(name);
        const auto tree = build_tree(builtin(name), name == std::string("carpet") ? 5 : 6);
        VerifyOptions opts;
        opts.expected_ratio = ratio;
        const auto r = check_ratio(tree, opts);
        CHECK(r.pass);
        CHECK(r.extremal.at("r").get<double>() == Approx(ratio).margin(1e-9));
        CHECK(r.extremal.at("R").get<double>() == Approx(ratio).margin(1e-9));
        for (const auto& level : r.extremal.at("per_depth")) {
            CHECK(level.at("r").get<double>() == Approx(ratio).margin(1e-9));
            CHECK(level.at("R").get<double>() == Approx(ratio).margin(1e-9));
        }
    }
    const auto tree = build_tree(builtin("carpet"), 2);
    VerifyOptions wrong;
    wrong.expected_ratio = 7.0;
    const auto r = check_ratio(tree, wrong);
    CHECK_FALSE(r.pass);
    CHECK(r.witnesses.size() == 9);
}

TEST_CASE("adjacency", "[verifier]") {
    for (std::size_t depth = 1; depth <= 4; ++depth) {
        const auto r = check_adjacency(build_tree(builtin("carpet"), depth));
        CHECK(r.pass);
        CHECK(r.extremal.at("max_gap").get<double>() <= 1e-9);
    }
    const auto cantor = check_adjacency(build_tree(builtin("cantor"), 6));
    CHECK(cantor.pass);
    CHECK(cantor.extremal.at("max_gap").get<double>() <= 1e-15);

    const auto shrunk = build_tree(fixture::shrunk_carpet(), 3);
    const auto r = check_adjacency(shrunk);
    CHECK_FALSE(r.pass);
    CHECK(r.extremal.at("max_gap").get<double>() == Approx(std::sqrt(2.0) / 60.0).epsilon(1e-9));
    REQUIRE_FALSE(r.witnesses.empty());
    for (const auto& w : r.witnesses) {
        CHECK(w.value >= 1.0 / 60.0 * (1.0 - 1e-9) * std::pow(1.0 / 3.0, static_cast<double>(w.cells[0].size() - 1)));
        CHECK(replay_violation(shrunk, r, w));
    }
    CHECK(r.witnesses.front().cells.size() == 2);
    CHECK(r.witnesses.front().cells[1].is_complement());
}

TEST_CASE("accumulation", "[verifier]") {
    for (std::size_t depth = 1; depth <= 4; ++depth) {
        const auto r = check_accumulation(build_tree(builtin("carpet"), depth));
        CHECK(r.pass);
        CHECK(r.extremal.at("max_overlap").get<double>() <= 1e-12);
    }
    CHECK(check_accumulation(build_tree(builtin("cantor"), 6)).pass);

    const auto broken = build_tree(fixture::broken_overlap(), 3);
    const auto r = check_accumulation(broken);
    CHECK_FALSE(r.pass);
    CHECK(r.extremal.at("max_overlap").get<double>() == Approx(0.125).epsilon(1e-12));
    REQUIRE_FALSE(r.witnesses.empty());
    const auto it = std::find_if(r.witnesses.begin(), r.witnesses.end(),
                                 [](const Witness& w) { return w.cells[0].to_string() == "3"; });
    REQUIRE(it != r.witnesses.end());
    const auto& first = *it;
    CHECK(first.cells[1].to_string() == "4");
    CHECK(first.value == Approx(0.125));
    for (const auto& w : r.witnesses) {
        CHECK(replay_violation(broken, r, w));
    }
    // Cross-check the overlap with the sampling oracle.
    const auto* a = broken.find(first.cells[0]);
    const auto* b = broken.find(first.cells[1]);
    CHECK(oracle::grid_intersection_area(a->polygon, b->polygon, 400) == Approx(0.125).margin(5e-3));
}

TEST_CASE("diameter decay", "[verifier]") {
    const auto carpet = check_diameter(build_tree(builtin("carpet"), 4));
    CHECK(carpet.pass);
    for (const auto& f : carpet.extremal.at("decay")) {
        CHECK(f.get<double>() == Approx(1.0 / 3.0).margin(1e-9));
    }
    const auto koch = check_diameter(build_tree(builtin("koch"), 6));
    CHECK(koch.pass);
    for (const auto& f : koch.extremal.at("decay")) {
        CHECK(f.get<double>() == Approx(1.0 / std::sqrt(3.0)).margin(1e-6));
    }
    const auto cantor = check_diameter(build_tree(builtin("cantor"), 6));
    for (const auto& f : cantor.extremal.at("decay")) {
        CHECK(f.get<double>() == Approx(1.0 / 3.0).margin(1e-12));
    }
    CHECK_THROWS_AS(check_diameter(build_tree(builtin("carpet"), 1)), EmptyTree);

    VerifyOptions strict;
    strict.tol.lambda_max = 0.2;
    const auto tree = build_tree(builtin("carpet"), 3);
    const auto failing = check_diameter(tree, strict);
    CHECK_FALSE(failing.pass);
    for (const auto& w : failing.witnesses) {
        CHECK(replay_violation(tree, failing, w, strict));
    }
}

TEST_CASE("separation examples", "[verifier]") {
    const auto cantor3 = build_tree(builtin("cantor"), 3);
    const auto pw = check_separation(cantor3, SeparationMode::pairwise);
    CHECK(pw.extremal.at("epsilon0").get<double>() == Approx(1.0 / 27.0).epsilon(1e-12));
    const auto per = pw.extremal.at("per_depth");
    CHECK(per[0].get<double>() == Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(per[1].get<double>() == Approx(1.0 / 9.0).epsilon(1e-12));
    CHECK(per[2].get<double>() == Approx(1.0 / 27.0).epsilon(1e-12));

    const auto cantor1 = build_tree(builtin("cantor"), 1);
    const auto fe = check_separation(cantor1, SeparationMode::forall_exists);
    CHECK(fe.pass);
    CHECK(fe.extremal.at("epsilon0").get<double>() == Approx(1.0 / 3.0).epsilon(1e-12));

    const auto carpet1 = build_tree(builtin("carpet"), 1);
    const auto cp = check_separation(carpet1, SeparationMode::pairwise);
    CHECK_FALSE(cp.pass);
    CHECK(cp.extremal.at("epsilon0").get<double>() == 0.0);
    for (const auto& w : cp.witnesses) {
        CHECK(replay_violation(carpet1, cp, w));
    }
    const auto cf = check_separation(carpet1, SeparationMode::forall_exists);
    CHECK(cf.pass);
    CHECK(cf.extremal.at("epsilon0").get<double>() == Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("separation agrees with a brute-force box oracle on the carpet", "[verifier]") {
    const auto tree = build_tree(builtin("carpet"), 3);
    const auto pw = check_separation(tree, SeparationMode::pairwise).extremal.at("per_depth");
    const auto fe = check_separation(tree, SeparationMode::forall_exists).extremal.at("per_depth");
    for (std::size_t n = 1; n <= 3; ++n) {
        std::vector<ConvexPolygon> cells;
        for (const auto* c : tree.kept_cells(n)) {
            cells.push_back(c->polygon);
        }
        const auto brute = brute_separation(cells);
        CHECK(pw[n - 1].get<double>() == Approx(brute.pairwise).margin(1e-12));
        CHECK(fe[n - 1].get<double>() == Approx(brute.forall_exists).margin(1e-12));
    }
}

TEST_CASE("full_verify", "[verifier]") {
    const auto carpet = full_verify(build_tree(builtin("carpet"), 4));
    CHECK(carpet.overall);
    CHECK(carpet.mode == SeparationMode::forall_exists);
    REQUIRE(carpet.separation_alternate);
    CHECK_FALSE(carpet.separation_alternate->pass);

    CHECK(full_verify(build_tree(builtin("koch"), 6)).overall);
    CHECK(full_verify(build_tree(builtin("cantor"), 6)).overall);
    CHECK(full_verify(build_tree(builtin("pascal3"), 4)).overall);

    const auto shrunk = full_verify(build_tree(fixture::shrunk_carpet(), 3));
    CHECK_FALSE(shrunk.overall);
    for (const auto& c : shrunk.conditions) {
        CHECK(c.pass == (c.condition != Condition::adjacency));
    }

    const auto broken = full_verify(build_tree(fixture::broken_overlap(), 3));
    CHECK_FALSE(broken.overall);
    for (const auto& c : broken.conditions) {
        CHECK(c.pass == (c.condition != Condition::accumulation));
    }

    const auto json = to_json(carpet);
    CHECK(json.at("overall") == "pass");
    CHECK(json.at("conditions").size() == 5);
    CHECK(json.at("separation_mode") == "forall_exists");
    CHECK(json.at("checked_to_depth") == 4);

    CHECK_THROWS_AS(full_verify(build_tree(builtin("carpet"), 1)), EmptyTree);
}

TEST_CASE("property: pairwise never exceeds forall_exists", "[verifier][property]") {
    for (const auto& name : builtin_names()) {
        for (std::size_t depth = 1; depth <= 4; ++depth) {
            const auto tree = build_tree(builtin(name), depth);
            CHECK(sep(tree, SeparationMode::pairwise) <= sep(tree, SeparationMode::forall_exists));
        }
    }
    const auto tree = build_tree(fixture::shrunk_carpet(), 3);
    CHECK(sep(tree, SeparationMode::pairwise) <= sep(tree, SeparationMode::forall_exists));
}

TEST_CASE("property: reports are deterministic", "[verifier][property]") {
    for (const auto& name : builtin_names()) {
        const auto tree = build_tree(builtin(name), 4);
        CHECK(to_json(full_verify(tree)).dump() == to_json(full_verify(tree)).dump());
        const auto again = build_tree(builtin(name), 4);
        CHECK(to_json(full_verify(tree)).dump() == to_json(full_verify(again)).dump());
    }
}

TEST_CASE("property: every failure witness replays", "[verifier][property]") {
    VerifyOptions strict;
    strict.tol.lambda_max = 0.3;
    strict.expected_ratio = 3.0;
    strict.mode = SeparationMode::pairwise;
    for (const auto& scheme : {builtin("carpet"), builtin("koch"), fixture::shrunk_carpet(), fixture::broken_overlap()}) {
        const auto tree = build_tree(scheme, 3);
        const auto report = full_verify(tree, strict);
        for (const auto& c : report.conditions) {
            if (!c.pass) {
                REQUIRE_FALSE(c.witnesses.empty());
                for (const auto& w : c.witnesses) {
                    CHECK(replay_violation(tree, c, w, strict));
                }
            }
        }
    }
}
