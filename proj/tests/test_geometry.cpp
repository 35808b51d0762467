#include <catch2/catch_amalgamated.hpp>

#include "hardylab/geometry.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace hardylab;
using Catch::Approx;

namespace {
KGeometry unit_square() {
    return KGeometry::polygon_boundary({{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}});
}
} // namespace

TEST_CASE("point geometry closed forms", "[geometry]") {
    auto g = KGeometry::point(3);
    Vec x = {0.0, 0.0, 2.0};
    auto s = g.sample(x);
    CHECK(s.d == Approx(2.0));
    CHECK(s.grad_d[2] == Approx(1.0));
    CHECK(s.laplacian_d == Approx(1.0).epsilon(1e-5)); // (N-1)/|x| = 1
    CHECK_FALSE(s.on_ridge);
}

TEST_CASE("affine plane closed forms", "[geometry]") {
    // K = the x1-axis in R^3 (codimension 2), x = (5, 3, 4)
    auto g = KGeometry::affine_plane(3, 2);
    Vec x = {5.0, 3.0, 4.0};
    auto s = g.sample(x);
    CHECK(s.d == Approx(5.0));
    CHECK(s.grad_d[0] == Approx(0.0).margin(1e-15));
    CHECK(s.grad_d[1] == Approx(0.6));
    CHECK(s.grad_d[2] == Approx(0.8));
    CHECK(s.laplacian_d == Approx((2 - 1) / 5.0).epsilon(1e-5));
}

TEST_CASE("ball boundary distance", "[geometry]") {
    auto g = KGeometry::ball_boundary(2, 1.0);
    Vec x = {0.5, 0.0};
    auto s = g.sample(x);
    CHECK(s.d == Approx(0.5));
    CHECK(s.laplacian_d == Approx(-2.0).epsilon(1e-4)); // -(N-1)/|x|
    CHECK(s.grad_d[0] == Approx(-1.0));
}

TEST_CASE("sample on K is rejected", "[geometry]") {
    auto g = KGeometry::point(2);
    CHECK_THROWS_AS(g.sample({0.0, 0.0}), std::domain_error);
}

TEST_CASE("eikonal property across geometries", "[geometry]") {
    const std::uint64_t seed = 99;
    std::vector<KGeometry> geoms;
    geoms.push_back(KGeometry::point(3));
    geoms.push_back(KGeometry::affine_plane(4, 2));
    geoms.push_back(KGeometry::ball_boundary(3, 1.0));
    geoms.push_back(unit_square());
    geoms.push_back(KGeometry::canal_section(4, 2, 1.0, false));
    geoms.push_back(KGeometry::polytope_in_canal(6, 1.0));
    for (const auto& g : geoms) {
        auto pts = sample_domain(g, 60, Rng(seed));
        for (const auto& x : pts) {
            auto s = g.sample(x);
            if (s.on_ridge) continue;
            CHECK(geo_detail::norm(s.grad_d) == Approx(1.0).epsilon(1e-6));
        }
    }
}

TEST_CASE("finite-difference Laplacian matches closed forms over d in [0.01, 10]",
          "[geometry]") {
    auto point = KGeometry::point(3);
    auto affine = KGeometry::affine_plane(3, 2);
    for (double d = 0.01; d <= 10.0; d *= 3.1) {
        auto sp = point.sample({0.0, d / std::sqrt(2.0), d / std::sqrt(2.0)});
        CHECK(sp.laplacian_d == Approx(2.0 / d).epsilon(1e-4));
        auto sa = affine.sample({1.3, d, 0.0});
        CHECK(sa.laplacian_d == Approx(1.0 / d).epsilon(1e-4));
    }
}

TEST_CASE("near-K asymptotic d lap d + 1 - k = O(d) for the smooth boundary",
          "[geometry]") {
    auto g = KGeometry::ball_boundary(3, 1.0);
    std::vector<double> lds, lqs;
    for (double d = 1e-3; d <= 1e-1; d *= 1.5) {
        Vec x = {1.0 - d, 0.0, 0.0};
        auto s = g.sample(x);
        const double q = std::abs(s.d * s.laplacian_d + 1.0 - 1.0);
        lds.push_back(std::log(d));
        lqs.push_back(std::log(q));
    }
    auto f = oracle::ols(lds, lqs);
    CHECK(f.slope >= 1.0 - 0.1);
}

TEST_CASE("cylinder decomposition: d lap d + 1 - k equals the section quantity",
          "[geometry]") {
    auto inner = KGeometry::canal_section(4, 2, 1.0, false);
    auto outer = KGeometry::canal_section(5, 3, 1.0, true);
    for (const auto* g : {&inner, &outer}) {
        auto pts = sample_domain(*g, 100, Rng(5));
        for (const auto& x : pts) {
            auto s = g->sample(x);
            if (!s.laplacian_reliable) continue;
            const double lhs = s.d * s.laplacian_d + 1.0 - double(g->codim());
            CHECK(lhs == Approx(g->canal_section_quantity(x)).margin(1e-4));
        }
    }
}

TEST_CASE("condition (C): point geometry satisfied for any p != N", "[geometry]") {
    auto g = KGeometry::point(3);
    for (double p : {1.5, 2.0, 4.0}) {
        auto rep = check_condition_c(g, {p, 3, 3, M_E}, 200, 7);
        CHECK(rep.verdict == ConditionCReport::Verdict::satisfied);
        CHECK(std::abs(rep.worst_value) < 1e-4);
    }
}

TEST_CASE("condition (C): affine plane vanishes within FD error", "[geometry]") {
    auto g = KGeometry::affine_plane(3, 2);
    for (double p : {1.5, 3.0}) {
        auto rep = check_condition_c(g, {p, 2, 3, M_E}, 200, 11);
        CHECK(rep.verdict == ConditionCReport::Verdict::satisfied);
        CHECK(std::abs(rep.worst_value) < 1e-4);
    }
}

TEST_CASE("condition (C): convex polygon boundary satisfied for p = 2", "[geometry]") {
    auto rep = check_condition_c(unit_square(), {2.0, 1, 2, M_E}, 300, 13);
    CHECK(rep.verdict == ConditionCReport::Verdict::satisfied);
}

TEST_CASE("condition (C): canal verdicts flip with the sign of p - k", "[geometry]") {
    auto inner = KGeometry::canal_section(4, 2, 1.0, false);
    auto outer = KGeometry::canal_section(4, 2, 1.0, true);

    // inner canal: satisfied for p > k, violated for p < k
    CHECK(check_condition_c(inner, {3.0, 2, 4, M_E}, 150, 17).verdict ==
          ConditionCReport::Verdict::satisfied);
    CHECK(check_condition_c(inner, {1.5, 2, 4, M_E}, 150, 17).verdict ==
          ConditionCReport::Verdict::violated);

    // outer canal: satisfied for p < k, violated for p > k
    CHECK(check_condition_c(outer, {1.5, 2, 4, M_E}, 150, 19).verdict ==
          ConditionCReport::Verdict::satisfied);
    CHECK(check_condition_c(outer, {3.0, 2, 4, M_E}, 150, 19).verdict ==
          ConditionCReport::Verdict::violated);
}

TEST_CASE("condition (C): inscribed polytope with p > k", "[geometry]") {
    auto g = KGeometry::polytope_in_canal(6, 1.0);
    auto rep = check_condition_c(g, {3.0, 2, 3, M_E}, 200, 23);
    CHECK(rep.verdict == ConditionCReport::Verdict::satisfied);
    CHECK(rep.interior_foot_fraction == 1.0);
    CHECK_FALSE(rep.caveat.empty());
}

TEST_CASE("condition (C') for p = k", "[geometry]") {
    // point geometry, p = k = N: d lap d + 1 - k = 0, (C') holds
    auto rep = check_condition_c(KGeometry::point(2), {2.0, 2, 2, M_E}, 100, 29);
    CHECK(rep.degenerate);
    CHECK(rep.verdict == ConditionCReport::Verdict::satisfied);

    // p = k = 2 on the inner canal has d lap d + 1 - k < 0, so (C') fails there
    auto inner = KGeometry::canal_section(4, 2, 1.0, false);
    auto rep2 = check_condition_c(inner, {2.0, 2, 4, M_E}, 150, 31);
    CHECK(rep2.verdict == ConditionCReport::Verdict::violated);
}

TEST_CASE("empty sample set is a domain error", "[geometry]") {
    CHECK_THROWS_AS(check_condition_c(KGeometry::point(3), {2.0, 3, 3, M_E},
                                      std::vector<Vec>{}),
                    std::domain_error);
}

TEST_CASE("ridge flagging on the square diagonal", "[geometry]") {
    auto g = unit_square();
    auto s = g.sample({0.5, 0.5 + 1e-11});
    CHECK((s.on_ridge || !s.laplacian_reliable));
}

TEST_CASE("non-convex polygon rejected", "[geometry]") {
    CHECK_THROWS_AS(KGeometry::polygon_boundary(
                        {{0.0, 0.0}, {2.0, 0.0}, {1.0, 0.5}, {2.0, 2.0}, {0.0, 2.0}}),
                    std::invalid_argument);
}

TEST_CASE("geometry from declarative config", "[geometry]") {
    std::map<std::string, std::string> kv;
    kv["variant"] = "affine";
    kv["dimension"] = "4";
    kv["codimension"] = "2";
    auto g = KGeometry::from_config(kv);
    CHECK(g.variant() == KGeometry::Variant::affine_plane);
    CHECK(g.dimension() == 4);
    CHECK(g.codim() == 2);

    std::map<std::string, std::string> poly;
    poly["variant"] = "polygon";
    poly["dimension"] = "2";
    poly["vertices"] = "0,0; 1,0; 1,1; 0,1";
    auto gp = KGeometry::from_config(poly);
    CHECK(gp.variant() == KGeometry::Variant::polygon_boundary);

    std::map<std::string, std::string> bad;
    bad["variant"] = "torus";
    CHECK_THROWS_AS(KGeometry::from_config(bad), std::invalid_argument);
}

TEST_CASE("samplers are deterministic given the seed", "[geometry]") {
    auto g = KGeometry::canal_section(4, 2, 1.0, true);
    auto a = sample_domain(g, 25, Rng(42));
    auto b = sample_domain(g, 25, Rng(42));
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) CHECK(a[i][j] == b[i][j]);
}
