#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "lipflow/borel.hpp"

using namespace lipflow;

namespace {

CrossSection logistic_section(const Flow& flow, const Vec& base) {
    CrossSection s;
    s.points = {base};
    s.lacunarity = 4.0;
    s.alpha = [](const Vec&) { return 1.5; };
    s.nearest = [flow, base](const Vec& x) { return std::make_pair(base, flow.rho(x, base)); };
    return s;
}

}  // namespace

TEST_CASE("section projection and observable in closed form") {
    const Flow f = torus_translation_flow(1, 8.0);
    const CrossSection s = singleton_cross_section(f, {0.0});

    auto proj = project_to_section(s, {0.0625});
    REQUIRE(proj.has_value());
    CHECK(proj->second == doctest::Approx(0.5));
    CHECK(!project_to_section(s, {0.5}).has_value());

    CHECK(phi_observable(s, {0.0}) == doctest::Approx(2.0 / 3.0));
    CHECK(phi_observable(s, {0.0625}) == doctest::Approx(1.0 / 3.0));
    CHECK(phi_observable(s, {0.5}) == 0.0);
    CHECK(phi_observable(s, {0.25}) == 0.0);  // rho = 2 >= 1
}

TEST_CASE("embedded point samples the orbit observable") {
    const Flow f = torus_translation_flow(1, 8.0);
    const CrossSection s = singleton_cross_section(f, {0.0});
    const GridSpec w = default_window(1);
    CHECK(w.size() == 161);
    CHECK(w.spacing(0) == doctest::Approx(0.25));

    const GridFunction phi = embed_point(s, f, {0.0}, w);
    CHECK(phi.at({0.0}) == doctest::Approx(2.0 / 3.0));
    CHECK(phi.at({0.5}) == doctest::Approx(1.0 / 3.0));
    CHECK(phi.at({4.0}) == 0.0);
    // Orbit period 8 in group time: the bump repeats.
    CHECK(phi.at({8.0}) == doctest::Approx(2.0 / 3.0));
    CHECK(phi.at({-8.0}) == doctest::Approx(2.0 / 3.0));
    // Slope of the tent is 1/alpha = 2/3 < 1.
    CHECK(lip_const_estimate(phi) <= 2.0 / 3.0 + 1e-12);
}

TEST_CASE("verification over a torus point cloud") {
    const Flow f = torus_translation_flow(1, 8.0);
    const CrossSection s = singleton_cross_section(f, {0.0});
    const std::vector<Vec> pts{{0.0}, {0.1}, {0.37}, {0.62}, {0.9}};
    const EmbeddingReport rep = verify_embedding(s, f, pts, default_window(1), 20);
    CHECK(rep.num_points == 5);
    CHECK(rep.max_lipschitz_violation <= 1e-9);
    CHECK(rep.max_equivariance_residual <= 1e-12);
    CHECK(rep.min_pairwise_separation > 0.0);
}

TEST_CASE("two-dimensional torus embedding") {
    const Flow f = torus_translation_flow(2, 8.0);
    const CrossSection s = singleton_cross_section(f, {0.0, 0.0});
    const GridSpec w = default_window(2);
    CHECK(w.size() == 41u * 41u);
    const std::vector<Vec> pts{{0.0, 0.0}, {0.2, 0.7}, {0.55, 0.15}};
    const EmbeddingReport rep = verify_embedding(s, f, pts, w, 20);
    CHECK(rep.max_lipschitz_violation <= 1e-9);
    CHECK(rep.max_equivariance_residual <= 1e-12);
    CHECK(rep.min_pairwise_separation > 0.0);
}

TEST_CASE("logistic embedding separates states and kills fixed points") {
    const Flow f = logistic_interval_flow();
    const CrossSection s = logistic_section(f, {0.5});
    const GridSpec w = default_window(1);

    // A fixed point never meets the section: its image is identically zero.
    const GridFunction at0 = embed_point(s, f, {0.0}, w);
    for (double v : at0.values) CHECK(v == 0.0);
    const GridFunction at1 = embed_point(s, f, {1.0}, w);
    for (double v : at1.values) CHECK(v == 0.0);

    const GridFunction mid = embed_point(s, f, {0.5}, w);
    CHECK(mid.at({0.0}) == doctest::Approx(2.0 / 3.0));
    CHECK(lip1_metric(at0, mid, 20) > 0.0);

    const std::vector<Vec> pts{{0.2}, {0.5}, {0.8}};
    const EmbeddingReport rep = verify_embedding(s, f, pts, w, 20);
    CHECK(rep.max_lipschitz_violation <= 1e-9);
    CHECK(rep.min_pairwise_separation > 0.0);
}
