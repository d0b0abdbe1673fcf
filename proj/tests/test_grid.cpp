#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "lipflow/grid.hpp"

using namespace lipflow;

namespace {

GridFunction sample1d(double lo, double hi, int n, double (*fn)(double)) {
    GridFunction f;
    f.grid = GridSpec::cube(1, lo, hi, n);
    f.values.resize(f.grid.size());
    for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] = fn(f.grid.point(i)[0]);
    return f;
}

// Random 1-Lipschitz function: cumulative sum of bounded increments.
GridFunction random_lip1(std::mt19937_64& rng, int n) {
    GridFunction f;
    f.grid = GridSpec::cube(1, 0.0, 1.0, n);
    f.values.resize(f.grid.size());
    const double h = f.grid.spacing(0);
    std::uniform_real_distribution<double> inc(-h, h);
    double v = 0.5;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        f.values[i] = v;
        v += inc(rng);
    }
    return f;
}

}  // namespace

TEST_CASE("lipschitz estimate on canonical shapes") {
    CHECK(lip_const_estimate(sample1d(0, 1, 101, [](double t) { return std::abs(t - 0.5); })) ==
          doctest::Approx(1.0));
    CHECK(lip_const_estimate(sample1d(0, 1, 101, [](double) { return 0.3; })) == 0.0);
    // Quadratic: steepest pair is the last two samples, slope 0.99 + 1.00.
    CHECK(lip_const_estimate(sample1d(0, 1, 101, [](double t) { return t * t; })) ==
          doctest::Approx(1.99));
}

TEST_CASE("degenerate grid rejected") {
    GridFunction f;
    f.grid.origin = {0.0};
    f.grid.extent = {1.0};
    f.grid.points_per_axis = {1};
    f.values = {1.0};
    CHECK_THROWS_WITH_AS(lip_const_estimate(f), "degenerate grid", std::invalid_argument);
    CHECK_THROWS_AS(GridSpec::cube(1, 0.0, 1.0, 1), std::invalid_argument);
}

TEST_CASE("truncated function-space metric") {
    const GridSpec g = GridSpec::cube(1, -20, 20, 81);
    GridFunction f1{g, std::vector<double>(g.size(), 0.0)};
    GridFunction f2{g, std::vector<double>(g.size(), 1.0)};
    CHECK(lip1_metric(f1, f2, 20) == doctest::Approx(1.0 - std::ldexp(1.0, -20)));
    CHECK(lip1_metric(f1, f1, 20) == 0.0);

    const GridSpec g2 = GridSpec::cube(1, -2, 2, 81);
    GridFunction h1{g2, std::vector<double>(g2.size(), 0.0)};
    GridFunction h2{g2, {}};
    h2.values.resize(g2.size());
    for (std::size_t i = 0; i < h2.values.size(); ++i)
        h2.values[i] = std::min(1.0, std::abs(g2.point(i)[0]));
    CHECK(lip1_metric(h1, h2, 2) == doctest::Approx(0.75));

    GridFunction off{GridSpec::cube(1, -1, 1, 11), std::vector<double>(11, 0.0)};
    CHECK_THROWS_AS(lip1_metric(h1, off, 2), std::invalid_argument);
}

TEST_CASE("metric axioms on sampled functions") {
    std::mt19937_64 rng(11);
    const GridSpec g = GridSpec::cube(1, -3, 3, 61);
    auto rand_fn = [&] {
        GridFunction f{g, {}};
        f.values.resize(g.size());
        std::uniform_real_distribution<double> u(0, 1);
        for (auto& v : f.values) v = u(rng);
        return f;
    };
    const GridFunction a = rand_fn(), b = rand_fn(), c = rand_fn();
    CHECK(lip1_metric(a, b, 3) == doctest::Approx(lip1_metric(b, a, 3)).epsilon(1e-15));
    CHECK(lip1_metric(a, c, 3) <= lip1_metric(a, b, 3) + lip1_metric(b, c, 3) + 1e-12);
    CHECK(lip1_metric(a, a, 3) == 0.0);
    CHECK(lip1_metric(a, b, 3) > 0.0);
}

TEST_CASE("pointwise max and min") {
    std::mt19937_64 rng(7);
    const GridFunction f = random_lip1(rng, 101);
    const GridFunction same = lip_max(f, f);
    for (std::size_t i = 0; i < f.values.size(); ++i) CHECK(same.values[i] == f.values[i]);

    GridFunction c{f.grid, std::vector<double>(f.grid.size(), 0.2)};
    GridFunction id = f;
    for (std::size_t i = 0; i < id.values.size(); ++i) id.values[i] = id.grid.point(i)[0];
    const GridFunction m = lip_max(c, id);
    CHECK(m.at({0.1}) == doctest::Approx(0.2));
    CHECK(m.at({0.9}) == doctest::Approx(0.9));

    for (int trial = 0; trial < 20; ++trial) {
        const GridFunction u = random_lip1(rng, 101), v = random_lip1(rng, 101);
        const double tu = lip_const_all_pairs(u), tv = lip_const_all_pairs(v);
        CHECK(lip_const_all_pairs(lip_max(u, v)) <= std::max(tu, tv) + 1e-12);
        CHECK(lip_const_all_pairs(lip_min(u, v)) <= std::max(tu, tv) + 1e-12);
    }
}

TEST_CASE("clamp to unit range") {
    const GridSpec g = GridSpec::cube(1, 0, 1, 11);
    CHECK(clamp01(GridFunction{g, std::vector<double>(11, 1.5)}).values[0] == 1.0);
    CHECK(clamp01(GridFunction{g, std::vector<double>(11, -0.2)}).values[0] == 0.0);
    GridFunction f{g, {}};
    f.values.resize(11);
    for (std::size_t i = 0; i < 11; ++i) f.values[i] = 2.0 * g.point(i)[0] - 0.5;
    const GridFunction cf = clamp01(f);
    CHECK(cf.at({0.0}) == doctest::Approx(0.0));
    CHECK(cf.at({0.5}) == doctest::Approx(0.5));
    CHECK(cf.at({1.0}) == doctest::Approx(1.0));
}

TEST_CASE("composite budget arithmetic") {
    CHECK(composite_lip_bound(0.9, 0, 0) == doctest::Approx(0.9));
    CHECK(composite_lip_bound(0.5, 0.5, 0.25) == doctest::Approx(1.5));
    CHECK_THROWS_AS(composite_lip_bound(0.5, 1.0, 0.1), std::invalid_argument);
}

TEST_CASE("finite-difference gradient bound") {
    const GridSpec g = GridSpec::cube(2, 0, 1, 21);
    GridFunction f{g, {}};
    f.values.resize(g.size());
    for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] = 0.5 * g.point(i)[0];
    const GradientReport rep = gradient_bound_check(f, 0.5, 1e-12);
    CHECK(rep.max_grad_norm == doctest::Approx(0.5));
    CHECK(rep.within_budget);

    GridFunction c{g, std::vector<double>(g.size(), 0.7)};
    CHECK(gradient_bound_check(c, 0.0, 1e-12).max_grad_norm == 0.0);
}

TEST_CASE("csv round trip is bit exact") {
    std::mt19937_64 rng(3);
    GridFunction f{GridSpec::cube(2, -1.5, 2.5, 7), {}};
    f.values.resize(f.grid.size());
    std::uniform_real_distribution<double> u(-10, 10);
    for (auto& v : f.values) v = u(rng);

    std::stringstream ss;
    write_csv(f, ss);
    const GridFunction back = read_csv(ss);
    REQUIRE(back.values.size() == f.values.size());
    for (std::size_t i = 0; i < f.values.size(); ++i) CHECK(back.values[i] == f.values[i]);
    for (int axis = 0; axis < 2; ++axis) {
        CHECK(back.grid.origin[static_cast<std::size_t>(axis)] ==
              doctest::Approx(f.grid.origin[static_cast<std::size_t>(axis)]).epsilon(1e-15));
        CHECK(back.grid.points_per_axis[static_cast<std::size_t>(axis)] ==
              f.grid.points_per_axis[static_cast<std::size_t>(axis)]);
    }
}

TEST_CASE("estimate stays under declared budget for random functions") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        const GridFunction f = random_lip1(rng, 201);
        CHECK(lip_const_estimate(f) <= 1.0 + 1e-12);
    }
}
