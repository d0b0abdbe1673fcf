#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "lipflow/extension.hpp"

using namespace lipflow;

namespace {

// Independent reference: plain loop over anchors, no early exit tricks.
double naive_eval(const AnchorSet& a, const Vec& q) {
    double best = -1e300;
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        double d = 0.0;
        for (std::size_t c = 0; c < q.size(); ++c)
            d += (q[c] - a.points[i][c]) * (q[c] - a.points[i][c]);
        best = std::max(best, a.values[i] - a.tau * std::sqrt(d));
    }
    return best;
}

// Consistent-by-construction anchors: values taken from a cone field.
AnchorSet random_consistent(std::mt19937_64& rng, int k, int count, double tau) {
    std::uniform_real_distribution<double> u(0, 1);
    Vec apex(static_cast<std::size_t>(k));
    for (auto& c : apex) c = u(rng);
    AnchorSet a;
    a.tau = tau;
    for (int i = 0; i < count; ++i) {
        Vec p(static_cast<std::size_t>(k));
        for (auto& c : p) c = u(rng);
        a.values.push_back(0.3 + tau * norm2(p, apex));
        a.points.push_back(std::move(p));
    }
    return a;
}

}  // namespace

TEST_CASE("single-anchor cone") {
    AnchorSet a{{Vec{0.0}}, {1.0}, 1.0};
    CHECK(mcshane_eval(a, {0.5}) == doctest::Approx(0.5));
}

TEST_CASE("two-anchor max") {
    AnchorSet a{{Vec{0.0}, Vec{1.0}}, {0.0, 1.0}, 1.0};
    CHECK(mcshane_eval(a, {0.5}) == doctest::Approx(0.5));
}

TEST_CASE("anchors are reproduced and the budget holds") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 5; ++trial) {
        const AnchorSet a = random_consistent(rng, 2, 25, 0.8);
        std::vector<Vec> queries;
        const int n = 33;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                queries.push_back({static_cast<double>(i) / (n - 1),
                                   static_cast<double>(j) / (n - 1)});
        const std::vector<double> ext = mcshane_extend(a, queries);

        for (std::size_t i = 0; i < a.points.size(); ++i)
            CHECK(std::abs(mcshane_eval(a, a.points[i]) - a.values[i]) <= 1e-12);

        std::vector<Vec> all = queries;
        std::vector<double> allv = ext;
        for (std::size_t i = 0; i < a.points.size(); ++i) {
            all.push_back(a.points[i]);
            allv.push_back(mcshane_eval(a, a.points[i]));
        }
        for (std::size_t i = 0; i < all.size(); ++i)
            for (std::size_t j = i + 1; j < all.size(); ++j) {
                const double d = norm2(all[i], all[j]);
                CHECK(std::abs(allv[i] - allv[j]) <= a.tau * d + 1e-9);
            }
    }
}

TEST_CASE("matches an independent reference evaluation") {
    std::mt19937_64 rng(5);
    const AnchorSet a = random_consistent(rng, 2, 30, 0.9);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 200; ++i) {
        const Vec q{u(rng), u(rng)};
        CHECK(mcshane_eval(a, q) == doctest::Approx(naive_eval(a, q)).epsilon(1e-14));
    }
}

TEST_CASE("adding a dominated anchor changes nothing") {
    std::mt19937_64 rng(9);
    AnchorSet a = random_consistent(rng, 1, 10, 0.7);
    const Vec extra{0.42};
    const double at_extra = mcshane_eval(a, extra);
    AnchorSet bigger = a;
    bigger.points.push_back(extra);
    bigger.values.push_back(at_extra);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 100; ++i) {
        const Vec q{u(rng)};
        CHECK(std::abs(mcshane_eval(a, q) - mcshane_eval(bigger, q)) <= 1e-12);
    }
}

TEST_CASE("inconsistent anchors are rejected") {
    AnchorSet bad{{Vec{0.0}, Vec{0.1}}, {0.0, 0.9}, 1.0};
    CHECK_THROWS_WITH_AS(mcshane_extend(bad, {Vec{0.5}}), "not tau-extendable",
                         std::invalid_argument);
    AnchorSet dup{{Vec{0.2}, Vec{0.2}}, {0.1, 0.1}, 1.0};
    CHECK_THROWS_AS(mcshane_extend(dup, {Vec{0.5}}), std::invalid_argument);
    AnchorSet empty;
    CHECK_THROWS_AS(validate_anchors(empty), std::invalid_argument);
}
