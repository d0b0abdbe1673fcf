#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lipflow/grid.hpp"

namespace lipflow {

/// A concrete R^k action with closed-form orbits. `dist` is the state metric;
/// the group carries group_scale * Euclidean distance. `rho` is the orbital
/// extended metric inf{d(g,e) : g.x = y} (infinity across distinct orbits).
struct Flow {
    std::string name;
    int k = 1;
    int state_dim = 1;
    double group_scale = 1.0;
    std::function<Vec(const Vec& t, const Vec& x)> act;
    std::function<double(const Vec& x, const Vec& y)> dist;
    std::function<double(const Vec& x)> h1;
    std::function<double(const Vec& x, const Vec& y)> rho;
    std::vector<Vec> fixed_points;

    bool is_fixed_point(const Vec& x, double tol = 1e-12) const;
};

/// Section point set with lacunarity radius and injective labeling into [1,2].
struct CrossSection {
    std::vector<Vec> points;
    double lacunarity = 4.0;
    std::function<double(const Vec& s)> alpha;
    std::function<std::pair<Vec, double>(const Vec& x)> nearest;  // (point, rho)
};

struct LocalSection {
    Vec base;
    double a = 1.0;
    std::vector<Vec> points;  // singleton {base} by default
};

/// Torus T^k with act(t,x) = x + t/group_scale mod 1; no fixed points.
Flow torus_translation_flow(int k, double group_scale);

/// x' = x(1-x) on [0,1], solved in closed form; fixed points {0, 1}.
Flow logistic_interval_flow();

double orbit_metric_rho(const Flow& flow, const Vec& x, const Vec& y);

/// S = {base} on a torus flow; requires group_scale >= 8 so orbit returns
/// clear the lacunarity-4 ball.
CrossSection singleton_cross_section(const Flow& flow, const Vec& base);

/// Singleton local section at p; validates injectivity of (t,s) -> act(t,s)
/// on [-a,a]^k x {p} by seeded sampling.
LocalSection local_section_at(const Flow& flow, const Vec& p, double a,
                              std::uint64_t seed = 2024);

/// All t in [window_lo, window_hi]^k with act(t,x) landing on the section base.
std::vector<Vec> marker_set(const Flow& flow, const LocalSection& section, const Vec& x,
                            const Vec& window_lo, const Vec& window_hi);

}  // namespace lipflow
