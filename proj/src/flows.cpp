#include "lipflow/flows.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace lipflow {
namespace {

double wrap_unit(double d) {
    // Representative of d mod 1 in [-0.5, 0.5).
    return d - std::floor(d + 0.5);
}

double circle_dist(double x, double y) { return std::abs(wrap_unit(x - y)); }

}  // namespace

bool Flow::is_fixed_point(const Vec& x, double tol) const {
    for (const Vec& p : fixed_points)
        if (dist(x, p) < tol) return true;
    return false;
}

Flow torus_translation_flow(int k, double group_scale) {
    if (k < 1) throw std::invalid_argument("torus_translation_flow: k must be positive");
    if (group_scale <= 0) throw std::invalid_argument("torus_translation_flow: bad scale");
    Flow f;
    f.name = "torus" + std::to_string(k);
    f.k = k;
    f.state_dim = k;
    f.group_scale = group_scale;
    f.act = [k, group_scale](const Vec& t, const Vec& x) {
        Vec y(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) {
            double v = x[static_cast<std::size_t>(i)] + t[static_cast<std::size_t>(i)] / group_scale;
            v -= std::floor(v);
            y[static_cast<std::size_t>(i)] = v;
        }
        return y;
    };
    f.dist = [k](const Vec& x, const Vec& y) {
        double acc = 0.0;
        for (int i = 0; i < k; ++i) {
            const double d = circle_dist(x[static_cast<std::size_t>(i)], y[static_cast<std::size_t>(i)]);
            acc += d * d;
        }
        return std::sqrt(acc);
    };
    f.h1 = [](const Vec& x) { return 0.25 + circle_dist(x[0], 0.0); };
    f.rho = [k, group_scale](const Vec& x, const Vec& y) {
        double acc = 0.0;
        for (int i = 0; i < k; ++i) {
            const double d = wrap_unit(y[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(i)]);
            acc += d * d;
        }
        return group_scale * std::sqrt(acc);
    };
    return f;
}

Flow logistic_interval_flow() {
    Flow f;
    f.name = "logistic";
    f.k = 1;
    f.state_dim = 1;
    f.group_scale = 1.0;
    f.act = [](const Vec& t, const Vec& x) {
        const double e = std::exp(t[0]);
        return Vec{x[0] * e / (1.0 - x[0] + x[0] * e)};
    };
    f.dist = [](const Vec& x, const Vec& y) { return std::abs(x[0] - y[0]); };
    f.h1 = [](const Vec& x) { return x[0]; };
    f.rho = [](const Vec& x, const Vec& y) {
        if (std::abs(x[0] - y[0]) == 0.0) return 0.0;
        const bool xf = (x[0] == 0.0 || x[0] == 1.0);
        const bool yf = (y[0] == 0.0 || y[0] == 1.0);
        if (xf || yf) return std::numeric_limits<double>::infinity();
        return std::abs(std::log((y[0] * (1.0 - x[0])) / (x[0] * (1.0 - y[0]))));
    };
    f.fixed_points = {Vec{0.0}, Vec{1.0}};
    return f;
}

double orbit_metric_rho(const Flow& flow, const Vec& x, const Vec& y) { return flow.rho(x, y); }

CrossSection singleton_cross_section(const Flow& flow, const Vec& base) {
    if (flow.name.rfind("torus", 0) != 0)
        throw std::invalid_argument("singleton_cross_section: torus flows only");
    if (flow.group_scale < 8.0)
        throw std::invalid_argument("lacunarity violated");
    CrossSection s;
    s.points = {base};
    s.lacunarity = 4.0;
    s.alpha = [](const Vec&) { return 1.5; };
    const Flow fl = flow;
    s.nearest = [fl, base](const Vec& x) { return std::make_pair(base, fl.rho(x, base)); };
    return s;
}

LocalSection local_section_at(const Flow& flow, const Vec& p, double a, std::uint64_t seed) {
    if (flow.is_fixed_point(p))
        throw std::invalid_argument("local_section_at: base is a fixed point");
    if (a <= 0) throw std::invalid_argument("local_section_at: a must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> box(-a, a);
    const std::size_t k = static_cast<std::size_t>(flow.k);
    for (int trial = 0; trial < 10000; ++trial) {
        Vec s(k), t(k);
        for (std::size_t i = 0; i < k; ++i) s[i] = box(rng);
        for (std::size_t i = 0; i < k; ++i) t[i] = box(rng);
        double sep = 0.0;
        for (std::size_t i = 0; i < k; ++i) sep = std::max(sep, std::abs(s[i] - t[i]));
        if (sep < 1e-6) continue;
        if (flow.dist(flow.act(s, p), flow.act(t, p)) <= 1e-9)
            throw std::invalid_argument("not a local section at scale a");
    }
    LocalSection ls;
    ls.base = p;
    ls.a = a;
    ls.points = {p};
    return ls;
}

std::vector<Vec> marker_set(const Flow& flow, const LocalSection& section, const Vec& x,
                            const Vec& window_lo, const Vec& window_hi) {
    if (section.points.size() != 1)
        throw std::invalid_argument("marker_set: singleton sections only");
    const Vec& p = section.base;
    std::vector<Vec> markers;
    if (flow.name == "logistic") {
        if (flow.is_fixed_point(x)) return markers;
        const double t = std::log((p[0] * (1.0 - x[0])) / (x[0] * (1.0 - p[0])));
        if (t >= window_lo[0] && t <= window_hi[0]) markers.push_back(Vec{t});
        return markers;
    }
    // Torus: t = scale * ((p - x) + n) over integer vectors n hitting the window.
    const int k = flow.k;
    const double sc = flow.group_scale;
    std::vector<int> n_lo(static_cast<std::size_t>(k)), n_hi(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        const double base = p[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(i)];
        n_lo[static_cast<std::size_t>(i)] =
            static_cast<int>(std::ceil(window_lo[static_cast<std::size_t>(i)] / sc - base - 1e-12));
        n_hi[static_cast<std::size_t>(i)] =
            static_cast<int>(std::floor(window_hi[static_cast<std::size_t>(i)] / sc - base + 1e-12));
    }
    std::vector<int> n(static_cast<std::size_t>(k));
    std::function<void(int)> rec = [&](int axis) {
        if (axis == k) {
            Vec t(static_cast<std::size_t>(k));
            for (int i = 0; i < k; ++i)
                t[static_cast<std::size_t>(i)] =
                    sc * (p[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(i)] +
                          n[static_cast<std::size_t>(i)]);
            markers.push_back(std::move(t));
            return;
        }
        for (int v = n_lo[static_cast<std::size_t>(axis)]; v <= n_hi[static_cast<std::size_t>(axis)]; ++v) {
            n[static_cast<std::size_t>(axis)] = v;
            rec(axis + 1);
        }
    };
    rec(0);
    return markers;
}

}  // namespace lipflow
