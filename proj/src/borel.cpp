#include "lipflow/borel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace lipflow {

std::optional<std::pair<Vec, double>> project_to_section(const CrossSection& section,
                                                         const Vec& x) {
    auto [s, rho] = section.nearest(x);
    if (rho < 1.0) return std::make_pair(std::move(s), rho);
    return std::nullopt;
}

double phi_observable(const CrossSection& section, const Vec& x) {
    auto proj = project_to_section(section, x);
    if (!proj) return 0.0;
    return (1.0 - proj->second) / section.alpha(proj->first);
}

GridFunction embed_point(const CrossSection& section, const Flow& flow, const Vec& x,
                         const GridSpec& window) {
    GridFunction out;
    out.grid = window;
    out.values.resize(window.size());
    out.tau = 1.0;
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = phi_observable(section, flow.act(window.point(i), x));
    return out;
}

GridSpec default_window(int k) {
    return GridSpec::cube(k, -20.0, 20.0, k == 1 ? 161 : 41);
}

EmbeddingReport verify_embedding(const CrossSection& section, const Flow& flow,
                                 const std::vector<Vec>& points, const GridSpec& window,
                                 int m_max, std::uint64_t seed) {
    EmbeddingReport rep;
    rep.num_points = static_cast<int>(points.size());
    rep.seed = seed;
    rep.min_pairwise_separation = std::numeric_limits<double>::infinity();

    std::vector<GridFunction> embedded;
    embedded.reserve(points.size());
    for (const Vec& x : points) embedded.push_back(embed_point(section, flow, x, window));

    const std::size_t n = window.size();
    for (const GridFunction& f : embedded) {
        for (std::size_t i = 0; i < n; ++i) {
            const Vec pi = window.point(i);
            for (std::size_t j = i + 1; j < n; ++j) {
                const double excess =
                    std::abs(f.values[i] - f.values[j]) - norm2(pi, window.point(j));
                rep.max_lipschitz_violation = std::max(rep.max_lipschitz_violation, excess);
            }
        }
    }

    // Equivariance at grid-aligned shifts: Phi(r.x)(h) vs Phi(x)(h + r).
    std::mt19937_64 rng(seed);
    const int k = window.dim();
    std::uniform_int_distribution<int> pick(0, static_cast<int>(points.size()) - 1);
    for (int trial = 0; trial < 100; ++trial) {
        const int pi = pick(rng);
        Vec r(static_cast<std::size_t>(k));
        for (int d = 0; d < k; ++d) {
            std::uniform_int_distribution<int> steps(-5, 5);
            r[static_cast<std::size_t>(d)] = steps(rng) * window.spacing(d);
        }
        const Vec shifted_state = flow.act(r, points[static_cast<std::size_t>(pi)]);
        for (std::size_t g = 0; g < n; ++g) {
            Vec h = window.point(g);
            Vec hr(h);
            bool inside = true;
            for (int d = 0; d < k; ++d) {
                hr[static_cast<std::size_t>(d)] += r[static_cast<std::size_t>(d)];
                const double lo = window.origin[static_cast<std::size_t>(d)];
                const double hi = lo + window.extent[static_cast<std::size_t>(d)];
                if (hr[static_cast<std::size_t>(d)] < lo - 1e-9 ||
                    hr[static_cast<std::size_t>(d)] > hi + 1e-9)
                    inside = false;
            }
            if (!inside) continue;
            const double lhs = phi_observable(section, flow.act(h, shifted_state));
            const double rhs = phi_observable(section, flow.act(hr, points[static_cast<std::size_t>(pi)]));
            rep.max_equivariance_residual =
                std::max(rep.max_equivariance_residual, std::abs(lhs - rhs));
        }
    }

    for (std::size_t i = 0; i < embedded.size(); ++i)
        for (std::size_t j = i + 1; j < embedded.size(); ++j)
            rep.min_pairwise_separation = std::min(
                rep.min_pairwise_separation, lip1_metric(embedded[i], embedded[j], m_max));
    if (embedded.size() < 2) rep.min_pairwise_separation = 0.0;
    return rep;
}

}  // namespace lipflow
