#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "lipflow/flows.hpp"
#include "lipflow/grid.hpp"

namespace lipflow {

struct EmbeddingReport {
    double max_lipschitz_violation = 0.0;    // excess over budget 1 in the scaled metric
    double max_equivariance_residual = 0.0;
    double min_pairwise_separation = 0.0;
    int num_points = 0;
    std::uint64_t seed = 0;
};

/// (nearest section point, rho) when rho < 1, i.e. x lies in B_1(e) . S.
std::optional<std::pair<Vec, double>> project_to_section(const CrossSection& section, const Vec& x);

/// (1 - rho) / alpha(s) inside B_1(e) . S, zero outside. Values in [0, 1].
double phi_observable(const CrossSection& section, const Vec& x);

/// The embedded point: t -> phi(act(t, x)) sampled over the window grid.
GridFunction embed_point(const CrossSection& section, const Flow& flow, const Vec& x,
                         const GridSpec& window);

/// Default symmetric window [-20,20]^k: 161 points per axis for k=1, 41 for k=2.
GridSpec default_window(int k);

EmbeddingReport verify_embedding(const CrossSection& section, const Flow& flow,
                                 const std::vector<Vec>& points, const GridSpec& window,
                                 int m_max, std::uint64_t seed = 7);

}  // namespace lipflow
