#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lipflow/grid.hpp"

namespace lipflow {

/// Vectors u_1..u_M in (0,1)^N sampled near per-entry targets, together with
/// smallest-singular-value certificates for three independence conditions:
///   cond2: {e, u_1, ..., u_M} with e the all-ones vector,
///   cond3: {e~, D^{Q-L} u_1, ..., D^{Q-L} u_M} on the window L+1 .. Q+1,
///   cond4: {u_m restricted to Lambda, u_m restricted to w + Lambda} over all
///          nonzero admissible shifts w (minimum over shifts).
struct GenericVectorSet {
    std::vector<Vec> vectors;
    double eta = 0.0;
    double cert_cond2 = 0.0;
    double cert_cond3 = 0.0;
    double cert_cond4 = 0.0;  // +inf when no nonzero shift is admissible
    std::uint64_t seed = 0;
    int retries_used = 0;
};

/// Index geometry the independence conditions refer to: N points in a row,
/// Lambda = indices L+1..Q (1-based), shifts in units of whole index steps.
struct GenVecGeometry {
    int N = 0;
    int L = 0;
    int Q = 0;
};

/// Forward differences: (x2-x1, ..., x_{n+1}-x_n).
std::vector<double> diff_vector(const std::vector<double>& u);

/// 1-based contiguous slice (u_alpha, ..., u_{alpha+l-1}).
std::vector<double> window_restrict(const std::vector<double>& u, int alpha, int l);

struct RankResult {
    bool full_rank = false;
    double certificate = 0.0;
    std::string reason;
};

/// Certificate = smallest singular value of the stacked row matrix, computed
/// from the Gram matrix by Jacobi eigenvalue iteration.
RankResult rank_full_check(const std::vector<std::vector<double>>& vectors, double tol);

/// Rejection sampling of u_m(a) uniform in (target +- eta) intersected with
/// (0,1); retries (seed-chained) until all certificates clear tol.
GenericVectorSet sample_generic_vectors(const std::vector<std::vector<double>>& targets,
                                        const GenVecGeometry& geom, double eta,
                                        std::uint64_t seed, int max_retries,
                                        double tol = 1e-9);

/// Single verification pass over an existing vector set; returns certificates
/// without resampling.
GenericVectorSet certify_vectors(const std::vector<Vec>& vectors, const GenVecGeometry& geom,
                                 double tol = 1e-9);

}  // namespace lipflow
