#pragma once

#include <vector>

#include "lipflow/grid.hpp"

namespace lipflow {

/// Finite set of extension anchors with a shared Lipschitz budget tau.
/// A tau-Lipschitz extension exists iff the anchors are pairwise consistent:
/// |v_i - v_j| <= tau * ||p_i - p_j||_2 (up to 1e-12).
struct AnchorSet {
    std::vector<Vec> points;
    std::vector<double> values;
    double tau = 1.0;
};

/// Throws std::invalid_argument on empty/duplicate/inconsistent anchors.
void validate_anchors(const AnchorSet& anchors);

/// Max over anchors of (v_i - tau * ||q - p_i||_2).
double mcshane_eval(const AnchorSet& anchors, const Vec& q);

/// Batch evaluation; validates the anchors first.
std::vector<double> mcshane_extend(const AnchorSet& anchors, const std::vector<Vec>& queries);

}  // namespace lipflow
