#include "lipflow/extension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lipflow {

void validate_anchors(const AnchorSet& anchors) {
    const std::size_t n = anchors.points.size();
    if (n == 0 || n != anchors.values.size())
        throw std::invalid_argument("anchor set empty or inconsistent");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = norm2(anchors.points[i], anchors.points[j]);
            if (d < 1e-12) throw std::invalid_argument("duplicate anchor points");
            if (std::abs(anchors.values[i] - anchors.values[j]) > anchors.tau * d + 1e-12)
                throw std::invalid_argument("not tau-extendable");
        }
}

double mcshane_eval(const AnchorSet& anchors, const Vec& q) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < anchors.points.size(); ++i) {
        const double c = anchors.values[i] - anchors.tau * norm2(q, anchors.points[i]);
        if (c > best) best = c;
    }
    return best;
}

std::vector<double> mcshane_extend(const AnchorSet& anchors, const std::vector<Vec>& queries) {
    validate_anchors(anchors);
    std::vector<double> out(queries.size());
    for (std::size_t i = 0; i < queries.size(); ++i) out[i] = mcshane_eval(anchors, queries[i]);
    return out;
}

}  // namespace lipflow
