#include "lipflow/mollify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lipflow {

double distance_to_segment(const Vec& b, const Segment& s) {
    const std::size_t k = b.size();
    double dd = 0.0, len2 = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double d = s.q[i] - s.p[i];
        dd += (b[i] - s.p[i]) * d;
        len2 += d * d;
    }
    double t = len2 > 0.0 ? dd / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    double acc = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double diff = b[i] - (s.p[i] + t * (s.q[i] - s.p[i]));
        acc += diff * diff;
    }
    return std::sqrt(acc);
}

double distance_to_boundary(const Vec& b, const DomainDescriptor& dom) {
    double h = std::numeric_limits<double>::infinity();
    for (double bi : b) h = std::min({h, bi, dom.side - bi});
    h = std::max(h, 0.0);
    for (const Vec& p : dom.excl_points) h = std::min(h, norm2(b, p));
    for (const Segment& s : dom.excl_segments) h = std::min(h, distance_to_segment(b, s));
    return h;
}

double radius_field(const Vec& b, const MollifyParams& params, const DomainDescriptor& dom) {
    if (params.epsilon > params.tau)
        throw std::invalid_argument("radius_field: epsilon must not exceed tau");
    const double h = distance_to_boundary(b, dom);
    if (h < 1e-12) return 0.0;  // snap: roundoff must not reintroduce averaging on D
    return std::min(params.delta / (2.0 * params.tau),
                    params.epsilon / (2.0 * params.tau) * h);
}

double mollifier_shape(const Vec& t) {
    double r2 = 0.0;
    for (double ti : t) r2 += ti * ti;
    if (r2 >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - r2));
}

Mollifier::Mollifier(int k, int n) {
    if (n < 5) throw std::invalid_argument("Mollifier: need at least 5 quadrature points per axis");
    // Uniform symmetric tensor nodes on [-1,1]^k; only nodes inside the open
    // unit ball carry weight.
    std::vector<double> axis(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) axis[static_cast<std::size_t>(i)] = -1.0 + 2.0 * i / (n - 1);

    std::size_t total = 1;
    for (int d = 0; d < k; ++d) total *= static_cast<std::size_t>(n);
    double sum = 0.0;
    Vec node(static_cast<std::size_t>(k));
    std::vector<std::size_t> idx(static_cast<std::size_t>(k), 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t rem = flat;
        for (int d = k - 1; d >= 0; --d) {
            idx[static_cast<std::size_t>(d)] = rem % static_cast<std::size_t>(n);
            rem /= static_cast<std::size_t>(n);
        }
        for (int d = 0; d < k; ++d) node[static_cast<std::size_t>(d)] = axis[idx[static_cast<std::size_t>(d)]];
        const double w = mollifier_shape(node);
        if (w > 0.0) {
            nodes_.push_back(node);
            weights_.push_back(w);
            sum += w;
        }
    }
    for (double& w : weights_) w /= sum;
}

GridFunction mollify_fn(const GridFunction& phi, const DomainDescriptor& dom,
                        const MollifyParams& params) {
    const int k = phi.grid.dim();
    const Mollifier moll(k, params.quad_points_per_axis);

    GridFunction out;
    out.grid = phi.grid;
    out.values.resize(phi.values.size());
    out.tau = params.tau + params.epsilon;
    out.slack = phi.slack + 2.0 * params.tau * phi.grid.max_spacing();

    Vec shifted(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < phi.values.size(); ++i) {
        const Vec b = phi.grid.point(i);
        const double rho = radius_field(b, params, dom);
        if (rho == 0.0) {
            out.values[i] = phi.values[i];
            continue;
        }
        double acc = 0.0;
        for (std::size_t q = 0; q < moll.nodes().size(); ++q) {
            const Vec& t = moll.nodes()[q];
            for (int d = 0; d < k; ++d)
                shifted[static_cast<std::size_t>(d)] = b[static_cast<std::size_t>(d)] - rho * t[static_cast<std::size_t>(d)];
            acc += moll.weights()[q] * phi.interp(shifted);
        }
        out.values[i] = acc;
    }
    return out;
}

}  // namespace lipflow
