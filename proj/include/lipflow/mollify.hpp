#pragma once

#include <vector>

#include "lipflow/grid.hpp"

namespace lipflow {

struct MollifyParams {
    double delta = 0.05;    // sup-norm budget
    double epsilon = 0.05;  // Lipschitz slack added on top of tau
    double tau = 0.9;       // Lipschitz constant of the input
    int quad_points_per_axis = 21;
};

/// Closed segment [p, q] in R^k.
struct Segment {
    Vec p;
    Vec q;
};

/// Omega = (0, side)^k minus the excluded points/segments; the averaging
/// radius vanishes on the complement of Omega so values there survive intact.
struct DomainDescriptor {
    double side = 1.0;
    std::vector<Vec> excl_points;
    std::vector<Segment> excl_segments;
};

double distance_to_segment(const Vec& b, const Segment& s);

/// d(b, R^k \ Omega): min over cube faces, excluded points and segments.
double distance_to_boundary(const Vec& b, const DomainDescriptor& dom);

/// rho(b) = min(delta/(2 tau), (epsilon/(2 tau)) * h(b)). Lipschitz with
/// constant epsilon/(2 tau) and zero exactly where h vanishes.
double radius_field(const Vec& b, const MollifyParams& params, const DomainDescriptor& dom);

/// Unnormalized bump exp(-1/(1-|t|^2)) on the open unit ball, 0 outside.
double mollifier_shape(const Vec& t);

/// Tensor-product quadrature of the bump over [-1,1]^k, normalized so the
/// discrete weights sum to exactly 1.
class Mollifier {
  public:
    Mollifier(int k, int quad_points_per_axis);

    const std::vector<Vec>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }

  private:
    std::vector<Vec> nodes_;
    std::vector<double> weights_;
};

/// Phi(b) = sum_i w_i * phi(b - rho(b) t_i) on phi's grid; copies phi exactly
/// wherever rho(b) = 0. Result declares budget tau + epsilon.
GridFunction mollify_fn(const GridFunction& phi, const DomainDescriptor& dom,
                        const MollifyParams& params);

}  // namespace lipflow
