#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace lipflow {

using Vec = std::vector<double>;

/// Rectangular sampling grid in R^k, row-major with the last axis fastest.
struct GridSpec {
    Vec origin;
    Vec extent;
    std::vector<int> points_per_axis;

    int dim() const { return static_cast<int>(origin.size()); }
    double spacing(int axis) const {
        return extent[static_cast<std::size_t>(axis)] /
               (points_per_axis[static_cast<std::size_t>(axis)] - 1);
    }
    double max_spacing() const;
    std::size_t size() const;
    Vec point(std::size_t index) const;

    bool operator==(const GridSpec& o) const;

    /// Uniform grid on [lo, hi]^k with n points per axis.
    static GridSpec cube(int k, double lo, double hi, int n);

    void validate() const;  // throws std::invalid_argument
};

/// Real values sampled on a grid, carrying a declared Lipschitz budget tau
/// and an explicit slack tolerance for the discrete Lipschitz property.
struct GridFunction {
    GridSpec grid;
    std::vector<double> values;
    double tau = 1.0;
    double slack = 0.0;

    /// Multilinear interpolation; t is clamped to the grid's bounding box.
    double interp(const Vec& t) const;

    /// Exact value at a grid node that t coincides with (1e-12 per axis),
    /// falling back to interpolation otherwise.
    double at(const Vec& t) const;
};

/// Largest |v(s)-v(t)|/||s-t||_2 over examined pairs: all pairs when the grid
/// has at most 4096 points, otherwise axis-aligned neighbors plus 10^5 seeded
/// random pairs.
double lip_const_estimate(const GridFunction& f);

/// Exhaustive all-pairs variant regardless of size (test oracle / small grids).
double lip_const_all_pairs(const GridFunction& f);

/// Truncated compact-open metric: sum over M=1..m_max of 2^-M times the max
/// of |f1-f2| over grid points inside [-M,M]^k. Both functions must share a
/// grid covering [-m_max, m_max]^k.
double lip1_metric(const GridFunction& f1, const GridFunction& f2, int m_max);

GridFunction lip_max(const GridFunction& f, const GridFunction& g);
GridFunction lip_min(const GridFunction& f, const GridFunction& g);
GridFunction clamp01(const GridFunction& f);

/// (tau' + epsilon) / (1 - delta); requires delta < 1.
double composite_lip_bound(double tau_prime, double delta, double epsilon);

struct GradientReport {
    double max_grad_norm = 0.0;
    bool within_budget = true;
};

/// Central finite differences at interior nodes; checks max ||grad||_2
/// against tau + tol.
GradientReport gradient_bound_check(const GridFunction& f, double tau, double tol);

/// CSV round-trip: header `index,coord_1,...,coord_k,value`, row-major,
/// bit-exact for finite doubles. tau/slack are not part of the file format.
void write_csv(const GridFunction& f, std::ostream& out);
void write_csv(const GridFunction& f, const std::string& path);
GridFunction read_csv(std::istream& in);
GridFunction read_csv_file(const std::string& path);

double norm2(const Vec& a, const Vec& b);

}  // namespace lipflow
