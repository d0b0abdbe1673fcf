#include "lipflow/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace lipflow {

double norm2(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

double GridSpec::max_spacing() const {
    double h = 0.0;
    for (int i = 0; i < dim(); ++i) h = std::max(h, spacing(i));
    return h;
}

std::size_t GridSpec::size() const {
    std::size_t n = 1;
    for (int p : points_per_axis) n *= static_cast<std::size_t>(p);
    return n;
}

Vec GridSpec::point(std::size_t index) const {
    const int k = dim();
    Vec p(static_cast<std::size_t>(k));
    for (int axis = k - 1; axis >= 0; --axis) {
        const auto n = static_cast<std::size_t>(points_per_axis[static_cast<std::size_t>(axis)]);
        const std::size_t i = index % n;
        index /= n;
        p[static_cast<std::size_t>(axis)] =
            origin[static_cast<std::size_t>(axis)] + static_cast<double>(i) * spacing(axis);
    }
    return p;
}

bool GridSpec::operator==(const GridSpec& o) const {
    return origin == o.origin && extent == o.extent && points_per_axis == o.points_per_axis;
}

GridSpec GridSpec::cube(int k, double lo, double hi, int n) {
    GridSpec g;
    g.origin.assign(static_cast<std::size_t>(k), lo);
    g.extent.assign(static_cast<std::size_t>(k), hi - lo);
    g.points_per_axis.assign(static_cast<std::size_t>(k), n);
    g.validate();
    return g;
}

void GridSpec::validate() const {
    if (origin.empty() || origin.size() != extent.size() ||
        origin.size() != points_per_axis.size())
        throw std::invalid_argument("GridSpec: inconsistent field sizes");
    for (std::size_t i = 0; i < origin.size(); ++i) {
        if (points_per_axis[i] < 2)
            throw std::invalid_argument("GridSpec: points_per_axis must be >= 2");
        if (!(extent[i] > 0.0))
            throw std::invalid_argument("GridSpec: extent must be positive");
    }
}

double GridFunction::interp(const Vec& t) const {
    const int k = grid.dim();
    // Per-axis cell index and barycentric weight, t clamped to the box.
    std::vector<std::size_t> cell(static_cast<std::size_t>(k));
    Vec w(static_cast<std::size_t>(k));
    for (int axis = 0; axis < k; ++axis) {
        const auto a = static_cast<std::size_t>(axis);
        const double h = grid.spacing(axis);
        double u = (t[a] - grid.origin[a]) / h;
        const double umax = static_cast<double>(grid.points_per_axis[a] - 1);
        u = std::clamp(u, 0.0, umax);
        std::size_t c = static_cast<std::size_t>(std::floor(u));
        if (c >= static_cast<std::size_t>(grid.points_per_axis[a] - 1))
            c = static_cast<std::size_t>(grid.points_per_axis[a] - 2);
        cell[a] = c;
        w[a] = u - static_cast<double>(c);
    }
    // Strides, last axis fastest.
    std::vector<std::size_t> stride(static_cast<std::size_t>(k), 1);
    for (int axis = k - 2; axis >= 0; --axis)
        stride[static_cast<std::size_t>(axis)] =
            stride[static_cast<std::size_t>(axis + 1)] *
            static_cast<std::size_t>(grid.points_per_axis[static_cast<std::size_t>(axis + 1)]);
    double acc = 0.0;
    const auto corners = static_cast<std::size_t>(1) << k;
    for (std::size_t corner = 0; corner < corners; ++corner) {
        double weight = 1.0;
        std::size_t idx = 0;
        for (int axis = 0; axis < k; ++axis) {
            const auto a = static_cast<std::size_t>(axis);
            const bool hi = (corner >> axis) & 1u;
            weight *= hi ? w[a] : (1.0 - w[a]);
            idx += (cell[a] + (hi ? 1 : 0)) * stride[a];
        }
        acc += weight * values[idx];
    }
    return acc;
}

double GridFunction::at(const Vec& t) const {
    const int k = grid.dim();
    std::size_t idx = 0;
    bool on_node = true;
    for (int axis = 0; axis < k && on_node; ++axis) {
        const auto a = static_cast<std::size_t>(axis);
        const double u = (t[a] - grid.origin[a]) / grid.spacing(axis);
        const double r = std::round(u);
        if (std::abs(u - r) > 1e-12 / grid.spacing(axis) || r < 0.0 ||
            r > static_cast<double>(grid.points_per_axis[a] - 1)) {
            on_node = false;
        } else {
            idx = idx * static_cast<std::size_t>(grid.points_per_axis[a]) +
                  static_cast<std::size_t>(r);
        }
    }
    return on_node ? values[idx] : interp(t);
}

double lip_const_all_pairs(const GridFunction& f) {
    const std::size_t n = f.grid.size();
    if (n < 2) throw std::invalid_argument("degenerate grid");
    double best = 0.0;
    std::vector<Vec> pts(n);
    for (std::size_t i = 0; i < n; ++i) pts[i] = f.grid.point(i);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = norm2(pts[i], pts[j]);
            if (d > 0.0) best = std::max(best, std::abs(f.values[i] - f.values[j]) / d);
        }
    return best;
}

double lip_const_estimate(const GridFunction& f) {
    const std::size_t n = f.grid.size();
    if (n < 2) throw std::invalid_argument("degenerate grid");
    if (n <= 4096) return lip_const_all_pairs(f);

    const int k = f.grid.dim();
    std::vector<std::size_t> stride(static_cast<std::size_t>(k), 1);
    for (int axis = k - 2; axis >= 0; --axis)
        stride[static_cast<std::size_t>(axis)] =
            stride[static_cast<std::size_t>(axis + 1)] *
            static_cast<std::size_t>(f.grid.points_per_axis[static_cast<std::size_t>(axis + 1)]);

    double best = 0.0;
    // Axis-aligned neighbor pairs.
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t rem = i;
        for (int axis = k - 1; axis >= 0; --axis) {
            const auto a = static_cast<std::size_t>(axis);
            const auto np = static_cast<std::size_t>(f.grid.points_per_axis[a]);
            const std::size_t coord = rem % np;
            rem /= np;
            if (coord + 1 < np) {
                const double d = f.grid.spacing(axis);
                best = std::max(best, std::abs(f.values[i] - f.values[i + stride[a]]) / d);
            }
        }
    }
    // Seeded random pairs (documented approximation).
    std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (int trial = 0; trial < 100000; ++trial) {
        const std::size_t i = pick(rng), j = pick(rng);
        if (i == j) continue;
        const double d = norm2(f.grid.point(i), f.grid.point(j));
        if (d > 0.0) best = std::max(best, std::abs(f.values[i] - f.values[j]) / d);
    }
    return best;
}

double lip1_metric(const GridFunction& f1, const GridFunction& f2, int m_max) {
    if (!(f1.grid == f2.grid)) throw std::invalid_argument("lip1_metric: mismatched grids");
    const int k = f1.grid.dim();
    for (int axis = 0; axis < k; ++axis) {
        const auto a = static_cast<std::size_t>(axis);
        if (f1.grid.origin[a] > -static_cast<double>(m_max) + 1e-12 ||
            f1.grid.origin[a] + f1.grid.extent[a] < static_cast<double>(m_max) - 1e-12)
            throw std::invalid_argument("lip1_metric: grid does not cover [-m_max, m_max]^k");
    }
    const std::size_t n = f1.grid.size();
    // max |f1-f2| over points with ||p||_inf <= M, accumulated once per point.
    std::vector<double> max_in(static_cast<std::size_t>(m_max) + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec p = f1.grid.point(i);
        double inf = 0.0;
        for (double c : p) inf = std::max(inf, std::abs(c));
        const int first = static_cast<int>(std::ceil(inf - 1e-9));
        if (first > m_max) continue;
        const double d = std::abs(f1.values[i] - f2.values[i]);
        const auto m0 = static_cast<std::size_t>(std::max(first, 1));
        if (d > max_in[m0]) max_in[m0] = d;
    }
    double result = 0.0, running = 0.0;
    for (int M = 1; M <= m_max; ++M) {
        running = std::max(running, max_in[static_cast<std::size_t>(M)]);
        result += std::ldexp(running, -M);
    }
    return result;
}

static GridFunction combine(const GridFunction& f, const GridFunction& g, bool take_max) {
    if (!(f.grid == g.grid)) throw std::invalid_argument("lip_max/min: mismatched grids");
    GridFunction out = f;
    out.tau = std::max(f.tau, g.tau);
    out.slack = std::max(f.slack, g.slack);
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = take_max ? std::max(f.values[i], g.values[i])
                                 : std::min(f.values[i], g.values[i]);
    return out;
}

GridFunction lip_max(const GridFunction& f, const GridFunction& g) { return combine(f, g, true); }
GridFunction lip_min(const GridFunction& f, const GridFunction& g) { return combine(f, g, false); }

GridFunction clamp01(const GridFunction& f) {
    GridFunction out = f;
    for (double& v : out.values) v = std::clamp(v, 0.0, 1.0);
    return out;
}

double composite_lip_bound(double tau_prime, double delta, double epsilon) {
    if (delta >= 1.0) throw std::invalid_argument("composite_lip_bound: delta must be < 1");
    return (tau_prime + epsilon) / (1.0 - delta);
}

GradientReport gradient_bound_check(const GridFunction& f, double tau, double tol) {
    const int k = f.grid.dim();
    const std::size_t n = f.grid.size();
    std::vector<std::size_t> stride(static_cast<std::size_t>(k), 1);
    for (int axis = k - 2; axis >= 0; --axis)
        stride[static_cast<std::size_t>(axis)] =
            stride[static_cast<std::size_t>(axis + 1)] *
            static_cast<std::size_t>(f.grid.points_per_axis[static_cast<std::size_t>(axis + 1)]);
    GradientReport rep;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t rem = i;
        bool interior = true;
        for (int axis = k - 1; axis >= 0 && interior; --axis) {
            const auto a = static_cast<std::size_t>(axis);
            const auto np = static_cast<std::size_t>(f.grid.points_per_axis[a]);
            const std::size_t coord = rem % np;
            rem /= np;
            if (coord == 0 || coord + 1 >= np) interior = false;
        }
        if (!interior) continue;
        double sq = 0.0;
        for (int axis = 0; axis < k; ++axis) {
            const auto a = static_cast<std::size_t>(axis);
            const double d =
                (f.values[i + stride[a]] - f.values[i - stride[a]]) / (2.0 * f.grid.spacing(axis));
            sq += d * d;
        }
        rep.max_grad_norm = std::max(rep.max_grad_norm, std::sqrt(sq));
    }
    rep.within_budget = rep.max_grad_norm <= tau + tol;
    return rep;
}

static std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_csv(const GridFunction& f, std::ostream& out) {
    const int k = f.grid.dim();
    out << "index";
    for (int i = 1; i <= k; ++i) out << ",coord_" << i;
    out << ",value\n";
    const std::size_t n = f.grid.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec p = f.grid.point(i);
        out << i;
        for (double c : p) out << ',' << fmt_double(c);
        out << ',' << fmt_double(f.values[i]) << '\n';
    }
}

void write_csv(const GridFunction& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    write_csv(f, out);
}

GridFunction read_csv(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw std::runtime_error("empty CSV");
    int k = 0;
    {
        std::stringstream hs(header);
        std::string col;
        while (std::getline(hs, col, ',')) {
            if (col.rfind("coord_", 0) == 0) ++k;
        }
    }
    if (k < 1) throw std::runtime_error("CSV header lacks coordinate columns");
    std::vector<Vec> pts;
    std::vector<double> vals;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ls(line);
        std::string cell;
        std::getline(ls, cell, ',');  // index, unused
        Vec p(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) {
            std::getline(ls, cell, ',');
            p[static_cast<std::size_t>(i)] = std::strtod(cell.c_str(), nullptr);
        }
        std::getline(ls, cell, ',');
        vals.push_back(std::strtod(cell.c_str(), nullptr));
        pts.push_back(std::move(p));
    }
    if (pts.empty()) throw std::runtime_error("CSV has no data rows");

    GridFunction f;
    f.grid.origin = pts.front();
    f.grid.extent.assign(static_cast<std::size_t>(k), 0.0);
    f.grid.points_per_axis.assign(static_cast<std::size_t>(k), 0);
    for (int axis = 0; axis < k; ++axis) {
        const auto a = static_cast<std::size_t>(axis);
        std::vector<double> uniq;
        for (const Vec& p : pts) uniq.push_back(p[a]);
        std::sort(uniq.begin(), uniq.end());
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
        f.grid.points_per_axis[a] = static_cast<int>(uniq.size());
        f.grid.origin[a] = uniq.front();
        f.grid.extent[a] = uniq.back() - uniq.front();
    }
    f.grid.validate();
    if (f.grid.size() != pts.size()) throw std::runtime_error("CSV rows do not form a full grid");
    f.values = std::move(vals);
    return f;
}

GridFunction read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_csv(in);
}

}  // namespace lipflow
