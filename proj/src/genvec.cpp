#include "lipflow/genvec.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace lipflow {
namespace {

// Smallest eigenvalue of a symmetric matrix by cyclic Jacobi rotations.
double min_eigenvalue_sym(std::vector<std::vector<double>> a) {
    const std::size_t n = a.size();
    if (n == 1) return a[0][0];
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(a[p][q]) < 1e-300) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t i = 0; i < n; ++i) {
                    const double aip = a[i][p], aiq = a[i][q];
                    a[i][p] = c * aip - s * aiq;
                    a[i][q] = s * aip + c * aiq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double api = a[p][i], aqi = a[q][i];
                    a[p][i] = c * api - s * aqi;
                    a[q][i] = s * api + c * aqi;
                }
            }
    }
    double mn = a[0][0];
    for (std::size_t i = 1; i < n; ++i) mn = std::min(mn, a[i][i]);
    return mn;
}

std::vector<double> d_window(const std::vector<double>& u, const GenVecGeometry& g) {
    return diff_vector(window_restrict(u, g.L + 1, g.Q - g.L + 1));
}

void check_geometry(const GenVecGeometry& g, std::size_t M) {
    if (g.N <= g.Q - g.L)
        throw std::invalid_argument("geometry: need N > Q - L");
    if (g.Q - g.L < 2 * static_cast<int>(M))
        throw std::invalid_argument("geometry: need Q - L >= 2M");
    if (g.L < 0 || g.Q <= g.L || g.Q >= g.N)
        throw std::invalid_argument("geometry: need 0 <= L < Q < N");
}

}  // namespace

std::vector<double> diff_vector(const std::vector<double>& u) {
    if (u.size() < 2) throw std::invalid_argument("diff_vector: need at least 2 entries");
    std::vector<double> d(u.size() - 1);
    for (std::size_t i = 0; i + 1 < u.size(); ++i) d[i] = u[i + 1] - u[i];
    return d;
}

std::vector<double> window_restrict(const std::vector<double>& u, int alpha, int l) {
    if (alpha < 1 || l < 1 || static_cast<std::size_t>(alpha + l - 1) > u.size())
        throw std::out_of_range("window_restrict: slice out of range");
    return std::vector<double>(u.begin() + (alpha - 1), u.begin() + (alpha - 1 + l));
}

RankResult rank_full_check(const std::vector<std::vector<double>>& vectors, double tol) {
    RankResult r;
    if (vectors.empty()) throw std::invalid_argument("rank_full_check: empty input");
    const std::size_t n = vectors[0].size();
    for (const auto& v : vectors)
        if (v.size() != n) throw std::invalid_argument("rank_full_check: ragged input");
    if (vectors.size() > n) {
        r.reason = "dimension deficit";
        return r;
    }
    const std::size_t m = vectors.size();
    std::vector<std::vector<double>> gram(m, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i; j < m; ++j) {
            double s = 0.0;
            for (std::size_t t = 0; t < n; ++t) s += vectors[i][t] * vectors[j][t];
            gram[i][j] = gram[j][i] = s;
        }
    const double lam = min_eigenvalue_sym(gram);
    r.certificate = lam > 0.0 ? std::sqrt(lam) : 0.0;
    r.full_rank = r.certificate > tol;
    return r;
}

GenericVectorSet certify_vectors(const std::vector<Vec>& vectors, const GenVecGeometry& geom,
                                 double tol) {
    check_geometry(geom, vectors.size());
    GenericVectorSet out;
    out.vectors = vectors;

    std::vector<std::vector<double>> c2;
    c2.emplace_back(static_cast<std::size_t>(geom.N), 1.0);
    for (const auto& u : vectors) c2.push_back(u);
    out.cert_cond2 = rank_full_check(c2, tol).certificate;

    std::vector<std::vector<double>> c3;
    c3.emplace_back(static_cast<std::size_t>(geom.Q - geom.L), 1.0);
    for (const auto& u : vectors) c3.push_back(d_window(u, geom));
    out.cert_cond3 = rank_full_check(c3, tol).certificate;

    // Condition (4) over all nonzero integer shifts mapping Lambda into 1..N.
    // The zero shift duplicates each u_m|_Lambda and can never be independent,
    // so it is excluded.
    const int lam_len = geom.Q - geom.L;
    out.cert_cond4 = std::numeric_limits<double>::infinity();
    for (int w = -(geom.L); w <= geom.N - geom.Q; ++w) {
        if (w == 0) continue;
        if (geom.L + 1 + w < 1 || geom.Q + w > geom.N) continue;
        std::vector<std::vector<double>> c4;
        for (const auto& u : vectors) c4.push_back(window_restrict(u, geom.L + 1, lam_len));
        for (const auto& u : vectors) c4.push_back(window_restrict(u, geom.L + 1 + w, lam_len));
        out.cert_cond4 = std::min(out.cert_cond4, rank_full_check(c4, tol).certificate);
    }
    return out;
}

GenericVectorSet sample_generic_vectors(const std::vector<std::vector<double>>& targets,
                                        const GenVecGeometry& geom, double eta,
                                        std::uint64_t seed, int max_retries, double tol) {
    if (targets.empty()) throw std::invalid_argument("sample_generic_vectors: no targets");
    check_geometry(geom, targets.size());
    for (const auto& t : targets)
        if (t.size() != static_cast<std::size_t>(geom.N))
            throw std::invalid_argument("sample_generic_vectors: target length != N");
    if (eta <= 0.0) throw std::invalid_argument("sample_generic_vectors: eta must be positive");

    std::string worst = "cond2";
    for (int attempt = 0; attempt <= max_retries; ++attempt) {
        std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(attempt));
        std::vector<Vec> draw;
        draw.reserve(targets.size());
        for (const auto& tgt : targets) {
            Vec u(tgt.size());
            for (std::size_t i = 0; i < tgt.size(); ++i) {
                // Shrink the box one-sidedly so the draw stays strictly in (0,1)
                // while remaining within eta of the target.
                const double lo = std::max(tgt[i] - eta, 1e-12);
                const double hi = std::min(tgt[i] + eta, 1.0 - 1e-12);
                if (lo >= hi)
                    throw std::invalid_argument("sample_generic_vectors: target box empty in (0,1)");
                std::uniform_real_distribution<double> dist(lo, hi);
                u[i] = dist(rng);
            }
            draw.push_back(std::move(u));
        }
        GenericVectorSet cand = certify_vectors(draw, geom, tol);
        cand.eta = eta;
        cand.seed = seed;
        cand.retries_used = attempt;
        if (cand.cert_cond2 > tol && cand.cert_cond3 > tol && cand.cert_cond4 > tol) return cand;
        if (cand.cert_cond2 <= tol) worst = "cond2";
        else if (cand.cert_cond3 <= tol) worst = "cond3";
        else worst = "cond4";
    }
    throw std::runtime_error("sample_generic_vectors: retries exhausted, failing condition " + worst);
}

}  // namespace lipflow
