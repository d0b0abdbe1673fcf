#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "lipflow/extension.hpp"
#include "lipflow/flows.hpp"
#include "lipflow/genvec.hpp"
#include "lipflow/grid.hpp"
#include "lipflow/mollify.hpp"

namespace lipflow {

/// Family of functions x -> (t -> value) evaluated lazily through the flow,
/// with a uniform per-state Lipschitz budget in t.
struct Ensemble {
    std::function<double(const Vec& x, const Vec& t)> eval;
    double tau = 1.0;
};

GridFunction sample_ensemble(const Ensemble& f, const Vec& x, const GridSpec& grid);

/// f0(x)(t) as a fixed convex combination of orbit samples of h1: quadrature
/// nodes live in the group variable, so equivariance and constant
/// reproduction are exact by construction.
class GaussianBase {
  public:
    GaussianBase(const Flow& flow, double bwidth, int quad_points_per_axis = 21);

    double eval(const Vec& x, const Vec& t) const;
    Ensemble as_ensemble() const;  // declared budget 1/2

  private:
    Flow flow_;
    double bwidth_;
    std::vector<Vec> nodes_;
    std::vector<double> weights_;
};

GridFunction gaussian_base(const Flow& flow, double bwidth, const Vec& x, const GridSpec& window);

/// f1 = (1 - delta) f + delta f0, budget (1-delta) tau_f + delta tau_f0.
Ensemble blend(const Ensemble& f, const Ensemble& f0, double delta);

/// Geometry of one grid-perturbation instance on the cube [0,a]^k: the
/// one-dimensional ladder a_1..a_N along the last axis at height a/2, the
/// ladder subrange Lambda = indices L+1..Q, and the evaluation grid whose
/// spacing equals Delta so every ladder point is a grid node.
struct MainLemmaParams {
    int k = 1;
    double a = 1.0;
    double delta = 0.4;
    double tau = 0.5;  // budget of the input ensemble
    int M = 1;
    double b = 0.0, c = 0.0;
    int N = 0;
    double Delta = 0.0;
    std::vector<double> a_vals;  // a_1..a_N
    int L = 0, Q = 0;
    double eta = 0.0;
    double dist_A_edge = 0.0;
    GridSpec eval_grid;

    Vec A_point(int n) const;  // 1-based ladder index
    std::vector<Vec> A_points() const;
    GenVecGeometry geometry() const { return GenVecGeometry{N, L, Q}; }
};

MainLemmaParams choose_main_lemma_params(int k, double a, double delta, double tau, int M);

/// Partition of unity from normalized quartic bumps around the anchors; the
/// weights are defined wherever at least one bump is positive.
struct CoverData {
    std::vector<Vec> anchors;
    double radius = 0.01;
    std::function<double(const Vec&, const Vec&)> dist;

    std::vector<double> weights(const Vec& x) const;  // sums to 1; throws off-support
};

/// Per-cover targets u_m(a_n) = f1(p_m)(a_n) for the genericity sampler.
std::vector<std::vector<double>> uset_targets(const Ensemble& f1, const CoverData& cover,
                                              const MainLemmaParams& params);

/// Anchor set over Edge (input values), the ladder A (blended generic
/// values), and conv(Lambda), deduplicated; tau is the certified extension
/// budget. Throws when the budget reaches 1.
AnchorSet build_g0(const Vec& x, const Ensemble& f1, const GenericVectorSet& uset,
                   const CoverData& cover, const MainLemmaParams& params);

/// Full per-state pipeline: extension of the anchors, clamping against
/// f1 +- delta/2, mollification away from the anchors, clamp to [0,1].
GridFunction main_lemma_g_state(const Vec& x, const Ensemble& f1, const GenericVectorSet& uset,
                                const CoverData& cover, const MainLemmaParams& params);

struct FuzzReport {
    int trials = 0;
    int matches = 0;
    int violations = 0;
    double worst_shift = 0.0;  // largest |w|_inf among matching trials
};

/// Seeded (x, y, w) trials: a near-match of g(x)(. + w) with g(y)(.) on the
/// inner ladder window must force |w|_inf < w_tol and dist(x, y) < delta.
FuzzReport shift_rigidity_fuzz(const std::vector<Vec>& states,
                               const std::vector<GridFunction>& gs, const Flow& flow,
                               const MainLemmaParams& params, int trials, std::uint64_t seed,
                               double match_tol = 1e-6, double w_tol = -1.0);

/// g1(x)(t) = f1(x)(t) + q(s.x) * (g(s.x)(t-s) - f1(s.x)(t-s)) on each marker
/// cube s + [0,a]^k, plain f1 elsewhere.
GridFunction marker_perturb_g1(const Flow& flow, const LocalSection& section,
                               const std::function<double(const Vec& state)>& qweight,
                               const Ensemble& f1,
                               const std::function<GridFunction(const Vec& state)>& g_of,
                               const Vec& x, const GridSpec& window);

struct SpreadReport {
    bool ok = false;
    double min_spread = 0.0;
};

/// Every perturbed function is non-constant on its grid (spread > tol).
SpreadReport verify_GA(const std::vector<GridFunction>& g1s, double tol = 1e-9);

struct SeparationReport {
    bool ok = false;
    double min_distance = 0.0;
};

/// Images of the B-states and C-states stay apart in the truncated
/// compact-open metric.
SeparationReport verify_GBC(const std::vector<GridFunction>& g1_B,
                            const std::vector<GridFunction>& g1_C, int m_max);

}  // namespace lipflow
