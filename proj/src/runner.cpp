#include "lipflow/runner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace lipflow {
namespace {

Vec random_state(const Flow& flow, std::mt19937_64& rng) {
    const auto k = static_cast<std::size_t>(flow.state_dim);
    Vec x(k);
    if (flow.name == "logistic") {
        std::uniform_real_distribution<double> d(0.05, 0.95);
        x[0] = d(rng);
    } else {
        std::uniform_real_distribution<double> d(0.0, 1.0);
        for (auto& c : x) c = d(rng);
    }
    return x;
}

Vec state_near(const Vec& center, double radius, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto k = center.size();
    Vec x(k);
    if (k == 1) {
        x[0] = center[0] + radius * (2.0 * u(rng) - 1.0);
    } else {
        const double r = radius * std::sqrt(u(rng));
        const double th = 2.0 * std::numbers::pi * u(rng);
        x[0] = center[0] + r * std::cos(th);
        x[1] = center[1] + r * std::sin(th);
    }
    for (auto& c : x) c -= std::floor(c);
    return x;
}

}  // namespace

Flow make_flow(const std::string& name, double scale) {
    if (name == "torus1") return torus_translation_flow(1, scale);
    if (name == "torus2") return torus_translation_flow(2, scale);
    if (name == "logistic") return logistic_interval_flow();
    throw std::invalid_argument("unknown flow: " + name);
}

Ensemble torus2_test_ensemble(double scale) {
    Flow flow = torus_translation_flow(2, scale);
    Ensemble e;
    e.tau = 2.0 * std::numbers::pi * std::hypot(0.15, 0.1) / scale;
    e.eval = [flow](const Vec& x, const Vec& t) {
        const Vec y = flow.act(t, x);
        return 0.5 + 0.15 * std::sin(2.0 * std::numbers::pi * y[0]) + 0.1 * std::cos(2.0 * std::numbers::pi * y[1]);
    };
    return e;
}

Report run_gaussian_check(const GaussianRunConfig& cfg) {
    Report rep;
    struct Case {
        std::string flow;
        double scale;
    };
    const Case cases[] = {{"torus1", 8.0}, {"logistic", 1.0}, {"torus2", 8.0}};
    for (const Case& c : cases) {
        const Flow flow = make_flow(c.flow, c.scale);
        const int k = flow.k;
        const double bwidth = 4.0 * k / std::sqrt(std::numbers::pi);
        const GaussianBase base(flow, bwidth, k == 1 ? 121 : 21);
        const GridSpec grid =
            k == 1 ? GridSpec::cube(1, -10.0, 10.0, 201) : GridSpec::cube(2, -5.0, 5.0, 41);

        std::mt19937_64 rng(cfg.seed);
        double max_lip = 0.0;
        const Ensemble ens = base.as_ensemble();
        for (int i = 0; i < cfg.num_states; ++i) {
            const Vec x = random_state(flow, rng);
            max_lip = std::max(max_lip, lip_const_estimate(sample_ensemble(ens, x, grid)));
        }
        double max_res = 0.0;
        std::uniform_real_distribution<double> rbox(-3.0, 3.0), tbox(-5.0, 5.0);
        for (int i = 0; i < cfg.num_triples; ++i) {
            const Vec x = random_state(flow, rng);
            Vec r(static_cast<std::size_t>(k)), t(static_cast<std::size_t>(k)),
                tr(static_cast<std::size_t>(k));
            for (int d = 0; d < k; ++d) {
                r[static_cast<std::size_t>(d)] = rbox(rng);
                t[static_cast<std::size_t>(d)] = tbox(rng);
                tr[static_cast<std::size_t>(d)] =
                    t[static_cast<std::size_t>(d)] + r[static_cast<std::size_t>(d)];
            }
            max_res = std::max(max_res, std::abs(base.eval(flow.act(r, x), t) - base.eval(x, tr)));
        }
        rep.add_leq("gaussian-lip-" + c.flow, "base-lip-half", max_lip, 0.52);
        rep.add_leq("gaussian-equivariance-" + c.flow, "base-equivariance", max_res, 1e-6);
    }
    return rep;
}

Report run_borel(const BorelRunConfig& cfg) {
    const Flow flow = make_flow(cfg.flow, cfg.scale);
    CrossSection section;
    if (cfg.flow == "logistic") {
        const Vec base{0.5};
        section.points = {base};
        section.alpha = [](const Vec&) { return 1.5; };
        const Flow fl = flow;
        section.nearest = [fl, base](const Vec& x) { return std::make_pair(base, fl.rho(x, base)); };
    } else {
        section = singleton_cross_section(flow, Vec(static_cast<std::size_t>(flow.k), cfg.base));
    }
    const GridSpec window = default_window(flow.k);

    std::mt19937_64 rng(cfg.seed);
    std::vector<Vec> points;
    for (int i = 0; i < cfg.num_points; ++i) points.push_back(random_state(flow, rng));

    const EmbeddingReport er =
        verify_embedding(section, flow, points, window, cfg.m_max, cfg.seed + 1);

    Report rep;
    rep.add_leq("borel-lip-excess-" + cfg.flow, "observable-1-lipschitz",
                er.max_lipschitz_violation, 1e-9);
    rep.add_leq("borel-equivariance-" + cfg.flow, "embedding-equivariance",
                er.max_equivariance_residual, 1e-12);
    rep.add_geq("borel-separation-" + cfg.flow, "embedding-separation",
                er.min_pairwise_separation, 1e-12);

    if (!flow.fixed_points.empty()) {
        double max_fixed = 0.0;
        double min_fixed_sep = std::numeric_limits<double>::infinity();
        for (const Vec& fp : flow.fixed_points) {
            const GridFunction pf = embed_point(section, flow, fp, window);
            for (double v : pf.values) max_fixed = std::max(max_fixed, std::abs(v));
            for (const Vec& x : points) {
                const GridFunction px = embed_point(section, flow, x, window);
                min_fixed_sep = std::min(min_fixed_sep, lip1_metric(pf, px, cfg.m_max));
            }
        }
        rep.add_leq("borel-fixed-constant-" + cfg.flow, "fixed-point-zero", max_fixed, 0.0);
        rep.add_geq("borel-fixed-separation-" + cfg.flow, "fixed-point-separation", min_fixed_sep,
                    1e-12);
    }

    if (!cfg.out_dir.empty()) {
        for (std::size_t i = 0; i < points.size(); ++i)
            write_csv(embed_point(section, flow, points[i], window),
                      cfg.out_dir + "/point_" + std::to_string(i) + ".csv");
    }
    return rep;
}

Report run_main_lemma(const MainLemmaRunConfig& cfg, MainLemmaArtifacts* artifacts) {
    const Flow flow = torus_translation_flow(2, cfg.scale);
    const Ensemble f = torus2_test_ensemble(cfg.scale);
    const GaussianBase base(flow, 4.0 * 2 / std::sqrt(std::numbers::pi), 21);
    const Ensemble f1 = blend(f, base.as_ensemble(), cfg.delta);

    const MainLemmaParams params = choose_main_lemma_params(2, cfg.a, cfg.delta, f1.tau, cfg.M);

    CoverData cover;
    cover.anchors = {Vec{0.3, 0.4}, Vec{0.303, 0.4}};
    if (cfg.M != 2) {
        cover.anchors.resize(1, Vec{0.3, 0.4});
        for (int m = 1; m < cfg.M; ++m)
            cover.anchors.push_back(Vec{0.3 + 0.003 * m, 0.4});
    }
    cover.radius = 0.006;
    cover.dist = flow.dist;

    const auto targets = uset_targets(f1, cover, params);
    const GenericVectorSet uset =
        sample_generic_vectors(targets, params.geometry(), params.eta, cfg.seed, 10);

    std::mt19937_64 rng(cfg.seed + 1);
    std::vector<Vec> states;
    for (int i = 0; i < cfg.num_states; ++i)
        states.push_back(state_near(
            cover.anchors[static_cast<std::size_t>(i) % cover.anchors.size()],
            0.8 * cover.radius, rng));

    const GridSpec& grid = params.eval_grid;
    double prop1 = 0.0, prop2 = 0.0, claim_gap = 0.0, tau_final = 0.0;
    double prop3 = std::numeric_limits<double>::infinity();
    std::vector<GridFunction> gs;
    gs.reserve(states.size());
    GridFunction first_f1;
    for (std::size_t si = 0; si < states.size(); ++si) {
        const Vec& x = states[si];
        const AnchorSet anchors = build_g0(x, f1, uset, cover, params);
        for (std::size_t i = 0; i < anchors.points.size(); ++i)
            claim_gap = std::max(claim_gap,
                                 std::abs(anchors.values[i] - f1.eval(x, anchors.points[i])));

        GridFunction g = main_lemma_g_state(x, f1, uset, cover, params);
        const GridFunction f1g = sample_ensemble(f1, x, grid);
        if (si == 0) first_f1 = f1g;
        tau_final = std::max(tau_final, g.tau);

        for (std::size_t i = 0; i < g.values.size(); ++i)
            prop1 = std::max(prop1, std::abs(g.values[i] - f1g.values[i]));
        for (std::size_t i = 0; i < g.values.size(); ++i) {
            // Boundary nodes of the cube grid.
            std::size_t rem = i;
            bool boundary = false;
            for (int axis = grid.dim() - 1; axis >= 0; --axis) {
                const auto np =
                    static_cast<std::size_t>(grid.points_per_axis[static_cast<std::size_t>(axis)]);
                const std::size_t c = rem % np;
                rem /= np;
                if (c == 0 || c + 1 == np) boundary = true;
            }
            if (boundary) prop2 = std::max(prop2, std::abs(g.values[i] - f1g.values[i]));
        }
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (int n = 1; n <= params.N; ++n) {
            const double v = g.at(params.A_point(n));
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        prop3 = std::min(prop3, hi - lo);
        gs.push_back(std::move(g));
    }

    const FuzzReport fuzz = shift_rigidity_fuzz(states, gs, flow, params, cfg.fuzz_trials,
                                                cfg.seed + 2, cfg.match_tol);

    Report rep;
    rep.add_geq("uset-certificates", "independence-certified",
                std::min({uset.cert_cond2, uset.cert_cond3, uset.cert_cond4}), 1e-9);
    rep.add_leq("main-lemma-prop1", "sup-gap-2delta", prop1, 2.0 * cfg.delta);
    rep.add_leq("main-lemma-prop2", "edge-exact", prop2, 0.0);
    rep.add_geq("main-lemma-prop3", "ladder-spread", prop3, 1e-9);
    rep.add_leq("g0-sup-gap", "anchor-half-delta", claim_gap, cfg.delta / 2.0);
    rep.add_leq("tau-final", "budget-below-one", tau_final, 1.0 - 1e-9);
    rep.add_geq("fuzz-matches", "shift-rigidity-matches", fuzz.matches, 1.0);
    rep.add_leq("fuzz-violations", "shift-rigidity", fuzz.violations, 0.0);

    if (cfg.negative_control) {
        // Mutation: flatten each generic vector to its mean; the ladder values
        // collapse to constants and pure shifts become undetectable.
        GenericVectorSet bad = uset;
        for (Vec& u : bad.vectors) {
            double mean = 0.0;
            for (double v : u) mean += v;
            mean /= static_cast<double>(u.size());
            std::fill(u.begin(), u.end(), mean);
        }
        const std::size_t nbad = std::min<std::size_t>(5, states.size());
        std::vector<Vec> bad_states(states.begin(), states.begin() + static_cast<long>(nbad));
        std::vector<GridFunction> bad_gs;
        for (const Vec& x : bad_states)
            bad_gs.push_back(main_lemma_g_state(x, f1, bad, cover, params));
        const FuzzReport fr = shift_rigidity_fuzz(bad_states, bad_gs, flow, params, 200,
                                                  cfg.seed + 3, cfg.match_tol);
        rep.add_geq("fuzz-negative-control", "mutation-detected", fr.violations, 1.0);
    }

    if (artifacts) {
        artifacts->params = params;
        artifacts->uset = uset;
        artifacts->states = states;
        artifacts->gs = gs;
        artifacts->f1_sample = first_f1;
    }
    return rep;
}

Report run_marker_perturbation(const MarkerRunConfig& cfg) {
    const Flow flow = torus_translation_flow(2, cfg.scale);
    const Ensemble f = torus2_test_ensemble(cfg.scale);
    const GaussianBase base(flow, 4.0 * 2 / std::sqrt(std::numbers::pi), 21);
    const Ensemble f1 = blend(f, base.as_ensemble(), cfg.delta);

    const Vec pbase{0.25, 0.25}, cbase{0.75, 0.75};
    const double d_bc = flow.dist(pbase, cbase);
    if (cfg.delta >= d_bc)
        throw std::invalid_argument("delta too large for section pair");

    const LocalSection secP = local_section_at(flow, pbase, cfg.a);
    const LocalSection secC = local_section_at(flow, cbase, cfg.a);

    const MainLemmaParams params = choose_main_lemma_params(2, cfg.a, cfg.delta, f1.tau, 2);
    CoverData cover;
    cover.anchors = {pbase, cbase};
    cover.radius = 0.01;
    cover.dist = flow.dist;
    const auto targets = uset_targets(f1, cover, params);
    const GenericVectorSet uset =
        sample_generic_vectors(targets, params.geometry(), params.eta, cfg.seed, 10);

    const GridFunction g_p = main_lemma_g_state(pbase, f1, uset, cover, params);
    const GridFunction g_c = main_lemma_g_state(cbase, f1, uset, cover, params);
    const auto g_of = [&](const Vec& y) -> const GridFunction& {
        if (flow.dist(y, pbase) < 1e-6) return g_p;
        if (flow.dist(y, cbase) < 1e-6) return g_c;
        throw std::logic_error("marker state away from both section bases");
    };
    const auto make_q = [&flow](const Vec& center) {
        return [&flow, center](const Vec& y) {
            const double d = flow.dist(y, center);
            return std::clamp((0.1 - d) / (0.1 - 0.012), 0.0, 1.0);
        };
    };
    const std::function<double(const Vec&)> qP = make_q(pbase), qC = make_q(cbase);

    const GridSpec window = GridSpec::cube(2, -12.0, 12.0, 97);

    // Combined perturbation over the markers of both sections; their cube
    // families are disjoint because the bases sit on distinct orbit phases.
    const auto g1_of = [&](const Vec& x) {
        GridFunction out = sample_ensemble(f1, x, window);
        out.tau = 1.0;
        struct SecRef {
            const LocalSection* sec;
            const std::function<double(const Vec&)>* q;
        };
        const SecRef secs[] = {{&secP, &qP}, {&secC, &qC}};
        Vec lo(2), hi(2);
        for (int d = 0; d < 2; ++d) {
            lo[static_cast<std::size_t>(d)] = window.origin[static_cast<std::size_t>(d)] - cfg.a;
            hi[static_cast<std::size_t>(d)] = window.origin[static_cast<std::size_t>(d)] +
                                              window.extent[static_cast<std::size_t>(d)];
        }
        for (const SecRef& sr : secs) {
            for (const Vec& s : marker_set(flow, *sr.sec, x, lo, hi)) {
                const Vec sx = flow.act(s, x);
                const double q = (*sr.q)(sx);
                if (q <= 0.0) continue;
                const GridFunction& g = g_of(sx);
                // Grid index ranges covered by the cube s + [0,a]^2.
                long i0[2], i1[2];
                for (int d = 0; d < 2; ++d) {
                    const auto dd = static_cast<std::size_t>(d);
                    const double h = window.spacing(d);
                    i0[d] = static_cast<long>(std::ceil((s[dd] - window.origin[dd]) / h - 1e-9));
                    i1[d] = static_cast<long>(
                        std::floor((s[dd] + cfg.a - window.origin[dd]) / h + 1e-9));
                    i0[d] = std::max(i0[d], 0L);
                    i1[d] = std::min(i1[d],
                                     static_cast<long>(window.points_per_axis[dd]) - 1);
                }
                for (long r0 = i0[0]; r0 <= i1[0]; ++r0)
                    for (long r1 = i0[1]; r1 <= i1[1]; ++r1) {
                        const std::size_t idx = static_cast<std::size_t>(r0) *
                                                    static_cast<std::size_t>(
                                                        window.points_per_axis[1]) +
                                                static_cast<std::size_t>(r1);
                        const Vec t = window.point(idx);
                        const Vec r{t[0] - s[0], t[1] - s[1]};
                        out.values[idx] += q * (g.interp(r) - f1.eval(sx, r));
                    }
            }
        }
        return out;
    };

    std::mt19937_64 rng(cfg.seed + 10);
    std::uniform_real_distribution<double> tbox(-1.0 / 16.0, 1.0 / 16.0);
    const auto sample_near = [&](const Vec& center) {
        const Vec t{tbox(rng), tbox(rng)};
        return flow.act(t, center);
    };

    std::vector<Vec> A_states, B_states, C_states;
    for (int i = 0; i < cfg.num_A; ++i) A_states.push_back(sample_near(pbase));
    for (int i = 0; i < cfg.num_BC; ++i) B_states.push_back(sample_near(pbase));
    for (int i = 0; i < cfg.num_BC; ++i) C_states.push_back(sample_near(cbase));

    double sup_gap = 0.0, range_excess = 0.0;
    const auto check_state = [&](const Vec& x) {
        GridFunction g1 = g1_of(x);
        const GridFunction fs = sample_ensemble(f, x, window);
        for (std::size_t i = 0; i < g1.values.size(); ++i) {
            sup_gap = std::max(sup_gap, std::abs(g1.values[i] - fs.values[i]));
            range_excess = std::max({range_excess, g1.values[i] - 1.0, -g1.values[i]});
        }
        return g1;
    };

    std::vector<GridFunction> g1_A, g1_B, g1_C;
    for (const Vec& x : A_states) g1_A.push_back(check_state(x));
    for (const Vec& x : B_states) g1_B.push_back(check_state(x));
    for (const Vec& x : C_states) g1_C.push_back(check_state(x));

    const SpreadReport ga = verify_GA(g1_A);
    const SeparationReport gbc = verify_GBC(g1_B, g1_C, cfg.m_max);

    // Equivariance at grid-aligned shifts.
    double equiv = 0.0;
    std::uniform_int_distribution<int> jpick(-8, 8);
    for (int trial = 0; trial < 20; ++trial) {
        const Vec& x = B_states[static_cast<std::size_t>(trial) % B_states.size()];
        const GridFunction& gx = g1_B[static_cast<std::size_t>(trial) % g1_B.size()];
        Vec r{jpick(rng) * window.spacing(0), jpick(rng) * window.spacing(1)};
        const GridFunction gxr = g1_of(flow.act(r, x));
        const long j0 = std::lround(r[0] / window.spacing(0));
        const long j1 = std::lround(r[1] / window.spacing(1));
        const long np = window.points_per_axis[1];
        for (long a0 = 0; a0 < np; ++a0)
            for (long a1 = 0; a1 < np; ++a1) {
                const long b0 = a0 + j0, b1 = a1 + j1;
                if (b0 < 0 || b1 < 0 || b0 >= np || b1 >= np) continue;
                const double lhs = gxr.values[static_cast<std::size_t>(a0 * np + a1)];
                const double rhs = gx.values[static_cast<std::size_t>(b0 * np + b1)];
                equiv = std::max(equiv, std::abs(lhs - rhs));
            }
    }

    Report rep;
    rep.add_geq("marker-GA-spread", "image-nonconstant", ga.min_spread, 1e-9);
    rep.add_geq("marker-GBC-separation", "image-separation", gbc.min_distance, 1e-12);
    rep.add_leq("marker-sup-gap", "four-delta-bound", sup_gap, 4.0 * cfg.delta);
    rep.add_leq("marker-equivariance", "perturbation-equivariance", equiv, 1e-9);
    rep.add_leq("marker-range", "values-in-unit-interval", std::max(range_excess, 0.0), 1e-12);
    return rep;
}

}  // namespace lipflow
