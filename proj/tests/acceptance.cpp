// End-to-end acceptance harness: one pinned pass/fail line per criterion,
// exit 0 only when every criterion holds.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "lipflow/extension.hpp"
#include "lipflow/runner.hpp"

using namespace lipflow;

namespace {

int failures = 0;

void line(const std::string& name, bool pass, const std::string& detail) {
    std::printf("%s: %s (%s)\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    if (!pass) ++failures;
}

std::string worst_row(const Report& rep) {
    for (const ReportRow& r : rep.rows)
        if (!r.pass)
            return r.check_id + " value=" + std::to_string(r.value) +
                   " threshold=" + std::to_string(r.threshold);
    return "all " + std::to_string(rep.rows.size()) + " checks within tolerance";
}

AnchorSet cone_anchors(std::mt19937_64& rng, int k, int count, double tau) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Vec apex(static_cast<std::size_t>(k));
    for (auto& c : apex) c = u(rng);
    AnchorSet a;
    a.tau = tau;
    for (int i = 0; i < count; ++i) {
        Vec p(static_cast<std::size_t>(k));
        for (auto& c : p) c = u(rng);
        a.values.push_back(0.3 + tau * norm2(p, apex));
        a.points.push_back(std::move(p));
    }
    return a;
}

// Criterion 1: orbit-averaged base functions are (1/2 + slack)-Lipschitz and
// equivariant, across one- and two-dimensional flows.
void criterion_gaussian() {
    const Report rep = run_gaussian_check(GaussianRunConfig{});
    line("criterion-1 orbit-averaged base", rep.all_pass(), worst_row(rep));
}

// Criterion 2: extension reproduces anchors to 1e-12 and is tau-Lipschitz
// all-pairs (tolerance 1e-9) over a 33^k query grid, for 50 seeded sets.
void criterion_mcshane() {
    std::mt19937_64 rng(1001);
    std::uniform_int_distribution<int> kpick(1, 2), npick(5, 40);
    std::uniform_real_distribution<double> taupick(0.3, 0.95);
    double worst_anchor = 0.0, worst_excess = -1.0;
    for (int set = 0; set < 50; ++set) {
        const int k = kpick(rng);
        const double tau = taupick(rng);
        const AnchorSet a = cone_anchors(rng, k, npick(rng), tau);

        const GridSpec grid = GridSpec::cube(k, 0.0, 1.0, 33);
        std::vector<Vec> queries;
        for (std::size_t i = 0; i < grid.size(); ++i) queries.push_back(grid.point(i));
        std::vector<double> vals = mcshane_extend(a, queries);
        for (std::size_t i = 0; i < a.points.size(); ++i) {
            worst_anchor = std::max(worst_anchor,
                                    std::abs(mcshane_eval(a, a.points[i]) - a.values[i]));
            queries.push_back(a.points[i]);
            vals.push_back(a.values[i]);
        }
        for (std::size_t i = 0; i < queries.size(); ++i)
            for (std::size_t j = i + 1; j < queries.size(); ++j) {
                const double d = norm2(queries[i], queries[j]);
                worst_excess = std::max(worst_excess, std::abs(vals[i] - vals[j]) - tau * d);
            }
    }
    const bool pass = worst_anchor <= 1e-12 && worst_excess <= 1e-9;
    line("criterion-2 extension", pass,
         "anchor residual " + std::to_string(worst_anchor) + ", lip excess " +
             std::to_string(worst_excess));
}

// Criterion 3: variable-radius averaging of 0.9-Lipschitz inputs at
// delta = epsilon = 0.05 preserves the boundary exactly, moves values by
// less than 0.05, and keeps the all-pairs estimate within 0.95 + 2h.
void criterion_mollify() {
    std::mt19937_64 rng(2002);
    std::uniform_int_distribution<int> npick(6, 20);
    DomainDescriptor dom;
    dom.side = 1.0;
    MollifyParams mp;
    mp.delta = 0.05;
    mp.epsilon = 0.05;
    mp.tau = 0.9;
    const GridSpec grid = GridSpec::cube(2, 0.0, 1.0, 61);
    const double h = grid.spacing(0);

    bool boundary_ok = true;
    double worst_gap = 0.0, worst_lip = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const AnchorSet a = cone_anchors(rng, 2, npick(rng), 0.9);
        GridFunction phi;
        phi.grid = grid;
        phi.values.resize(grid.size());
        for (std::size_t i = 0; i < phi.values.size(); ++i)
            phi.values[i] = mcshane_eval(a, grid.point(i));

        const GridFunction out = mollify_fn(phi, dom, mp);
        for (std::size_t i = 0; i < out.values.size(); ++i) {
            const Vec p = grid.point(i);
            const bool bd = p[0] <= 1e-12 || p[0] >= 1.0 - 1e-12 || p[1] <= 1e-12 ||
                            p[1] >= 1.0 - 1e-12;
            if (bd && out.values[i] != phi.values[i]) boundary_ok = false;
            worst_gap = std::max(worst_gap, std::abs(out.values[i] - phi.values[i]));
        }
        worst_lip = std::max(worst_lip, lip_const_estimate(out));
    }

    GridFunction c{grid, std::vector<double>(grid.size(), 0.42)};
    double const_dev = 0.0;
    for (double v : mollify_fn(c, dom, mp).values)
        const_dev = std::max(const_dev, std::abs(v - 0.42));

    const bool pass =
        boundary_ok && worst_gap < 0.05 && worst_lip <= 0.95 + 2.0 * h && const_dev <= 1e-10;
    line("criterion-3 boundary-preserving averaging", pass,
         std::string("boundary ") + (boundary_ok ? "exact" : "MOVED") + ", sup gap " +
             std::to_string(worst_gap) + ", lip " + std::to_string(worst_lip) +
             ", constant dev " + std::to_string(const_dev));
}

// Criterion 5: the rejection sampler certifies all three independence
// conditions within 10 retries for 100 seeds, almost always on the first draw.
void criterion_genericity() {
    const Ensemble f = torus2_test_ensemble(8.0);
    const Flow flow = torus_translation_flow(2, 8.0);
    const GaussianBase base(flow, 8.0 / std::sqrt(std::numbers::pi), 21);
    const Ensemble f1 = blend(f, base.as_ensemble(), 0.4);
    const MainLemmaParams params = choose_main_lemma_params(2, 1.0, 0.4, f1.tau, 2);
    CoverData cover;
    cover.anchors = {Vec{0.3, 0.4}, Vec{0.303, 0.4}};
    cover.radius = 0.006;
    cover.dist = flow.dist;
    const auto targets = uset_targets(f1, cover, params);

    int first_draw = 0, ok = 0;
    double min_cert = 1e300;
    for (int s = 0; s < 100; ++s) {
        try {
            const GenericVectorSet u = sample_generic_vectors(targets, params.geometry(),
                                                              params.eta, 5000 + s, 10);
            ++ok;
            if (u.retries_used == 0) ++first_draw;
            min_cert = std::min({min_cert, u.cert_cond2, u.cert_cond3, u.cert_cond4});
        } catch (const std::exception&) {
        }
    }
    const bool pass = ok == 100 && first_draw >= 95 && min_cert > 1e-9;
    line("criterion-5 genericity sampler", pass,
         std::to_string(ok) + "/100 within retry budget, " + std::to_string(first_draw) +
             " first-draw, min certificate " + std::to_string(min_cert));
}

int main_rc() {
    criterion_gaussian();
    criterion_mcshane();
    criterion_mollify();

    // Criterion 4: grid perturbation pipeline and rigidity fuzz.
    const MainLemmaRunConfig mlc{};
    const Report ml = run_main_lemma(mlc);
    line("criterion-4 grid perturbation pipeline", ml.all_pass(), worst_row(ml));

    criterion_genericity();

    // Criterion 6: cross-section observable embedding on a rotation flow and
    // on an interval flow with fixed points.
    BorelRunConfig bt;
    bt.flow = "torus1";
    const Report rb_t = run_borel(bt);
    BorelRunConfig bl;
    bl.flow = "logistic";
    const Report rb_l = run_borel(bl);
    line("criterion-6 cross-section embedding", rb_t.all_pass() && rb_l.all_pass(),
         rb_t.all_pass() ? worst_row(rb_l) : worst_row(rb_t));

    // Criterion 7: marker perturbation predicates.
    const MarkerRunConfig mkc{};
    const Report mk = run_marker_perturbation(mkc);
    line("criterion-7 marker perturbation", mk.all_pass(), worst_row(mk));

    // Criterion 8: repeating the pipelines with identical seeds reproduces
    // the report CSVs byte for byte.
    const bool det = report_to_csv(run_main_lemma(mlc)) == report_to_csv(ml) &&
                     report_to_csv(run_borel(bt)) == report_to_csv(rb_t) &&
                     report_to_csv(run_borel(bl)) == report_to_csv(rb_l) &&
                     report_to_csv(run_marker_perturbation(mkc)) == report_to_csv(mk);
    line("criterion-8 determinism", det,
         det ? "reruns byte-identical" : "rerun reports differ");

    return failures == 0 ? 0 : 1;
}

}  // namespace

int main() {
    try {
        return main_rc();
    } catch (const std::exception& e) {
        std::printf("FAIL: unexpected error (%s)\n", e.what());
        return 1;
    }
}
