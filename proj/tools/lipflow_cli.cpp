// Configuration-driven experiment runner: every pipeline and verification is
// a subcommand emitting CSV reports; exit 0 on all-pass, 1 on a property
// violation, 2 on configuration errors.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "lipflow/extension.hpp"
#include "lipflow/runner.hpp"

namespace {

using namespace lipflow;

void print_report(const Report& rep) {
    std::cout << report_to_csv(rep);
}

int finish(const Report& rep, const std::string& out_dir) {
    if (!out_dir.empty()) write_report(rep, out_dir + "/report.csv");
    print_report(rep);
    return rep.all_pass() ? 0 : 1;
}

AnchorSet read_anchors(const std::string& path, double tau) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    std::string header;
    if (!std::getline(in, header)) throw std::invalid_argument("empty anchor file");
    int cols = 1;
    for (char c : header)
        if (c == ',') ++cols;
    const int k = cols - 1;
    if (k < 1) throw std::invalid_argument("anchor file needs x_1..x_k,value columns");
    AnchorSet a;
    a.tau = tau;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ls(line);
        std::string cell;
        Vec p(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) {
            std::getline(ls, cell, ',');
            p[static_cast<std::size_t>(i)] = std::strtod(cell.c_str(), nullptr);
        }
        std::getline(ls, cell, ',');
        a.values.push_back(std::strtod(cell.c_str(), nullptr));
        a.points.push_back(std::move(p));
    }
    return a;
}

void write_xy(const std::string& path, const std::vector<double>& xs,
              const std::vector<double>& ys) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "x,y\n";
    char buf[90];
    for (std::size_t i = 0; i < xs.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", xs[i], ys[i]);
        out << buf;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lipschitz embedding pipelines and verification harness"};
    app.set_config("--config");
    app.require_subcommand(1);

    std::string out_dir = ".";
    app.add_option("--out", out_dir, "output directory for CSV artifacts");

    // embed-borel
    auto* borel = app.add_subcommand("embed-borel", "cross-section observable embedding checks");
    BorelRunConfig bc;
    borel->add_option("--flow", bc.flow, "torus1|torus2|logistic");
    borel->add_option("--scale", bc.scale);
    borel->add_option("--base", bc.base, "section base coordinate");
    borel->add_option("--points", bc.num_points);
    borel->add_option("--m-max", bc.m_max);
    borel->add_option("--seed", bc.seed);

    // main-lemma
    auto* ml = app.add_subcommand("main-lemma", "grid perturbation pipeline + rigidity fuzz");
    MainLemmaRunConfig mc;
    ml->add_option("--a", mc.a);
    ml->add_option("--delta", mc.delta);
    ml->add_option("--M", mc.M);
    ml->add_option("--scale", mc.scale);
    ml->add_option("--states", mc.num_states);
    ml->add_option("--trials", mc.fuzz_trials);
    ml->add_option("--match-tol", mc.match_tol);
    ml->add_option("--seed", mc.seed);
    ml->add_flag("--no-negative-control", "skip the mutation control");

    // embed-topo
    auto* topo = app.add_subcommand("embed-topo", "marker perturbation pipeline checks");
    MarkerRunConfig tc;
    topo->add_option("--a", tc.a);
    topo->add_option("--delta", tc.delta);
    topo->add_option("--scale", tc.scale);
    topo->add_option("--a-samples", tc.num_A);
    topo->add_option("--bc-samples", tc.num_BC);
    topo->add_option("--m-max", tc.m_max);
    topo->add_option("--seed", tc.seed);

    // mcshane
    auto* mcs = app.add_subcommand("mcshane", "extend anchor values onto a grid");
    std::string anchors_path, mcs_out = "extension.csv";
    double mcs_tau = 1.0, mcs_lo = 0.0, mcs_hi = 1.0;
    int mcs_n = 33;
    mcs->add_option("--anchors", anchors_path, "CSV with x_1..x_k,value rows")->required();
    mcs->add_option("--tau", mcs_tau);
    mcs->add_option("--lo", mcs_lo);
    mcs->add_option("--hi", mcs_hi);
    mcs->add_option("--n", mcs_n);
    mcs->add_option("--out-file", mcs_out);

    // mollify
    auto* mol = app.add_subcommand("mollify", "smooth a grid function, keeping its boundary");
    std::string mol_in, mol_out = "mollified.csv";
    MollifyParams mp;
    mol->add_option("--in", mol_in)->required();
    mol->add_option("--delta", mp.delta);
    mol->add_option("--epsilon", mp.epsilon);
    mol->add_option("--tau", mp.tau);
    mol->add_option("--quad", mp.quad_points_per_axis);
    mol->add_option("--out-file", mol_out);

    // verify
    auto* ver = app.add_subcommand("verify", "re-check the Lipschitz budget of a saved CSV");
    std::string ver_in;
    double ver_tau = 1.0, ver_slack = 1e-9;
    ver->add_option("--in", ver_in)->required();
    ver->add_option("--tau", ver_tau);
    ver->add_option("--slack", ver_slack);

    // Let the global --out appear after the subcommand name as well.
    for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; }))
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (borel->parsed()) {
            bc.out_dir = out_dir;
            return finish(run_borel(bc), out_dir);
        }
        if (ml->parsed()) {
            mc.negative_control = ml->count("--no-negative-control") == 0;
            MainLemmaArtifacts art;
            const Report rep = run_main_lemma(mc, &art);
            if (!art.gs.empty()) {
                std::vector<double> xs, g_slice, f_slice;
                for (int n = 1; n <= art.params.N; ++n) {
                    xs.push_back(art.params.a_vals[static_cast<std::size_t>(n - 1)]);
                    g_slice.push_back(art.gs.front().at(art.params.A_point(n)));
                    f_slice.push_back(art.f1_sample.at(art.params.A_point(n)));
                }
                write_xy(out_dir + "/plot_g_ladder.csv", xs, g_slice);
                write_xy(out_dir + "/plot_f1_ladder.csv", xs, f_slice);
            }
            return finish(rep, out_dir);
        }
        if (topo->parsed()) return finish(run_marker_perturbation(tc), out_dir);
        if (mcs->parsed()) {
            const AnchorSet anchors = read_anchors(anchors_path, mcs_tau);
            const int k = static_cast<int>(anchors.points.at(0).size());
            const GridSpec grid = GridSpec::cube(k, mcs_lo, mcs_hi, mcs_n);
            std::vector<Vec> queries;
            for (std::size_t i = 0; i < grid.size(); ++i) queries.push_back(grid.point(i));
            const std::vector<double> vals = mcshane_extend(anchors, queries);
            GridFunction out;
            out.grid = grid;
            out.values = vals;
            out.tau = mcs_tau;
            write_csv(out, out_dir + "/" + mcs_out);
            return 0;
        }
        if (mol->parsed()) {
            GridFunction phi = read_csv_file(mol_in);
            for (double o : phi.grid.origin)
                if (std::abs(o) > 1e-12)
                    throw std::invalid_argument("mollify expects a grid anchored at 0");
            DomainDescriptor dom;
            dom.side = phi.grid.origin[0] + phi.grid.extent[0];
            write_csv(mollify_fn(phi, dom, mp), out_dir + "/" + mol_out);
            return 0;
        }
        if (ver->parsed()) {
            const GridFunction f = read_csv_file(ver_in);
            const double est = lip_const_estimate(f);
            Report rep;
            rep.add_leq("verify-lip", "declared-budget", est, ver_tau + ver_slack);
            print_report(rep);
            return rep.all_pass() ? 0 : 1;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
